#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include <Eigen/Core>

namespace reluipm {

/// Counter-based random stream. Draw k of stream (seed, stream_id) is a pure
/// function of (seed, stream_id, k), so per-replication streams can be handed
/// to worker threads without affecting the numbers drawn.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t position() const noexcept { return counter_; }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal by Box-Muller; the second variate of each pair is cached.
  double normal();

  /// Independent child stream derived from this stream's identity (not its position).
  RngStream fork(std::uint64_t tag) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::optional<double> spare_;
};

Eigen::VectorXd standard_normal(RngStream& stream, std::size_t count);

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

}  // namespace reluipm
