#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "reluipm/discriminator.hpp"
#include "reluipm/ensemble.hpp"
#include "reluipm/numerics.hpp"
#include "reluipm/sample_set.hpp"

namespace reluipm {

/// Multi-start gradient ascent settings. Defaults: K = 100 starts, 1000
/// epochs, plain SGD with learning rate 1.0.
struct AscentConfig {
  int starts = 100;
  int epochs = 1000;
  OptimizerKind optimizer = OptimizerKind::PlainSgd;
  double learning_rate = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

struct IpmResult {
  double value = 0.0;
  Discriminator best_params;
  /// Best |gap| reached by each start.
  Eigen::VectorXd start_values;
  int epochs_run = 0;
};

/// Empirical ReLU-IPM between two weighted samples in the unit ball.
///
/// Runs the K-start projected gradient ascent on sum_k gap_k^2: after each
/// step theta is renormalized onto the sphere and mu clipped to [-1, 1].
/// Every start remembers the best |gap| it reached; the value is the largest
/// of those and best_params attains it.
IpmResult estimate_relu_ipm(const SampleSet& p, const SampleSet& q, const AscentConfig& cfg = {});

/// Same multi-start ascent over single sigmoid units sig(theta . z + mu).
IpmResult estimate_sigmoid_ipm(const SampleSet& p, const SampleSet& q, const AscentConfig& cfg = {});

/// Same multi-start ascent over clipped one-hidden-layer ReLU networks of width d.
IpmResult estimate_holder_nn_ipm(const SampleSet& p, const SampleSet& q, const AscentConfig& cfg = {});

IpmResult estimate_ipm(DiscriminatorFamily family, const SampleSet& p, const SampleSet& q,
                       const AscentConfig& cfg = {});

}  // namespace reluipm
