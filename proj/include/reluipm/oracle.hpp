#pragma once

#include <Eigen/Core>

#include "reluipm/discriminator.hpp"
#include "reluipm/sample_set.hpp"

namespace reluipm {

struct OffsetScan {
  double value = 0.0;  // max over mu in [-1, 1] of |gap|
  double mu = 0.0;     // an offset attaining it
};

/// Exact max over mu in [-1, 1] of |sum_i p_i (t_i + mu)_+ - sum_j q_j (u_j + mu)_+|
/// for fixed projections t, u. The gap is piecewise linear in mu with kinks
/// at -t_i and -u_j, so checking kinks and endpoints is exact. O(N log N).
OffsetScan scan_offsets(const Eigen::Ref<const Eigen::VectorXd>& t, const Eigen::Ref<const Eigen::VectorXd>& p,
                        const Eigen::Ref<const Eigen::VectorXd>& u, const Eigen::Ref<const Eigen::VectorXd>& q);

struct ExactIpm {
  double value = 0.0;
  ReluParams params;
};

/// Exact empirical ReLU-IPM for d = 1, where the sphere is {-1, +1}.
ExactIpm exact_relu_ipm_1d(const SampleSet& p, const SampleSet& q);

/// First `count` points of a Halton sequence pushed onto S^{d-1} through
/// Box-Muller pairs. Prefixes are nested: directions(M) is a prefix of directions(M').
Eigen::MatrixXd sphere_directions(Eigen::Index count, Eigen::Index dim);

/// Lower bound on the empirical ReLU-IPM for d >= 2: for each of M directions
/// and its antipode the offset is maximized exactly by scan_offsets.
/// Nondecreasing in M.
double grid_relu_ipm(const SampleSet& p, const SampleSet& q, Eigen::Index directions);

}  // namespace reluipm
