#pragma once

// Error statistics of a recovered measure against the ground truth, and the
// theoretical error envelope of the beta-encoder pipeline.

#include <cstddef>
#include <vector>

#include "qsr/measures.hpp"
#include "qsr/quantize.hpp"

namespace qsr {

struct SpikeClusters {
  /// neighborhoods[j]: recovered indices within `radius` of true spike j.
  std::vector<std::vector<std::size_t>> neighborhoods;
  /// Recovered indices that fall in no neighborhood.
  std::vector<std::size_t> residual;
  double radius = 0.0;
};

/// Assign recovered spikes to the closed neighborhoods of radius
/// 2 * 0.1649 / (n_measurements - 1) around each true spike.
///
/// Throws AmbiguityError when two true spikes are close enough for their
/// neighborhoods to intersect, and ParameterError if n_measurements < 2.
SpikeClusters cluster_spikes(const AtomicMeasure& truth,
                             const AtomicMeasure& recovered, int n_measurements);

struct ErrorReport {
  /// |a_j - sum_{k in I_j} a~_k|
  std::vector<double> amplitude_errors;
  /// sum_{k in I_j} |a~_k| |t_j - t~_k|^2
  std::vector<double> location_errors;
  /// sum_{k in I_0} |a~_k|
  double spurious_mass = 0.0;

  double max_amplitude_error() const noexcept;
  double sum_amplitude_error() const noexcept;
  double max_location_error() const noexcept;
};

ErrorReport error_report(const AtomicMeasure& truth,
                         const AtomicMeasure& recovered,
                         const SpikeClusters& clusters);

/// Constants of the underlying TV-min recovery guarantee. They are not known
/// numerically; 1 is a placeholder so that envelopes carry the right shape.
struct RecoveryConstants {
  double C1 = 1.0;
  double C2 = 1.0;
  double C3 = 1.0;
  /// Prefactor of the simplified sqrt(M) lambda^{3/2} K^{-lambda/2} curve.
  double rate = 1.0;
};

struct Envelope {
  double condensed_error_bound;  // sqrt(2m) beta^{1-lambda} delta
  double c_beta;
  double lipschitz_bound;        // 4 pi lambda beta / (beta-1)^2
  /// c_beta C1 eps_V + C_{beta,lambda} sqrt(c_beta alpha) sqrt(C2 eps_V)
  double amplitude_bound;
  /// rate * sqrt(M) * lambda^{3/2} * K^{-lambda/2}
  double simplified;
};

Envelope theoretical_envelope(const QuantizerConfig& config,
                              const RecoveryConstants& constants = {});

/// Upper bound 4 pi lambda beta (beta - 1)^{-2} on the Lipschitz constant of
/// the reciprocal weight profile below.
double lipschitz_bound(double beta, int lambda);

/// t -> (1 - beta^{-1} e^{-2 pi i t}) / (1 - beta^{-lambda} e^{-2 pi i lambda t}).
Complex reciprocal_weight_profile(double t, double beta, int lambda);

/// Largest difference quotient of reciprocal_weight_profile between
/// neighbours of a uniform periodic grid with `points` nodes.
double sampled_lipschitz(double beta, int lambda, int points);

}  // namespace qsr
