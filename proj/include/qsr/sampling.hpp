#pragma once

// Fourier sampling, the condensation operator V, the noise-transfer
// operator H, and the block weight w(t). V and H are applied by index
// arithmetic, never stored.
//
// Indexing is 0-based throughout: y_k for k = 0..M-1 and (Vy)_l for
// l = 0..m-1, with (Vy)_l = sum_{k<lambda} beta^{-k} y_{mk+l}.

#include <iosfwd>
#include <vector>

#include "qsr/measures.hpp"

namespace qsr {

using MeasurementVector = std::vector<Complex>;

/// Block layout shared by V and H: M = m * lambda measurements split into
/// lambda consecutive blocks of length m, weighted by powers of 1/beta.
class CondensationPlan {
 public:
  /// Throws ParameterError unless m >= 1, lambda >= 1 and beta > 1.
  CondensationPlan(int m, int lambda, double beta);

  int m() const noexcept { return m_; }
  int lambda() const noexcept { return lambda_; }
  double beta() const noexcept { return beta_; }
  int total() const noexcept { return m_ * lambda_; }

  /// (1 + 1/beta) / (1 - 1/beta): the two-sided bound on |w(t)|.
  double c_beta() const noexcept;

 private:
  int m_;
  int lambda_;
  double beta_;
};

/// y_k = sum_j a_j exp(-2 pi i k t_j), k = 0..count-1.
MeasurementVector fourier_sample(const AtomicMeasure& mu, int count);

/// Apply V. Throws DimensionError if y.size() != plan.total().
MeasurementVector condense(const MeasurementVector& y,
                           const CondensationPlan& plan);

/// w(t) = (1 - beta^{-lambda} e^{-2 pi i m lambda t}) / (1 - beta^{-1} e^{-2 pi i m t}).
Complex weight(double t, const CondensationPlan& plan);

/// mu_V: same support, amplitudes a_j * w(t_j).
AtomicMeasure apply_weights(const AtomicMeasure& mu,
                            const CondensationPlan& plan);

/// Apply H: (Hu)_j = u_j - beta * u_{j-m} for j >= m, u_j otherwise.
MeasurementVector noise_transfer_apply(const MeasurementVector& u,
                                       const CondensationPlan& plan);

/// CSV dump, one row per entry: `index re im`.
void write_vector_csv(std::ostream& out, const MeasurementVector& v);

}  // namespace qsr
