#pragma once

// Quantization alphabets, memoryless scalar quantization (MSQ), and the
// distributed noise-shaping beta-encoder.

#include <iosfwd>
#include <vector>

#include "qsr/sampling.hpp"

namespace qsr {

/// The K levels delta * (2j - K + 1), j = 0..K-1: symmetric about zero with
/// spacing 2*delta. Zero is a level iff K is odd.
class Alphabet {
 public:
  /// Throws ParameterError unless K >= 2 and delta > 0.
  Alphabet(int K, double delta);

  int K() const noexcept { return K_; }
  double delta() const noexcept { return delta_; }
  double level(int index) const noexcept;
  std::vector<double> levels() const;
  double max_level() const noexcept { return (K_ - 1) * delta_; }

  /// Index of the nearest level; ties go to the lower level; inputs beyond
  /// the outermost levels saturate.
  int nearest_index(double x) const noexcept;

 private:
  int K_;
  double delta_;
};

/// Nearest level of `alphabet` to x. |x - result| <= delta whenever
/// |x| <= K * delta.
double round_to_alphabet(double x, const Alphabet& alphabet);

/// Parameter bundle for the beta-encoder. Feasibility requires
/// beta + alpha / delta <= K and 1 < beta < K.
struct QuantizerConfig {
  int K = 2;
  int lambda = 1;
  int m = 1;
  double alpha = 1.0;
  double beta = 1.5;
  double delta = 1.0;

  bool feasible(double slack = 1e-12) const noexcept;
  /// Throws ParameterError when the bundle is infeasible or malformed.
  void validate() const;

  CondensationPlan plan() const { return {m, lambda, beta}; }
  Alphabet alphabet() const { return {K, delta}; }
  /// (1 + 1/beta) / (1 - 1/beta).
  double c_beta() const noexcept;
  /// sqrt(2m) beta^{1-lambda} delta: the guaranteed l2 bound on V(y - q).
  double condensed_error_bound() const noexcept;
};

/// beta = K(lambda+1)/(lambda+2), delta = (lambda+2) alpha / K, which makes
/// beta + alpha/delta = K exactly. Throws ParameterError for K < 2,
/// lambda < 1, m < 1 or alpha <= 0.
QuantizerConfig select_parameters(int K, int lambda, double alpha, int m);

enum class QuantizerKind { msq, beta };

struct QuantizationResult {
  MeasurementVector q;
  /// Beta-encoder state with y - q = H u. For MSQ this is y - q.
  MeasurementVector u;
  QuantizerKind kind = QuantizerKind::msq;
  Alphabet alphabet{2, 1.0};
};

/// Round real and imaginary parts separately to the alphabet with
/// delta = alpha / K. For ||y||_inf <= alpha every entry is within
/// sqrt(2) alpha / K of y.
QuantizationResult msq(const MeasurementVector& y, int K, double alpha = 1.0);

/// Noise-shaping recursion, per real component:
///   v_j = y_j + beta * u_{j-m}   (u_{j-m} = 0 for j < m)
///   q_j = round(v_j),  u_j = v_j - q_j.
/// Throws DimensionError if y.size() != m * lambda and InputRangeError when
/// some ||y_j||_inf exceeds alpha (which could push v_j out of the alphabet's
/// capture range and break y - q = H u).
QuantizationResult beta_quantize(const MeasurementVector& y,
                                 const QuantizerConfig& config);

/// Bit-true export as level indices. Header lines carry K and delta;
/// then one row per entry: `index re_level_idx im_level_idx`.
void write_level_indices(std::ostream& out, const QuantizationResult& result);
/// Inverse of write_level_indices; reconstructs q and the alphabet.
QuantizationResult read_level_indices(std::istream& in);

}  // namespace qsr
