#pragma once

// Atomic measures on the torus [0,1).

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace qsr {

using Complex = std::complex<double>;

struct Spike {
  double location;  // in [0,1)
  Complex amplitude;
};

/// Finite sum of weighted Diracs  sum_j a_j delta_{t_j}  on the torus.
///
/// Locations are kept in [0,1) and are pairwise distinct. A measure with no
/// spikes is allowed so that the zero measure (a legitimate decoder output)
/// is representable; generated ground-truth measures always have S >= 1.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  /// Throws ParameterError if a location is outside [0,1), non-finite, or
  /// repeated.
  explicit AtomicMeasure(std::vector<Spike> spikes);

  std::size_t size() const noexcept { return spikes_.size(); }
  bool empty() const noexcept { return spikes_.empty(); }
  std::span<const Spike> spikes() const noexcept { return spikes_; }
  const Spike& operator[](std::size_t i) const { return spikes_[i]; }

  std::vector<double> locations() const;
  std::vector<Complex> amplitudes() const;

 private:
  std::vector<Spike> spikes_;
};

/// Reduce any finite real into [0,1).
double wrap_unit(double t);

/// Wrap-around distance min_n |s - t - n|; always in [0, 1/2].
double torus_distance(double s, double t);

/// Smallest pairwise torus distance of the support. +infinity when the
/// measure has fewer than two spikes.
double min_separation(const AtomicMeasure& mu);

/// Sum of amplitude magnitudes.
double tv_norm(const AtomicMeasure& mu);

enum class AmplitudeMode { real, complex };

struct RandomMeasureOptions {
  AmplitudeMode amplitudes = AmplitudeMode::complex;
  int max_attempts = 10000;
};

/// Draw s support points uniformly with pairwise torus distance >= delta_min
/// by rejection, then amplitudes with uniform phase (or random sign in real
/// mode) and magnitude in (0,1], normalized to unit TV norm.
///
/// Throws ParameterError when s * delta_min >= 1, or when the rejection loop
/// exhausts its attempts.
AtomicMeasure random_measure(int s, double delta_min, std::uint64_t rng_seed,
                             const RandomMeasureOptions& options = {});

/// Plain-text record: one line per spike, `location amplitude_re amplitude_im`.
void write_measure(std::ostream& out, const AtomicMeasure& mu);
AtomicMeasure read_measure(std::istream& in);

}  // namespace qsr
