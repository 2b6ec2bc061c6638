#include "qsr/measures.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "qsr/errors.hpp"

namespace qsr {

AtomicMeasure::AtomicMeasure(std::vector<Spike> spikes)
    : spikes_(std::move(spikes)) {
  for (const auto& s : spikes_) {
    if (!std::isfinite(s.location) || s.location < 0.0 || s.location >= 1.0) {
      throw ParameterError("spike location must lie in [0,1)");
    }
    if (!std::isfinite(s.amplitude.real()) ||
        !std::isfinite(s.amplitude.imag())) {
      throw ParameterError("spike amplitude must be finite");
    }
  }
  std::vector<double> sorted = locations();
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ParameterError("spike locations must be pairwise distinct");
  }
}

std::vector<double> AtomicMeasure::locations() const {
  std::vector<double> out;
  out.reserve(spikes_.size());
  for (const auto& s : spikes_) out.push_back(s.location);
  return out;
}

std::vector<Complex> AtomicMeasure::amplitudes() const {
  std::vector<Complex> out;
  out.reserve(spikes_.size());
  for (const auto& s : spikes_) out.push_back(s.amplitude);
  return out;
}

double wrap_unit(double t) {
  double r = t - std::floor(t);
  // floor can round t - floor(t) up to exactly 1 for tiny negative t
  return r >= 1.0 ? 0.0 : r;
}

double torus_distance(double s, double t) {
  const double d = std::abs(wrap_unit(s) - wrap_unit(t));
  return std::min(d, 1.0 - d);
}

double min_separation(const AtomicMeasure& mu) {
  if (mu.size() < 2) return std::numeric_limits<double>::infinity();
  std::vector<double> t = mu.locations();
  std::sort(t.begin(), t.end());
  double best = 1.0 - (t.back() - t.front());
  for (std::size_t i = 1; i < t.size(); ++i) best = std::min(best, t[i] - t[i - 1]);
  return best;
}

double tv_norm(const AtomicMeasure& mu) {
  double total = 0.0;
  for (const auto& s : mu.spikes()) total += std::abs(s.amplitude);
  return total;
}

AtomicMeasure random_measure(int s, double delta_min, std::uint64_t rng_seed,
                             const RandomMeasureOptions& options) {
  if (s < 1) throw ParameterError("random_measure: need at least one spike");
  if (!(delta_min >= 0.0) || s * delta_min >= 1.0) {
    throw ParameterError("random_measure: s * delta_min must be < 1");
  }
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> t(s);
  bool accepted = false;
  for (int attempt = 0; attempt < options.max_attempts && !accepted; ++attempt) {
    for (auto& x : t) x = unit(rng);
    std::vector<double> sorted = t;
    std::sort(sorted.begin(), sorted.end());
    double gap = s == 1 ? 1.0 : 1.0 - (sorted.back() - sorted.front());
    for (int i = 1; i < s; ++i) gap = std::min(gap, sorted[i] - sorted[i - 1]);
    accepted = gap >= delta_min && gap > 0.0;
  }
  if (!accepted) {
    throw ParameterError("random_measure: rejection sampling exhausted its attempts");
  }

  std::vector<Spike> spikes(s);
  double total = 0.0;
  for (int j = 0; j < s; ++j) {
    // magnitude in (0,1]
    const double magnitude = 1.0 - unit(rng);
    Complex a;
    if (options.amplitudes == AmplitudeMode::complex) {
      a = std::polar(magnitude, 2.0 * std::numbers::pi * unit(rng));
    } else {
      a = unit(rng) < 0.5 ? -magnitude : magnitude;
    }
    spikes[j] = {t[j], a};
    total += magnitude;
  }
  for (auto& sp : spikes) sp.amplitude /= total;
  return AtomicMeasure(std::move(spikes));
}

void write_measure(std::ostream& out, const AtomicMeasure& mu) {
  const auto old_precision = out.precision(17);
  for (const auto& s : mu.spikes()) {
    out << s.location << ' ' << s.amplitude.real() << ' ' << s.amplitude.imag()
        << '\n';
  }
  out.precision(old_precision);
}

AtomicMeasure read_measure(std::istream& in) {
  std::vector<Spike> spikes;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    double t = 0.0, re = 0.0, im = 0.0;
    if (!(fields >> t >> re >> im)) {
      throw ParameterError("read_measure: malformed line '" + line + "'");
    }
    spikes.push_back({t, {re, im}});
  }
  return AtomicMeasure(std::move(spikes));
}

}  // namespace qsr
