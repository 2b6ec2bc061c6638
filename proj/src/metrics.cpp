#include "qsr/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "qsr/decode.hpp"
#include "qsr/errors.hpp"

namespace qsr {

SpikeClusters cluster_spikes(const AtomicMeasure& truth,
                             const AtomicMeasure& recovered, int n_measurements) {
  SpikeClusters c;
  c.radius = neighborhood_radius(n_measurements);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    for (std::size_t j = i + 1; j < truth.size(); ++j) {
      if (torus_distance(truth[i].location, truth[j].location) <= 2.0 * c.radius) {
        std::ostringstream msg;
        msg << "cluster_spikes: neighborhoods of true spikes " << i << " (t="
            << truth[i].location << ") and " << j << " (t=" << truth[j].location
            << ") overlap";
        throw AmbiguityError(msg.str());
      }
    }
  }
  c.neighborhoods.resize(truth.size());
  for (std::size_t k = 0; k < recovered.size(); ++k) {
    bool claimed = false;
    for (std::size_t j = 0; j < truth.size(); ++j) {
      if (torus_distance(recovered[k].location, truth[j].location) <= c.radius) {
        c.neighborhoods[j].push_back(k);
        claimed = true;
      }
    }
    if (!claimed) c.residual.push_back(k);
  }
  return c;
}

double ErrorReport::max_amplitude_error() const noexcept {
  return amplitude_errors.empty()
             ? 0.0
             : *std::max_element(amplitude_errors.begin(), amplitude_errors.end());
}

double ErrorReport::sum_amplitude_error() const noexcept {
  return std::accumulate(amplitude_errors.begin(), amplitude_errors.end(), 0.0);
}

double ErrorReport::max_location_error() const noexcept {
  return location_errors.empty()
             ? 0.0
             : *std::max_element(location_errors.begin(), location_errors.end());
}

ErrorReport error_report(const AtomicMeasure& truth,
                         const AtomicMeasure& recovered,
                         const SpikeClusters& clusters) {
  if (clusters.neighborhoods.size() != truth.size()) {
    throw DimensionError("error_report: clusters do not match the truth");
  }
  ErrorReport r;
  for (std::size_t j = 0; j < truth.size(); ++j) {
    Complex sum{0.0, 0.0};
    double loc = 0.0;
    for (std::size_t k : clusters.neighborhoods[j]) {
      const Spike& s = recovered[k];
      sum += s.amplitude;
      const double d = torus_distance(truth[j].location, s.location);
      loc += std::abs(s.amplitude) * d * d;
    }
    r.amplitude_errors.push_back(std::abs(truth[j].amplitude - sum));
    r.location_errors.push_back(loc);
  }
  for (std::size_t k : clusters.residual) r.spurious_mass += std::abs(recovered[k].amplitude);
  return r;
}

double lipschitz_bound(double beta, int lambda) {
  return 4.0 * std::numbers::pi * lambda * beta / ((beta - 1.0) * (beta - 1.0));
}

Complex reciprocal_weight_profile(double t, double beta, int lambda) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double lt = wrap_unit(wrap_unit(t) * lambda);
  return (1.0 - std::polar(1.0 / beta, -two_pi * t)) /
         (1.0 - std::polar(std::pow(beta, -lambda), -two_pi * lt));
}

double sampled_lipschitz(double beta, int lambda, int points) {
  if (points < 2) throw ParameterError("sampled_lipschitz: need >= 2 points");
  const double h = 1.0 / points;
  double best = 0.0;
  Complex prev = reciprocal_weight_profile(0.0, beta, lambda);
  const Complex first = prev;
  for (int i = 1; i <= points; ++i) {
    const Complex cur =
        i == points ? first : reciprocal_weight_profile(i * h, beta, lambda);
    best = std::max(best, std::abs(cur - prev) / h);
    prev = cur;
  }
  return best;
}

Envelope theoretical_envelope(const QuantizerConfig& config,
                              const RecoveryConstants& constants) {
  config.validate();
  Envelope e;
  e.condensed_error_bound = config.condensed_error_bound();
  e.c_beta = config.c_beta();
  e.lipschitz_bound = lipschitz_bound(config.beta, config.lambda);
  e.amplitude_bound =
      e.c_beta * constants.C1 * e.condensed_error_bound +
      e.lipschitz_bound * std::sqrt(e.c_beta * config.alpha) *
          std::sqrt(constants.C2 * e.condensed_error_bound);
  const double total = static_cast<double>(config.m) * config.lambda;
  e.simplified = constants.rate * std::sqrt(total) *
                 std::pow(config.lambda, 1.5) *
                 std::pow(static_cast<double>(config.K), -0.5 * config.lambda);
  return e;
}

}  // namespace qsr
