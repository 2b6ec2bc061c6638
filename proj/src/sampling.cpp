#include "qsr/sampling.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "qsr/errors.hpp"

namespace qsr {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

CondensationPlan::CondensationPlan(int m, int lambda, double beta)
    : m_(m), lambda_(lambda), beta_(beta) {
  if (m < 1) throw ParameterError("CondensationPlan: m must be >= 1");
  if (lambda < 1) throw ParameterError("CondensationPlan: lambda must be >= 1");
  if (!(beta > 1.0) || !std::isfinite(beta)) {
    throw ParameterError("CondensationPlan: beta must be > 1");
  }
}

double CondensationPlan::c_beta() const noexcept {
  return (1.0 + 1.0 / beta_) / (1.0 - 1.0 / beta_);
}

MeasurementVector fourier_sample(const AtomicMeasure& mu, int count) {
  if (count < 1) throw ParameterError("fourier_sample: need at least one sample");
  MeasurementVector y(count, Complex{0.0, 0.0});
  for (const auto& s : mu.spikes()) {
    for (int k = 0; k < count; ++k) {
      // reduce k t mod 1 before scaling so the phase stays accurate for large k
      const double phase = wrap_unit(static_cast<double>(k) * s.location);
      y[k] += s.amplitude * std::polar(1.0, -kTwoPi * phase);
    }
  }
  return y;
}

MeasurementVector condense(const MeasurementVector& y,
                           const CondensationPlan& plan) {
  if (static_cast<int>(y.size()) != plan.total()) {
    throw DimensionError("condense: expected " + std::to_string(plan.total()) +
                         " entries, got " + std::to_string(y.size()));
  }
  const int m = plan.m();
  MeasurementVector out(y.begin(), y.begin() + m);
  double scale = 1.0;
  for (int block = 1; block < plan.lambda(); ++block) {
    scale /= plan.beta();
    for (int l = 0; l < m; ++l) out[l] += scale * y[block * m + l];
  }
  return out;
}

Complex weight(double t, const CondensationPlan& plan) {
  const double beta = plan.beta();
  const double mt = wrap_unit(static_cast<double>(plan.m()) * t);
  const double mlt = wrap_unit(mt * plan.lambda());
  const Complex num =
      1.0 - std::pow(beta, -plan.lambda()) * std::polar(1.0, -kTwoPi * mlt);
  const Complex den = 1.0 - (1.0 / beta) * std::polar(1.0, -kTwoPi * mt);
  return num / den;
}

AtomicMeasure apply_weights(const AtomicMeasure& mu,
                            const CondensationPlan& plan) {
  std::vector<Spike> spikes(mu.spikes().begin(), mu.spikes().end());
  for (auto& s : spikes) s.amplitude *= weight(s.location, plan);
  return AtomicMeasure(std::move(spikes));
}

MeasurementVector noise_transfer_apply(const MeasurementVector& u,
                                       const CondensationPlan& plan) {
  if (static_cast<int>(u.size()) != plan.total()) {
    throw DimensionError("noise_transfer_apply: expected " +
                         std::to_string(plan.total()) + " entries, got " +
                         std::to_string(u.size()));
  }
  const int m = plan.m();
  MeasurementVector out(u);
  for (std::size_t j = m; j < u.size(); ++j) out[j] -= plan.beta() * u[j - m];
  return out;
}

void write_vector_csv(std::ostream& out, const MeasurementVector& v) {
  const auto old_precision = out.precision(17);
  out << "index,re,im\n";
  for (std::size_t i = 0; i < v.size(); ++i) {
    out << i << ',' << v[i].real() << ',' << v[i].imag() << '\n';
  }
  out.precision(old_precision);
}

}  // namespace qsr
