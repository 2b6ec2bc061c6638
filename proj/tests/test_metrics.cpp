#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "qsr/errors.hpp"
#include "qsr/metrics.hpp"
#include "qsr/quantize.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using qsr::AtomicMeasure;
using qsr::Complex;

namespace {

constexpr int kM = 41;
const double kRadius = 2 * 0.1649 / (kM - 1);

}  // namespace

TEST_CASE("cluster_spikes on identical measures") {
  const auto mu = qsr::random_measure(4, 0.1, 1);
  const auto cl = qsr::cluster_spikes(mu, mu, kM);
  CHECK_THAT(cl.radius, WithinAbs(kRadius, 1e-16));
  REQUIRE(cl.neighborhoods.size() == 4);
  for (std::size_t j = 0; j < 4; ++j) CHECK(cl.neighborhoods[j] == std::vector<std::size_t>{j});
  CHECK(cl.residual.empty());
}

TEST_CASE("cluster_spikes boundary is closed") {
  const AtomicMeasure truth({{0.5, 1.0}});
  const auto cl = qsr::cluster_spikes(truth, AtomicMeasure({{0.5 + kRadius, 1.0}}), kM);
  CHECK(cl.neighborhoods[0].size() == 1);
  CHECK(cl.residual.empty());
  const auto out = qsr::cluster_spikes(truth, AtomicMeasure({{0.5 + 1.001 * kRadius, 1.0}}), kM);
  CHECK(out.neighborhoods[0].empty());
  CHECK(out.residual.size() == 1);
}

TEST_CASE("cluster_spikes wraps around the torus") {
  const AtomicMeasure truth({{0.001, 1.0}});
  const auto cl = qsr::cluster_spikes(truth, AtomicMeasure({{0.999, 1.0}}), kM);
  CHECK(cl.neighborhoods[0].size() == 1);
}

TEST_CASE("spike midway between two true spikes is residual") {
  const double sep = 4.0 / (kM - 1);
  const AtomicMeasure truth({{0.2, 1.0}, {0.2 + sep, 1.0}});
  const auto cl = qsr::cluster_spikes(truth, AtomicMeasure({{0.2 + sep / 2, 1.0}}), kM);
  CHECK(cl.neighborhoods[0].empty());
  CHECK(cl.neighborhoods[1].empty());
  CHECK(cl.residual == std::vector<std::size_t>{0});
}

TEST_CASE("overlapping neighbourhoods are rejected") {
  const AtomicMeasure truth({{0.2, 1.0}, {0.2 + 1.5 * kRadius, 1.0}});
  CHECK_THROWS_AS(qsr::cluster_spikes(truth, truth, kM), qsr::AmbiguityError);
  CHECK_THROWS_AS(qsr::cluster_spikes(truth, truth, 1), qsr::ParameterError);
}

TEST_CASE("error_report examples") {
  const auto mu = qsr::random_measure(3, 0.1, 2);
  const auto zero = qsr::error_report(mu, mu, qsr::cluster_spikes(mu, mu, kM));
  CHECK(zero.max_amplitude_error() == 0.0);
  CHECK(zero.max_location_error() == 0.0);
  CHECK(zero.spurious_mass == 0.0);

  const AtomicMeasure truth({{0.3, 1.0}});
  const AtomicMeasure split({{0.3, 0.6}, {0.3 + kRadius / 2, 0.5}});
  const auto r = qsr::error_report(truth, split, qsr::cluster_spikes(truth, split, kM));
  CHECK_THAT(r.amplitude_errors[0], WithinAbs(0.1, 1e-15));
  CHECK_THAT(r.location_errors[0], WithinAbs(0.5 * kRadius * kRadius / 4, 1e-18));
  CHECK(r.spurious_mass == 0.0);

  const AtomicMeasure noisy({{0.3, 1.0}, {0.8, Complex(0.0, 0.02)}});
  const auto s = qsr::error_report(truth, noisy, qsr::cluster_spikes(truth, noisy, kM));
  CHECK_THAT(s.spurious_mass, WithinAbs(0.02, 1e-17));
  CHECK(s.max_amplitude_error() == 0.0);
  CHECK(s.max_location_error() == 0.0);
}

TEST_CASE("error_report aggregates") {
  const AtomicMeasure truth({{0.1, 1.0}, {0.5, 1.0}});
  const AtomicMeasure rec({{0.1, 0.7}, {0.5, 0.9}});
  const auto r = qsr::error_report(truth, rec, qsr::cluster_spikes(truth, rec, kM));
  CHECK_THAT(r.max_amplitude_error(), WithinAbs(0.3, 1e-15));
  CHECK_THAT(r.sum_amplitude_error(), WithinAbs(0.4, 1e-15));
  for (double e : r.amplitude_errors) CHECK(e >= 0.0);
}

TEST_CASE("error_report invariances and mass conservation") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> jitter(-kRadius, kRadius);
  std::uniform_real_distribution<double> loc(0.0, 1.0);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto truth = qsr::random_measure(1 + seed % 5, 0.1, seed);
    std::vector<qsr::Spike> rec;
    for (const auto& sp : truth.spikes()) {
      rec.push_back({qsr::wrap_unit(sp.location + jitter(rng)), sp.amplitude * 0.9});
    }
    rec.push_back({loc(rng), Complex(0.01, 0.01)});
    std::vector<qsr::Spike> unique;
    for (const auto& sp : rec) {
      bool dup = false;
      for (const auto& u : unique) dup = dup || u.location == sp.location;
      if (!dup) unique.push_back(sp);
    }
    const AtomicMeasure recovered(unique);
    const auto cl = qsr::cluster_spikes(truth, recovered, kM);
    const auto base = qsr::error_report(truth, recovered, cl);

    double clustered = 0.0;
    for (const auto& nb : cl.neighborhoods)
      for (auto k : nb) clustered += std::abs(recovered[k].amplitude);
    CHECK_THAT(clustered + base.spurious_mass, WithinAbs(qsr::tv_norm(recovered), 1e-14));

    std::vector<qsr::Spike> reversed(unique.rbegin(), unique.rend());
    const AtomicMeasure rev(reversed);
    const auto rr = qsr::error_report(truth, rev, qsr::cluster_spikes(truth, rev, kM));
    CHECK_THAT(rr.max_amplitude_error(), WithinAbs(base.max_amplitude_error(), 1e-15));
    CHECK_THAT(rr.spurious_mass, WithinAbs(base.spurious_mass, 1e-15));

    std::vector<qsr::Spike> halves;
    for (const auto& sp : unique) {
      halves.push_back({sp.location, sp.amplitude * 0.5});
      halves.push_back({sp.location + 1e-12, sp.amplitude * 0.5});
    }
    const AtomicMeasure half(halves);
    const auto hr = qsr::error_report(truth, half, qsr::cluster_spikes(truth, half, kM));
    CHECK_THAT(hr.max_amplitude_error(), WithinAbs(base.max_amplitude_error(), 1e-14));
  }
}

TEST_CASE("envelope ingredients") {
  const auto c = qsr::select_parameters(2, 2, 1.0, kM);
  const auto env = qsr::theoretical_envelope(c);
  CHECK_THAT(env.condensed_error_bound, WithinRel(std::sqrt(82.0) * 4.0 / 3, 1e-14));
  CHECK_THAT(env.condensed_error_bound, WithinAbs(12.07, 0.005));
  CHECK(env.condensed_error_bound <= std::numbers::e * std::sqrt(82.0) * 3 * 0.25);
  CHECK_THAT(env.c_beta, WithinRel(5.0, 1e-14));
  CHECK_THAT(env.lipschitz_bound, WithinRel(4 * std::numbers::pi * 2 * 1.5 / 0.25, 1e-14));
  const double eps = env.condensed_error_bound;
  CHECK_THAT(env.amplitude_bound,
             WithinRel(5.0 * eps + env.lipschitz_bound * std::sqrt(5.0) * std::sqrt(eps), 1e-14));
  CHECK_THAT(env.simplified, WithinRel(std::sqrt(82.0) * std::pow(2.0, 1.5) / 2.0, 1e-14));

  qsr::RecoveryConstants k;
  k.C1 = 2.0;
  k.C2 = 3.0;
  k.rate = 0.5;
  const auto e2 = qsr::theoretical_envelope(c, k);
  CHECK_THAT(e2.amplitude_bound,
             WithinRel(5.0 * 2.0 * eps + env.lipschitz_bound * std::sqrt(5.0) * std::sqrt(3.0 * eps),
                       1e-14));
  CHECK_THAT(e2.simplified, WithinRel(0.5 * env.simplified, 1e-14));
}

TEST_CASE("condensed error bound beats its closed-form majorant") {
  for (int K = 2; K <= 10; ++K) {
    for (int lambda = 1; lambda <= 12; ++lambda) {
      const auto c = qsr::select_parameters(K, lambda, 1.0, kM);
      const double bound = std::numbers::e * std::sqrt(2.0 * kM) * (lambda + 1) * std::pow(K, -lambda);
      CHECK(qsr::theoretical_envelope(c).condensed_error_bound <= bound);
    }
  }
}

TEST_CASE("simplified envelope ratio across lambda") {
  for (int K = 2; K <= 6; ++K) {
    for (int lambda = 1; lambda <= 8; ++lambda) {
      const auto a = qsr::theoretical_envelope(qsr::select_parameters(K, lambda, 1.0, kM));
      const auto b = qsr::theoretical_envelope(qsr::select_parameters(K, lambda + 1, 1.0, kM));
      const double want = std::sqrt((lambda + 1.0) / lambda) * std::pow((lambda + 1.0) / lambda, 1.5) /
                          std::sqrt(static_cast<double>(K));
      CHECK_THAT(b.simplified / a.simplified, WithinRel(want, 1e-12));
    }
  }
}

TEST_CASE("reciprocal weight profile") {
  CHECK(std::abs(qsr::reciprocal_weight_profile(0.3, 1.7, 1) - Complex(1.0)) < 1e-15);
  CHECK(std::abs(qsr::reciprocal_weight_profile(0.0, 2.0, 2) - Complex(0.5 / 0.75)) < 1e-15);
}

TEST_CASE("sampled Lipschitz quotients stay below the bound") {
  for (int K = 2; K <= 6; ++K) {
    for (int lambda = 1; lambda <= 8; ++lambda) {
      const double beta = qsr::select_parameters(K, lambda, 1.0, kM).beta;
      const double sampled = qsr::sampled_lipschitz(beta, lambda, 4000);
      CHECK(sampled > 0.0);
      CHECK(sampled <= qsr::lipschitz_bound(beta, lambda));
    }
  }
}

TEST_CASE("sampled_lipschitz agrees with a brute-force difference quotient") {
  const double beta = 1.5;
  const int lambda = 3, n = 1000;
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / n, t = static_cast<double>((i + 1) % n) / n;
    const Complex fs = (1.0 - std::polar(1.0 / beta, -2 * std::numbers::pi * s)) /
                       (1.0 - std::polar(std::pow(beta, -lambda), -2 * std::numbers::pi * lambda * s));
    const Complex ft = (1.0 - std::polar(1.0 / beta, -2 * std::numbers::pi * t)) /
                       (1.0 - std::polar(std::pow(beta, -lambda), -2 * std::numbers::pi * lambda * t));
    best = std::max(best, std::abs(fs - ft) * n);
  }
  CHECK_THAT(qsr::sampled_lipschitz(beta, lambda, n), WithinRel(best, 1e-9));
}
