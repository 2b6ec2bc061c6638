#include "qsr/decode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "qsr/errors.hpp"
#include "qsr/fourier_grid.hpp"
#include "grid_solvers.hpp"

namespace qsr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_problem(const TvMinProblem& p) {
  const auto l = static_cast<long>(p.measurements.size());
  if (l < 1) throw ParameterError("tv_min: no measurements");
  if (!(p.noise_bound >= 0.0) || !std::isfinite(p.noise_bound)) {
    throw ParameterError("tv_min: noise bound must be finite and >= 0");
  }
  if (p.grid_size < 4 * l) {
    throw ParameterError("tv_min: grid size must be at least 4x the number "
                         "of measurements");
  }
  validate(p.options);
}

}  // namespace

void validate(const SolverOptions& o) {
  if (o.max_iterations < 1 || o.check_interval < 1 || !(o.tolerance > 0.0) ||
      !(o.reduced_tolerance >= o.tolerance) || !(o.step > 0.0) ||
      !(o.relaxation > 0.0 && o.relaxation < 2.0) || !(o.pruning_floor >= 0.0) ||
      !(o.barrier_growth > 1.0) ||
      (o.merge_radius && !(*o.merge_radius >= 0.0 && *o.merge_radius < 0.5))) {
    throw ParameterError("invalid solver options");
  }
}

double neighborhood_radius(int n_measurements) {
  if (n_measurements < 2) {
    throw ParameterError("neighborhood_radius: need at least two measurements");
  }
  return 2.0 * 0.1649 / (n_measurements - 1);
}

int fft_friendly_size(int target) {
  for (int n = std::max(target, 1);; ++n) {
    int r = n;
    for (int p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return n;
  }
}

TvMinProblem TvMinProblem::with_grid_factor(MeasurementVector measurements,
                                            double noise_bound, int grid_factor,
                                            SolverOptions options) {
  if (grid_factor < 4) throw ParameterError("grid factor must be >= 4");
  TvMinProblem p;
  p.grid_size = fft_friendly_size(grid_factor * static_cast<int>(measurements.size()));
  p.measurements = std::move(measurements);
  p.noise_bound = noise_bound;
  p.options = std::move(options);
  return p;
}

GridSolution solve_grid(const TvMinProblem& problem) {
  check_problem(problem);
  const auto& c = problem.measurements;
  const auto& opt = problem.options;
  const int n = problem.grid_size;
  const int l = static_cast<int>(c.size());
  const double eps = problem.noise_bound;

  GridSolution sol;
  sol.grid_size = n;
  sol.amplitudes.assign(n, Complex{0.0, 0.0});

  const double data_norm = detail::norm2(c);
  if (data_norm <= eps) {
    // the zero measure is feasible, hence optimal
    sol.report.converged = true;
    sol.report.feasibility_residual = data_norm;
    return sol;
  }

  FourierGrid grid(l, n);
  SolverReport& rep = sol.report;
  if (opt.method == SolverMethod::douglas_rachford) {
    detail::solve_douglas_rachford(problem, grid, sol.amplitudes, rep);
  } else {
    detail::solve_barrier(problem, grid, sol.amplitudes, rep);
  }

  rep.objective = detail::norm1(sol.amplitudes);
  std::vector<Complex> fb(l);
  grid.forward(sol.amplitudes, fb);
  double res2 = 0.0;
  for (int k = 0; k < l; ++k) res2 += std::norm(fb[k] - c[k]);
  rep.feasibility_residual = std::sqrt(res2);
  if (!rep.converged && opt.throw_on_nonconvergence) {
    throw ConvergenceError(
        "tv_min: no convergence after " + std::to_string(rep.iterations) +
            " iterations (duality gap " + std::to_string(rep.duality_gap) + ")",
        rep.iterations, rep.primal_residual, rep.dual_residual);
  }
  return sol;
}

AtomicMeasure extract_spikes(const std::vector<Complex>& grid_amplitudes,
                             double merge_radius, double pruning_floor) {
  if (!(merge_radius >= 0.0 && merge_radius < 0.5)) {
    throw ParameterError("extract_spikes: merge radius must be in [0, 1/2)");
  }
  const int n = static_cast<int>(grid_amplitudes.size());
  double peak = 0.0;
  for (const auto& a : grid_amplitudes) peak = std::max(peak, std::abs(a));
  if (peak == 0.0) return {};

  const double floor = pruning_floor * peak;
  std::vector<int> order;
  std::vector<char> alive(n, 0);
  for (int i = 0; i < n; ++i) {
    const double mag = std::abs(grid_amplitudes[i]);
    if (mag > 0.0 && mag >= floor) {
      order.push_back(i);
      alive[i] = 1;
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(grid_amplitudes[a]) > std::abs(grid_amplitudes[b]);
  });

  // grid offsets that can lie within the radius; exact test below
  const int reach = std::min(n / 2, static_cast<int>(std::ceil(merge_radius * n)) + 1);
  std::vector<Spike> spikes;
  for (int seed : order) {
    if (!alive[seed]) continue;
    const double seed_t = static_cast<double>(seed) / n;
    Complex sum{0.0, 0.0};
    Complex direction{0.0, 0.0};
    for (int offset = -reach; offset <= reach; ++offset) {
      const int idx = ((seed + offset) % n + n) % n;
      if (!alive[idx]) continue;
      const double t = static_cast<double>(idx) / n;
      if (torus_distance(t, seed_t) > merge_radius) continue;
      alive[idx] = 0;
      const Complex a = grid_amplitudes[idx];
      sum += a;
      direction += std::abs(a) * std::polar(1.0, kTwoPi * t);
    }
    const double location = wrap_unit(std::arg(direction) / kTwoPi);
    spikes.push_back({location, sum});
  }

  std::sort(spikes.begin(), spikes.end(),
            [](const Spike& a, const Spike& b) { return a.location < b.location; });
  std::vector<Spike> unique;
  for (const auto& s : spikes) {
    if (!unique.empty() && unique.back().location == s.location) {
      unique.back().amplitude += s.amplitude;
    } else {
      unique.push_back(s);
    }
  }
  return AtomicMeasure(std::move(unique));
}

RecoveredMeasure tv_min(const TvMinProblem& problem) {
  GridSolution grid = solve_grid(problem);
  const int l = static_cast<int>(problem.measurements.size());
  const double radius = problem.options.merge_radius.value_or(
      l >= 2 ? neighborhood_radius(l) : 0.0);
  RecoveredMeasure out;
  out.measure = extract_spikes(grid.amplitudes, std::min(radius, 0.49),
                               problem.options.pruning_floor);
  out.objective_value = grid.report.objective;
  out.feasibility_residual = grid.report.feasibility_residual;
  out.report = std::move(grid.report);
  return out;
}

RecoveredMeasure decode_condensed(const MeasurementVector& condensed,
                                  const CondensationPlan& plan,
                                  double noise_bound, int grid_factor,
                                  const SolverOptions& options) {
  if (static_cast<int>(condensed.size()) != plan.m()) {
    throw DimensionError("decode_condensed: expected " + std::to_string(plan.m()) +
                         " condensed samples");
  }
  RecoveredMeasure rec = tv_min(
      TvMinProblem::with_grid_factor(condensed, noise_bound, grid_factor, options));
  const double floor = 0.5 / plan.c_beta();
  std::vector<Spike> spikes(rec.measure.spikes().begin(), rec.measure.spikes().end());
  for (auto& s : spikes) {
    const Complex w = weight(s.location, plan);
    if (std::abs(w) < floor) {
      throw NumericalAnomalyError("decode: block weight " +
                                  std::to_string(std::abs(w)) +
                                  " below half its theoretical minimum");
    }
    s.amplitude /= w;
  }
  rec.measure = AtomicMeasure(std::move(spikes));
  return rec;
}

RecoveredMeasure decode_beta(const MeasurementVector& q,
                             const QuantizerConfig& config, int grid_factor,
                             const SolverOptions& options) {
  config.validate();
  const CondensationPlan plan = config.plan();
  return decode_condensed(condense(q, plan), plan,
                          config.condensed_error_bound(), grid_factor, options);
}

RecoveredMeasure decode_msq(const MeasurementVector& q, int K, double alpha,
                            int grid_factor, const SolverOptions& options) {
  if (K < 2) throw ParameterError("decode_msq: K must be >= 2");
  const double eps = std::sqrt(2.0 * static_cast<double>(q.size())) * alpha / K;
  return tv_min(TvMinProblem::with_grid_factor(q, eps, grid_factor, options));
}

}  // namespace qsr
