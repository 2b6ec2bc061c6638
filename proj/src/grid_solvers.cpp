#include "grid_solvers.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qsr::detail {

double norm2(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

double norm1(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::abs(x);
  return s;
}

double project_to_ball(FourierGrid& grid, std::span<const Complex> c, double eps,
                       std::vector<Complex>& b) {
  const int l = grid.frequencies();
  const int n = grid.grid_size();
  std::vector<Complex> r(l), corr(n);
  grid.forward(b, r);
  for (int k = 0; k < l; ++k) r[k] -= c[k];
  const double nr = norm2(r);
  if (nr > eps) {
    const double shrink = (1.0 - eps / nr) / n;
    for (auto& v : r) v *= shrink;
    grid.adjoint(r, corr);
    for (int i = 0; i < n; ++i) b[i] -= corr[i];
  }
  return nr;
}

void solve_douglas_rachford(const TvMinProblem& problem, FourierGrid& grid,
                            std::vector<Complex>& b, SolverReport& rep) {
  const auto& c = problem.measurements;
  const auto& opt = problem.options;
  const int n = problem.grid_size;
  const int l = static_cast<int>(c.size());
  const double eps = problem.noise_bound;
  const double data_norm = norm2(c);
  const double scale = data_norm / std::sqrt(static_cast<double>(l));
  const double threshold = opt.step * scale;
  const double threshold2 = threshold * threshold;
  const double rho = opt.relaxation;
  const double inv_n = 1.0 / n;

  // Douglas-Rachford on z:  b = P_C(z),  x = soft(2b - z),  z += rho (x - b).
  // The projection is b = z - F^* s with s = (1 - eps/||r||) r / N, r = F z - c.
  std::vector<Complex> z(n), x(n), correction(n), fz(l), s(l);
  b.assign(n, Complex{0.0, 0.0});
  grid.adjoint(c, z);
  for (auto& v : z) v *= inv_n;

  double best_dual = -std::numeric_limits<double>::infinity();
  for (int it = 1; it <= opt.max_iterations; ++it) {
    grid.forward(z, fz);
    double nr2 = 0.0;
    for (int k = 0; k < l; ++k) {
      s[k] = fz[k] - c[k];
      nr2 += std::norm(s[k]);
    }
    const double nr = std::sqrt(nr2);
    const bool active = nr > eps;
    if (active) {
      const double shrink = (1.0 - eps / nr) * inv_n;
      for (auto& v : s) v *= shrink;
      grid.adjoint(s, correction);
    }

    double dx2 = 0.0, db2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const Complex corr = active ? correction[i] : Complex{0.0, 0.0};
      const Complex bi = z[i] - corr;
      const Complex v = bi - corr;  // 2b - z
      const double mag2 = std::norm(v);
      const Complex xi =
          mag2 > threshold2 ? v * (1.0 - threshold / std::sqrt(mag2)) : Complex{0.0, 0.0};
      dx2 += std::norm(xi - bi);
      db2 += std::norm(bi - b[i]);
      b[i] = bi;
      x[i] = xi;
      z[i] += rho * (xi - bi);
    }
    rep.iterations = it;
    rep.primal_residual = std::sqrt(dx2) / scale;
    rep.dual_residual = std::sqrt(db2) / scale;

    if (it % opt.check_interval != 0 && it != opt.max_iterations) continue;

    // Dual certificate p = -s / step: F^* p = (b - z) / step lies in the
    // subdifferential of ||.||_1 at the fixed point. Rescale into the dual
    // feasible set ||F^* p||_inf <= 1 and bound the optimality gap.
    rep.objective = norm1(b);
    double dual = 0.0;
    if (active) {
      double peak2 = 0.0;
      for (int i = 0; i < n; ++i) peak2 = std::max(peak2, std::norm(correction[i]));
      const double peak = std::sqrt(peak2) / threshold;
      const double norm_p = nr * (1.0 - eps / nr) * inv_n / threshold;
      double re_cp = 0.0;
      for (int k = 0; k < l; ++k) re_cp -= (std::conj(c[k]) * s[k]).real() / threshold;
      dual = (re_cp - eps * norm_p) / std::max(1.0, peak);
    }
    best_dual = std::max(best_dual, dual);
    rep.duality_gap = std::max(0.0, rep.objective - best_dual);
    if (opt.record_trace) {
      rep.trace.push_back({it, rep.primal_residual, rep.dual_residual,
                           rep.objective, rep.duality_gap});
    }
    if (rep.duality_gap <= opt.tolerance * std::max(rep.objective, scale)) {
      rep.converged = true;
      break;
    }
  }
}

namespace {

// Least-squares fit of fixed-phase amplitudes on {mag >= cutoff}.
bool purify_with_cutoff(FourierGrid& grid, std::span<const Complex> c, double eps,
                        std::span<const Complex> p, std::span<const Complex> g,
                        std::span<const double> mag, double cutoff,
                        std::vector<Complex>& out) {
  const int l = static_cast<int>(c.size());
  const int n = static_cast<int>(g.size());
  std::vector<int> active;
  for (int i = 0; i < n; ++i) {
    if (mag[i] >= cutoff) active.push_back(i);
  }
  if (active.empty() || active.size() > 2 * static_cast<std::size_t>(l)) return false;

  const int a = static_cast<int>(active.size());
  Eigen::MatrixXd m(2 * l, a);
  Eigen::VectorXd rhs(2 * l);
  const double np = norm2(p);
  for (int k = 0; k < l; ++k) {
    const Complex target = eps > 0.0 ? c[k] - eps * p[k] / np : c[k];
    rhs[k] = target.real();
    rhs[l + k] = target.imag();
  }
  const double two_pi_over_n = 2.0 * std::numbers::pi / n;
  for (int j = 0; j < a; ++j) {
    const int idx = active[j];
    const Complex phase = g[idx] / std::abs(g[idx]);
    for (int k = 0; k < l; ++k) {
      const long kn = (static_cast<long>(k) * idx) % n;
      const Complex col = phase * std::polar(1.0, -two_pi_over_n * static_cast<double>(kn));
      m(k, j) = col.real();
      m(l + k, j) = col.imag();
    }
  }
  const Eigen::VectorXd r = m.colPivHouseholderQr().solve(rhs);
  if (!r.allFinite()) return false;
  out.assign(n, Complex{0.0, 0.0});
  for (int j = 0; j < a; ++j) {
    const int idx = active[j];
    out[idx] = r[j] * g[idx] / std::abs(g[idx]);
  }
  project_to_ball(grid, c, eps, out);
  return true;
}

// Sparse primal from a near-optimal dual p: on the active set, where
// |g_n| is close to 1, optimality forces b_n = r_n g_n / |g_n| with r_n >= 0
// and F b = c - eps p / ||p||. Solve that for r in the least-squares sense
// over a range of active-set cutoffs, project onto the fidelity ball and
// keep the smallest l1 norm.
bool purify(FourierGrid& grid, std::span<const Complex> c, double eps,
            std::span<const Complex> p, std::span<const Complex> g, double tau,
            std::vector<Complex>& out) {
  const int n = static_cast<int>(g.size());
  std::vector<double> mag(n);
  double peak = 0.0;
  for (int i = 0; i < n; ++i) {
    mag[i] = (2.0 / tau) * std::abs(g[i]) / (1.0 - std::norm(g[i]));
    peak = std::max(peak, mag[i]);
  }
  std::vector<Complex> trial;
  double best = std::numeric_limits<double>::infinity();
  for (double rel = 1e-2; rel >= 1e-9; rel *= 0.1) {
    if (!purify_with_cutoff(grid, c, eps, p, g, mag, rel * peak, trial)) continue;
    const double value = norm1(trial);
    if (value < best) {
      best = value;
      out.swap(trial);
    }
  }
  return std::isfinite(best);
}

}  // namespace

// Log-barrier path following on the dual
//
//   maximize Re<c, p> - eps ||p||_2   subject to  |(F^* p)_n| <= 1,
//
// minimizing tau (eps s - Re<c, p>) - sum_n log(1 - |g_n|^2) - log(s^2 - ||p||^2),
// g = F^* p, by damped Newton for a geometric sequence of tau. The epigraph
// variable s is minimized out in closed form: with a = tau eps and
// u = sqrt(1 + a^2 ||p||^2) its terms become u - log(1 + u) + const, which
// is smooth at p = 0. The Newton system has 2L unknowns; its grid sums are
// Toeplitz (in j - k) and Hankel (in j + k) in the frequency indices, so
// assembling it costs two length-N FFTs. The barrier gradient gives the
// primal estimate b_n = (2 / tau) g_n / (1 - |g_n|^2).
void solve_barrier(const TvMinProblem& problem, FourierGrid& grid,
                   std::vector<Complex>& b, SolverReport& rep) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;

  const auto& c = problem.measurements;
  const auto& opt = problem.options;
  const int n = problem.grid_size;
  const int l = static_cast<int>(c.size());
  const double eps = problem.noise_bound;
  const bool ball = eps > 0.0;
  const int dim = 2 * l;
  const double data_norm = norm2(c);
  const double scale = data_norm / std::sqrt(static_cast<double>(l));

  b.clear();
  // strictly feasible start along c
  std::vector<Complex> p(c.begin(), c.end()), dp(l);
  std::vector<Complex> g(n), dg(n);
  grid.adjoint(p, g);
  double peak = 0.0;
  for (const auto& v : g) peak = std::max(peak, std::abs(v));
  for (auto& v : p) v *= 0.5 / peak;
  for (auto& v : g) v *= 0.5 / peak;

  std::vector<Complex> work(n), grad_grid(l), toeplitz(n), hankel(n);
  MatrixXd hess(dim, dim);
  VectorXd grad(dim), x(2 * l);

  // minus the dual objective
  auto penalty = [&](std::span<const Complex> pv) {
    double re_cp = 0.0;
    for (int k = 0; k < l; ++k) re_cp += (std::conj(c[k]) * pv[k]).real();
    return eps * norm2(pv) - re_cp;
  };
  // f(p + t dp) - f(p), evaluated from the increments so that small
  // decreases survive next to the O(tau) objective
  double dot_pp = 0.0;
  double re_c_dp = 0.0, re_p_dp = 0.0, dp2 = 0.0;
  auto barrier_change = [&](double t, double tau) {
    double df = 0.0;
    for (int i = 0; i < n; ++i) {
      const double h = 1.0 - std::norm(g[i]);
      const double dh = -(2.0 * t * (std::conj(g[i]) * dg[i]).real() + t * t * std::norm(dg[i]));
      if (!(h + dh > 0.0) || !(dh / h > -1.0)) return std::numeric_limits<double>::infinity();
      df -= std::log1p(dh / h);
    }
    df -= tau * t * re_c_dp;
    if (ball) {
      const double a2 = tau * eps * tau * eps;
      const double u = std::sqrt(1.0 + a2 * dot_pp);
      const double drho = 2.0 * t * re_p_dp + t * t * dp2;
      const double u_new = std::sqrt(std::max(1.0, 1.0 + a2 * (dot_pp + drho)));
      const double du = a2 * drho / (u + u_new);
      df += du - std::log1p(du / (1.0 + u));
    }
    return df;
  };

  double tau = 1.0 / scale;
  const double growth = opt.barrier_growth;
  std::vector<Complex> candidate;
  double best_gap = std::numeric_limits<double>::infinity();
  double best_dual = -std::numeric_limits<double>::infinity();
  int newton_steps = 0;
  bool stalled = false;

  while (newton_steps < opt.max_iterations && !stalled) {
    // centering at fixed tau
    bool centered = false;
    for (int inner = 0; inner < 50 && newton_steps < opt.max_iterations; ++inner) {
      for (int i = 0; i < n; ++i) {
        const double h = 1.0 - std::norm(g[i]);
        const Complex q = g[i] / h;
        work[i] = q;
        toeplitz[i] = Complex{1.0 / (h * h), 0.0};
        hankel[i] = q * q;
      }
      grid.forward(work, grad_grid);
      grid.idft(toeplitz, toeplitz);
      grid.dft(hankel, hankel);

      for (int k = 0; k < l; ++k) {
        grad[k] = 2.0 * grad_grid[k].real() - tau * c[k].real();
        grad[l + k] = 2.0 * grad_grid[k].imag() - tau * c[k].imag();
        for (int j = 0; j < l; ++j) {
          const Complex a = j >= k ? toeplitz[j - k] : std::conj(toeplitz[k - j]);
          const Complex bc = std::conj(hankel[k + j]);
          hess(k, j) = 2.0 * (a.real() + bc.real());
          hess(k, l + j) = 2.0 * (-a.imag() - bc.imag());
          hess(l + k, j) = 2.0 * (a.imag() - bc.imag());
          hess(l + k, l + j) = 2.0 * (a.real() - bc.real());
        }
        x[k] = p[k].real();
        x[l + k] = p[k].imag();
      }
      if (ball) {
        const double a2 = tau * eps * tau * eps;
        const double u = std::sqrt(1.0 + a2 * x.squaredNorm());
        grad += (a2 / (1.0 + u)) * x;
        hess.noalias() -= (a2 * a2 / (u * (1.0 + u) * (1.0 + u))) * x * x.transpose();
        hess.diagonal().array() += a2 / (1.0 + u);
      }

      Eigen::LLT<MatrixXd> llt(hess);
      const VectorXd step = llt.info() == Eigen::Success ? VectorXd(llt.solve(-grad))
                                                         : VectorXd(hess.ldlt().solve(-grad));
      const double decrement2 = -grad.dot(step);
      ++newton_steps;
      rep.dual_residual = std::sqrt(std::max(decrement2, 0.0));
      if (!(decrement2 > 0.0) || !std::isfinite(decrement2)) {
        stalled = true;
        break;
      }
      if (decrement2 < 1e-9) {
        centered = true;
        break;
      }

      for (int k = 0; k < l; ++k) dp[k] = Complex{step[k], step[l + k]};
      grid.adjoint(dp, dg);
      dot_pp = x.squaredNorm();
      re_c_dp = 0.0;
      re_p_dp = 0.0;
      dp2 = 0.0;
      for (int k = 0; k < l; ++k) {
        re_c_dp += (std::conj(c[k]) * dp[k]).real();
        re_p_dp += (std::conj(p[k]) * dp[k]).real();
        dp2 += std::norm(dp[k]);
      }
      double t = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
        if (barrier_change(t, tau) <= -0.01 * t * decrement2) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        stalled = true;
        break;
      }
      for (int k = 0; k < l; ++k) p[k] += t * dp[k];
      for (int i = 0; i < n; ++i) g[i] += t * dg[i];
      if (newton_steps % 16 == 0) grid.adjoint(p, g);
    }

    grid.adjoint(p, g);
    bool feasible = true;
    for (const auto& v : g) {
      if (!(std::norm(v) < 1.0)) feasible = false;
    }
    if (feasible) {
      candidate.resize(n);
      for (int i = 0; i < n; ++i) {
        candidate[i] = (2.0 / tau) * g[i] / (1.0 - std::norm(g[i]));
      }
      const double excess = project_to_ball(grid, c, eps, candidate) - eps;
      rep.primal_residual = std::max(0.0, excess) / scale;
      best_dual = std::max(best_dual, -penalty(p));
      const double objective = norm1(candidate);
      const double gap = std::max(0.0, objective - best_dual);
      if (objective < rep.objective || b.empty()) {
        b.swap(candidate);
        rep.objective = objective;
      }
      if (gap < 1e-3 * std::max(objective, scale) && purify(grid, c, eps, p, g, tau, candidate)) {
        const double pure_objective = norm1(candidate);
        if (pure_objective < rep.objective) {
          b.swap(candidate);
          rep.objective = pure_objective;
        }
      }
      best_gap = std::max(0.0, rep.objective - best_dual);
      rep.duality_gap = best_gap;
      if (opt.record_trace) {
        rep.trace.push_back({newton_steps, rep.primal_residual, rep.dual_residual,
                             rep.objective, best_gap});
      }
      if (best_gap <= opt.tolerance * std::max(rep.objective, scale)) {
        rep.converged = true;
        break;
      }
    }
    if (!centered) {
      // 50 damped steps without centering: rounding has taken over
      stalled = stalled || newton_steps < opt.max_iterations;
      break;
    }
    tau *= growth;
  }
  rep.iterations = newton_steps;
  if (!rep.converged && stalled &&
      best_gap <= opt.reduced_tolerance * std::max(rep.objective, scale)) {
    rep.converged = true;
    rep.reduced_accuracy = true;
  }
  if (b.size() != static_cast<std::size_t>(n)) {
    b.assign(n, Complex{0.0, 0.0});
    project_to_ball(grid, c, eps, b);
    rep.objective = norm1(b);
    rep.duality_gap = std::numeric_limits<double>::infinity();
  }
}

}  // namespace qsr::detail
