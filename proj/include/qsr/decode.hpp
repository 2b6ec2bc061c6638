#pragma once

// Grid-discretized TV minimization
//
//   minimize ||b||_1  subject to  ||F b - c||_2 <= eps
//
// over complex amplitudes b on the uniform grid {n/N}, followed by spike
// extraction and, for condensed data, division by the block weights.

#include <optional>
#include <vector>

#include "qsr/measures.hpp"
#include "qsr/quantize.hpp"
#include "qsr/sampling.hpp"

namespace qsr {

/// Neighborhood radius 2 * 0.1649 / (n - 1) used both to merge grid mass
/// into spikes and to cluster recovered spikes against the truth.
double neighborhood_radius(int n_measurements);

/// Smallest n >= target whose prime factors are all in {2, 3, 5, 7}.
int fft_friendly_size(int target);

enum class SolverMethod {
  /// Log-barrier Newton path following on the dual; iterations are Newton
  /// steps.
  interior_point,
  /// Douglas-Rachford splitting between the l1 prox and the exact
  /// projection onto the fidelity ball.
  douglas_rachford,
};

struct SolverOptions {
  SolverMethod method = SolverMethod::interior_point;
  int max_iterations = 50000;
  /// Stop once the certified duality gap falls below
  /// tolerance * max(||b||_1, data scale).
  double tolerance = 1e-8;
  /// Interior point only: when rounding stops progress first, a gap below
  /// reduced_tolerance * max(||b||_1, data scale) is still accepted and
  /// flagged in SolverReport::reduced_accuracy.
  double reduced_tolerance = 1e-5;
  /// Barrier parameter multiplier between centerings (interior point).
  double barrier_growth = 10.0;
  /// Douglas-Rachford: iterations between duality-gap evaluations.
  int check_interval = 10;
  /// Douglas-Rachford: l1 prox threshold as a fraction of the data scale
  /// ||c||_2 / sqrt(L).
  double step = 1.0;
  /// Douglas-Rachford relaxation in (0, 2).
  double relaxation = 1.8;
  /// Grid amplitudes below floor * max|b| are discarded before merging.
  double pruning_floor = 1e-6;
  /// Defaults to neighborhood_radius(L) when unset.
  std::optional<double> merge_radius;
  /// Store per-iteration residuals in SolverReport::trace.
  bool record_trace = false;
  /// When false, an unconverged iterate is returned with
  /// SolverReport::converged unset instead of throwing.
  bool throw_on_nonconvergence = true;
};

/// Throws ParameterError on out-of-range options.
void validate(const SolverOptions& options);

struct TvMinProblem {
  MeasurementVector measurements;
  double noise_bound = 0.0;
  int grid_size = 0;
  SolverOptions options;

  /// At least grid_factor * measurements.size() grid points, rounded up to
  /// the next size with no prime factor above 7 so the FFTs stay fast.
  static TvMinProblem with_grid_factor(MeasurementVector measurements,
                                       double noise_bound, int grid_factor,
                                       SolverOptions options = {});
};

struct TraceRow {
  int iteration;
  double primal_residual;
  double dual_residual;
  double objective;
  double duality_gap;
};

struct SolverReport {
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double objective = 0.0;
  /// Objective minus the best dual bound seen; an upper bound on the
  /// distance of `objective` from the optimum.
  double duality_gap = 0.0;
  double feasibility_residual = 0.0;
  bool converged = false;
  /// Converged only to reduced_tolerance (numerical floor reached).
  bool reduced_accuracy = false;
  std::vector<TraceRow> trace;
};

struct GridSolution {
  int grid_size = 0;
  std::vector<Complex> amplitudes;
  SolverReport report;
};

struct RecoveredMeasure {
  AtomicMeasure measure;
  /// l1 norm of the grid solution.
  double objective_value = 0.0;
  /// ||F b - c||_2 of the grid solution (before merging moves spikes off grid).
  double feasibility_residual = 0.0;
  SolverReport report;
};

/// Both methods use F F^* = N I: FFTs apply F and F^*, and projecting onto
/// the fidelity ball is closed form. The returned amplitudes are projected
/// onto the ball, so they are feasible to rounding error.
///
/// Throws ParameterError on a malformed problem and ConvergenceError if the
/// iteration cap is reached first (unless throw_on_nonconvergence is off).
GridSolution solve_grid(const TvMinProblem& problem);

/// Merge grid mass into spikes: repeatedly take the largest remaining
/// amplitude and absorb every remaining point within merge_radius of it.
/// Merged amplitude is the complex sum; merged location is the
/// |amplitude|-weighted circular mean.
AtomicMeasure extract_spikes(const std::vector<Complex>& grid_amplitudes,
                             double merge_radius, double pruning_floor = 1e-6);

/// solve_grid followed by extract_spikes.
RecoveredMeasure tv_min(const TvMinProblem& problem);

/// TV-min on condensed data V q with an explicit noise radius, then
/// amplitude correction a_k = b_k / w(t_k).
RecoveredMeasure decode_condensed(const MeasurementVector& condensed,
                                  const CondensationPlan& plan,
                                  double noise_bound, int grid_factor = 64,
                                  const SolverOptions& options = {});

/// Full beta decoder: condense q, solve with eps_V, weight-correct.
RecoveredMeasure decode_beta(const MeasurementVector& q,
                             const QuantizerConfig& config,
                             int grid_factor = 64,
                             const SolverOptions& options = {});

/// MSQ decoder: TV-min on all M samples with eps = sqrt(2M) alpha / K.
RecoveredMeasure decode_msq(const MeasurementVector& q, int K,
                            double alpha = 1.0, int grid_factor = 64,
                            const SolverOptions& options = {});

}  // namespace qsr
