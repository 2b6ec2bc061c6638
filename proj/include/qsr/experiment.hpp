#pragma once

// Monte-Carlo comparison of MSQ and beta-quantization across oversampling
// ratios and alphabet sizes.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qsr/decode.hpp"
#include "qsr/measures.hpp"
#include "qsr/metrics.hpp"

namespace qsr {

enum class SpikeCountMode { fixed, random };

struct ExperimentConfig {
  double delta_min = 0.1;
  /// 0 selects the smallest m with m - 1 >= 4 / delta_min.
  int m = 0;
  std::vector<int> lambda_list{1, 2, 3, 4, 5, 6};
  std::vector<int> K_list{2, 3, 4};
  int trials = 110;
  double alpha = 1.0;
  std::uint64_t seed = 1;
  int grid_factor = 64;
  SolverOptions solver;
  AmplitudeMode amplitude_mode = AmplitudeMode::complex;
  SpikeCountMode spike_count_mode = SpikeCountMode::random;
  /// Spike count in fixed mode.
  int spike_count = 3;
  RecoveryConstants constants;
  /// 0 uses std::thread::hardware_concurrency().
  int workers = 0;

  /// m with the default resolved.
  int block_length() const;
  /// Largest spike count drawn in random mode: floor(1 / (2 delta_min)).
  int max_spike_count() const;
  /// Throws ParameterError on an inconsistent configuration.
  void validate() const;
};

/// Flat `key = value` text; `#` starts a comment; lists are comma separated.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

enum class Method { msq, beta };
const char* method_name(Method method);
Method parse_method(const std::string& name);

struct TrialRecord {
  int trial = 0;
  /// Seed that regenerates this trial's measure via random_measure.
  std::uint64_t seed = 0;
  int S = 0;
  int lambda = 0;
  int K = 0;
  int M = 0;
  Method method = Method::msq;
  double err_max_amp = 0.0;
  double err_sum_amp = 0.0;
  double err_loc_weighted = 0.0;
  double err_spurious = 0.0;
  double envelope = 0.0;
  int solver_iters = 0;
  double wall_ms = 0.0;
  bool aborted = false;
  std::string abort_reason;
};

/// Seed for trial `trial` derived from the base seed. Independent of how
/// trials are scheduled onto workers.
std::uint64_t trial_seed(std::uint64_t base_seed, int trial);

/// Draw the trial's measure exactly as run_experiment does.
AtomicMeasure trial_measure(const ExperimentConfig& config, int trial);

/// Run both pipelines for one measure at one (lambda, K).
TrialRecord run_single(const ExperimentConfig& config, const AtomicMeasure& mu,
                       int lambda, int K, Method method);

/// Records ordered by (trial, lambda, K, method). Decoder failures are kept
/// as aborted records rather than propagated.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& config);

struct SummaryRow {
  int lambda = 0;
  int K = 0;
  Method method = Method::msq;
  int count = 0;
  int aborted = 0;
  double mean = 0.0;
  double median = 0.0;
  double stddev = 0.0;
};

/// Statistics of err_max_amp per (lambda, K, method). Aborted records are
/// counted but excluded from the statistics.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

/// Column order of the results file.
extern const char* const kCsvHeader;

/// Completed records only; aborted ones go through write_aborts_csv.
void write_results_csv(std::ostream& out,
                       const std::vector<TrialRecord>& records);
/// Commas in abort reasons are written as ';' so the file needs no quoting.
void write_aborts_csv(std::ostream& out,
                      const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_results_csv(std::istream& in);
std::vector<TrialRecord> read_aborts_csv(std::istream& in);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

/// Mean err_max_amp versus lambda, one series per (K, method), log y-axis.
void write_plot_svg(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace qsr
