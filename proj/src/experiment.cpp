#include "qsr/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <random>
#include <sstream>
#include <thread>

#include "qsr/errors.hpp"
#include "qsr/quantize.hpp"
#include "qsr/sampling.hpp"

namespace qsr {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::istringstream items(value);
  std::string item;
  while (std::getline(items, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ParameterError("config: bad integer '" + item + "' in " + key);
    }
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  if (!(in >> out) || !(in >> std::ws).eof()) {
    throw ParameterError("config: bad value '" + value + "' for " + key);
  }
  return out;
}

}  // namespace

int ExperimentConfig::block_length() const {
  if (m > 0) return m;
  // smallest m with m - 1 >= 4 / delta_min; the slack absorbs 4/0.1 rounding
  return static_cast<int>(std::ceil(4.0 / delta_min - 1e-9)) + 1;
}

int ExperimentConfig::max_spike_count() const {
  return std::max(1, static_cast<int>(std::floor(1.0 / (2.0 * delta_min) + 1e-9)));
}

void ExperimentConfig::validate() const {
  if (!(delta_min > 0.0 && delta_min < 0.5)) {
    throw ParameterError("config: delta_min must be in (0, 1/2)");
  }
  if (m < 0) throw ParameterError("config: m must be >= 0");
  if ((block_length() - 1) * delta_min < 4.0 - 1e-9) {
    throw ParameterError("config: m - 1 must be >= 4 / delta_min");
  }
  if (trials < 1) throw ParameterError("config: trials must be >= 1");
  if (lambda_list.empty() || K_list.empty()) {
    throw ParameterError("config: lambda_list and K_list must be non-empty");
  }
  for (int l : lambda_list) {
    if (l < 1) throw ParameterError("config: lambda values must be >= 1");
  }
  for (int k : K_list) {
    if (k < 2) throw ParameterError("config: K values must be >= 2");
  }
  if (!(alpha > 0.0)) throw ParameterError("config: alpha must be > 0");
  if (grid_factor < 4) throw ParameterError("config: grid_factor must be >= 4");
  if (spike_count_mode == SpikeCountMode::fixed &&
      (spike_count < 1 || spike_count * delta_min >= 1.0)) {
    throw ParameterError("config: fixed spike count infeasible for delta_min");
  }
  if (workers < 0) throw ParameterError("config: workers must be >= 0");
  qsr::validate(solver);
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("config line " + std::to_string(line_no) +
                           ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "delta_min") c.delta_min = parse_number<double>(key, value);
    else if (key == "m") c.m = parse_number<int>(key, value);
    else if (key == "lambda_list") c.lambda_list = parse_int_list(key, value);
    else if (key == "K_list") c.K_list = parse_int_list(key, value);
    else if (key == "trials") c.trials = parse_number<int>(key, value);
    else if (key == "alpha") c.alpha = parse_number<double>(key, value);
    else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "grid_factor") c.grid_factor = parse_number<int>(key, value);
    else if (key == "max_iterations") c.solver.max_iterations = parse_number<int>(key, value);
    else if (key == "tolerance") c.solver.tolerance = parse_number<double>(key, value);
    else if (key == "reduced_tolerance") c.solver.reduced_tolerance = parse_number<double>(key, value);
    else if (key == "barrier_growth") c.solver.barrier_growth = parse_number<double>(key, value);
    else if (key == "check_interval") c.solver.check_interval = parse_number<int>(key, value);
    else if (key == "step") c.solver.step = parse_number<double>(key, value);
    else if (key == "relaxation") c.solver.relaxation = parse_number<double>(key, value);
    else if (key == "pruning_floor") c.solver.pruning_floor = parse_number<double>(key, value);
    else if (key == "solver") {
      if (value == "interior_point") c.solver.method = SolverMethod::interior_point;
      else if (value == "douglas_rachford") c.solver.method = SolverMethod::douglas_rachford;
      else throw ParameterError("config: solver must be interior_point or douglas_rachford");
    } else if (key == "amplitude_mode") {
      if (value == "real") c.amplitude_mode = AmplitudeMode::real;
      else if (value == "complex") c.amplitude_mode = AmplitudeMode::complex;
      else throw ParameterError("config: amplitude_mode must be real or complex");
    } else if (key == "S_mode") {
      if (value == "fixed") c.spike_count_mode = SpikeCountMode::fixed;
      else if (value == "random") c.spike_count_mode = SpikeCountMode::random;
      else throw ParameterError("config: S_mode must be fixed or random");
    } else if (key == "S") c.spike_count = parse_number<int>(key, value);
    else if (key == "C1") c.constants.C1 = parse_number<double>(key, value);
    else if (key == "C2") c.constants.C2 = parse_number<double>(key, value);
    else if (key == "C3") c.constants.C3 = parse_number<double>(key, value);
    else if (key == "workers") c.workers = parse_number<int>(key, value);
    else throw ParameterError("config: unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config file " + path);
  return parse_config(in);
}

const char* method_name(Method method) {
  return method == Method::msq ? "msq" : "beta";
}

Method parse_method(const std::string& name) {
  if (name == "msq") return Method::msq;
  if (name == "beta") return Method::beta;
  throw ParameterError("unknown method '" + name + "'");
}

std::uint64_t trial_seed(std::uint64_t base_seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(base_seed),
                    static_cast<std::uint32_t>(base_seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

AtomicMeasure trial_measure(const ExperimentConfig& config, int trial) {
  const std::uint64_t seed = trial_seed(config.seed, trial);
  int s = config.spike_count;
  if (config.spike_count_mode == SpikeCountMode::random) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    s = std::uniform_int_distribution<int>(1, config.max_spike_count())(rng);
  }
  return random_measure(s, config.delta_min, seed, {config.amplitude_mode});
}

TrialRecord run_single(const ExperimentConfig& config, const AtomicMeasure& mu,
                       int lambda, int K, Method method) {
  const int m = config.block_length();
  TrialRecord r;
  r.S = static_cast<int>(mu.size());
  r.lambda = lambda;
  r.K = K;
  r.M = m * lambda;
  r.method = method;

  const auto start = std::chrono::steady_clock::now();
  try {
    const MeasurementVector y = fourier_sample(mu, r.M);
    RecoveredMeasure rec;
    int n_cluster = m;
    if (method == Method::msq) {
      const QuantizationResult q = msq(y, K, config.alpha);
      rec = decode_msq(q.q, K, config.alpha, config.grid_factor, config.solver);
      n_cluster = r.M;
      r.envelope = config.constants.C1 * std::sqrt(2.0 * r.M) * config.alpha / K;
    } else {
      const QuantizerConfig qc = select_parameters(K, lambda, config.alpha, m);
      const QuantizationResult q = beta_quantize(y, qc);
      rec = decode_beta(q.q, qc, config.grid_factor, config.solver);
      r.envelope = theoretical_envelope(qc, config.constants).amplitude_bound;
    }
    r.solver_iters = rec.report.iterations;
    const SpikeClusters clusters = cluster_spikes(mu, rec.measure, n_cluster);
    const ErrorReport e = error_report(mu, rec.measure, clusters);
    r.err_max_amp = e.max_amplitude_error();
    r.err_sum_amp = e.sum_amplitude_error();
    r.err_loc_weighted = e.max_location_error();
    r.err_spurious = e.spurious_mass;
  } catch (const ConvergenceError& ex) {
    r.aborted = true;
    r.solver_iters = ex.iterations();
    r.abort_reason = ex.what();
  } catch (const std::exception& ex) {
    r.aborted = true;
    r.abort_reason = ex.what();
  }
  r.wall_ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - start)
                  .count();
  return r;
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const int trials = config.trials;
  std::vector<std::vector<TrialRecord>> per_trial(trials);

  auto run_trial = [&](int t) {
    const std::uint64_t seed = trial_seed(config.seed, t);
    std::vector<TrialRecord>& out = per_trial[t];
    AtomicMeasure mu;
    try {
      mu = trial_measure(config, t);
    } catch (const std::exception& ex) {
      for (int lambda : config.lambda_list) {
        for (int K : config.K_list) {
          for (Method method : {Method::msq, Method::beta}) {
            TrialRecord r;
            r.trial = t;
            r.seed = seed;
            r.lambda = lambda;
            r.K = K;
            r.M = config.block_length() * lambda;
            r.method = method;
            r.aborted = true;
            r.abort_reason = ex.what();
            out.push_back(r);
          }
        }
      }
      return;
    }
    for (int lambda : config.lambda_list) {
      for (int K : config.K_list) {
        for (Method method : {Method::msq, Method::beta}) {
          TrialRecord r = run_single(config, mu, lambda, K, method);
          r.trial = t;
          r.seed = seed;
          out.push_back(std::move(r));
        }
      }
    }
  };

  int workers = config.workers > 0
                    ? config.workers
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, trials);
  if (workers <= 1) {
    for (int t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int t = next++; t < trials; t = next++) run_trial(t);
      });
    }
  }

  std::vector<TrialRecord> records;
  for (auto& block : per_trial) {
    std::move(block.begin(), block.end(), std::back_inserter(records));
  }
  return records;
}

}  // namespace qsr
