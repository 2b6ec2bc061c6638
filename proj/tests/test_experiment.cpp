#include <catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <sstream>

#include "qsr/errors.hpp"
#include "qsr/experiment.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

qsr::TrialRecord record(int lambda, int K, qsr::Method method, double err) {
  qsr::TrialRecord r;
  r.lambda = lambda;
  r.K = K;
  r.method = method;
  r.err_max_amp = err;
  return r;
}

qsr::ExperimentConfig small_config() {
  std::istringstream in(
      "trials = 3\n"
      "lambda_list = 1, 2\n"
      "K_list = 2, 3\n"
      "grid_factor = 16\n"
      "seed = 12345\n");
  return qsr::parse_config(in);
}

}  // namespace

TEST_CASE("default configuration") {
  const qsr::ExperimentConfig c;
  CHECK(c.block_length() == 41);
  CHECK(c.max_spike_count() == 5);
  CHECK(c.trials == 110);
  CHECK(c.delta_min == 0.1);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("parse_config") {
  std::istringstream in(
      "# sweep\n"
      "delta_min = 0.05   # tighter\n"
      "m = 90\n"
      "lambda_list = 1,3, 5\n"
      "K_list = 2\n"
      "trials = 7\n"
      "alpha = 2\n"
      "seed = 99\n"
      "solver = douglas_rachford\n"
      "tolerance = 1e-7\n"
      "amplitude_mode = real\n"
      "S_mode = fixed\n"
      "S = 4\n"
      "C1 = 2.5\n"
      "\n");
  const auto c = qsr::parse_config(in);
  CHECK(c.delta_min == 0.05);
  CHECK(c.block_length() == 90);
  CHECK(c.lambda_list == std::vector<int>{1, 3, 5});
  CHECK(c.K_list == std::vector<int>{2});
  CHECK(c.trials == 7);
  CHECK(c.alpha == 2.0);
  CHECK(c.seed == 99);
  CHECK(c.solver.method == qsr::SolverMethod::douglas_rachford);
  CHECK(c.solver.tolerance == 1e-7);
  CHECK(c.amplitude_mode == qsr::AmplitudeMode::real);
  CHECK(c.spike_count_mode == qsr::SpikeCountMode::fixed);
  CHECK(c.spike_count == 4);
  CHECK(c.constants.C1 == 2.5);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("parse_config rejects bad input") {
  for (const char* text : {"bogus = 1\n", "trials = many\n", "lambda_list = 1,x\n",
                           "solver = simplex\n", "no equals sign\n"}) {
    std::istringstream in(text);
    CHECK_THROWS_AS(qsr::parse_config(in), qsr::ParameterError);
  }
  CHECK_THROWS_AS(qsr::load_config("/nonexistent/qsr.cfg"), qsr::ParameterError);
}

TEST_CASE("validate") {
  qsr::ExperimentConfig c;
  c.m = 30;
  CHECK_THROWS_AS(c.validate(), qsr::ParameterError);
  c.m = 41;
  CHECK_NOTHROW(c.validate());
  c.trials = 0;
  CHECK_THROWS_AS(c.validate(), qsr::ParameterError);
  c.trials = 1;
  c.K_list = {1};
  CHECK_THROWS_AS(c.validate(), qsr::ParameterError);
  c.K_list = {2};
  c.solver.barrier_growth = 1.0;
  CHECK_THROWS_AS(c.validate(), qsr::ParameterError);
}

TEST_CASE("method names") {
  CHECK(std::string(qsr::method_name(qsr::Method::msq)) == "msq");
  CHECK(qsr::parse_method("beta") == qsr::Method::beta);
  CHECK_THROWS_AS(qsr::parse_method("sigma"), qsr::ParameterError);
}

TEST_CASE("summarize examples") {
  const auto one = qsr::summarize({record(2, 3, qsr::Method::beta, 0.25)});
  REQUIRE(one.size() == 1);
  CHECK(one[0].mean == 0.25);
  CHECK(one[0].median == 0.25);
  CHECK(one[0].count == 1);

  const auto three = qsr::summarize({record(1, 2, qsr::Method::msq, 0.1),
                                     record(1, 2, qsr::Method::msq, 0.2),
                                     record(1, 2, qsr::Method::msq, 0.6)});
  REQUIRE(three.size() == 1);
  CHECK_THAT(three[0].mean, WithinAbs(0.3, 1e-15));
  CHECK_THAT(three[0].median, WithinAbs(0.2, 1e-15));
  CHECK_THAT(three[0].stddev, WithinAbs(std::sqrt((0.04 + 0.01 + 0.09) / 2), 1e-15));

  const auto outlier = qsr::summarize({record(1, 2, qsr::Method::msq, 0.1),
                                       record(1, 2, qsr::Method::msq, 0.2),
                                       record(1, 2, qsr::Method::msq, 600.0)});
  CHECK_THAT(outlier[0].median, WithinAbs(0.2, 1e-15));

  auto bad = record(1, 2, qsr::Method::msq, 99.0);
  bad.aborted = true;
  const auto with_abort = qsr::summarize({record(1, 2, qsr::Method::msq, 0.4), bad});
  CHECK(with_abort[0].count == 1);
  CHECK(with_abort[0].aborted == 1);
  CHECK(with_abort[0].mean == 0.4);
}

TEST_CASE("summarize groups by lambda, K and method") {
  const auto rows = qsr::summarize({record(2, 2, qsr::Method::beta, 1.0),
                                    record(1, 2, qsr::Method::beta, 2.0),
                                    record(1, 2, qsr::Method::msq, 3.0),
                                    record(1, 3, qsr::Method::beta, 4.0)});
  REQUIRE(rows.size() == 4);
  std::set<std::tuple<int, int, int>> keys;
  for (const auto& r : rows) keys.insert({r.lambda, r.K, static_cast<int>(r.method)});
  CHECK(keys.size() == 4);
}

TEST_CASE("results csv round trip") {
  auto a = record(3, 4, qsr::Method::beta, 0.123456789012345678);
  a.trial = 5;
  a.seed = 0xfedcba9876543210ULL;
  a.S = 2;
  a.M = 123;
  a.err_sum_amp = 0.2;
  a.err_loc_weighted = 1e-7;
  a.err_spurious = 3e-3;
  a.envelope = 44.0;
  a.solver_iters = 81;
  a.wall_ms = 12.5;
  auto b = record(1, 2, qsr::Method::msq, 0.5);
  b.aborted = true;
  b.abort_reason = "solver, stalled";

  std::stringstream ss;
  qsr::write_results_csv(ss, {a, b});
  std::string header;
  std::getline(ss, header);
  CHECK(header == qsr::kCsvHeader);
  CHECK(header == "trial,seed,S,lambda,K,M,method,err_max_amp,err_sum_amp,err_loc_weighted,"
                  "err_spurious,envelope,solver_iters,wall_ms");
  ss.seekg(0);
  const auto back = qsr::read_results_csv(ss);
  REQUIRE(back.size() == 1);
  CHECK(back[0].trial == 5);
  CHECK(back[0].seed == a.seed);
  CHECK(back[0].S == 2);
  CHECK(back[0].M == 123);
  CHECK(back[0].method == qsr::Method::beta);
  CHECK(back[0].err_max_amp == a.err_max_amp);
  CHECK(back[0].err_loc_weighted == a.err_loc_weighted);
  CHECK(back[0].solver_iters == 81);
  CHECK(back[0].wall_ms == 12.5);

  std::stringstream ab;
  qsr::write_aborts_csv(ab, {a, b});
  const auto aborts = qsr::read_aborts_csv(ab);
  REQUIRE(aborts.size() == 1);
  CHECK(aborts[0].aborted);
  CHECK(aborts[0].lambda == 1);
  CHECK(aborts[0].abort_reason == "solver; stalled");
}

TEST_CASE("trial measures are reproducible and shared across methods") {
  const auto c = small_config();
  const auto mu = qsr::trial_measure(c, 2);
  const auto again = qsr::trial_measure(c, 2);
  REQUIRE(mu.size() == again.size());
  for (std::size_t j = 0; j < mu.size(); ++j) CHECK(mu[j].location == again[j].location);
  CHECK(qsr::trial_seed(c.seed, 0) != qsr::trial_seed(c.seed, 1));
  CHECK(qsr::trial_seed(c.seed, 0) != qsr::trial_seed(c.seed + 1, 0));

  const auto records = qsr::run_experiment(c);
  CHECK(records.size() == 3u * 2 * 2 * 2);
  for (const auto& r : records) {
    CHECK_FALSE(r.aborted);
    CHECK(r.seed == qsr::trial_seed(c.seed, r.trial));
    CHECK(r.S == static_cast<int>(qsr::trial_measure(c, r.trial).size()));
    CHECK(r.M == 41 * r.lambda);
  }
}

TEST_CASE("run_experiment is deterministic across worker counts") {
  auto c = small_config();
  c.workers = 1;
  const auto serial = qsr::run_experiment(c);
  c.workers = 3;
  const auto parallel = qsr::run_experiment(c);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].trial == parallel[i].trial);
    CHECK(serial[i].lambda == parallel[i].lambda);
    CHECK(serial[i].K == parallel[i].K);
    CHECK(serial[i].method == parallel[i].method);
    CHECK(serial[i].err_max_amp == parallel[i].err_max_amp);
    CHECK(serial[i].err_spurious == parallel[i].err_spurious);
    CHECK(serial[i].solver_iters == parallel[i].solver_iters);
  }
}

TEST_CASE("a very fine alphabet gives near noiseless recovery") {
  std::istringstream in(
      "trials = 1\n"
      "lambda_list = 1\n"
      "K_list = 16384\n"
      "seed = 3\n");
  const auto records = qsr::run_experiment(qsr::parse_config(in));
  REQUIRE(records.size() == 2);
  for (const auto& r : records) {
    CHECK_FALSE(r.aborted);
    CHECK(r.err_max_amp < 1e-3);
  }
}

TEST_CASE("plot output") {
  const auto rows = qsr::summarize({record(1, 2, qsr::Method::beta, 0.5),
                                    record(2, 2, qsr::Method::beta, 0.1),
                                    record(1, 2, qsr::Method::msq, 0.5),
                                    record(2, 2, qsr::Method::msq, 0.5)});
  std::ostringstream svg;
  qsr::write_plot_svg(svg, rows);
  const std::string s = svg.str();
  CHECK(s.find("<svg") != std::string::npos);
  CHECK(s.find("</svg>") != std::string::npos);
  CHECK(s.find("K=2") != std::string::npos);

  std::ostringstream csv;
  qsr::write_summary_csv(csv, rows);
  CHECK(csv.str().find("lambda") != std::string::npos);
}
