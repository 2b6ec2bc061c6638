#include "qsr/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "qsr/errors.hpp"

namespace qsr {

Alphabet::Alphabet(int K, double delta) : K_(K), delta_(delta) {
  if (K < 2) throw ParameterError("Alphabet: K must be >= 2");
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ParameterError("Alphabet: delta must be positive and finite");
  }
}

double Alphabet::level(int index) const noexcept {
  return delta_ * static_cast<double>(2 * index - K_ + 1);
}

std::vector<double> Alphabet::levels() const {
  std::vector<double> out(K_);
  for (int j = 0; j < K_; ++j) out[j] = level(j);
  return out;
}

int Alphabet::nearest_index(double x) const noexcept {
  // level(j) = x  <=>  j = (x/delta + K - 1) / 2
  const double position = 0.5 * (x / delta_ + (K_ - 1));
  // nearest integer, ties toward the lower index
  double j = std::ceil(position - 0.5);
  j = std::clamp(j, 0.0, static_cast<double>(K_ - 1));
  return static_cast<int>(j);
}

double round_to_alphabet(double x, const Alphabet& alphabet) {
  return alphabet.level(alphabet.nearest_index(x));
}

bool QuantizerConfig::feasible(double slack) const noexcept {
  if (K < 2 || lambda < 1 || m < 1) return false;
  if (!(alpha > 0.0) || !(delta > 0.0)) return false;
  if (!(beta > 1.0) || !(beta < K)) return false;
  return beta + alpha / delta <= K * (1.0 + slack);
}

void QuantizerConfig::validate() const {
  if (K < 2) throw ParameterError("QuantizerConfig: K must be >= 2");
  if (lambda < 1) throw ParameterError("QuantizerConfig: lambda must be >= 1");
  if (m < 1) throw ParameterError("QuantizerConfig: m must be >= 1");
  if (!(alpha > 0.0)) throw ParameterError("QuantizerConfig: alpha must be > 0");
  if (!(delta > 0.0)) throw ParameterError("QuantizerConfig: delta must be > 0");
  if (!(beta > 1.0) || !(beta < K)) {
    throw ParameterError("QuantizerConfig: need 1 < beta < K");
  }
  if (!feasible()) {
    throw ParameterError("QuantizerConfig: beta + alpha/delta exceeds K");
  }
}

double QuantizerConfig::c_beta() const noexcept {
  return (1.0 + 1.0 / beta) / (1.0 - 1.0 / beta);
}

double QuantizerConfig::condensed_error_bound() const noexcept {
  return std::sqrt(2.0 * m) * std::pow(beta, 1 - lambda) * delta;
}

QuantizerConfig select_parameters(int K, int lambda, double alpha, int m) {
  if (K < 2) throw ParameterError("select_parameters: K must be >= 2");
  if (lambda < 1) throw ParameterError("select_parameters: lambda must be >= 1");
  if (m < 1) throw ParameterError("select_parameters: m must be >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ParameterError("select_parameters: alpha must be positive");
  }
  QuantizerConfig c;
  c.K = K;
  c.lambda = lambda;
  c.m = m;
  c.alpha = alpha;
  c.beta = static_cast<double>(K) * (lambda + 1) / (lambda + 2);
  c.delta = (lambda + 2) * alpha / K;
  return c;
}

namespace {

double sup_norm(const MeasurementVector& y) {
  double n = 0.0;
  for (const auto& v : y) n = std::max(n, std::abs(v));
  return n;
}

Complex round_complex(Complex v, const Alphabet& a) {
  return {round_to_alphabet(v.real(), a), round_to_alphabet(v.imag(), a)};
}

}  // namespace

QuantizationResult msq(const MeasurementVector& y, int K, double alpha) {
  if (!(alpha > 0.0)) throw ParameterError("msq: alpha must be > 0");
  QuantizationResult r;
  r.kind = QuantizerKind::msq;
  r.alphabet = Alphabet(K, alpha / K);
  r.q.resize(y.size());
  r.u.resize(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) {
    r.q[k] = round_complex(y[k], r.alphabet);
    r.u[k] = y[k] - r.q[k];
  }
  return r;
}

QuantizationResult beta_quantize(const MeasurementVector& y,
                                 const QuantizerConfig& config) {
  config.validate();
  const int m = config.m;
  if (static_cast<int>(y.size()) != m * config.lambda) {
    throw DimensionError("beta_quantize: expected " +
                         std::to_string(m * config.lambda) + " entries, got " +
                         std::to_string(y.size()));
  }
  const double peak = sup_norm(y);
  if (peak > config.alpha * (1.0 + 1e-12)) {
    throw InputRangeError("beta_quantize: ||y||_inf = " + std::to_string(peak) +
                          " exceeds alpha = " + std::to_string(config.alpha));
  }

  QuantizationResult r;
  r.kind = QuantizerKind::beta;
  r.alphabet = config.alphabet();
  r.q.resize(y.size());
  r.u.resize(y.size());
  const double capture = r.alphabet.max_level() + r.alphabet.delta();
  const double guard = capture * (1.0 + 1e-12);
  for (std::size_t j = 0; j < y.size(); ++j) {
    Complex v = y[j];
    if (j >= static_cast<std::size_t>(m)) v += config.beta * r.u[j - m];
    if (std::abs(v.real()) > guard || std::abs(v.imag()) > guard) {
      throw InputRangeError("beta_quantize: recursion state left the alphabet's "
                            "capture range at index " + std::to_string(j));
    }
    r.q[j] = round_complex(v, r.alphabet);
    r.u[j] = v - r.q[j];
  }
  return r;
}

void write_level_indices(std::ostream& out, const QuantizationResult& result) {
  const auto old_precision = out.precision(17);
  out << "# K " << result.alphabet.K() << '\n';
  out << "# delta " << result.alphabet.delta() << '\n';
  out << "# kind " << (result.kind == QuantizerKind::beta ? "beta" : "msq")
      << '\n';
  for (std::size_t i = 0; i < result.q.size(); ++i) {
    out << i << ' ' << result.alphabet.nearest_index(result.q[i].real()) << ' '
        << result.alphabet.nearest_index(result.q[i].imag()) << '\n';
  }
  out.precision(old_precision);
}

QuantizationResult read_level_indices(std::istream& in) {
  int K = 0;
  double delta = 0.0;
  QuantizerKind kind = QuantizerKind::msq;
  std::vector<std::pair<int, int>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    if (line[0] == '#') {
      std::string hash, key, value;
      fields >> hash >> key >> value;
      if (key == "K") K = std::stoi(value);
      else if (key == "delta") delta = std::stod(value);
      else if (key == "kind") kind = value == "beta" ? QuantizerKind::beta : QuantizerKind::msq;
      continue;
    }
    std::size_t index = 0;
    int re = 0, im = 0;
    if (!(fields >> index >> re >> im) || index != rows.size()) {
      throw ParameterError("read_level_indices: malformed row '" + line + "'");
    }
    rows.emplace_back(re, im);
  }
  QuantizationResult r;
  r.kind = kind;
  r.alphabet = Alphabet(K, delta);
  for (const auto& [re, im] : rows) {
    if (re < 0 || re >= K || im < 0 || im >= K) {
      throw ParameterError("read_level_indices: level index out of range");
    }
    r.q.emplace_back(r.alphabet.level(re), r.alphabet.level(im));
  }
  return r;
}

}  // namespace qsr
