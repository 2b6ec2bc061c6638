#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

#include "qsr/errors.hpp"
#include "qsr/experiment.hpp"

namespace qsr {

const char* const kCsvHeader =
    "trial,seed,S,lambda,K,M,method,err_max_amp,err_sum_amp,err_loc_weighted,"
    "err_spurious,envelope,solver_iters,wall_ms";

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void write_identity(std::ostream& out, const TrialRecord& r) {
  out << r.trial << ',' << r.seed << ',' << r.S << ',' << r.lambda << ',' << r.K
      << ',' << r.M << ',' << method_name(r.method);
}

void read_identity(const std::vector<std::string>& f, TrialRecord& r) {
  r.trial = std::stoi(f[0]);
  r.seed = std::stoull(f[1]);
  r.S = std::stoi(f[2]);
  r.lambda = std::stoi(f[3]);
  r.K = std::stoi(f[4]);
  r.M = std::stoi(f[5]);
  r.method = parse_method(f[6]);
}

template <typename RowParser>
std::vector<TrialRecord> read_rows(std::istream& in, std::size_t columns,
                                   RowParser parse) {
  std::vector<TrialRecord> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != columns) {
      throw ParameterError("csv: expected " + std::to_string(columns) +
                           " columns in '" + line + "'");
    }
    TrialRecord r;
    try {
      read_identity(fields, r);
      parse(fields, r);
    } catch (const std::logic_error&) {
      throw ParameterError("csv: malformed row '" + line + "'");
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    if (r.aborted) continue;
    write_identity(out, r);
    out << ',' << fmt_double(r.err_max_amp) << ',' << fmt_double(r.err_sum_amp)
        << ',' << fmt_double(r.err_loc_weighted) << ','
        << fmt_double(r.err_spurious) << ',' << fmt_double(r.envelope) << ','
        << r.solver_iters << ',' << fmt_double(r.wall_ms) << '\n';
  }
}

void write_aborts_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << "trial,seed,S,lambda,K,M,method,solver_iters,reason\n";
  for (const auto& r : records) {
    if (!r.aborted) continue;
    std::string reason = r.abort_reason;
    std::replace(reason.begin(), reason.end(), ',', ';');
    std::replace(reason.begin(), reason.end(), '\n', ' ');
    write_identity(out, r);
    out << ',' << r.solver_iters << ',' << reason << '\n';
  }
}

std::vector<TrialRecord> read_results_csv(std::istream& in) {
  return read_rows(in, 14, [](const std::vector<std::string>& f, TrialRecord& r) {
    r.err_max_amp = std::stod(f[7]);
    r.err_sum_amp = std::stod(f[8]);
    r.err_loc_weighted = std::stod(f[9]);
    r.err_spurious = std::stod(f[10]);
    r.envelope = std::stod(f[11]);
    r.solver_iters = std::stoi(f[12]);
    r.wall_ms = std::stod(f[13]);
  });
}

std::vector<TrialRecord> read_aborts_csv(std::istream& in) {
  return read_rows(in, 9, [](const std::vector<std::string>& f, TrialRecord& r) {
    r.solver_iters = std::stoi(f[7]);
    r.abort_reason = f[8];
    r.aborted = true;
  });
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  using Key = std::tuple<int, int, int>;
  std::map<Key, std::vector<double>> values;
  std::map<Key, int> aborted;
  for (const auto& r : records) {
    const Key key{r.lambda, r.K, static_cast<int>(r.method)};
    if (r.aborted) {
      ++aborted[key];
      values[key];
    } else {
      values[key].push_back(r.err_max_amp);
    }
  }

  std::vector<SummaryRow> rows;
  for (auto& [key, v] : values) {
    SummaryRow row;
    row.lambda = std::get<0>(key);
    row.K = std::get<1>(key);
    row.method = static_cast<Method>(std::get<2>(key));
    row.count = static_cast<int>(v.size());
    row.aborted = aborted.count(key) ? aborted[key] : 0;
    if (!v.empty()) {
      double sum = 0.0;
      for (double x : v) sum += x;
      row.mean = sum / v.size();
      double ss = 0.0;
      for (double x : v) ss += (x - row.mean) * (x - row.mean);
      row.stddev = v.size() > 1 ? std::sqrt(ss / (v.size() - 1)) : 0.0;
      std::sort(v.begin(), v.end());
      const std::size_t h = v.size() / 2;
      row.median = v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
    } else {
      row.mean = row.median = row.stddev = std::nan("");
    }
    rows.push_back(row);
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "lambda,K,method,count,aborted,mean,median,std\n";
  for (const auto& r : rows) {
    out << r.lambda << ',' << r.K << ',' << method_name(r.method) << ','
        << r.count << ',' << r.aborted << ',' << fmt_double(r.mean) << ','
        << fmt_double(r.median) << ',' << fmt_double(r.stddev) << '\n';
  }
}

void write_plot_svg(std::ostream& out, const std::vector<SummaryRow>& rows) {
  constexpr double width = 720, height = 480;
  constexpr double left = 70, right = 170, top = 30, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  int lmin = 0, lmax = 0;
  double ymin = 0.0, ymax = 0.0;
  bool any = false;
  std::map<std::pair<int, int>, std::vector<std::pair<int, double>>> series;
  for (const auto& r : rows) {
    if (!(r.mean > 0.0) || !std::isfinite(r.mean)) continue;
    series[{r.K, static_cast<int>(r.method)}].emplace_back(r.lambda, r.mean);
    if (!any) {
      lmin = lmax = r.lambda;
      ymin = ymax = r.mean;
      any = true;
    }
    lmin = std::min(lmin, r.lambda);
    lmax = std::max(lmax, r.lambda);
    ymin = std::min(ymin, r.mean);
    ymax = std::max(ymax, r.mean);
  }

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!any) {
    out << "<text x=\"" << width / 2 << "\" y=\"" << height / 2
        << "\" text-anchor=\"middle\">no data</text>\n</svg>\n";
    return;
  }
  const double dec_lo = std::floor(std::log10(ymin));
  const double dec_hi = std::max(dec_lo + 1.0, std::ceil(std::log10(ymax)));
  const double lspan = std::max(1, lmax - lmin);
  auto px = [&](double l) { return left + (l - lmin) / lspan * plot_w; };
  auto py = [&](double y) {
    return top + (dec_hi - std::log10(y)) / (dec_hi - dec_lo) * plot_h;
  };

  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(dec_lo); d <= static_cast<int>(dec_hi); ++d) {
    const double y = py(std::pow(10.0, d));
    out << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << y << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  for (int l = lmin; l <= lmax; ++l) {
    out << "<text x=\"" << px(l) << "\" y=\"" << top + plot_h + 18
        << "\" text-anchor=\"middle\">" << l << "</text>\n";
  }
  out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">oversampling ratio lambda</text>\n";
  out << "<text transform=\"translate(16," << top + plot_h / 2
      << ") rotate(-90)\" text-anchor=\"middle\">mean max amplitude error</text>\n";

  static const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                        "#9467bd", "#ff7f0e", "#8c564b"};
  int idx = 0;
  for (auto& [key, pts] : series) {
    std::sort(pts.begin(), pts.end());
    const char* color = palette[(key.first) % 6];
    const bool dashed = key.second == static_cast<int>(Method::msq);
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\""
        << (dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
    for (const auto& [l, y] : pts) out << px(l) << ',' << py(y) << ' ';
    out << "\"/>\n";
    for (const auto& [l, y] : pts) {
      out << "<circle cx=\"" << px(l) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\""
          << color << "\"/>\n";
    }
    const double ly = top + 16 + 18 * idx++;
    out << "<line x1=\"" << left + plot_w + 12 << "\" y1=\"" << ly << "\" x2=\""
        << left + plot_w + 40 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"" << (dashed ? " stroke-dasharray=\"6,4\"" : "")
        << "/>\n";
    out << "<text x=\"" << left + plot_w + 46 << "\" y=\"" << ly + 4 << "\">"
        << method_name(static_cast<Method>(key.second)) << ", K=" << key.first
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace qsr
