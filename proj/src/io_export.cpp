#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "lal/errors.hpp"
#include "lal/io.hpp"

namespace lal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string csv_escape_name(const std::string& name) {
  std::string out = name;
  for (char& c : out)
    if (c == ',' || c == '\n' || c == '\r') c = '_';
  return out;
}

// Pixel coordinate rounded to 1/100 so the SVG stays compact and byte-stable.
std::string px(double v) {
  const double r = std::round(v * 100.0) / 100.0;
  return format_double(r);
}

// Tick label: %g keeps decimal ticks like 3 * 0.2 printing as "0.6".
std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  double tick = 0.2;
};

// Tick step of the form {1,2,5} * 10^k covering range/target divisions.
double nice_step(double range, int target) {
  const double raw = range / static_cast<double>(target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  if (norm <= 1.0) return mag;
  if (norm <= 2.0) return 2.0 * mag;
  if (norm <= 5.0) return 5.0 * mag;
  return 10.0 * mag;
}

Axis limit_axis(const std::vector<std::pair<std::string, LalCurve>>& curves) {
  double lo = kInf;
  double hi = -kInf;
  for (const auto& [name, curve] : curves) {
    for (const auto& p : curve.breakpoints) {
      if (!std::isfinite(p.limit)) continue;
      lo = std::min(lo, p.limit);
      hi = std::max(hi, p.limit);
    }
    lo = std::min(lo, curve.mean_loss);
    hi = std::max(hi, curve.mean_loss);
  }
  if (!(lo <= hi)) {
    lo = 0.0;
    hi = 1.0;
  }
  if (lo == hi) {
    const double pad = std::max(1.0, std::abs(lo) * 0.1);
    lo -= pad;
    hi += pad;
  } else {
    const double pad = (hi - lo) * 0.05;
    lo -= pad;
    hi += pad;
  }
  Axis axis;
  axis.lo = lo;
  axis.hi = hi;
  axis.tick = nice_step(hi - lo, 5);
  return axis;
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                          "#d62728", "#9467bd", "#8c564b"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

}  // namespace

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

double parse_extended_real(const std::string& text) {
  if (text == "inf" || text == "+inf") return kInf;
  if (text == "-inf") return -kInf;
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() ||
      std::isnan(value))
    throw DataError("cannot parse real value '" + text + "'");
  return value;
}

void export_curve_csv(const LalCurve& curve, std::ostream& out) {
  out << "alpha,limit,k,exact_coverage\n";
  for (const auto& p : curve.breakpoints)
    out << format_double(p.alpha) << ',' << format_double(p.limit) << ','
        << p.k << ',' << format_double(1.0 - p.alpha) << '\n';
}

std::vector<CurvePoint> parse_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "alpha,limit,k,exact_coverage")
    throw DataError("line 1: expected header alpha,limit,k,exact_coverage");
  std::vector<CurvePoint> points;
  long long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string alpha_s, limit_s, k_s, cov_s;
    if (!std::getline(ss, alpha_s, ',') || !std::getline(ss, limit_s, ',') ||
        !std::getline(ss, k_s, ',') || !std::getline(ss, cov_s))
      throw DataError("line " + std::to_string(line_no) +
                      ": expected 4 cells");
    CurvePoint p;
    p.alpha = parse_extended_real(alpha_s);
    p.limit = parse_extended_real(limit_s);
    p.k = std::stoll(k_s);
    points.push_back(p);
  }
  return points;
}

void export_compare_csv(const CompareTable& table, std::ostream& out) {
  out << "# m=" << (table.m.is_infinite() ? std::string("inf")
                                          : std::to_string(table.m.value()))
      << " beta=" << format_double(table.beta) << '\n';
  for (const auto& col : table.columns)
    out << "# mean_loss," << csv_escape_name(col.name) << ','
        << format_double(col.mean_loss) << ",no finite-sample guarantee\n";
  out << "alpha";
  for (const auto& col : table.columns) {
    const std::string name = csv_escape_name(col.name);
    out << ",limit:" << name << ",exact_coverage:" << name;
  }
  out << '\n';
  for (std::size_t row = 0; row < table.alphas.size(); ++row) {
    out << format_double(table.alphas[row]);
    for (const auto& col : table.columns)
      out << ',' << format_double(col.limits[row]) << ','
          << format_double(col.coverages[row]);
    out << '\n';
  }
}

void export_curves_svg(
    const std::vector<std::pair<std::string, LalCurve>>& curves,
    std::ostream& out) {
  constexpr double kWidth = 720, kHeight = 480;
  constexpr double kLeft = 64, kRight = 704, kTop = 16, kBottom = 436;
  const Axis ax = limit_axis(curves);
  const auto x_of = [&](double v) {
    return kLeft + (v - ax.lo) / (ax.hi - ax.lo) * (kRight - kLeft);
  };
  const auto y_of = [&](double alpha) {
    return kBottom - alpha * (kBottom - kTop);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";

  // axes
  out << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(kBottom)
      << "\" x2=\"" << px(kRight) << "\" y2=\"" << px(kBottom)
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << px(kLeft) << "\" y1=\"" << px(kTop) << "\" x2=\""
      << px(kLeft) << "\" y2=\"" << px(kBottom) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double a = 0.2 * i;
    out << "<line x1=\"" << px(kLeft - 4) << "\" y1=\"" << px(y_of(a))
        << "\" x2=\"" << px(kLeft) << "\" y2=\"" << px(y_of(a))
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(kLeft - 8) << "\" y=\"" << px(y_of(a) + 4)
        << "\" font-size=\"12\" text-anchor=\"end\">" << tick_label(a)
        << "</text>\n";
  }
  for (double t = std::ceil(ax.lo / ax.tick) * ax.tick; t <= ax.hi + 1e-12;
       t += ax.tick) {
    out << "<line x1=\"" << px(x_of(t)) << "\" y1=\"" << px(kBottom)
        << "\" x2=\"" << px(x_of(t)) << "\" y2=\"" << px(kBottom + 4)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << px(x_of(t)) << "\" y=\"" << px(kBottom + 18)
        << "\" font-size=\"12\" text-anchor=\"middle\">"
        << tick_label(std::round(t / ax.tick) * ax.tick) << "</text>\n";
  }
  out << "<text x=\"" << px((kLeft + kRight) / 2) << "\" y=\""
      << px(kHeight - 8)
      << "\" font-size=\"13\" text-anchor=\"middle\">limit</text>\n";
  out << "<text x=\"14\" y=\"" << px((kTop + kBottom) / 2)
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 "
         "14 "
      << px((kTop + kBottom) / 2) << ")\">alpha</text>\n";

  // step curves
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& curve = curves[c].second;
    const char* color = kPalette[c % kPaletteSize];
    const auto& bp = curve.breakpoints;
    std::string pts;
    auto add = [&](double x, double alpha) {
      pts += px(std::clamp(x_of(x), kLeft, kRight));
      pts += ',';
      pts += px(y_of(alpha));
      pts += ' ';
    };
    double prev_alpha = 1.0;
    for (const auto& p : bp) {
      if (!std::isfinite(p.limit)) {
        add(ax.hi, prev_alpha);  // indefinitely continued step
        break;
      }
      add(p.limit, prev_alpha);
      add(p.limit, p.alpha);
      prev_alpha = p.alpha;
    }
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"" << pts << "\"/>\n";
    // mean calibration loss marker
    out << "<line x1=\"" << px(x_of(curve.mean_loss)) << "\" y1=\""
        << px(kTop) << "\" x2=\"" << px(x_of(curve.mean_loss)) << "\" y2=\""
        << px(kBottom) << "\" stroke=\"" << color
        << "\" stroke-dasharray=\"6 4\" opacity=\"0.6\"/>\n";
  }

  // legend
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const double y = kTop + 16 + 18 * static_cast<double>(c);
    out << "<line x1=\"" << px(kRight - 150) << "\" y1=\"" << px(y - 4)
        << "\" x2=\"" << px(kRight - 126) << "\" y2=\"" << px(y - 4)
        << "\" stroke=\"" << kPalette[c % kPaletteSize]
        << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << px(kRight - 120) << "\" y=\"" << px(y)
        << "\" font-size=\"12\">" << curves[c].first << "</text>\n";
  }
  out << "<text x=\"" << px(kLeft) << "\" y=\"" << px(kHeight - 28)
      << "\" font-size=\"11\" fill=\"#555\">dashed: mean calibration loss "
         "(no finite-sample guarantee)</text>\n";
  out << "</svg>\n";
}

void export_coverage_csv(const CoverageReport& report, std::ostream& out) {
  out << "alpha,miscoverage,std_error,band_low,band_high,n,m,beta,replicates,"
         "seed,generator\n";
  for (const auto& row : report.rows) {
    out << format_double(row.alpha) << ',' << format_double(row.miscoverage)
        << ',' << format_double(row.std_error) << ',';
    if (row.has_band_low) out << format_double(row.band_low);
    out << ',' << format_double(row.band_high) << ',' << report.config.n
        << ',' << report.config.m << ',' << format_double(report.config.beta)
        << ',' << report.config.replicates << ',' << report.config.seed << ','
        << report.config.generator.describe() << '\n';
  }
}

void export_quantile_ratio_csv(const QuantileRatioReport& report,
                               std::ostream& out) {
  out << "n,mean_ratio,std_error,quantile_ref,alpha,replicates,seed,"
         "generator\n";
  for (const auto& row : report.rows)
    out << row.n << ',' << format_double(row.mean_ratio) << ','
        << format_double(row.std_error) << ','
        << format_double(row.quantile_ref) << ','
        << format_double(report.config.alphas.front()) << ','
        << report.config.replicates << ',' << report.config.seed << ','
        << report.config.generator.describe() << '\n';
}

void write_file(const std::string& path,
                const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open output file for writing: " + path);
  body(out);
  out.flush();
  if (!out) throw DataError("failed while writing: " + path);
}

}  // namespace lal
