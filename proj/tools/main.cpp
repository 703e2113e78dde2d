#include <cstdint>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "lal/curves.hpp"
#include "lal/errors.hpp"
#include "lal/io.hpp"
#include "lal/lal.hpp"
#include "lal/losses.hpp"
#include "lal/sample.hpp"
#include "lal/simulate.hpp"

namespace {

// Bad flag values are usage errors (exit 1), unlike file/data errors (exit 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SharedOptions {
  std::string m = "1";
  double beta = 1.0;
  double alpha = 0.1;
  std::string alpha_grid;
  std::string support_min = "-inf";
  std::string support_max = "inf";
  std::string loss;
  std::string gaussian_params;
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 0;
};

lal::BatchSize parse_batch_size(const std::string& text) {
  if (text == "inf") return lal::BatchSize::infinite();
  long long m = 0;
  try {
    std::size_t used = 0;
    m = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw UsageError("--m expects a positive integer or 'inf', got '" + text +
                     "'");
  }
  if (m < 1) throw UsageError("--m must be >= 1");
  return lal::BatchSize::finite(m);
}

double parse_bound(const std::string& text, const std::string& flag) {
  try {
    return lal::parse_extended_real(text);
  } catch (const lal::DataError&) {
    throw UsageError(flag + " expects a real number or 'inf'/'-inf'");
  }
}

// Decimal token -> integer mantissa and number of fractional digits, so the
// grid can step in exact decimals (no 0.1 + 0.2 accumulation artifacts).
std::pair<long long, int> parse_decimal(const std::string& token) {
  long long mantissa = 0;
  int frac_digits = 0;
  bool seen_digit = false, seen_dot = false;
  for (const char c : token) {
    if (c == '.') {
      if (seen_dot) throw UsageError("bad decimal '" + token + "'");
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      if (mantissa > (std::numeric_limits<long long>::max() - 9) / 10)
        throw UsageError("decimal too long: '" + token + "'");
      mantissa = mantissa * 10 + (c - '0');
      if (seen_dot) ++frac_digits;
      seen_digit = true;
    } else {
      throw UsageError("bad decimal '" + token + "'");
    }
  }
  if (!seen_digit) throw UsageError("bad decimal '" + token + "'");
  return {mantissa, frac_digits};
}

std::vector<double> parse_alpha_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3)
    throw UsageError("--alpha-grid expects start:end:step, got '" + text +
                     "'");
  auto [a, da] = parse_decimal(parts[0]);
  auto [b, db] = parse_decimal(parts[1]);
  auto [s, ds] = parse_decimal(parts[2]);
  const int digits = std::max({da, db, ds});
  long long scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  for (int i = digits; i > da; --i) a *= 10;
  for (int i = digits; i > db; --i) b *= 10;
  for (int i = digits; i > ds; --i) s *= 10;
  if (s <= 0) throw UsageError("--alpha-grid step must be positive");
  std::vector<double> grid;
  for (long long v = a; v <= b; v += s)
    grid.push_back(static_cast<double>(v) / static_cast<double>(scale));
  if (grid.empty()) throw UsageError("--alpha-grid produced no levels");
  return grid;
}

std::vector<long long> parse_n_grid(const std::string& text) {
  std::vector<long long> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      grid.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw UsageError("--n-grid expects comma-separated integers");
    }
  }
  if (grid.empty()) throw UsageError("--n-grid produced no sizes");
  return grid;
}

std::optional<lal::LossSpec> make_loss_spec(const SharedOptions& opt) {
  if (opt.loss.empty()) {
    if (!opt.gaussian_params.empty())
      throw UsageError("--gaussian-params requires --loss gaussian-nll");
    return std::nullopt;
  }
  lal::LossSpec spec;
  try {
    spec.kind = lal::parse_loss_kind(opt.loss);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (spec.kind == lal::LossKind::gaussian_nll) {
    if (opt.gaussian_params.empty())
      throw UsageError("--loss gaussian-nll requires --gaussian-params");
    lal::load_gaussian_params(opt.gaussian_params, spec);
  } else if (!opt.gaussian_params.empty()) {
    throw UsageError("--gaussian-params requires --loss gaussian-nll");
  }
  return spec;
}

std::string file_stem(const std::string& path) {
  const auto slash = path.find_last_of('/');
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  const auto dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return name;
}

lal::IngestResult ingest(const std::string& path, const SharedOptions& opt) {
  const auto spec = make_loss_spec(opt);
  const double lo = parse_bound(opt.support_min, "--support-min");
  const double hi = parse_bound(opt.support_max, "--support-max");
  const lal::IngestResult result = lal::ingest_file(path, spec, lo, hi);
  if (!result.clamped_lines.empty()) {
    std::cerr << "warning: " << result.clamped_lines.size()
              << " loss value(s) clamped at the probability floor (lines";
    for (std::size_t i = 0; i < result.clamped_lines.size() && i < 10; ++i)
      std::cerr << ' ' << result.clamped_lines[i];
    if (result.clamped_lines.size() > 10) std::cerr << " ...";
    std::cerr << ")\n";
  }
  return result;
}

void emit(const SharedOptions& opt,
          const std::function<void(std::ostream&)>& body) {
  if (opt.out.empty())
    body(std::cout);
  else
    lal::write_file(opt.out, body);
}

lal::Generator parse_generator(const std::string& name, double mu,
                               double sigma, double constant) {
  lal::Generator g;
  if (name == "normal") {
    g.kind = lal::Generator::Kind::iid_normal_losses;
  } else if (name == "exponential") {
    g.kind = lal::Generator::Kind::exponential_losses;
  } else if (name == "shift") {
    g.kind = lal::Generator::Kind::shift_scenario;
    g.mu = mu;
    g.sigma = sigma;
  } else if (name == "constant") {
    g.kind = lal::Generator::Kind::constant_losses;
    g.constant = constant;
  } else {
    throw UsageError(
        "--generator must be normal, exponential, shift, or constant");
  }
  return g;
}

void add_shared_query_flags(CLI::App* cmd, SharedOptions& opt) {
  cmd->add_option("--m", opt.m, "out-of-sample batch size, integer or 'inf'");
  cmd->add_option("--beta", opt.beta, "bounded fraction, in (0,1]");
}

void add_ingest_flags(CLI::App* cmd, SharedOptions& opt) {
  cmd->add_option("--loss", opt.loss,
                  "loss to apply to prediction records: absolute, squared, "
                  "overshoot, undershoot, misclassification-prob, "
                  "categorical-nll, gaussian-nll");
  cmd->add_option("--gaussian-params", opt.gaussian_params,
                  "json file with {\"mean\": [...], \"cov\": [[...]]}");
  cmd->add_option("--support-min", opt.support_min,
                  "known lower support bound (default -inf)");
  cmd->add_option("--support-max", opt.support_max,
                  "known upper support bound (default inf)");
}

int run(int argc, char** argv) {
  CLI::App app{"distribution-free level-alpha limits on out-of-sample losses"};
  app.require_subcommand(1);

  SharedOptions opt;
  std::vector<std::string> files;

  auto* limit_cmd =
      app.add_subcommand("limit", "one limit for one calibration sample");
  limit_cmd->add_option("file", files, "loss file (csv or json)")
      ->required()
      ->expected(1);
  add_shared_query_flags(limit_cmd, opt);
  add_ingest_flags(limit_cmd, opt);
  limit_cmd->add_option("--alpha", opt.alpha, "level, in (0,1)")->required();

  auto* curve_cmd =
      app.add_subcommand("curve", "exact limit-versus-level step curve");
  curve_cmd->add_option("file", files, "loss file")->required()->expected(1);
  add_shared_query_flags(curve_cmd, opt);
  add_ingest_flags(curve_cmd, opt);
  curve_cmd->add_option("--format", opt.format, "csv or svg");
  curve_cmd->add_option("--out", opt.out, "output path (default stdout)");

  auto* compare_cmd =
      app.add_subcommand("compare", "limits for several samples side by side");
  compare_cmd->add_option("files", files, "two or more loss files")
      ->required()
      ->expected(2, -1);
  add_shared_query_flags(compare_cmd, opt);
  add_ingest_flags(compare_cmd, opt);
  compare_cmd->add_option("--alpha", opt.alpha, "single level");
  compare_cmd->add_option("--alpha-grid", opt.alpha_grid,
                          "levels start:end:step");
  compare_cmd->add_option("--format", opt.format, "csv or svg");
  compare_cmd->add_option("--out", opt.out, "output path (default stdout)");

  auto* losses_cmd = app.add_subcommand(
      "losses", "apply a loss to prediction records, write a loss csv");
  losses_cmd->add_option("file", files, "record file")->required()->expected(1);
  add_ingest_flags(losses_cmd, opt);
  losses_cmd->add_option("--out", opt.out, "output path (default stdout)");

  auto* sim_cmd = app.add_subcommand("simulate", "verification harnesses");
  sim_cmd->require_subcommand(1);

  std::string generator_name = "normal";
  double gen_mu = 1.0, gen_sigma = 0.5, gen_constant = 1.0;
  long long sim_n = 30, sim_replicates = 1000;
  std::string n_grid_text;
  long long oracle_n = 1, oracle_m = 1, oracle_i = -1, oracle_j = -1,
            oracle_k = -1, oracle_q = -1;

  auto add_generator_flags = [&](CLI::App* cmd) {
    cmd->add_option("--generator", generator_name,
                    "normal, exponential, shift, or constant");
    cmd->add_option("--mu", gen_mu, "shift generator feature mean");
    cmd->add_option("--sigma", gen_sigma,
                    "shift generator feature standard deviation");
    cmd->add_option("--constant", gen_constant, "constant generator value");
    cmd->add_option("--replicates", sim_replicates, "Monte Carlo replicates");
    cmd->add_option("--seed", opt.seed, "64-bit seed, recorded in the output");
    cmd->add_option("--out", opt.out, "output path (default stdout)");
  };

  auto* cov_cmd = sim_cmd->add_subcommand(
      "coverage", "empirical miscoverage against the guarantee band");
  add_generator_flags(cov_cmd);
  cov_cmd->add_option("--n", sim_n, "calibration sample size");
  add_shared_query_flags(cov_cmd, opt);
  cov_cmd->add_option("--alpha", opt.alpha, "single level");
  cov_cmd->add_option("--alpha-grid", opt.alpha_grid, "levels start:end:step");

  auto* ratio_cmd = sim_cmd->add_subcommand(
      "quantile-ratio", "mean limit over reference quantile, per n");
  add_generator_flags(ratio_cmd);
  ratio_cmd->add_option("--alpha", opt.alpha, "level")->required();
  ratio_cmd->add_option("--n-grid", n_grid_text, "comma-separated sizes")
      ->required();

  auto* oracle_cmd = sim_cmd->add_subcommand(
      "oracle", "exact enumeration over origin-set partitions");
  oracle_cmd->add_option("--n", oracle_n, "calibration size")->required();
  oracle_cmd->add_option("--m", oracle_m, "out-of-sample size")->required();
  oracle_cmd->add_option("--i", oracle_i, "out-of-sample rank (pmf event)");
  oracle_cmd->add_option("--j", oracle_j, "calibration interval (pmf event)");
  oracle_cmd->add_option("--k", oracle_k, "order statistic (tail event)");
  oracle_cmd->add_option("--q", oracle_q, "out-of-sample rank (tail event)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const lal::BatchSize m = parse_batch_size(opt.m);

  if (limit_cmd->parsed()) {
    const lal::IngestResult in = ingest(files[0], opt);
    const lal::LalOutcome out =
        lal::lal(in.sample, {m, opt.beta, opt.alpha});
    std::cout << "k_star=" << out.k_star << '\n'
              << "limit=" << lal::format_double(out.limit) << '\n'
              << "exact_coverage=" << lal::format_double(out.exact_coverage)
              << '\n';
    if (out.ordinal) std::cout << "ordinal=" << *out.ordinal << '\n';
    if (out.conservative_under_ties)
      std::cout << "note=conservative under ties\n";
    return 0;
  }

  if (curve_cmd->parsed()) {
    const lal::IngestResult in = ingest(files[0], opt);
    const lal::LalCurve curve = lal::curve_breakpoints(in.sample, m, opt.beta);
    if (opt.format == "csv") {
      emit(opt, [&](std::ostream& os) { lal::export_curve_csv(curve, os); });
    } else if (opt.format == "svg") {
      emit(opt, [&](std::ostream& os) {
        lal::export_curves_svg({{file_stem(files[0]), curve}}, os);
      });
    } else {
      throw UsageError("--format must be csv or svg");
    }
    return 0;
  }

  if (compare_cmd->parsed()) {
    std::vector<double> alphas;
    if (!opt.alpha_grid.empty())
      alphas = parse_alpha_grid(opt.alpha_grid);
    else if (compare_cmd->count("--alpha") > 0)
      alphas = {opt.alpha};
    else
      throw UsageError("compare needs --alpha or --alpha-grid");
    std::vector<std::pair<std::string, lal::CalibrationSample>> samples;
    samples.reserve(files.size());
    for (const auto& f : files)
      samples.emplace_back(file_stem(f), ingest(f, opt).sample);
    if (opt.format == "csv") {
      const lal::CompareTable table =
          lal::compare_table(samples, m, opt.beta, alphas);
      emit(opt, [&](std::ostream& os) { lal::export_compare_csv(table, os); });
    } else if (opt.format == "svg") {
      std::vector<std::pair<std::string, lal::LalCurve>> curves;
      curves.reserve(samples.size());
      for (const auto& [name, sample] : samples)
        curves.emplace_back(name, lal::curve_breakpoints(sample, m, opt.beta));
      emit(opt, [&](std::ostream& os) { lal::export_curves_svg(curves, os); });
    } else {
      throw UsageError("--format must be csv or svg");
    }
    return 0;
  }

  if (losses_cmd->parsed()) {
    if (opt.loss.empty()) throw UsageError("losses needs --loss");
    const lal::IngestResult in = ingest(files[0], opt);
    emit(opt, [&](std::ostream& os) {
      os << "loss\n";
      for (const double v : in.raw_losses)  // input row order
        os << lal::format_double(v) << '\n';
    });
    return 0;
  }

  if (cov_cmd->parsed() || ratio_cmd->parsed()) {
    lal::SimConfig config;
    config.generator =
        parse_generator(generator_name, gen_mu, gen_sigma, gen_constant);
    config.n = sim_n;
    config.beta = opt.beta;
    config.replicates = sim_replicates;
    config.seed = opt.seed;
    if (m.is_infinite())
      throw UsageError("simulation draws require a finite --m");
    config.m = m.value();
    if (cov_cmd->parsed()) {
      config.alphas = opt.alpha_grid.empty()
                          ? std::vector<double>{opt.alpha}
                          : parse_alpha_grid(opt.alpha_grid);
      const lal::CoverageReport report = lal::coverage_mc(config);
      emit(opt,
           [&](std::ostream& os) { lal::export_coverage_csv(report, os); });
    } else {
      config.alphas = {opt.alpha};
      config.n_grid = parse_n_grid(n_grid_text);
      const lal::QuantileRatioReport report = lal::quantile_ratio_mc(config);
      emit(opt, [&](std::ostream& os) {
        lal::export_quantile_ratio_csv(report, os);
      });
    }
    return 0;
  }

  if (oracle_cmd->parsed()) {
    const bool pmf_event = oracle_i >= 0 || oracle_j >= 0;
    const bool tail_event = oracle_k >= 0 || oracle_q >= 0;
    if (pmf_event == tail_event)
      throw UsageError("oracle needs either --i/--j or --k/--q");
    lal::ExactFraction p;
    if (pmf_event) {
      if (oracle_i < 0 || oracle_j < 0)
        throw UsageError("pmf event needs both --i and --j");
      p = lal::enumeration_pmf(oracle_n, oracle_m, oracle_i, oracle_j);
      std::cout << "event=order_pmf n=" << oracle_n << " m=" << oracle_m
                << " i=" << oracle_i << " j=" << oracle_j << '\n';
    } else {
      if (oracle_k < 0 || oracle_q < 0)
        throw UsageError("tail event needs both --k and --q");
      p = lal::enumeration_exceeds(oracle_n, oracle_m, oracle_q, oracle_k);
      std::cout << "event=tail n=" << oracle_n << " m=" << oracle_m
                << " q=" << oracle_q << " k=" << oracle_k << '\n';
    }
    std::cout << "probability=" << p.num.str() << '/' << p.den.str() << '\n'
              << "value=" << lal::format_double(p.value()) << '\n';
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
