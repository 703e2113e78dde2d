#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "lal/errors.hpp"
#include "lal/io.hpp"

namespace lal {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_finite_cell(const std::string& raw, long long line) {
  const std::string cell = trim(raw);
  double value = 0.0;
  const auto* first = cell.data();
  const auto* last = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last)
    throw DataError("line " + std::to_string(line) +
                    ": cannot parse numeric cell '" + cell + "'");
  if (!std::isfinite(value))
    throw DataError("line " + std::to_string(line) +
                    ": non-finite value '" + cell + "'");
  return value;
}

long long parse_label_cell(const std::string& raw, long long line) {
  const std::string cell = trim(raw);
  long long value = 0;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size())
    throw DataError("line " + std::to_string(line) +
                    ": cannot parse label '" + cell + "'");
  return value;
}

enum class Schema { losses, regression, classification, density };

// Recognizes the header as one of the loss-file schemas. Column names are
// case-sensitive; p_/z_ columns must be 0..K in order.
Schema detect_schema(const std::vector<std::string>& header,
                     std::vector<std::size_t>& order) {
  auto find = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end()
               ? std::ptrdiff_t{-1}
               : std::distance(header.begin(), it);
  };
  order.clear();
  if (header.size() == 1 && header[0] == "loss") {
    order.push_back(0);
    return Schema::losses;
  }
  if (header.size() == 2 && find("y") >= 0 && find("y_hat") >= 0) {
    order = {static_cast<std::size_t>(find("y")),
             static_cast<std::size_t>(find("y_hat"))};
    return Schema::regression;
  }
  if (find("label") >= 0) {
    order.push_back(static_cast<std::size_t>(find("label")));
    for (std::size_t k = 0; k + 1 < header.size(); ++k) {
      const auto at = find("p_" + std::to_string(k));
      if (at < 0) break;
      order.push_back(static_cast<std::size_t>(at));
    }
    if (order.size() == header.size()) return Schema::classification;
  }
  order.clear();
  for (std::size_t d = 0; d < header.size(); ++d) {
    const auto it =
        std::find(header.begin(), header.end(), "z_" + std::to_string(d));
    if (it == header.end()) break;
    order.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  if (!order.empty() && order.size() == header.size()) return Schema::density;
  throw DataError(
      "line 1: header must be `loss`, `y,y_hat`, `label,p_0..p_K`, or "
      "`z_0..z_D`");
}

IngestResult finish(std::vector<double> losses,
                    std::vector<long long> clamped, double support_min,
                    double support_max) {
  IngestResult result{build_sample(losses, support_min, support_max),
                      std::move(losses), std::move(clamped)};
  return result;
}

LossResult loss_at_line(const LossSpec& spec, const PredictionRecord& rec,
                        long long line) {
  try {
    return compute_loss(spec, rec);
  } catch (const std::invalid_argument& e) {
    throw DataError("line " + std::to_string(line) + ": " + e.what());
  }
}

}  // namespace

IngestResult ingest_csv(std::istream& in, const std::optional<LossSpec>& spec,
                        double support_min, double support_max) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("line 1: missing header row");
  std::vector<std::string> header = split_csv_line(line);
  for (auto& h : header) h = trim(h);
  std::vector<std::size_t> order;
  const Schema schema = detect_schema(header, order);
  if (schema == Schema::losses && spec.has_value())
    throw DataError("a loss spec was given but the file has a `loss` column");
  if (schema != Schema::losses && !spec.has_value())
    throw DataError("prediction-record columns require a loss spec");

  std::vector<double> losses;
  std::vector<long long> clamped;
  long long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " cells, got " +
                      std::to_string(cells.size()));
    switch (schema) {
      case Schema::losses:
        losses.push_back(parse_finite_cell(cells[0], line_no));
        break;
      case Schema::regression: {
        const RegressionRecord rec{parse_finite_cell(cells[order[0]], line_no),
                                   parse_finite_cell(cells[order[1]], line_no)};
        losses.push_back(loss_at_line(*spec, rec, line_no).value);
        break;
      }
      case Schema::classification: {
        ClassificationRecord rec;
        rec.label = parse_label_cell(cells[order[0]], line_no);
        for (std::size_t k = 1; k < order.size(); ++k)
          rec.probs.push_back(parse_finite_cell(cells[order[k]], line_no));
        const LossResult r = loss_at_line(*spec, rec, line_no);
        if (r.clamped) clamped.push_back(line_no);
        losses.push_back(r.value);
        break;
      }
      case Schema::density: {
        DensityRecord rec;
        for (const std::size_t at : order)
          rec.z.push_back(parse_finite_cell(cells[at], line_no));
        losses.push_back(loss_at_line(*spec, rec, line_no).value);
        break;
      }
    }
  }
  return finish(std::move(losses), std::move(clamped), support_min,
                support_max);
}

IngestResult ingest_json(std::istream& in, const std::optional<LossSpec>& spec,
                         double support_min, double support_max) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("json parse error: ") + e.what());
  }
  if (!doc.is_array()) throw DataError("json input must be an array");

  std::vector<double> losses;
  std::vector<long long> clamped;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const long long line_no = static_cast<long long>(i) + 1;
    if (item.is_number()) {
      if (spec.has_value())
        throw DataError("a loss spec was given but the array holds plain losses");
      const double v = item.get<double>();
      if (!std::isfinite(v))
        throw DataError("entry " + std::to_string(line_no) +
                        ": non-finite loss");
      losses.push_back(v);
      continue;
    }
    if (!item.is_object())
      throw DataError("entry " + std::to_string(line_no) +
                      ": expected a number or a flat object");
    if (!spec.has_value())
      throw DataError("prediction records require a loss spec");
    PredictionRecord rec;
    if (item.contains("y") && item.contains("y_hat")) {
      rec = RegressionRecord{item.at("y").get<double>(),
                             item.at("y_hat").get<double>()};
    } else if (item.contains("label")) {
      ClassificationRecord c;
      c.label = item.at("label").get<long long>();
      for (std::size_t k = 0; item.contains("p_" + std::to_string(k)); ++k)
        c.probs.push_back(item.at("p_" + std::to_string(k)).get<double>());
      rec = std::move(c);
    } else if (item.contains("z_0")) {
      DensityRecord d;
      for (std::size_t k = 0; item.contains("z_" + std::to_string(k)); ++k)
        d.z.push_back(item.at("z_" + std::to_string(k)).get<double>());
      rec = std::move(d);
    } else {
      throw DataError("entry " + std::to_string(line_no) +
                      ": unrecognized record keys");
    }
    const LossResult r = loss_at_line(*spec, rec, line_no);
    if (r.clamped) clamped.push_back(line_no);
    losses.push_back(r.value);
  }
  return finish(std::move(losses), std::move(clamped), support_min,
                support_max);
}

IngestResult ingest_file(const std::string& path,
                         const std::optional<LossSpec>& spec,
                         double support_min, double support_max) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file: " + path);
  const bool json = path.size() >= 5 &&
                    path.compare(path.size() - 5, 5, ".json") == 0;
  try {
    return json ? ingest_json(in, spec, support_min, support_max)
                : ingest_csv(in, spec, support_min, support_max);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(path + ": " + e.what());
  }
}

void load_gaussian_params(const std::string& path, LossSpec& spec) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open gaussian parameter file: " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": json parse error: " + e.what());
  }
  if (!doc.is_object() || !doc.contains("mean") || !doc.contains("cov"))
    throw DataError(path + ": expected {\"mean\": [...], \"cov\": [[...]]}");
  spec.gaussian_mean = doc.at("mean").get<std::vector<double>>();
  spec.gaussian_cov.clear();
  for (const auto& row : doc.at("cov")) {
    const auto r = row.get<std::vector<double>>();
    if (r.size() != spec.gaussian_mean.size())
      throw DataError(path + ": cov rows must match the mean dimension");
    spec.gaussian_cov.insert(spec.gaussian_cov.end(), r.begin(), r.end());
  }
  if (spec.gaussian_cov.size() !=
      spec.gaussian_mean.size() * spec.gaussian_mean.size())
    throw DataError(path + ": cov must be square");
}

}  // namespace lal
