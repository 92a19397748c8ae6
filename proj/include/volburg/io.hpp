#pragma once

// Delimited-text ingestion and JSON encodings of the result types.

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "volburg/burg.hpp"
#include "volburg/error.hpp"
#include "volburg/forecast.hpp"
#include "volburg/fractal.hpp"
#include "volburg/garch.hpp"
#include "volburg/memspec.hpp"
#include "volburg/pipeline.hpp"
#include "volburg/series.hpp"

namespace volburg {

struct Column {
  std::string name;
  std::vector<std::string> labels;
  std::vector<double> values;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string> split(std::string_view line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    out.emplace_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE) return std::nullopt;
  return v;
}

inline bool all_digits(std::string_view s) {
  return !s.empty() &&
         s.find_first_not_of("0123456789") == std::string_view::npos;
}

}  // namespace detail

/// Reads one numeric column plus the first column as labels. `column` is a
/// header name or a zero-based index.
inline Column load_column(const std::string& path, const std::string& column,
                          char delim = ',') {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::SchemaError, path + ": missing header row");
  const auto header = detail::split(line, delim);

  std::optional<std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == column) col = i;
  }
  if (!col && detail::all_digits(column)) {
    const auto idx = std::stoul(column);
    if (idx < header.size()) col = idx;
  }
  if (!col) fail(ErrorKind::SchemaError, path + ": no column '" + column + "'");

  Column out;
  out.name = header[*col];
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split(line, delim);
    const auto where = path + ":" + std::to_string(line_no);
    if (cells.size() <= *col) fail(ErrorKind::SchemaError, where + ": missing column");
    const auto v = detail::parse_double(cells[*col]);
    if (!v) fail(ErrorKind::SchemaError, where + ": unparseable value '" + cells[*col] + "'");
    out.labels.push_back(cells[0]);
    out.values.push_back(*v);
  }
  return out;
}

inline PriceSeries load_csv(const std::string& path, const std::string& column = "1",
                            char delim = ',') {
  Column c = load_column(path, column, delim);
  // Data line n is file line n + 2 (header is line 1).
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    if (!(c.values[i] > 0.0)) {
      fail(ErrorKind::InvalidInput,
           path + ":" + std::to_string(i + 2) + ": non-positive price");
    }
  }
  require(c.values.size() >= 2, ErrorKind::InsufficientData,
          "price file needs at least 2 rows");
  PriceSeries p;
  p.labels = std::move(c.labels);
  p.prices = std::move(c.values);
  p.asset_name = std::filesystem::path(path).stem().string();
  return p;
}

/// Shortest decimal that parses back to the same double.
inline std::string format_full(double v) {
  char buf[32];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

/// Six significant digits, for human-facing tables.
inline std::string format_short(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

using nlohmann::json;

inline std::string_view to_string(VolMode m) {
  return m == VolMode::stdev ? "stdev" : "paper_literal";
}

inline std::string_view to_string(Direction d) {
  return d == Direction::backward ? "backward" : "forward";
}

inline json to_json(const ArModel& m) {
  return {{"order_p", m.order_p},
          {"coeffs", m.coeffs},
          {"reflection", m.reflection},
          {"residual_power", m.residual_power},
          {"signal_mean", m.signal_mean},
          {"n_samples", m.n_samples},
          {"truncated", m.truncated}};
}

inline ArModel ar_model_from_json(const json& j) {
  try {
    ArModel m;
    m.order_p = j.at("order_p").get<std::size_t>();
    m.coeffs = j.at("coeffs").get<std::vector<double>>();
    m.reflection = j.at("reflection").get<std::vector<double>>();
    m.residual_power = j.at("residual_power").get<double>();
    m.signal_mean = j.at("signal_mean").get<double>();
    m.n_samples = j.at("n_samples").get<std::size_t>();
    m.truncated = j.value("truncated", false);
    require(m.coeffs.size() == m.order_p && m.reflection.size() == m.order_p,
            ErrorKind::SchemaError, "model arrays disagree with order_p");
    require(m.residual_power >= 0.0, ErrorKind::SchemaError,
            "negative residual power");
    return m;
  } catch (const json::exception& e) {
    fail(ErrorKind::SchemaError, std::string("bad model JSON: ") + e.what());
  }
}

inline json to_json(const Forecast& f) {
  return {{"values", f.values},
          {"horizon", f.horizon},
          {"direction", to_string(f.direction)},
          {"rms_offset", f.rms_offset},
          {"offset_applied", f.offset_applied}};
}

inline json to_json(const Spectrum& s) {
  return {{"freqs", s.freqs}, {"power", s.power}, {"order_p", s.order_p}, {"n_bins", s.n_bins}};
}

inline json to_json(const CyclePeak& c) {
  return {{"frequency", c.frequency},
          {"period", c.period},
          {"power", c.power},
          {"bin_index", c.bin_index}};
}

inline json to_json(const HurstEstimate& h) {
  json pairs = json::array();
  for (std::size_t i = 0; i < h.window_sizes.size(); ++i) {
    pairs.push_back({{"dt", h.window_sizes[i]}, {"mean_range", h.mean_ranges[i]}});
  }
  return {{"h", h.h},
          {"c", h.c},
          {"ci_low", h.ci_low},
          {"ci_high", h.ci_high},
          {"r_squared", h.r_squared},
          {"ranges", pairs}};
}

inline json to_json(const FractalMetrics& m) {
  return {{"alpha", m.alpha},
          {"beta", m.beta},
          {"d_trace", m.d_trace},
          {"d_path", m.d_path},
          {"euclidean_dim", m.euclidean_dim}};
}

inline json to_json(const GarchModel& g) {
  return {{"omega", g.omega},
          {"alpha", g.alpha},
          {"beta", g.beta},
          {"log_lik", g.log_lik},
          {"sigma2_0", g.sigma2_0},
          {"n_obs", g.n_obs}};
}

inline json to_json(const ComparisonRow& r) {
  return {{"asset", r.asset},
          {"lpc", r.lpc_vol},
          {"garch", r.garch_vol},
          {"order", r.pole_order_used},
          {"cycle", r.cycle_length},
          {"hurst", r.hurst}};
}

inline json to_json(const DiagnosticsReport& d) {
  json j = {{"asset", d.asset},
            {"P", d.pareto_p},
            {"H", d.hurst.h},
            {"alpha", d.metrics.alpha},
            {"beta", d.metrics.beta},
            {"hurst", to_json(d.hurst)},
            {"fractal", to_json(d.metrics)},
            {"order", d.pole_order_used},
            {"horizon", d.horizon}};
  j["fb_score"] = d.fb_score ? json(*d.fb_score) : json(nullptr);
  return j;
}

}  // namespace volburg
