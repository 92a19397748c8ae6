#pragma once

// Command-line front end. dispatch() is kept free of process state (it takes
// argv as strings and writes to caller-supplied streams) so tests can drive it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "volburg/burg.hpp"
#include "volburg/error.hpp"
#include "volburg/forecast.hpp"
#include "volburg/fractal.hpp"
#include "volburg/garch.hpp"
#include "volburg/io.hpp"
#include "volburg/memspec.hpp"
#include "volburg/pipeline.hpp"
#include "volburg/series.hpp"
#include "volburg/synth.hpp"

namespace volburg::cli {

enum class OutputFormat { table, csv, json };

struct CliConfig {
  std::vector<std::string> input_paths;
  std::string column = "1";
  char delim = ',';
  OutputFormat output_format = OutputFormat::table;
  std::optional<std::uint64_t> seed;
  PipelineConfig pipeline;
};

inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::SchemaError:
    case ErrorKind::InsufficientData:
      return 1;
    case ErrorKind::DegenerateSignal:
    case ErrorKind::NumericalFailure:
    case ErrorKind::NoPeak:
      return 2;
    case ErrorKind::IoError:
      return 3;
  }
  return 1;
}

/// Rows of cells rendered as an aligned table, CSV, or (by the caller) JSON.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void write_csv(std::ostream& os) const {
    write_line(os, header_, ",");
    for (const auto& r : rows_) write_line(os, r, ",");
  }

  void write_aligned(std::ostream& os) const {
    std::vector<std::size_t> width(header_.size(), 0);
    auto grow = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size() && i < width.size(); ++i) {
        width[i] = std::max(width[i], r[i].size());
      }
    };
    grow(header_);
    for (const auto& r : rows_) grow(r);
    auto emit = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (i) os << "  ";
        os << r[i];
        if (i + 1 < r.size()) os << std::string(width[i] - r[i].size(), ' ');
      }
      os << '\n';
    };
    emit(header_);
    for (const auto& r : rows_) emit(r);
  }

 private:
  static void write_line(std::ostream& os, const std::vector<std::string>& r,
                         const char* sep) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << sep;
      os << r[i];
    }
    os << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

namespace detail {

inline std::string num(double v, OutputFormat f) {
  return f == OutputFormat::table ? format_short(v) : format_full(v);
}

inline void emit(std::ostream& os, const Table& t, OutputFormat f) {
  if (f == OutputFormat::csv) {
    t.write_csv(os);
  } else {
    t.write_aligned(os);
  }
}

inline void emit_json(std::ostream& os, const nlohmann::json& j) { os << j.dump(2) << '\n'; }

inline void add_format(CLI::App* app, OutputFormat& fmt) {
  app->add_option_function<std::string>(
         "--format",
         [&fmt](const std::string& v) {
           fmt = v == "csv" ? OutputFormat::csv
                            : (v == "json" ? OutputFormat::json : OutputFormat::table);
         },
         "Output format: table | csv | json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
}

inline void add_input(CLI::App* app, CliConfig& c, bool many) {
  if (many) {
    app->add_option("inputs", c.input_paths, "Input CSV files")->required();
  } else {
    app->add_option("input", c.input_paths, "Input CSV file")->required()->expected(1);
  }
  app->add_option("--column", c.column, "Price column name or zero-based index");
  app->add_option("--delim", c.delim, "Field delimiter");
}

inline void add_vol_options(CLI::App* app, PipelineConfig& p) {
  app->add_option("--window", p.vol_window, "Volatility window length")
      ->check(CLI::Range(2, 1 << 30));
  app->add_option_function<std::string>(
         "--mode",
         [&p](const std::string& v) {
           p.vol_mode = v == "stdev" ? VolMode::stdev : VolMode::paper_literal;
         },
         "Volatility statistic: paper_literal | stdev")
      ->check(CLI::IsMember({"paper_literal", "stdev"}));
}

inline void add_pipeline_options(CLI::App* app, PipelineConfig& p,
                                 std::optional<std::size_t>& order,
                                 std::optional<std::size_t>& horizon, bool& no_offset,
                                 bool& auto_horizon) {
  add_vol_options(app, p);
  app->add_option("--order", order, "Fixed pole count (default: cycle/H rule)");
  app->add_option("--horizon", horizon, "Forecast length (default 64)");
  app->add_flag("--auto-horizon", auto_horizon,
                "Forecast length from the spectral cycle instead of 64");
  app->add_option("--h", p.hurst_h_for_rule, "Hurst exponent used by the pole rule");
  app->add_option("--exploratory-order", p.exploratory_order,
                  "AR order for the cycle-extraction spectrum");
  app->add_option("--lambda", p.ewma_lambda, "EWMA decay");
  app->add_option("--bins", p.spectrum_bins, "Spectrum grid size");
  app->add_option("--min-period", p.min_period, "Shortest admissible cycle");
  app->add_flag("--no-offset", no_offset, "Do not add the rms residual offset");
  app->add_option("--annualize", p.annualize_factor,
                  "Multiply volatilities by sqrt(factor)");
}

inline void finish_pipeline(PipelineConfig& p, const std::optional<std::size_t>& order,
                            const std::optional<std::size_t>& horizon, bool no_offset,
                            bool auto_horizon) {
  if (order) p.pole_order_override = *order;
  if (horizon) p.forecast_len = *horizon;
  if (auto_horizon) p.forecast_len.reset();
  if (no_offset) p.apply_offset = false;
}

inline void write_series_csv(std::ostream& os, const std::string& value_name,
                             const std::vector<double>& v) {
  os << "t," << value_name << '\n';
  for (std::size_t i = 0; i < v.size(); ++i) os << i << ',' << format_full(v[i]) << '\n';
}

}  // namespace detail

inline constexpr const char* kUsage =
    "usage: volburg <vol|forecast|spectrum|hurst|garch|compare|diagnostics|synth> "
    "[options]\n";

/// Runs one subcommand. `args` excludes the program name. Returns the exit
/// status: 0 success, 1 bad input, 2 numerical failure, 3 I/O error.
inline int dispatch(const std::vector<std::string>& args, std::ostream& out,
                    std::ostream& err) {
  CLI::App app{"Burg/LPC volatility toolkit", "volburg"};
  app.require_subcommand(1);
  // "--h" is a Hurst-exponent option, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");

  CliConfig cfg;
  std::optional<std::size_t> order;
  std::optional<std::size_t> horizon;
  bool no_offset = false;
  bool auto_horizon = false;

  // vol
  auto* vol = app.add_subcommand("vol", "Sliding-window historical volatility");
  detail::add_input(vol, cfg, false);
  detail::add_format(vol, cfg.output_format);
  detail::add_vol_options(vol, cfg.pipeline);
  vol->add_option("--lambda", cfg.pipeline.ewma_lambda, "EWMA decay of the smoothed column");

  // forecast
  auto* fc = app.add_subcommand("forecast", "LPC forecast vector of the volatility signal");
  detail::add_input(fc, cfg, false);
  detail::add_format(fc, cfg.output_format);
  detail::add_pipeline_options(fc, cfg.pipeline, order, horizon, no_offset, auto_horizon);
  Direction direction = Direction::forward;
  fc->add_option_function<std::string>(
         "--direction",
         [&direction](const std::string& v) {
           direction = v == "backward" ? Direction::backward : Direction::forward;
         },
         "forward | backward")
      ->check(CLI::IsMember({"forward", "backward"}));
  bool fc_raw = false;
  fc->add_flag("--raw", fc_raw, "Model the column itself (offset off unless --offset)");
  bool force_offset = false;
  fc->add_flag("--offset", force_offset, "Force the rms residual offset on");
  std::string save_model;
  std::string load_model;
  fc->add_option("--save-model", save_model, "Write the fitted model as JSON");
  fc->add_option("--load-model", load_model, "Use a saved model instead of fitting");

  // spectrum
  auto* sp = app.add_subcommand("spectrum", "Maximum-entropy spectrum and dominant cycle");
  detail::add_input(sp, cfg, false);
  detail::add_format(sp, cfg.output_format);
  std::size_t sp_order = cfg.pipeline.exploratory_order;
  sp->add_option("--order", sp_order, "AR order of the spectrum");
  sp->add_option("--bins", cfg.pipeline.spectrum_bins, "Grid size over [0, 0.5]");
  sp->add_option("--min-period", cfg.pipeline.min_period, "Shortest admissible cycle");
  bool sp_raw = false;
  sp->add_flag("--raw", sp_raw, "Use the column itself instead of squared log returns");

  // hurst
  auto* hu = app.add_subcommand("hurst", "Growth-of-range Hurst exponent");
  detail::add_input(hu, cfg, false);
  detail::add_format(hu, cfg.output_format);
  bool cumulate = false;
  bool hu_returns = false;
  int dim = 2;
  std::vector<std::size_t> windows;
  hu->add_flag("--cumulate", cumulate, "Cumulate the column before estimating");
  hu->add_flag("--returns", hu_returns, "Convert the column (prices) to log returns first");
  hu->add_option("--dim", dim, "Euclidean dimension for the path dimension");
  hu->add_option("--windows", windows, "Explicit window sizes")->delimiter(',');

  // garch
  auto* ga = app.add_subcommand("garch", "GARCH(1,1) fit and one-step forecast");
  detail::add_input(ga, cfg, false);
  detail::add_format(ga, cfg.output_format);
  std::optional<double> ga_annualize;
  ga->add_option("--annualize", ga_annualize, "Multiply the forecast by sqrt(factor)");

  // compare
  auto* cmp = app.add_subcommand("compare", "LPC vs GARCH volatility table");
  detail::add_input(cmp, cfg, true);
  detail::add_format(cmp, cfg.output_format);
  detail::add_pipeline_options(cmp, cfg.pipeline, order, horizon, no_offset, auto_horizon);

  // diagnostics
  auto* dg = app.add_subcommand("diagnostics", "Pareto P, Hurst H, alpha, beta per asset");
  detail::add_input(dg, cfg, true);
  detail::add_format(dg, cfg.output_format);
  detail::add_pipeline_options(dg, cfg.pipeline, order, horizon, no_offset, auto_horizon);

  // synth
  auto* sy = app.add_subcommand("synth", "Write a seeded synthetic series as CSV");
  std::string kind;
  sy->add_option("kind", kind, "ar | harmonic | garch | fgn")
      ->required()
      ->check(CLI::IsMember({"ar", "harmonic", "garch", "fgn"}));
  std::size_t n = 1024;
  std::uint64_t seed = 0;
  std::string output;
  std::vector<double> coeffs;
  std::vector<double> freqs;
  std::vector<double> amps;
  double sigma = 1.0;
  bool sigma_set = false;
  GarchParams gp;
  double hurst_h = 0.5;
  std::optional<double> start_price;
  double return_scale = 1.0;
  sy->add_option("--n", n, "Series length")->check(CLI::PositiveNumber);
  sy->add_option("--seed", seed, "PRNG seed (VOLBURG_SEED overrides)");
  sy->add_option("-o,--output", output, "Output path (default stdout)");
  sy->add_option("--coeffs", coeffs, "AR coefficients")->delimiter(',');
  sy->add_option("--freqs", freqs, "Harmonic frequencies")->delimiter(',');
  sy->add_option("--amps", amps, "Harmonic amplitudes")->delimiter(',');
  sy->add_option("--sigma", sigma, "Noise standard deviation")
      ->each([&](const std::string&) { sigma_set = true; });
  sy->add_option("--omega", gp.omega, "GARCH omega");
  sy->add_option("--alpha", gp.alpha, "GARCH alpha");
  sy->add_option("--beta", gp.beta, "GARCH beta");
  sy->add_option("--h", hurst_h, "fGn Hurst exponent");
  sy->add_option("--prices", start_price,
                 "Emit prices p0*exp(cumsum(scale*x)) starting from this level");
  sy->add_option("--scale", return_scale, "Multiplier applied before --prices");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n' << kUsage;
    return 1;
  }

  const OutputFormat fmt = cfg.output_format;
  try {
    detail::finish_pipeline(cfg.pipeline, order, horizon, no_offset, auto_horizon);

    if (*vol) {
      const auto p = load_csv(cfg.input_paths[0], cfg.column, cfg.delim);
      const auto r = log_returns(p);
      const auto v = historical_vol(r, cfg.pipeline.vol_window, cfg.pipeline.vol_mode);
      const auto smooth = ewma(v.values, cfg.pipeline.ewma_lambda);
      // Volatility i covers returns i..i+n-1, i.e. ends at price label i+n.
      if (fmt == OutputFormat::json) {
        detail::emit_json(out, {{"asset", p.asset_name},
                                {"window_n", v.window_n},
                                {"mode", to_string(v.mode)},
                                {"values", v.values},
                                {"ewma", smooth}});
      } else {
        Table t({"index", "label", "vol", "ewma"});
        for (std::size_t i = 0; i < v.size(); ++i) {
          t.add({std::to_string(i), p.labels[i + v.window_n], detail::num(v.values[i], fmt),
                 detail::num(smooth[i], fmt)});
        }
        detail::emit(out, t, fmt);
      }
      return 0;
    }

    if (*fc) {
      std::vector<double> signal;
      std::vector<double> returns;
      if (fc_raw) {
        signal = load_column(cfg.input_paths[0], cfg.column, cfg.delim).values;
      } else {
        const auto p = load_csv(cfg.input_paths[0], cfg.column, cfg.delim);
        returns = log_returns(p).values;
        signal = historical_vol(returns, cfg.pipeline.vol_window, cfg.pipeline.vol_mode).values;
      }
      const bool offset = force_offset || (!fc_raw && cfg.pipeline.apply_offset);

      ArModel model;
      std::size_t steps = cfg.pipeline.forecast_len.value_or(64);
      if (!load_model.empty()) {
        std::ifstream in(load_model);
        if (!in) fail(ErrorKind::IoError, "cannot open " + load_model);
        nlohmann::json j;
        try {
          in >> j;
        } catch (const nlohmann::json::exception& e) {
          fail(ErrorKind::SchemaError, std::string("bad model JSON: ") + e.what());
        }
        model = ar_model_from_json(j);
      } else {
        std::size_t m = 0;
        if (cfg.pipeline.pole_order_override) {
          m = *cfg.pipeline.pole_order_override;
        } else {
          require(!fc_raw, ErrorKind::InvalidInput, "--raw needs --order");
          const auto sel = select_order(returns, cfg.pipeline);
          m = sel.order;
          steps = sel.horizon;
        }
        model = burg_fit(signal, m);
      }
      if (!save_model.empty()) {
        std::ofstream mo(save_model);
        if (!mo) fail(ErrorKind::IoError, "cannot write " + save_model);
        mo << to_json(model).dump(2) << '\n';
      }
      const auto f = extrapolate(model, signal, steps, direction, offset);
      if (fmt == OutputFormat::json) {
        detail::emit_json(out, {{"forecast", to_json(f)}, {"model", to_json(model)}});
      } else {
        Table t({"step", "value"});
        for (std::size_t i = 0; i < f.values.size(); ++i) {
          t.add({std::to_string(i + 1), detail::num(f.values[i], fmt)});
        }
        detail::emit(out, t, fmt);
      }
      return 0;
    }

    if (*sp) {
      std::vector<double> signal;
      if (sp_raw) {
        signal = load_column(cfg.input_paths[0], cfg.column, cfg.delim).values;
      } else {
        signal = squared(log_returns(load_csv(cfg.input_paths[0], cfg.column, cfg.delim)).values);
      }
      const auto model = burg_fit(signal, sp_order);
      const auto s = mem_spectrum(model, cfg.pipeline.spectrum_bins);
      std::optional<CyclePeak> peak;
      try {
        peak = dominant_cycle(s, cfg.pipeline.min_period);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoPeak) throw;
      }
      if (fmt == OutputFormat::json) {
        nlohmann::json j = {{"spectrum", to_json(s)}};
        j["dominant_cycle"] = peak ? to_json(*peak) : nlohmann::json(nullptr);
        detail::emit_json(out, j);
      } else {
        if (peak) {
          out << "# dominant_cycle period=" << detail::num(peak->period, fmt)
              << " frequency=" << detail::num(peak->frequency, fmt)
              << " power=" << detail::num(peak->power, fmt) << '\n';
        } else {
          out << "# dominant_cycle none\n";
        }
        Table t({"frequency", "power"});
        for (std::size_t i = 0; i < s.n_bins; ++i) {
          t.add({detail::num(s.freqs[i], fmt), detail::num(s.power[i], fmt)});
        }
        detail::emit(out, t, fmt);
      }
      return 0;
    }

    if (*hu) {
      std::vector<double> y;
      if (hu_returns) {
        y = log_returns(load_csv(cfg.input_paths[0], cfg.column, cfg.delim)).values;
      } else {
        y = load_column(cfg.input_paths[0], cfg.column, cfg.delim).values;
      }
      if (cumulate) y = cumulative_sum(y);
      const auto est = windows.empty() ? hurst_estimate(y) : hurst_estimate(y, windows);
      std::optional<FractalMetrics> metrics;
      if (est.h > 0.0 && est.h <= 1.0) metrics = fractal_metrics(est.h, dim);
      if (fmt == OutputFormat::json) {
        nlohmann::json j = {{"hurst", to_json(est)}};
        j["fractal"] = metrics ? to_json(*metrics) : nlohmann::json(nullptr);
        detail::emit_json(out, j);
      } else {
        Table t({"H", "ci_low", "ci_high", "c", "r2", "alpha", "beta", "d_trace", "d_path"});
        auto m = [&](double FractalMetrics::*field) {
          return metrics ? detail::num((*metrics).*field, fmt) : std::string("nan");
        };
        t.add({detail::num(est.h, fmt), detail::num(est.ci_low, fmt),
               detail::num(est.ci_high, fmt), detail::num(est.c, fmt),
               detail::num(est.r_squared, fmt), m(&FractalMetrics::alpha),
               m(&FractalMetrics::beta), m(&FractalMetrics::d_trace),
               m(&FractalMetrics::d_path)});
        detail::emit(out, t, fmt);
      }
      return 0;
    }

    if (*ga) {
      const auto p = load_csv(cfg.input_paths[0], cfg.column, cfg.delim);
      const auto r = log_returns(p).values;
      const auto g = garch_fit(r);
      double f1 = garch_forecast(g, r);
      if (ga_annualize) f1 *= std::sqrt(*ga_annualize);
      if (fmt == OutputFormat::json) {
        detail::emit_json(out, {{"asset", p.asset_name}, {"model", to_json(g)}, {"forecast", f1}});
      } else {
        Table t({"asset", "omega", "alpha", "beta", "log_lik", "forecast"});
        t.add({p.asset_name, detail::num(g.omega, fmt), detail::num(g.alpha, fmt),
               detail::num(g.beta, fmt), detail::num(g.log_lik, fmt), detail::num(f1, fmt)});
        detail::emit(out, t, fmt);
      }
      return 0;
    }

    if (*cmp) {
      std::vector<PriceSeries> assets;
      for (const auto& path : cfg.input_paths) assets.push_back(load_csv(path, cfg.column, cfg.delim));
      const auto rows = run_compare_all(assets, cfg.pipeline);
      if (fmt == OutputFormat::json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows) j.push_back(to_json(r));
        detail::emit_json(out, j);
      } else {
        Table t({"asset", "lpc", "garch", "order", "cycle", "hurst"});
        for (const auto& r : rows) {
          t.add({r.asset, detail::num(r.lpc_vol, fmt), detail::num(r.garch_vol, fmt),
                 std::to_string(r.pole_order_used), detail::num(r.cycle_length, fmt),
                 detail::num(r.hurst, fmt)});
        }
        detail::emit(out, t, fmt);
      }
      return 0;
    }

    if (*dg) {
      std::vector<DiagnosticsReport> reps;
      for (const auto& path : cfg.input_paths) {
        reps.push_back(run_diagnostics(load_csv(path, cfg.column, cfg.delim), cfg.pipeline));
      }
      if (fmt == OutputFormat::json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : reps) j.push_back(to_json(r));
        detail::emit_json(out, j);
      } else {
        Table t({"asset", "P", "H", "alpha", "beta", "ci_low", "ci_high", "fb_score"});
        for (const auto& r : reps) {
          t.add({r.asset, detail::num(r.pareto_p, fmt), detail::num(r.hurst.h, fmt),
                 detail::num(r.metrics.alpha, fmt), detail::num(r.metrics.beta, fmt),
                 detail::num(r.hurst.ci_low, fmt), detail::num(r.hurst.ci_high, fmt),
                 r.fb_score ? detail::num(*r.fb_score, fmt) : std::string("nan")});
        }
        detail::emit(out, t, fmt);
      }
      return 0;
    }

    if (*sy) {
      if (const char* env = std::getenv("VOLBURG_SEED")) {
        try {
          seed = std::stoull(env);
        } catch (const std::exception&) {
          fail(ErrorKind::InvalidInput, "VOLBURG_SEED is not an unsigned integer");
        }
      }
      SynthSpec spec;
      spec.n = n;
      spec.seed = seed;
      if (kind == "ar") {
        spec.params = ArParams{coeffs, sigma};
      } else if (kind == "harmonic") {
        spec.params = HarmonicParams{freqs, amps, sigma_set ? sigma : 0.0};
      } else if (kind == "garch") {
        spec.params = gp;
      } else {
        spec.params = FgnParams{hurst_h};
      }
      std::vector<double> x = generate(spec);
      std::string name = "value";
      if (start_price) {
        require(*start_price > 0.0, ErrorKind::InvalidInput, "--prices must be positive");
        std::vector<double> prices(x.size() + 1);
        prices[0] = *start_price;
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          acc += return_scale * x[i];
          prices[i + 1] = *start_price * std::exp(acc);
        }
        x = std::move(prices);
        name = "price";
      }
      if (output.empty()) {
        detail::write_series_csv(out, name, x);
      } else {
        std::ofstream os(output);
        if (!os) fail(ErrorKind::IoError, "cannot write " + output);
        detail::write_series_csv(os, name, x);
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code(e.kind());
  }
  err << kUsage;
  return 1;
}

}  // namespace volburg::cli
