#pragma once

// Command-line front end. Exit codes:
//   0 success, 1 usage/config error, 2 numerical failure, 3 validation failed.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pathloss/channel.hpp"
#include "pathloss/config.hpp"
#include "pathloss/csv.hpp"
#include "pathloss/density.hpp"
#include "pathloss/error.hpp"
#include "pathloss/montecarlo.hpp"
#include "pathloss/spatial.hpp"

namespace pathloss::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kNumerical = 2, kVerdictFail = 3 };

struct RunConfig {
  std::string command;
  std::string preset_name;
  std::string config_path;
  double sigma_m = 0.0;
  std::optional<double> sigma_psi_override;
  std::optional<double> from_db;
  std::optional<double> to_db;
  double step_db = 0.25;
  std::size_t n = 10000;
  std::uint64_t seed = 0;
  std::optional<std::size_t> bins;
  std::optional<double> ks_threshold;
  std::string method = "auto";
  std::string output = "-";
  std::string report;
};

namespace detail {

inline ChannelModel resolve_channel(const RunConfig& cfg, std::ostream& err) {
  ChannelModel channel = cfg.preset_name.empty() ? load_channel_config(cfg.config_path)
                                                 : preset(cfg.preset_name);
  if (cfg.sigma_psi_override) {
    if (!(*cfg.sigma_psi_override >= 0.0)) throw config_error("--sigma-psi must be >= 0");
    channel.sigma_psi = *cfg.sigma_psi_override;
    channel.sigma_psi_assumed = false;
  }
  if (channel.sigma_psi_assumed) {
    err << "note: " << channel.name << " shadowing SD " << format_number(channel.sigma_psi)
        << " dB is an assumed default; override with --sigma-psi\n";
  }
  return channel;
}

inline LossGrid resolve_grid(const RunConfig& cfg, const ChannelModel& channel,
                             const SpatialModel& spatial) {
  if (cfg.from_db.has_value() != cfg.to_db.has_value()) {
    throw config_error("--from and --to must be given together");
  }
  if (!(cfg.step_db > 0.0)) throw config_error("--step must be > 0");
  if (!cfg.from_db) return default_grid(channel, spatial, cfg.step_db);
  if (!(*cfg.from_db < *cfg.to_db)) throw config_error("--from must be less than --to");
  return {*cfg.from_db, *cfg.to_db, cfg.step_db};
}

inline void write_presets(const RunConfig& cfg, std::ostream& out) {
  std::vector<Row> rows;
  for (auto name : kPresetNames) {
    const auto m = preset(name);
    rows.push_back({std::string(name), m.alpha_hat(), m.alpha_eff, m.beta, m.r0, m.sigma_psi,
                    std::string(m.sigma_psi_assumed ? "assumed" : "table"),
                    m.cell_radius_range->first, m.cell_radius_range->second});
  }
  write_table(rows,
              "name,alpha_hat_db,alpha_eff_db,beta_db_per_decade,r0_m,sigma_psi_db,"
              "sigma_psi_source,cell_radius_min_m,cell_radius_max_m",
              cfg.output, out);
}

inline std::string render_report(const ComparisonReport& r) {
  std::ostringstream os;
  os << "channel=" << r.channel_name << '\n'
     << "sigma_m=" << format_number(r.sigma_m) << '\n'
     << "n=" << r.n << '\n'
     << "seed=" << r.seed << '\n'
     << "bins=" << r.bins.size() << '\n'
     << "ks_statistic=" << format_number(r.ks_statistic) << '\n'
     << "cdf_sup_norm=" << format_number(r.cdf_sup_norm) << '\n'
     << "ks_threshold=" << format_number(r.ks_threshold) << '\n'
     << "verdict=" << (r.passed ? "pass" : "fail") << '\n'
     << "mass_inside_close_in=" << format_number(r.mass_inside_close_in) << '\n';
  return os.str();
}

inline int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.command == "presets") {
    write_presets(cfg, out);
    return kOk;
  }
  if (cfg.preset_name.empty() == cfg.config_path.empty()) {
    throw config_error("give exactly one of --preset or --config");
  }
  const ChannelModel channel = resolve_channel(cfg, err);
  const SpatialModel spatial(cfg.sigma_m);

  if (cfg.command == "pdf" || cfg.command == "cdf") {
    const auto grid = resolve_grid(cfg, channel, spatial);
    const auto choice = parse_method(cfg.method);
    std::vector<Row> rows;
    rows.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double l = grid.at(i);
      if (cfg.command == "pdf") {
        const auto d = pl_pdf(l, channel, spatial, choice);
        rows.push_back({l, d.value, std::string(to_string(d.method)), d.est_error});
      } else {
        rows.push_back({l, pl_cdf(l, channel, spatial).value});
      }
    }
    err << "P(R < r0) = " << format_number(mass_inside_close_in(channel, spatial)) << '\n';
    write_table(rows, cfg.command == "pdf" ? kPdfHeader : kCdfHeader, cfg.output, out);
    return kOk;
  }

  if (cfg.command == "sample") {
    const auto set = simulate(channel, spatial, cfg.n, cfg.seed);
    std::vector<Row> rows;
    rows.reserve(set.records.size());
    for (const auto& r : set.records) rows.push_back({r.x, r.y, r.r, r.w, r.psi, r.l});
    write_table(rows, kSampleHeader, cfg.output, out);
    return kOk;
  }

  // validate
  if (cfg.bins && *cfg.bins < 2) throw config_error("--bins must be >= 2");
  const auto report = validate(channel, spatial, cfg.n, cfg.seed, cfg.bins, cfg.ks_threshold);
  std::vector<Row> rows;
  rows.reserve(report.bins.size());
  for (const auto& b : report.bins) rows.push_back({b.center, b.empirical, b.analytic});
  write_table(rows, kValidateHeader, cfg.output, out);
  const auto text = render_report(report);
  if (cfg.report.empty()) {
    err << text;
  } else {
    std::ofstream file(cfg.report, std::ios::binary | std::ios::trunc);
    if (!file) throw config_error("cannot open report file '" + cfg.report + "' for writing");
    file << text;
  }
  return report.passed ? kOk : kVerdictFail;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Path-loss distribution for circular Gaussian node drops", "pathloss"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_channel = [&](CLI::App* sub) {
    auto* p = sub->add_option("--preset", cfg.preset_name,
                              "channel preset: suburban_macro, urban_macro, urban_micro_nlos, urban_micro_los");
    auto* c = sub->add_option("--config", cfg.config_path, "channel config file (key = value)");
    p->excludes(c);
    sub->add_option("--sigma", cfg.sigma_m, "spatial SD per axis [m]")->required();
    sub->add_option("--sigma-psi", cfg.sigma_psi_override, "override shadowing SD [dB]");
    sub->add_option("-o,--output", cfg.output, "output CSV path ('-' for stdout)");
  };

  auto* presets = app.add_subcommand("presets", "list the IEEE 802.20 channel presets");
  presets->add_option("-o,--output", cfg.output, "output CSV path ('-' for stdout)");

  for (const char* name : {"pdf", "cdf"}) {
    auto* sub = app.add_subcommand(name, std::string("tabulate the path-loss ") + name);
    add_channel(sub);
    sub->add_option("--from", cfg.from_db, "first loss value [dB]");
    sub->add_option("--to", cfg.to_db, "last loss value [dB]");
    sub->add_option("--step", cfg.step_db, "grid step [dB]");
    if (std::string(name) == "pdf") {
      sub->add_option("--method", cfg.method, "auto, series or quadrature")
          ->check(CLI::IsMember({"auto", "series", "quadrature"}));
    }
  }

  auto* sample = app.add_subcommand("sample", "draw Monte Carlo node/loss samples");
  add_channel(sample);
  sample->add_option("--n", cfg.n, "number of samples");
  sample->add_option("--seed", cfg.seed, "master seed");

  auto* validate_cmd = app.add_subcommand("validate", "compare analytic and Monte Carlo distributions");
  add_channel(validate_cmd);
  validate_cmd->add_option("--n", cfg.n, "number of samples");
  validate_cmd->add_option("--seed", cfg.seed, "master seed");
  validate_cmd->add_option("--bins", cfg.bins, "histogram bins (default: Rice rule)");
  validate_cmd->add_option("--threshold", cfg.ks_threshold, "KS pass threshold (default 1.63/sqrt(n))");
  validate_cmd->add_option("--report", cfg.report, "write the summary report here instead of stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kUsage;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try {
    return detail::execute(cfg, out, err);
  } catch (const numerical_failure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const config_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace pathloss::cli
