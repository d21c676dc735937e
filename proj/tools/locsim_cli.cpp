// Command-line front end: drives the fringe, hbt, duality and raw-stream
// experiments from a config file and writes CSV/report outputs.

#include <cstdio>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "locsim/csv.hpp"
#include "locsim/experiments.hpp"

namespace {

// Exit codes: 0 success, 1 usage, 2 config error, 3 netlist parse error,
// 4 runtime model error.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kConfigError = 2,
  kNetlistError = 3,
  kModelError = 4,
};

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::string netlist_override;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "Config file path")
      ->required();
  cmd->add_option("--out", opts.out_dir, "Output directory");
  cmd->add_option("--netlist", opts.netlist_override,
                  "Netlist path (overrides the config)");
  cmd->add_option("--seed", opts.seed, "Random seed (overrides the config)")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
}

locsim::ExperimentConfig load(const CommonOpts& opts) {
  locsim::ExperimentConfig cfg = locsim::load_config(opts.config_path);
  if (!opts.netlist_override.empty()) {
    cfg.netlist_path = opts.netlist_override;
    cfg.base_dir = std::filesystem::current_path();
  }
  if (opts.seed_set) cfg.seed = opts.seed;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-photon linear optical circuit simulator"};
  app.require_subcommand(1);

  CommonOpts fringe_opts, hbt_opts, duality_opts, simulate_opts, validate_opts;
  std::string hbt_pair_override;

  CLI::App* fringe = app.add_subcommand("fringe", "Phase scan of output rates");
  add_common(fringe, fringe_opts);

  CLI::App* hbt =
      app.add_subcommand("hbt", "Correlation histogram between two detectors");
  add_common(hbt, hbt_opts);
  hbt->add_option("--pair", hbt_pair_override,
                  "Detector pair, e.g. 'ef' (overrides the config)");

  CLI::App* duality = app.add_subcommand(
      "dualty-check", "Interference suppression plus h/f correlation at phi=0");
  duality->alias("duality");
  add_common(duality, duality_opts);

  CLI::App* simulate =
      app.add_subcommand("simulate", "Export raw emission and click streams");
  add_common(simulate, simulate_opts);

  CLI::App* validate =
      app.add_subcommand("validate", "Lint a config and its netlist");
  add_common(validate, validate_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    if (fringe->parsed()) {
      const auto cfg = load(fringe_opts);
      const auto out = locsim::run_fringe(cfg, fringe_opts.out_dir);
      std::printf("wrote %s\n", out.csv_path.string().c_str());
      std::printf("wrote %s\n", out.report_path.string().c_str());
      for (int d = 0; d < 4; ++d) {
        const auto sd = static_cast<std::size_t>(d);
        if (out.fringe.fits_valid)
          std::printf("V_%c (fit) = %s\n", locsim::kDetectorLabels[sd],
                      locsim::format_double(out.fringe.fits[sd].visibility).c_str());
      }
    } else if (hbt->parsed()) {
      auto cfg = load(hbt_opts);
      if (!hbt_pair_override.empty()) {
        if (hbt_pair_override.size() != 2)
          throw locsim::ConfigError("--pair expects two detector labels");
        cfg.hbt_pair = hbt_pair_override;
      }
      const auto out =
          locsim::run_hbt(cfg, cfg.hbt_pair[0], cfg.hbt_pair[1], hbt_opts.out_dir);
      std::printf("wrote %s\n", out.csv_path.string().c_str());
      std::printf("wrote %s\n", out.report_path.string().c_str());
      std::printf("g2(0) = %s (analytic %s)\n",
                  locsim::format_double(out.g2_zero).c_str(),
                  locsim::format_double(out.oracle_g2_zero).c_str());
    } else if (duality->parsed()) {
      const auto cfg = load(duality_opts);
      const auto out = locsim::run_duality(cfg, duality_opts.out_dir);
      std::printf("wrote %s\n", out.hbt.csv_path.string().c_str());
      std::printf("wrote %s\n", out.hbt.report_path.string().c_str());
      std::printf("suppression rate_g/rate_h = %s, g2(0) = %s\n",
                  locsim::format_double(out.suppression_ratio).c_str(),
                  locsim::format_double(out.hbt.g2_zero).c_str());
    } else if (simulate->parsed()) {
      const auto cfg = load(simulate_opts);
      const auto out = locsim::run_simulate(cfg, simulate_opts.out_dir);
      std::printf("wrote %s\n", out.emissions_path.string().c_str());
      std::printf("wrote %s\n", out.records_path.string().c_str());
    } else if (validate->parsed()) {
      const auto cfg = load(validate_opts);
      const auto report = locsim::validate_setup(cfg);
      for (const auto& msg : report.messages) std::printf("%s\n", msg.c_str());
      if (!report.ok) return kModelError;
      std::printf("validation passed\n");
    }
  } catch (const locsim::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const locsim::ParseError& e) {
    std::fprintf(stderr, "netlist error: %s\n", e.what());
    return kNetlistError;
  } catch (const locsim::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kModelError;
  }
  return kOk;
}
