#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>

#include "locsim/analysis.hpp"
#include "locsim/detection.hpp"
#include "locsim/emitter.hpp"

namespace locsim {

/// Full description of a simulation run, loaded from a sectioned key=value
/// config file. Paths are resolved relative to the config file's directory.
struct ExperimentConfig {
  // [circuit]
  std::filesystem::path netlist_path;
  std::string input_mode = "a";          // waveguide label a..d or mode index
  std::array<int, 4> input_map{0, 1, 2, 3};  // labels a..d -> mode indices

  // [emitter] / [channel]
  EmitterParams emitter;
  ChannelParams channel;

  // [run]
  std::uint64_t seed = 1;
  double duration_ns = 1e7;

  // [fringe]
  double phi_start = 0.0;
  double phi_stop = 6.283185307179586;   // endpoint excluded
  int fringe_points = 32;

  // [hbt] (shared by the duality experiment's histogram)
  std::string hbt_pair = "ef";
  double hbt_phi = 0.0;
  double bin_width_ns = 0.25;
  double max_tau_ns = 40.0;
  Normalization normalization = Normalization::LongDelay;

  std::filesystem::path base_dir;        // directory of the config file

  /// netlist_path resolved against base_dir when relative.
  std::filesystem::path resolved_netlist() const;
};

/// Parse and validate a config file. Unknown sections or keys are errors so
/// typos cannot silently fall back to defaults. Throws ConfigError with
/// file/line context.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Parse config text (for tests); base_dir is used for relative paths.
ExperimentConfig parse_config(const std::string& text,
                              const std::filesystem::path& base_dir,
                              const std::string& origin_name);

}  // namespace locsim
