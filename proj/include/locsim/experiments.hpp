#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "locsim/analysis.hpp"
#include "locsim/config.hpp"
#include "locsim/netlist.hpp"

namespace locsim {

/// Phase scan: for each phase point the netlist is elaborated, a fresh
/// emission stream is propagated and per-detector click rates recorded.
/// Writes fringe.csv and report.txt into out_dir.
struct FringeOutcome {
  FringeResult fringe;
  std::filesystem::path csv_path;
  std::filesystem::path report_path;
};
FringeOutcome run_fringe(const ExperimentConfig& cfg,
                         const std::filesystem::path& out_dir);

/// Correlation measurement between two detectors at a fixed phase.
/// Writes g2_<pair>.csv and report.txt into out_dir.
struct HbtOutcome {
  CorrelationHistogram hist;
  char det_a = 'e';
  char det_b = 'f';
  double g2_zero = 0.0;          // from the histogram (two-bin average)
  double oracle_g2_zero = 0.0;   // analytic g2 convolved with pair jitter
  bool zero_clicks = false;      // a detector saw nothing; histogram flagged
  std::array<double, 4> rates{};
  std::filesystem::path csv_path;
  std::filesystem::path report_path;
};
HbtOutcome run_hbt(const ExperimentConfig& cfg, char det_a, char det_b,
                   const std::filesystem::path& out_dir);

/// Wave/particle duality check: pins the phase to zero so that destructive
/// interference suppresses port g, then correlates h against f. The report
/// carries both the suppression ratio rate_g/rate_h and g2(0).
struct DualityOutcome {
  HbtOutcome hbt;                // h/f histogram at phi = 0
  double rate_g = 0.0;
  double rate_h = 0.0;
  double suppression_ratio = 0.0;
};
DualityOutcome run_duality(const ExperimentConfig& cfg,
                           const std::filesystem::path& out_dir);

/// Raw-stream export: emissions.csv and records.csv at the hbt phase.
struct SimulateOutcome {
  std::size_t emission_count = 0;
  std::array<std::size_t, 4> click_counts{};
  std::filesystem::path emissions_path;
  std::filesystem::path records_path;
  std::filesystem::path report_path;
};
SimulateOutcome run_simulate(const ExperimentConfig& cfg,
                             const std::filesystem::path& out_dir);

/// Netlist + config lint. Collects human-readable findings instead of
/// throwing on the first problem.
struct ValidationReport {
  bool ok = true;
  std::vector<std::string> messages;
};
ValidationReport validate_setup(const ExperimentConfig& cfg);

/// Resolve the configured input label/index against a parsed netlist.
int resolve_input_mode(const ExperimentConfig& cfg, const CircuitSpec& spec);

/// Elaborate the configured netlist at one phase value. The netlist must
/// expose at most one phase parameter; with none, the phase is ignored.
TransitionMatrix elaborate_at_phase(const CircuitSpec& spec, double phi);

}  // namespace locsim
