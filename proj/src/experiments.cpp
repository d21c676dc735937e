#include "locsim/experiments.hpp"

#include <cmath>
#include <exception>
#include <limits>

#include "locsim/csv.hpp"
#include "locsim/rng.hpp"

namespace locsim {

namespace {

constexpr std::uint64_t kSaltFringePoint = 0x66726e67;

CircuitSpec load_netlist(const ExperimentConfig& cfg) {
  const auto path = cfg.resolved_netlist();
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error& e) {
    throw ConfigError(std::string(e.what()) + " (netlist)");
  }
  return parse_netlist(text);
}

double pair_jitter_sigma(const ChannelParams& ch, int da, int db) {
  return std::hypot(ch.jitter_sigma_ns[static_cast<std::size_t>(da)],
                    ch.jitter_sigma_ns[static_cast<std::size_t>(db)]);
}

std::string describe_circuit(const CircuitSpec& spec) {
  std::string s = spec.name.empty() ? std::string("(unnamed)") : spec.name;
  s += ", " + std::to_string(spec.mode_count) + " modes, " +
       std::to_string(spec.elements.size()) + " elements";
  return s;
}

}  // namespace

int resolve_input_mode(const ExperimentConfig& cfg, const CircuitSpec& spec) {
  int mode = -1;
  const std::string& in = cfg.input_mode;
  if (in.size() == 1 && in[0] >= 'a' && in[0] <= 'd') {
    mode = cfg.input_map[static_cast<std::size_t>(in[0] - 'a')];
  } else {
    try {
      mode = std::stoi(in);
    } catch (...) {
      throw ConfigError("input_mode must be a waveguide label a..d or an index");
    }
  }
  if (mode < 0 || mode >= spec.mode_count)
    throw ConfigError("input mode " + std::to_string(mode) +
                      " out of range for a " + std::to_string(spec.mode_count) +
                      "-mode circuit");
  return mode;
}

TransitionMatrix elaborate_at_phase(const CircuitSpec& spec, double phi) {
  if (spec.phase_params.size() > 1)
    throw ModelError("experiments drive a single phase parameter; netlist has " +
                     std::to_string(spec.phase_params.size()));
  ParamBinding binding;
  if (spec.phase_params.size() == 1) binding[spec.phase_params.front()] = phi;
  return elaborate(spec, binding);
}

FringeOutcome run_fringe(const ExperimentConfig& cfg,
                         const std::filesystem::path& out_dir) {
  const CircuitSpec spec = load_netlist(cfg);
  if (spec.phase_params.size() != 1)
    throw ModelError("fringe scan requires a netlist with exactly one phase "
                     "parameter");
  if (spec.mode_count != 4)
    throw ModelError("experiments require a four-mode circuit");
  const int input_mode = resolve_input_mode(cfg, spec);

  FringeResult fr;
  const int n = cfg.fringe_points;
  fr.phis.resize(static_cast<std::size_t>(n));
  for (auto& r : fr.rates) r.resize(static_cast<std::size_t>(n));

  const Rng root(cfg.seed);
  const double span = cfg.phi_stop - cfg.phi_start;

  // Phase points are independent jobs with derived seeds; results land in
  // preallocated slots so the output order never depends on scheduling.
  // Exceptions cannot cross the OpenMP boundary, so the first one is parked
  // and rethrown after the loop.
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      const double phi =
          cfg.phi_start + span * static_cast<double>(i) / static_cast<double>(n);
      const TransitionMatrix U = elaborate_at_phase(spec, phi);
      const OutputDistribution dist = output_distribution(U, input_mode);
      const std::uint64_t point_seed =
          root.derive(kSaltFringePoint).derive(static_cast<std::uint64_t>(i))
              .next_u64();
      const EmissionStream emissions =
          emit_stream(cfg.emitter, cfg.duration_ns, point_seed);
      const auto records =
          propagate_serial(emissions, dist, cfg.channel, point_seed);
      const auto rates = click_rate(records, cfg.duration_ns);
      fr.phis[static_cast<std::size_t>(i)] = phi;
      for (int d = 0; d < 4; ++d)
        fr.rates[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)] =
            rates[static_cast<std::size_t>(d)];
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  finalize_fringe(fr);
  bool enough_phases = n >= 4;
  if (enough_phases) {
    for (int d = 0; d < 4; ++d)
      fr.fits[static_cast<std::size_t>(d)] =
          fit_fringe(fr.phis, fr.rates[static_cast<std::size_t>(d)]);
    fr.fits_valid = true;
  }

  FringeOutcome out;
  out.fringe = fr;
  out.csv_path = out_dir / "fringe.csv";
  out.report_path = out_dir / "report.txt";
  write_text_file(out.csv_path, fringe_csv(fr));

  std::string rep;
  rep += "experiment: fringe\n";
  rep += "circuit: " + describe_circuit(spec) + "\n";
  rep += "input mode: " + std::to_string(input_mode) + "\n";
  rep += "phase points: " + std::to_string(n) + " in [" +
         format_double(cfg.phi_start) + ", " + format_double(cfg.phi_stop) +
         ")\n";
  rep += "duration per point: " + format_double(cfg.duration_ns) + " ns\n";
  for (int d = 0; d < 4; ++d) {
    const auto sd = static_cast<std::size_t>(d);
    rep += std::string(1, kDetectorLabels[sd]) + ": i_max=" +
           format_double(fr.i_max[sd]) + " i_min=" + format_double(fr.i_min[sd]);
    rep += " visibility=";
    rep += fr.vis_defined[sd] ? format_double(fr.vis[sd]) : "undefined";
    if (fr.fits_valid) {
      const auto& fit = fr.fits[sd];
      rep += " fit_v=" + format_double(fit.visibility) +
             " fit_offset=" + format_double(fit.offset) +
             " fit_amplitude=" + format_double(fit.amplitude) +
             " fit_phase_origin=" + format_double(fit.phase_origin) +
             " fit_residual=" + format_double(fit.residual_norm);
    }
    rep += "\n";
  }
  write_text_file(out.report_path, rep);
  return out;
}

HbtOutcome run_hbt(const ExperimentConfig& cfg, char det_a, char det_b,
                   const std::filesystem::path& out_dir) {
  if (det_a == det_b)
    throw ModelError("correlation requires two distinct detectors");
  const int ia = detector_index(det_a);
  const int ib = detector_index(det_b);

  const CircuitSpec spec = load_netlist(cfg);
  if (spec.mode_count != 4)
    throw ModelError("experiments require a four-mode circuit");
  const int input_mode = resolve_input_mode(cfg, spec);

  const TransitionMatrix U = elaborate_at_phase(spec, cfg.hbt_phi);
  const OutputDistribution dist = output_distribution(U, input_mode);
  const EmissionStream emissions =
      emit_stream(cfg.emitter, cfg.duration_ns, cfg.seed);
  const auto records = propagate(emissions, dist, cfg.channel, cfg.seed);

  HbtOutcome out;
  out.det_a = det_a;
  out.det_b = det_b;
  out.rates = click_rate(records, cfg.duration_ns);
  out.hist = cross_correlate(records[static_cast<std::size_t>(ia)],
                             records[static_cast<std::size_t>(ib)],
                             cfg.bin_width_ns, cfg.max_tau_ns, cfg.duration_ns,
                             cfg.normalization);
  out.zero_clicks = records[static_cast<std::size_t>(ia)].clicks_ns.empty() ||
                    records[static_cast<std::size_t>(ib)].clicks_ns.empty();
  out.g2_zero = out.hist.g2_at_zero();

  const double sigma_pair = pair_jitter_sigma(cfg.channel, ia, ib);
  const EmitterParams emitter = cfg.emitter;
  out.oracle_g2_zero =
      jitter_convolve_oracle(
          [&emitter](double tau) { return g2_analytic(tau, emitter); },
          sigma_pair, {0.0})
          .front();

  const std::string pair_name = std::string(1, det_a) + det_b;
  out.csv_path = out_dir / ("g2_" + pair_name + ".csv");
  out.report_path = out_dir / "report.txt";
  write_text_file(out.csv_path, histogram_csv(out.hist));

  std::string rep;
  rep += "experiment: hbt\n";
  rep += "circuit: " + describe_circuit(spec) + "\n";
  rep += "pair: " + std::string(1, det_a) + "," + det_b + "\n";
  rep += "phi: " + format_double(cfg.hbt_phi) + "\n";
  rep += "clicks: n_" + std::string(1, det_a) + "=" +
         std::to_string(out.hist.n_start) + " n_" + det_b + "=" +
         std::to_string(out.hist.n_stop) + "\n";
  if (out.zero_clicks)
    rep += "warning: a detector recorded no clicks; g2 undefined\n";
  rep += "g2_zero: " +
         (out.hist.normalized_valid ? format_double(out.g2_zero) : "undefined") +
         "\n";
  rep += "g2_zero_analytic (pair jitter sigma " + format_double(sigma_pair) +
         " ns): " + format_double(out.oracle_g2_zero) + "\n";
  write_text_file(out.report_path, rep);
  return out;
}

DualityOutcome run_duality(const ExperimentConfig& cfg,
                           const std::filesystem::path& out_dir) {
  ExperimentConfig pinned = cfg;
  pinned.hbt_phi = 0.0;  // maximum destructive interference on port g

  DualityOutcome out;
  out.hbt = run_hbt(pinned, 'h', 'f', out_dir);
  out.rate_g = out.hbt.rates[static_cast<std::size_t>(detector_index('g'))];
  out.rate_h = out.hbt.rates[static_cast<std::size_t>(detector_index('h'))];
  out.suppression_ratio =
      out.rate_h > 0.0 ? out.rate_g / out.rate_h
                       : std::numeric_limits<double>::quiet_NaN();

  std::string rep = read_text_file(out.hbt.report_path);
  rep.replace(rep.find("experiment: hbt"), 15, "experiment: duality");
  rep += "rate_g: " + format_double(out.rate_g) + " per ns\n";
  rep += "rate_h: " + format_double(out.rate_h) + " per ns\n";
  rep += "suppression_ratio rate_g/rate_h: " +
         (out.rate_h > 0.0 ? format_double(out.suppression_ratio) : "undefined") +
         "\n";
  write_text_file(out.hbt.report_path, rep);
  return out;
}

SimulateOutcome run_simulate(const ExperimentConfig& cfg,
                             const std::filesystem::path& out_dir) {
  const CircuitSpec spec = load_netlist(cfg);
  if (spec.mode_count != 4)
    throw ModelError("experiments require a four-mode circuit");
  const int input_mode = resolve_input_mode(cfg, spec);

  const TransitionMatrix U = elaborate_at_phase(spec, cfg.hbt_phi);
  const OutputDistribution dist = output_distribution(U, input_mode);
  const EmissionStream emissions =
      emit_stream(cfg.emitter, cfg.duration_ns, cfg.seed);
  const auto records = propagate(emissions, dist, cfg.channel, cfg.seed);

  SimulateOutcome out;
  out.emission_count = emissions.times_ns.size();
  for (int d = 0; d < 4; ++d)
    out.click_counts[static_cast<std::size_t>(d)] =
        records[static_cast<std::size_t>(d)].clicks_ns.size();
  out.emissions_path = out_dir / "emissions.csv";
  out.records_path = out_dir / "records.csv";
  out.report_path = out_dir / "report.txt";
  write_text_file(out.emissions_path, emission_csv(emissions));
  write_text_file(out.records_path, records_csv(records));

  std::string rep;
  rep += "experiment: simulate\n";
  rep += "circuit: " + describe_circuit(spec) + "\n";
  rep += "phi: " + format_double(cfg.hbt_phi) + "\n";
  rep += "emissions: " + std::to_string(out.emission_count) + "\n";
  for (int d = 0; d < 4; ++d)
    rep += std::string(1, kDetectorLabels[static_cast<std::size_t>(d)]) +
           " clicks: " +
           std::to_string(out.click_counts[static_cast<std::size_t>(d)]) + "\n";
  write_text_file(out.report_path, rep);
  return out;
}

ValidationReport validate_setup(const ExperimentConfig& cfg) {
  ValidationReport report;
  auto note = [&report](bool ok, const std::string& msg) {
    report.ok = report.ok && ok;
    report.messages.push_back((ok ? "ok: " : "error: ") + msg);
  };

  CircuitSpec spec;
  try {
    spec = load_netlist(cfg);
    note(true, "netlist parses (" + describe_circuit(spec) + ")");
  } catch (const Error& e) {
    note(false, std::string("netlist: ") + e.what());
    return report;
  }

  try {
    const TransitionMatrix U = elaborate_at_phase(spec, 0.0);
    const double defect = U.unitarity_defect();
    note(defect < 1e-10,
         "elaborated matrix unitary (defect " + format_double(defect) + ")");
  } catch (const Error& e) {
    note(false, std::string("elaboration: ") + e.what());
  }

  try {
    const int mode = resolve_input_mode(cfg, spec);
    note(true, "input mode resolves to " + std::to_string(mode));
  } catch (const Error& e) {
    note(false, e.what());
  }

  if (spec.mode_count != 4)
    note(false, "experiments require a four-mode circuit, netlist has " +
                    std::to_string(spec.mode_count));
  if (spec.phase_params.size() != 1)
    note(false,
         "fringe/duality expect exactly one phase parameter, netlist has " +
             std::to_string(spec.phase_params.size()));

  try {
    (void)emit_stream(cfg.emitter, 1.0, cfg.seed);
    note(true, "emitter parameters valid");
  } catch (const Error& e) {
    note(false, std::string("emitter: ") + e.what());
  }

  return report;
}

}  // namespace locsim
