#pragma once

#include <cstdint>
#include <vector>

#include "locsim/errors.hpp"

namespace locsim {

/// Two-level colour-centre source pumped by a continuous-wave laser.
///
/// The default lifetime and pump rate are calibration choices, not measured
/// constants: together they set the antibunching dip's analytic FWHM to
/// 4 ns (pump_rate + 1/lifetime = ln2/2 per ns), and the default collection
/// efficiency then yields ~1e5 detected counts per second.
struct EmitterParams {
  double lifetime_ns = 3.5;                   // excited-state lifetime
  double pump_rate_per_ns = 0.060859305;      // ln2/2 - 1/3.5
  double blink_on_rate_per_ns = 0.0;          // OFF -> ON switching rate
  double blink_off_rate_per_ns = 0.0;         // ON -> OFF switching rate
  double collection_efficiency = 1.0;

  bool blinking_enabled() const {
    return blink_on_rate_per_ns > 0.0 && blink_off_rate_per_ns > 0.0;
  }
};

/// Photon emission timestamps, strictly increasing, all in [0, duration].
struct EmissionStream {
  std::vector<double> times_ns;
  double duration_ns = 0.0;
  std::uint64_t seed = 0;
};

/// Simulate the emitter over [0, duration_ns]. Each photon is produced by an
/// excitation wait ~ Exp(pump_rate) followed by a decay wait ~ Exp(1/lifetime),
/// then accepted with the collection efficiency. When blinking is enabled
/// (both rates positive) the emitter follows a two-state telegraph process,
/// starting ON, and photons falling in OFF intervals are dropped; the pump
/// cycle itself keeps running. Fully deterministic given the seed, and the
/// telegraph uses its own substream so enabling it does not perturb the
/// emission draws.
EmissionStream emit_stream(const EmitterParams& p, double duration_ns,
                           std::uint64_t seed);

/// Closed-form second-order correlation of the non-blinking two-level model:
/// g2(tau) = 1 - exp(-|tau| (pump_rate + 1/lifetime)). Zero at tau = 0,
/// approaching 1 for |tau| >> lifetime.
double g2_analytic(double tau_ns, const EmitterParams& p);

/// Steady-state rate (per ns) of the emission stream:
/// pump * decay / (pump + decay), scaled by the collection efficiency and,
/// when blinking is enabled, by the duty cycle on/(on+off).
double steady_state_rate(const EmitterParams& p);

/// Serialize as CSV with a single "emission_ns" column.
std::string emission_csv(const EmissionStream& s);

}  // namespace locsim
