#include "locsim/emitter.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "locsim/csv.hpp"
#include "locsim/rng.hpp"

namespace locsim {

namespace {

constexpr std::uint64_t kSaltEmission = 0x656d6974;  // emission draws
constexpr std::uint64_t kSaltBlink = 0x626c6e6b;     // telegraph draws

void validate(const EmitterParams& p) {
  if (!(p.lifetime_ns > 0.0) || !std::isfinite(p.lifetime_ns))
    throw DomainError("emitter lifetime must be positive");
  if (p.pump_rate_per_ns < 0.0 || !std::isfinite(p.pump_rate_per_ns))
    throw DomainError("pump rate must be non-negative");
  if (p.blink_on_rate_per_ns < 0.0 || p.blink_off_rate_per_ns < 0.0)
    throw DomainError("blinking rates must be non-negative");
  if (!(p.collection_efficiency >= 0.0 && p.collection_efficiency <= 1.0))
    throw DomainError("collection efficiency must be in [0, 1]");
}

}  // namespace

EmissionStream emit_stream(const EmitterParams& p, double duration_ns,
                           std::uint64_t seed) {
  validate(p);
  if (!(duration_ns > 0.0)) throw DomainError("duration must be positive");

  EmissionStream stream;
  stream.duration_ns = duration_ns;
  stream.seed = seed;
  if (p.pump_rate_per_ns == 0.0) return stream;

  Rng rng = Rng(seed).derive(kSaltEmission);
  Rng blink_rng = Rng(seed).derive(kSaltBlink);
  const double decay_rate = 1.0 / p.lifetime_ns;
  const bool blinking = p.blinking_enabled();

  bool on = true;  // telegraph starts in the bright state
  double next_switch = blinking ? blink_rng.exponential(p.blink_off_rate_per_ns)
                                : std::numeric_limits<double>::infinity();

  const double expected = duration_ns * steady_state_rate(p);
  stream.times_ns.reserve(static_cast<std::size_t>(expected * 1.05) + 16);

  double t = 0.0;
  while (true) {
    t += rng.exponential(p.pump_rate_per_ns);  // wait for excitation
    t += rng.exponential(decay_rate);          // wait for decay
    if (t > duration_ns) break;

    while (next_switch <= t) {
      on = !on;
      next_switch += blink_rng.exponential(on ? p.blink_off_rate_per_ns
                                              : p.blink_on_rate_per_ns);
    }
    if (!on) continue;
    if (p.collection_efficiency < 1.0 &&
        rng.uniform() >= p.collection_efficiency)
      continue;

    // Rounding of tiny gaps onto a large t could produce equal timestamps.
    double emit_t = t;
    if (!stream.times_ns.empty() && emit_t <= stream.times_ns.back())
      emit_t = std::nextafter(stream.times_ns.back(),
                              std::numeric_limits<double>::infinity());
    stream.times_ns.push_back(emit_t);
  }
  return stream;
}

double g2_analytic(double tau_ns, const EmitterParams& p) {
  validate(p);
  const double rate_sum = p.pump_rate_per_ns + 1.0 / p.lifetime_ns;
  return 1.0 - std::exp(-std::abs(tau_ns) * rate_sum);
}

double steady_state_rate(const EmitterParams& p) {
  validate(p);
  if (p.pump_rate_per_ns == 0.0) return 0.0;
  const double decay_rate = 1.0 / p.lifetime_ns;
  double rate = p.pump_rate_per_ns * decay_rate / (p.pump_rate_per_ns + decay_rate);
  rate *= p.collection_efficiency;
  if (p.blinking_enabled())
    rate *= p.blink_on_rate_per_ns /
            (p.blink_on_rate_per_ns + p.blink_off_rate_per_ns);
  return rate;
}

std::string emission_csv(const EmissionStream& s) {
  std::string out = "emission_ns\n";
  for (double t : s.times_ns) {
    out += format_double(t);
    out += '\n';
  }
  return out;
}

}  // namespace locsim
