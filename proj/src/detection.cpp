#include "locsim/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "locsim/csv.hpp"
#include "locsim/rng.hpp"

namespace locsim {

namespace {

constexpr std::uint64_t kSaltBlock = 0x70726f70;  // photon blocks
constexpr std::uint64_t kSaltDark = 0x6461726b;   // dark-count streams

void validate_channel(const ChannelParams& ch) {
  auto in01 = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  if (!in01(ch.source_to_chip_efficiency))
    throw DomainError("source_to_chip_efficiency must be in [0, 1]");
  if (!in01(ch.chip_transmission))
    throw DomainError("chip_transmission must be in [0, 1]");
  for (int d = 0; d < 4; ++d) {
    if (!in01(ch.detector_efficiency[d]))
      throw DomainError("detector_efficiency must be in [0, 1]");
    if (!(ch.jitter_sigma_ns[d] >= 0.0) || !std::isfinite(ch.jitter_sigma_ns[d]))
      throw DomainError("jitter_sigma_ns must be non-negative");
    if (!(ch.dark_rate_per_ns[d] >= 0.0) || !std::isfinite(ch.dark_rate_per_ns[d]))
      throw DomainError("dark_rate_per_ns must be non-negative");
    if (!(ch.dead_time_ns[d] >= 0.0) || !std::isfinite(ch.dead_time_ns[d]))
      throw DomainError("dead_time_ns must be non-negative");
  }
}

struct Click {
  double t;
  Truth truth;
};

// One block of emissions -> per-port photon clicks, in emission order.
void process_block(const std::vector<double>& times, std::size_t begin,
                   std::size_t end, const std::array<double, 4>& cumulative,
                   double survival, const ChannelParams& ch, Rng rng,
                   std::array<std::vector<double>, 4>& out) {
  for (std::size_t i = begin; i < end; ++i) {
    if (rng.uniform() >= survival) continue;  // port-independent loss first
    const double u = rng.uniform();
    int port = 0;
    while (port < 3 && u >= cumulative[port]) ++port;
    if (u >= cumulative[port]) continue;  // sub-unit distribution tail
    if (ch.detector_efficiency[port] < 1.0 &&
        rng.uniform() >= ch.detector_efficiency[port])
      continue;
    double t = times[i];
    if (ch.jitter_sigma_ns[port] > 0.0)
      t += ch.jitter_sigma_ns[port] * rng.gaussian();
    out[port].push_back(t);
  }
}

std::vector<DetectorRecord> run_propagation(const EmissionStream& emissions,
                                            const OutputDistribution& dist,
                                            const ChannelParams& ch,
                                            std::uint64_t seed, bool parallel) {
  validate_channel(ch);
  if (dist.probabilities.size() != 4)
    throw ModelError("propagate expects a four-mode output distribution");
  double sum = 0.0;
  for (double p : dist.probabilities) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw ModelError("output distribution probabilities must be non-negative");
    sum += p;
  }
  if (sum > 1.0 + 1e-9)
    throw ModelError(
        "output distribution probabilities exceed one; model losses via "
        "ChannelParams, not the distribution");

  std::array<double, 4> cumulative{};
  double acc = 0.0;
  for (int m = 0; m < 4; ++m) {
    acc += dist.probabilities[m];
    cumulative[m] = acc;
  }

  const double survival = ch.source_to_chip_efficiency * ch.chip_transmission;
  const std::vector<double>& times = emissions.times_ns;
  const std::size_t n = times.size();
  const std::size_t n_blocks = (n + kPropagateBlockSize - 1) / kPropagateBlockSize;
  const Rng root(seed);

  std::vector<std::array<std::vector<double>, 4>> block_out(n_blocks);

  auto do_block = [&](std::size_t b) {
    const std::size_t begin = b * kPropagateBlockSize;
    const std::size_t end = std::min(n, begin + kPropagateBlockSize);
    process_block(times, begin, end, cumulative, survival, ch,
                  root.derive(kSaltBlock).derive(b), block_out[b]);
  };

  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long long b = 0; b < static_cast<long long>(n_blocks); ++b)
      do_block(static_cast<std::size_t>(b));
  } else {
    for (std::size_t b = 0; b < n_blocks; ++b) do_block(b);
  }

  std::vector<DetectorRecord> records(4);
  for (int d = 0; d < 4; ++d) {
    records[d].detector_id = kDetectorLabels[d];

    std::vector<Click> clicks;
    std::size_t total = 0;
    for (const auto& blk : block_out) total += blk[d].size();
    clicks.reserve(total);
    for (const auto& blk : block_out)
      for (double t : blk[d]) clicks.push_back({t, Truth::Photon});

    // Dark counts: homogeneous Poisson process per detector, own substream.
    if (ch.dark_rate_per_ns[d] > 0.0) {
      Rng dark_rng = root.derive(kSaltDark).derive(static_cast<std::uint64_t>(d));
      double t = dark_rng.exponential(ch.dark_rate_per_ns[d]);
      while (t <= emissions.duration_ns) {
        clicks.push_back({t, Truth::Dark});
        t += dark_rng.exponential(ch.dark_rate_per_ns[d]);
      }
    }

    std::sort(clicks.begin(), clicks.end(), [](const Click& a, const Click& b) {
      if (a.t != b.t) return a.t < b.t;
      return a.truth < b.truth;
    });

    // Dead time: drop clicks closer than dead_time_ns to the last kept one.
    const double dead = ch.dead_time_ns[d];
    records[d].clicks_ns.reserve(clicks.size());
    records[d].truth.reserve(clicks.size());
    double last_kept = -std::numeric_limits<double>::infinity();
    for (const Click& c : clicks) {
      if (dead > 0.0 && c.t - last_kept < dead) continue;
      records[d].clicks_ns.push_back(c.t);
      records[d].truth.push_back(c.truth);
      last_kept = c.t;
    }
  }
  return records;
}

}  // namespace

char detector_label(int output_mode) {
  if (output_mode < 0 || output_mode > 3)
    throw StructureError("output mode must be 0..3");
  return kDetectorLabels[static_cast<std::size_t>(output_mode)];
}

int detector_index(char label) {
  for (int d = 0; d < 4; ++d)
    if (kDetectorLabels[static_cast<std::size_t>(d)] == label) return d;
  throw StructureError(std::string("unknown detector label '") + label + "'");
}

std::vector<DetectorRecord> propagate(const EmissionStream& emissions,
                                      const OutputDistribution& dist,
                                      const ChannelParams& ch, std::uint64_t seed) {
  return run_propagation(emissions, dist, ch, seed, /*parallel=*/true);
}

std::vector<DetectorRecord> propagate_serial(const EmissionStream& emissions,
                                             const OutputDistribution& dist,
                                             const ChannelParams& ch,
                                             std::uint64_t seed) {
  return run_propagation(emissions, dist, ch, seed, /*parallel=*/false);
}

std::array<double, 4> click_rate(const std::vector<DetectorRecord>& records,
                                 double window_ns) {
  if (!(window_ns > 0.0)) throw DomainError("rate window must be positive");
  std::array<double, 4> rates{0.0, 0.0, 0.0, 0.0};
  for (const auto& rec : records) {
    const int d = detector_index(rec.detector_id);
    std::size_t count = 0;
    for (double t : rec.clicks_ns)
      if (t >= 0.0 && t <= window_ns) ++count;
    rates[d] = static_cast<double>(count) / window_ns;
  }
  return rates;
}

std::string records_csv(const std::vector<DetectorRecord>& records) {
  std::string out = "detector,click_ns,truth\n";
  for (const auto& rec : records) {
    for (std::size_t i = 0; i < rec.clicks_ns.size(); ++i) {
      out += rec.detector_id;
      out += ',';
      out += format_double(rec.clicks_ns[i]);
      out += ',';
      out += (rec.truth[i] == Truth::Photon) ? "photon" : "dark";
      out += '\n';
    }
  }
  return out;
}

}  // namespace locsim
