#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "locsim/emitter.hpp"
#include "locsim/linalg.hpp"

namespace locsim {

/// Loss budget and detector imperfections for the four output channels.
/// The channel applies, in order: a port-independent survival factor
/// (source coupling times chip transmission), port sampling from the output
/// distribution, the chosen port's detector efficiency, Gaussian timing
/// jitter, added dark counts, and finally a dead-time filter.
struct ChannelParams {
  double source_to_chip_efficiency = 1.0;
  double chip_transmission = 1.0;
  std::array<double, 4> detector_efficiency{1.0, 1.0, 1.0, 1.0};
  std::array<double, 4> jitter_sigma_ns{0.0, 0.0, 0.0, 0.0};   // Gaussian RMS
  std::array<double, 4> dark_rate_per_ns{0.0, 0.0, 0.0, 0.0};
  std::array<double, 4> dead_time_ns{0.0, 0.0, 0.0, 0.0};
};

enum class Truth : std::uint8_t { Photon, Dark };

/// Click stream of one detector, ascending in time after finalization.
struct DetectorRecord {
  char detector_id = '?';          // 'e', 'f', 'g' or 'h'
  std::vector<double> clicks_ns;
  std::vector<Truth> truth;        // parallel to clicks_ns
};

inline constexpr std::array<char, 4> kDetectorLabels{'e', 'f', 'g', 'h'};

/// Detector label for an output mode index (0..3 -> e..h).
char detector_label(int output_mode);

/// Output mode index for a detector label; throws StructureError otherwise.
int detector_index(char label);

/// Photons are processed in blocks of this many emissions, each with its
/// own random substream, so results are identical for any thread count.
inline constexpr std::size_t kPropagateBlockSize = 16384;

/// Propagate every emission through the circuit output distribution and the
/// channel to per-detector click records. `dist` must cover exactly the four
/// output modes and its probabilities must not exceed one (loss belongs in
/// ChannelParams, not in the distribution). Deterministic given the seed.
/// Parallelized over emission blocks with OpenMP when available.
std::vector<DetectorRecord> propagate(const EmissionStream& emissions,
                                      const OutputDistribution& dist,
                                      const ChannelParams& ch, std::uint64_t seed);

/// Single-threaded reference implementation; produces output bit-identical
/// to propagate() and is kept for testing and benchmarking.
std::vector<DetectorRecord> propagate_serial(const EmissionStream& emissions,
                                             const OutputDistribution& dist,
                                             const ChannelParams& ch,
                                             std::uint64_t seed);

/// Clicks per nanosecond per detector, counted over [0, window_ns].
std::array<double, 4> click_rate(const std::vector<DetectorRecord>& records,
                                 double window_ns);

/// CSV with columns "detector,click_ns,truth", detectors in e..h order.
std::string records_csv(const std::vector<DetectorRecord>& records);

}  // namespace locsim
