// Benchmark comparing the OpenMP kernels against their serial reference
// implementations on a representative workload: photon propagation through
// the chip and the pair-correlation histogram. Both paths must produce
// identical results; the checksum column makes a silent divergence visible.

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "locsim/analysis.hpp"
#include "locsim/detection.hpp"
#include "locsim/emitter.hpp"
#include "locsim/linalg.hpp"

using namespace locsim;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(
             clock::now().time_since_epoch())
      .count();
}

double checksum_records(const std::vector<DetectorRecord>& records) {
  double acc = 0.0;
  for (const auto& r : records) {
    acc += static_cast<double>(r.clicks_ns.size());
    if (!r.clicks_ns.empty()) acc += r.clicks_ns.back();
  }
  return acc;
}

double checksum_hist(const CorrelationHistogram& h) {
  double acc = 0.0;
  for (auto c : h.counts) acc += static_cast<double>(c);
  return acc;
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const double t0 = now_ms();
    f();
    best = std::min(best, now_ms() - t0);
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  double duration_ns = 4e7;  // ~2e6 emissions at the default rate
  if (argc > 1) duration_ns = std::stod(argv[1]);

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (compiled without OpenMP)\n");
#endif

  const EmitterParams emitter;  // defaults: 4 ns dip, full collection
  const ChannelParams channel;
  const std::uint64_t seed = 42;

  const EmissionStream emissions = emit_stream(emitter, duration_ns, seed);
  std::printf("emissions: %zu over %.3g ns\n", emissions.times_ns.size(),
              duration_ns);

  const OutputDistribution dist =
      output_distribution(chip_unitary({0.0}), kChipInputA);

  std::vector<DetectorRecord> serial_records, parallel_records;
  const double t_prop_serial = time_best_of(3, [&] {
    serial_records = propagate_serial(emissions, dist, channel, seed);
  });
  const double t_prop_parallel = time_best_of(3, [&] {
    parallel_records = propagate(emissions, dist, channel, seed);
  });

  CorrelationHistogram serial_hist, parallel_hist;
  const double t_corr_serial = time_best_of(3, [&] {
    serial_hist = cross_correlate_serial(serial_records[0], serial_records[1],
                                         0.25, 40.0, duration_ns);
  });
  const double t_corr_parallel = time_best_of(3, [&] {
    parallel_hist = cross_correlate(parallel_records[0], parallel_records[1],
                                    0.25, 40.0, duration_ns);
  });

  std::printf("%-16s %12s %12s %9s %14s\n", "kernel", "serial (ms)",
              "openmp (ms)", "speedup", "checksums");
  std::printf("%-16s %12.2f %12.2f %8.2fx %.6g / %.6g\n", "propagate",
              t_prop_serial, t_prop_parallel, t_prop_serial / t_prop_parallel,
              checksum_records(serial_records), checksum_records(parallel_records));
  std::printf("%-16s %12.2f %12.2f %8.2fx %.6g / %.6g\n", "cross_correlate",
              t_corr_serial, t_corr_parallel, t_corr_serial / t_corr_parallel,
              checksum_hist(serial_hist), checksum_hist(parallel_hist));

  const bool identical =
      checksum_records(serial_records) == checksum_records(parallel_records) &&
      serial_hist.counts == parallel_hist.counts;
  std::printf("serial/openmp outputs identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
