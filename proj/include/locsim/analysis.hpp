#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "locsim/detection.hpp"

namespace locsim {

/// How a correlation histogram is turned into a g2 estimate.
/// LongDelay divides each bin by n_a*n_b*bin/duration (the value an
/// uncorrelated pair of streams would show); Plateau divides by the mean
/// count of the outer 20% of bins.
enum class Normalization { LongDelay, Plateau };

/// Binned coincidence counts versus delay tau = t_b - t_a over the
/// symmetric window [-max_tau, max_tau), with half-open bins
/// [-T + k*bin, -T + (k+1)*bin).
struct CorrelationHistogram {
  double bin_width_ns = 0.0;
  double max_tau_ns = 0.0;
  std::vector<std::int64_t> counts;
  std::int64_t n_start = 0;  // clicks in the first input stream
  std::int64_t n_stop = 0;   // clicks in the second input stream
  double duration_ns = 0.0;
  std::vector<double> normalized;   // per-bin g2 estimate
  bool normalized_valid = false;    // false when an input stream was empty
  Normalization normalization = Normalization::LongDelay;

  std::size_t bin_count() const { return counts.size(); }
  double tau_center(std::size_t k) const {
    return -max_tau_ns + (static_cast<double>(k) + 0.5) * bin_width_ns;
  }
  /// g2 estimate at zero delay: the mean of the two bins adjacent to tau=0
  /// (bin edges fall on zero since max_tau is a multiple of the bin width).
  double g2_at_zero() const;
};

/// Full pair correlation between two sorted click streams: every pair with
/// |t_b - t_a| inside the window is counted, not just nearest neighbours.
/// Uses a sorted two-pointer sweep, O(n + pairs), parallelized over the
/// first stream with OpenMP when available (bin counts are integers, so the
/// parallel merge is exact). max_tau must be a positive multiple of
/// bin_width; unsorted inputs raise StructureError. Empty inputs produce a
/// zero histogram flagged normalized_valid = false.
CorrelationHistogram cross_correlate(const DetectorRecord& a,
                                     const DetectorRecord& b, double bin_width_ns,
                                     double max_tau_ns, double duration_ns,
                                     Normalization norm = Normalization::LongDelay);

/// Single-threaded reference; bit-identical output, kept for testing.
CorrelationHistogram cross_correlate_serial(
    const DetectorRecord& a, const DetectorRecord& b, double bin_width_ns,
    double max_tau_ns, double duration_ns,
    Normalization norm = Normalization::LongDelay);

/// Numerically convolve an analytic g2 curve with a Gaussian timing kernel
/// of width sigma_pair (for two independent detectors, sqrt(2) times the
/// per-detector sigma). Trapezoidal integration, kernel truncated at six
/// sigma and renormalized so constants are preserved exactly. Serves as the
/// independent prediction for jitter-broadened histograms.
std::vector<double> jitter_convolve_oracle(const std::function<double(double)>& g2,
                                           double sigma_pair_ns,
                                           const std::vector<double>& tau_grid);

/// Fringe contrast (i_max - i_min) / (i_max + i_min).
/// Requires i_max >= i_min >= 0 and not both zero (DomainError otherwise).
double visibility(double i_max, double i_min);

/// Least-squares fit of rate(phi) = offset + amplitude*cos(phi - phase_origin).
struct FringeFit {
  double amplitude = 0.0;
  double offset = 0.0;
  double phase_origin = 0.0;
  double visibility = 0.0;  // amplitude/offset clamped to [0, 1]
  double residual_norm = 0.0;
};

/// Fit the cosine model by linear least squares on (1, cos, sin).
/// Needs at least four samples with at least three distinct phases mod 2*pi;
/// a degenerate design raises ModelError.
FringeFit fit_fringe(const std::vector<double>& phis,
                     const std::vector<double>& rates);

/// Phase scan outcome: click rates per detector at each phase, with
/// per-detector extrema, visibility, and cosine fits.
struct FringeResult {
  std::vector<double> phis;
  std::array<std::vector<double>, 4> rates;   // indexed by detector e..h
  std::array<double, 4> i_max{};
  std::array<double, 4> i_min{};
  std::array<double, 4> vis{};                // from extrema; NaN if undefined
  std::array<bool, 4> vis_defined{};
  std::array<FringeFit, 4> fits{};
  bool fits_valid = false;                    // set when a fit was possible
};

/// Compute extrema and visibility columns of a fringe result in place.
void finalize_fringe(FringeResult& fr);

/// CSV with columns "tau_ns,counts,g2" (tau at bin centers).
std::string histogram_csv(const CorrelationHistogram& h);

/// CSV with columns "phi_rad,rate_e,rate_f,rate_g,rate_h".
std::string fringe_csv(const FringeResult& fr);

}  // namespace locsim
