#include "locsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "locsim/csv.hpp"

namespace locsim {

namespace {

bool is_ascending(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1]) return false;
  return true;
}

std::size_t bin_count_checked(double bin_width_ns, double max_tau_ns) {
  if (!(bin_width_ns > 0.0)) throw StructureError("bin width must be positive");
  if (!(max_tau_ns > 0.0)) throw StructureError("max tau must be positive");
  const double ratio = max_tau_ns / bin_width_ns;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw StructureError("max_tau must be a multiple of bin_width");
  return static_cast<std::size_t>(2.0 * rounded);
}

void normalize_histogram(CorrelationHistogram& h) {
  const std::size_t nbins = h.counts.size();
  h.normalized.assign(nbins, 0.0);
  h.normalized_valid = false;
  if (h.n_start == 0 || h.n_stop == 0) return;

  if (h.normalization == Normalization::LongDelay) {
    const double denom = static_cast<double>(h.n_start) *
                         static_cast<double>(h.n_stop) * h.bin_width_ns /
                         h.duration_ns;
    if (denom <= 0.0) return;
    for (std::size_t k = 0; k < nbins; ++k)
      h.normalized[k] = static_cast<double>(h.counts[k]) / denom;
    h.normalized_valid = true;
  } else {
    // Plateau: average the outer 20% of bins on each side.
    const std::size_t edge = std::max<std::size_t>(1, nbins / 10);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < edge; ++k) {
      sum += static_cast<double>(h.counts[k]);
      sum += static_cast<double>(h.counts[nbins - 1 - k]);
      n += 2;
    }
    const double plateau = sum / static_cast<double>(n);
    if (plateau <= 0.0) return;
    for (std::size_t k = 0; k < nbins; ++k)
      h.normalized[k] = static_cast<double>(h.counts[k]) / plateau;
    h.normalized_valid = true;
  }
}

CorrelationHistogram correlate_impl(const DetectorRecord& a,
                                    const DetectorRecord& b, double bin_width_ns,
                                    double max_tau_ns, double duration_ns,
                                    Normalization norm, bool parallel) {
  if (!is_ascending(a.clicks_ns) || !is_ascending(b.clicks_ns))
    throw StructureError("cross_correlate requires sorted click streams");
  if (!(duration_ns > 0.0)) throw StructureError("duration must be positive");

  CorrelationHistogram h;
  h.bin_width_ns = bin_width_ns;
  h.max_tau_ns = max_tau_ns;
  h.duration_ns = duration_ns;
  h.normalization = norm;
  h.n_start = static_cast<std::int64_t>(a.clicks_ns.size());
  h.n_stop = static_cast<std::int64_t>(b.clicks_ns.size());
  const std::size_t nbins = bin_count_checked(bin_width_ns, max_tau_ns);
  h.counts.assign(nbins, 0);

  const std::vector<double>& ta = a.clicks_ns;
  const std::vector<double>& tb = b.clicks_ns;
  const std::size_t na = ta.size();
  const std::size_t nb = tb.size();

  if (na > 0 && nb > 0) {
    auto sweep_range = [&](std::size_t i_begin, std::size_t i_end,
                           std::vector<std::int64_t>& counts) {
      // lo/hi bracket the window [t_a - T, t_a + T); both only move forward.
      std::size_t lo = static_cast<std::size_t>(
          std::lower_bound(tb.begin(), tb.end(), ta[i_begin] - max_tau_ns) -
          tb.begin());
      std::size_t hi = lo;
      for (std::size_t i = i_begin; i < i_end; ++i) {
        const double t = ta[i];
        while (lo < nb && tb[lo] < t - max_tau_ns) ++lo;
        if (hi < lo) hi = lo;
        while (hi < nb && tb[hi] < t + max_tau_ns) ++hi;
        for (std::size_t j = lo; j < hi; ++j) {
          const double tau = tb[j] - t;
          const auto k = static_cast<std::size_t>((tau + max_tau_ns) / bin_width_ns);
          if (k < nbins) ++counts[k];
        }
      }
    };

    if (parallel && na > 4096) {
#ifdef _OPENMP
      const std::size_t chunk = 4096;
      const std::size_t n_chunks = (na + chunk - 1) / chunk;
      std::vector<std::vector<std::int64_t>> partial(
          n_chunks, std::vector<std::int64_t>(nbins, 0));
#pragma omp parallel for schedule(dynamic)
      for (long long c = 0; c < static_cast<long long>(n_chunks); ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * chunk;
        sweep_range(begin, std::min(na, begin + chunk),
                    partial[static_cast<std::size_t>(c)]);
      }
      for (const auto& p : partial)
        for (std::size_t k = 0; k < nbins; ++k) h.counts[k] += p[k];
#else
      sweep_range(0, na, h.counts);
#endif
    } else {
      sweep_range(0, na, h.counts);
    }
  }

  normalize_histogram(h);
  return h;
}

}  // namespace

double CorrelationHistogram::g2_at_zero() const {
  if (!normalized_valid || counts.empty())
    return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = counts.size() / 2;  // bin starting at tau = 0
  return 0.5 * (normalized[mid - 1] + normalized[mid]);
}

CorrelationHistogram cross_correlate(const DetectorRecord& a,
                                     const DetectorRecord& b, double bin_width_ns,
                                     double max_tau_ns, double duration_ns,
                                     Normalization norm) {
  return correlate_impl(a, b, bin_width_ns, max_tau_ns, duration_ns, norm,
                        /*parallel=*/true);
}

CorrelationHistogram cross_correlate_serial(const DetectorRecord& a,
                                            const DetectorRecord& b,
                                            double bin_width_ns, double max_tau_ns,
                                            double duration_ns, Normalization norm) {
  return correlate_impl(a, b, bin_width_ns, max_tau_ns, duration_ns, norm,
                        /*parallel=*/false);
}

std::vector<double> jitter_convolve_oracle(const std::function<double(double)>& g2,
                                           double sigma_pair_ns,
                                           const std::vector<double>& tau_grid) {
  if (!(sigma_pair_ns >= 0.0) || !std::isfinite(sigma_pair_ns))
    throw DomainError("pair jitter sigma must be non-negative");

  std::vector<double> out;
  out.reserve(tau_grid.size());
  if (sigma_pair_ns == 0.0) {
    for (double tau : tau_grid) out.push_back(g2(tau));
    return out;
  }

  // Trapezoidal kernel on [-6 sigma, 6 sigma], renormalized so that a
  // constant input is reproduced exactly. The fine step keeps the error
  // below 1e-6 even across a slope discontinuity in g2.
  const int half = 6 * 256;
  const double step = sigma_pair_ns / 256.0;
  std::vector<double> weight(2 * half + 1);
  double wsum = 0.0;
  for (int j = -half; j <= half; ++j) {
    const double s = static_cast<double>(j) * step;
    double w = std::exp(-0.5 * s * s / (sigma_pair_ns * sigma_pair_ns));
    if (j == -half || j == half) w *= 0.5;
    weight[static_cast<std::size_t>(j + half)] = w;
    wsum += w;
  }

  for (double tau : tau_grid) {
    double acc = 0.0;
    for (int j = -half; j <= half; ++j)
      acc += weight[static_cast<std::size_t>(j + half)] *
             g2(tau - static_cast<double>(j) * step);
    out.push_back(acc / wsum);
  }
  return out;
}

double visibility(double i_max, double i_min) {
  if (!(i_min >= 0.0) || !(i_max >= i_min))
    throw DomainError("visibility requires i_max >= i_min >= 0");
  if (i_max == 0.0)
    throw DomainError("visibility undefined for zero intensities");
  return (i_max - i_min) / (i_max + i_min);
}

FringeFit fit_fringe(const std::vector<double>& phis,
                     const std::vector<double>& rates) {
  if (phis.size() != rates.size())
    throw StructureError("fit_fringe: phis and rates differ in length");
  if (phis.size() < 4)
    throw ModelError("fit_fringe needs at least four samples");

  // Normal equations for rate = c0 + c1 cos(phi) + c2 sin(phi).
  double m[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  double rhs[3] = {0, 0, 0};
  for (std::size_t i = 0; i < phis.size(); ++i) {
    const double basis[3] = {1.0, std::cos(phis[i]), std::sin(phis[i])};
    for (int r = 0; r < 3; ++r) {
      rhs[r] += basis[r] * rates[i];
      for (int c = 0; c < 3; ++c) m[r][c] += basis[r] * basis[c];
    }
  }

  // Gaussian elimination with partial pivoting on the 3x3 system.
  int perm[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[perm[r]][col]) > std::abs(m[perm[pivot]][col])) pivot = r;
    std::swap(perm[col], perm[pivot]);
    const double diag = m[perm[col]][col];
    if (std::abs(diag) < 1e-9 * static_cast<double>(phis.size()))
      throw ModelError("fit_fringe: degenerate phase design (all phases equal?)");
    for (int r = col + 1; r < 3; ++r) {
      const double f = m[perm[r]][col] / diag;
      for (int c = col; c < 3; ++c) m[perm[r]][c] -= f * m[perm[col]][c];
      rhs[perm[r]] -= f * rhs[perm[col]];
    }
  }
  double sol[3];
  for (int col = 2; col >= 0; --col) {
    double v = rhs[perm[col]];
    for (int c = col + 1; c < 3; ++c) v -= m[perm[col]][c] * sol[c];
    sol[col] = v / m[perm[col]][col];
  }

  FringeFit fit;
  fit.offset = sol[0];
  fit.amplitude = std::hypot(sol[1], sol[2]);
  fit.phase_origin = std::atan2(sol[2], sol[1]);
  if (fit.amplitude <= 0.0 || fit.offset <= 0.0)
    fit.visibility = 0.0;
  else
    fit.visibility = std::clamp(fit.amplitude / fit.offset, 0.0, 1.0);

  double ss = 0.0;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    const double model =
        sol[0] + sol[1] * std::cos(phis[i]) + sol[2] * std::sin(phis[i]);
    ss += (model - rates[i]) * (model - rates[i]);
  }
  fit.residual_norm = std::sqrt(ss);
  return fit;
}

void finalize_fringe(FringeResult& fr) {
  for (int d = 0; d < 4; ++d) {
    const auto& r = fr.rates[static_cast<std::size_t>(d)];
    if (r.empty()) {
      fr.vis_defined[static_cast<std::size_t>(d)] = false;
      fr.vis[static_cast<std::size_t>(d)] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const auto [mn, mx] = std::minmax_element(r.begin(), r.end());
    fr.i_min[static_cast<std::size_t>(d)] = *mn;
    fr.i_max[static_cast<std::size_t>(d)] = *mx;
    if (*mx > 0.0) {
      fr.vis[static_cast<std::size_t>(d)] = visibility(*mx, *mn);
      fr.vis_defined[static_cast<std::size_t>(d)] = true;
    } else {
      fr.vis[static_cast<std::size_t>(d)] = std::numeric_limits<double>::quiet_NaN();
      fr.vis_defined[static_cast<std::size_t>(d)] = false;
    }
  }
}

std::string histogram_csv(const CorrelationHistogram& h) {
  std::string out = "tau_ns,counts,g2\n";
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    out += format_double(h.tau_center(k));
    out += ',';
    out += std::to_string(h.counts[k]);
    out += ',';
    out += h.normalized_valid ? format_double(h.normalized[k]) : "nan";
    out += '\n';
  }
  return out;
}

std::string fringe_csv(const FringeResult& fr) {
  std::string out = "phi_rad,rate_e,rate_f,rate_g,rate_h\n";
  for (std::size_t i = 0; i < fr.phis.size(); ++i) {
    out += format_double(fr.phis[i]);
    for (int d = 0; d < 4; ++d) {
      out += ',';
      out += format_double(fr.rates[static_cast<std::size_t>(d)][i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace locsim
