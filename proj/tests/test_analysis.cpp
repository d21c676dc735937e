#include <doctest.h>

#include <cmath>
#include <numbers>

#include "locsim/analysis.hpp"
#include "locsim/rng.hpp"
#include "oracles.hpp"

using namespace locsim;
using std::numbers::pi;

namespace {

DetectorRecord record_of(char id, std::vector<double> times) {
  DetectorRecord r;
  r.detector_id = id;
  r.truth.assign(times.size(), Truth::Photon);
  r.clicks_ns = std::move(times);
  return r;
}

DetectorRecord poisson_record(char id, double rate, double duration, Rng& rng) {
  DetectorRecord r;
  r.detector_id = id;
  double t = rng.exponential(rate);
  while (t <= duration) {
    r.clicks_ns.push_back(t);
    t += rng.exponential(rate);
  }
  r.truth.assign(r.clicks_ns.size(), Truth::Photon);
  return r;
}

}  // namespace

TEST_CASE("pair counting on a hand-checked example") {
  // Pairs (0,1) and (10,11) land in the tau bin [1,2); (0,11) and (10,1)
  // fall outside the +-5 ns window.
  const auto a = record_of('e', {0.0, 10.0});
  const auto b = record_of('f', {1.0, 11.0});
  const auto h = cross_correlate(a, b, 1.0, 5.0, 20.0);
  REQUIRE(h.bin_count() == 10);
  for (std::size_t k = 0; k < h.bin_count(); ++k) {
    if (k == 6)  // bin [1, 2)
      CHECK(h.counts[k] == 2);
    else
      CHECK(h.counts[k] == 0);
  }
  CHECK(h.n_start == 2);
  CHECK(h.n_stop == 2);
}

TEST_CASE("two-pointer sweep equals the brute-force oracle exactly") {
  Rng rng(808);
  for (int trial = 0; trial < 60; ++trial) {
    const double duration = 200.0 + rng.uniform() * 800.0;
    Rng ra = rng.derive(static_cast<std::uint64_t>(trial) * 2);
    Rng rb = rng.derive(static_cast<std::uint64_t>(trial) * 2 + 1);
    const auto a = poisson_record('e', 0.5 + rng.uniform(), duration, ra);
    const auto b = poisson_record('f', 0.5 + rng.uniform(), duration, rb);
    const double bin = 0.25 * (1 + static_cast<int>(rng.uniform() * 4));
    const double max_tau = bin * (1 + static_cast<int>(rng.uniform() * 40));
    const auto h = cross_correlate(a, b, bin, max_tau, duration);
    const auto hs = cross_correlate_serial(a, b, bin, max_tau, duration);
    const auto ref =
        oracles::brute_force_counts(a.clicks_ns, b.clicks_ns, bin, max_tau);
    CHECK(h.counts == ref);
    CHECK(hs.counts == ref);
  }
}

TEST_CASE("independent Poisson streams normalize to one") {
  Rng rng(313);
  const double duration = 2e6;
  Rng ra = rng.derive(1), rb = rng.derive(2);
  const auto a = poisson_record('e', 5e-3, duration, ra);
  const auto b = poisson_record('f', 5e-3, duration, rb);
  const auto h = cross_correlate(a, b, 1.0, 50.0, duration);
  REQUIRE(h.normalized_valid);
  const double n0 = static_cast<double>(h.n_start) *
                    static_cast<double>(h.n_stop) / duration;
  double mean = 0.0;
  for (std::size_t k = 0; k < h.bin_count(); ++k) {
    CHECK(std::abs(h.normalized[k] - 1.0) < 3.0 / std::sqrt(n0) + 0.05);
    mean += h.normalized[k];
  }
  mean /= static_cast<double>(h.bin_count());
  CHECK(std::abs(mean - 1.0) <
        3.0 / std::sqrt(n0 * static_cast<double>(h.bin_count())));

  // Plateau normalization agrees for flat histograms.
  const auto hp =
      cross_correlate(a, b, 1.0, 50.0, duration, Normalization::Plateau);
  REQUIRE(hp.normalized_valid);
  CHECK(std::abs(hp.g2_at_zero() - h.g2_at_zero()) < 0.2);
}

TEST_CASE("swapping inputs mirrors the histogram") {
  Rng rng(999);
  Rng ra = rng.derive(1), rb = rng.derive(2);
  const double duration = 5e4;
  const auto a = poisson_record('e', 0.02, duration, ra);
  const auto b = poisson_record('f', 0.03, duration, rb);
  const auto ab = cross_correlate(a, b, 0.5, 20.0, duration);
  const auto ba = cross_correlate(b, a, 0.5, 20.0, duration);
  std::int64_t total_ab = 0, total_ba = 0;
  for (std::size_t k = 0; k < ab.bin_count(); ++k) {
    total_ab += ab.counts[k];
    total_ba += ba.counts[k];
    CHECK(ab.counts[k] == ba.counts[ab.bin_count() - 1 - k]);
  }
  CHECK(total_ab == total_ba);
  CHECK(ab.n_start == ba.n_stop);
}

TEST_CASE("empty stream yields a flagged zero histogram") {
  const auto a = record_of('e', {});
  const auto b = record_of('f', {1.0, 2.0});
  const auto h = cross_correlate(a, b, 1.0, 5.0, 10.0);
  CHECK(!h.normalized_valid);
  for (auto c : h.counts) CHECK(c == 0);
  CHECK(std::isnan(h.g2_at_zero()));
}

TEST_CASE("input validation") {
  const auto good = record_of('e', {1.0, 2.0});
  const auto unsorted = record_of('f', {2.0, 1.0});
  CHECK_THROWS_AS(cross_correlate(good, unsorted, 1.0, 5.0, 10.0),
                  StructureError);
  CHECK_THROWS_AS(cross_correlate(good, good, 1.0, 5.5, 10.0), StructureError);
  CHECK_THROWS_AS(cross_correlate(good, good, 0.0, 5.0, 10.0), StructureError);
  CHECK_THROWS_AS(cross_correlate(good, good, 1.0, 5.0, 0.0), StructureError);
}

TEST_CASE("jitter convolution oracle") {
  const EmitterParams p;  // rate sum ln2/2 -> 4 ns dip
  const auto g2 = [&p](double tau) { return g2_analytic(tau, p); };
  std::vector<double> grid;
  for (int i = -40; i <= 40; ++i) grid.push_back(0.25 * i);

  SUBCASE("zero sigma is the identity") {
    const auto out = jitter_convolve_oracle(g2, 0.0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(out[i] == g2(grid[i]));
  }

  SUBCASE("constants are preserved to 1e-9") {
    const auto out =
        jitter_convolve_oracle([](double) { return 1.0; }, 0.7071, grid);
    for (double v : out) CHECK(std::abs(v - 1.0) < 1e-9);
  }

  SUBCASE("matches the closed-form value at zero delay") {
    const double k = p.pump_rate_per_ns + 1.0 / p.lifetime_ns;
    const double sigma_pair = std::sqrt(2.0) * 0.5;
    const auto out = jitter_convolve_oracle(g2, sigma_pair, {0.0});
    const double ref = oracles::antibunching_dip_convolved_at_zero(k, sigma_pair);
    CHECK(std::abs(out[0] - ref) < 1e-6);
    CHECK(out[0] == doctest::Approx(0.169).epsilon(0.01));
  }

  SUBCASE("symmetric in tau") {
    const auto out = jitter_convolve_oracle(g2, 0.5, {-2.0, 2.0});
    CHECK(std::abs(out[0] - out[1]) < 1e-9);
  }

  CHECK_THROWS_AS(jitter_convolve_oracle(g2, -0.1, grid), DomainError);
}

TEST_CASE("visibility") {
  CHECK(visibility(1.0, 0.0) == 1.0);
  CHECK(visibility(0.7, 0.7) == 0.0);
  CHECK(std::abs(visibility(0.3284, 0.00483) - 0.971) < 5e-4);
  CHECK_THROWS_AS(visibility(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(visibility(1.0, -0.1), DomainError);
  CHECK_THROWS_AS(visibility(0.2, 0.4), DomainError);

  // Scale invariance: exact for power-of-two factors, tight otherwise.
  Rng rng(6);
  for (int t = 0; t < 200; ++t) {
    const double lo = rng.uniform();
    const double hi = lo + rng.uniform();
    CHECK(visibility(hi * 4.0, lo * 4.0) == visibility(hi, lo));
    CHECK(visibility(hi * 0.125, lo * 0.125) == visibility(hi, lo));
    const double c = 0.1 + 3.0 * rng.uniform();
    CHECK(std::abs(visibility(hi * c, lo * c) - visibility(hi, lo)) < 1e-12);
  }
}

TEST_CASE("fringe fit recovers exact cosine data") {
  std::vector<double> phis, rates;
  for (int i = 0; i < 16; ++i) {
    const double phi = 2.0 * pi * i / 16.0;
    phis.push_back(phi);
    rates.push_back(2.0 + 0.5 * std::cos(phi - 0.7));
  }
  const auto fit = fit_fringe(phis, rates);
  CHECK(std::abs(fit.offset - 2.0) < 1e-9);
  CHECK(std::abs(fit.amplitude - 0.5) < 1e-9);
  CHECK(std::abs(fit.phase_origin - 0.7) < 1e-9);
  CHECK(std::abs(fit.visibility - 0.25) < 1e-9);
  CHECK(fit.residual_norm < 1e-9);
}

TEST_CASE("fringe fit on the ideal dark port") {
  std::vector<double> phis, rates;
  for (int i = 0; i < 16; ++i) {
    const double phi = 2.0 * pi * i / 16.0;
    phis.push_back(phi);
    rates.push_back((1.0 - std::cos(phi)) / 6.0);
  }
  const auto fit = fit_fringe(phis, rates);
  CHECK(std::abs(fit.visibility - 1.0) < 1e-9);
  CHECK(std::abs(fit.offset - 1.0 / 6.0) < 1e-9);
}

TEST_CASE("fringe fit round trip on random parameters") {
  Rng rng(17);
  for (int t = 0; t < 50; ++t) {
    const double offset = 0.5 + rng.uniform();
    const double amplitude = rng.uniform() * offset;
    const double origin = (rng.uniform() - 0.5) * pi;
    std::vector<double> phis, rates;
    const int n = 5 + static_cast<int>(rng.uniform() * 20);
    for (int i = 0; i < n; ++i) {
      const double phi = rng.uniform() * 2.0 * pi;
      phis.push_back(phi);
      rates.push_back(offset + amplitude * std::cos(phi - origin));
    }
    const auto fit = fit_fringe(phis, rates);
    CHECK(std::abs(fit.offset - offset) < 1e-6);
    CHECK(std::abs(fit.amplitude - amplitude) < 1e-6);
  }
}

TEST_CASE("fringe fit error paths") {
  CHECK_THROWS_AS(fit_fringe({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}), ModelError);
  const std::vector<double> same(8, 0.3);
  const std::vector<double> rates(8, 1.0);
  CHECK_THROWS_AS(fit_fringe(same, rates), ModelError);
  CHECK_THROWS_AS(fit_fringe({0.0, 1.0}, {1.0}), StructureError);
}

TEST_CASE("histogram and fringe CSV serialization") {
  const auto a = record_of('e', {0.0, 10.0});
  const auto b = record_of('f', {1.0, 11.0});
  const auto h = cross_correlate(a, b, 1.0, 5.0, 20.0);
  const std::string csv = histogram_csv(h);
  CHECK(csv.rfind("tau_ns,counts,g2\n", 0) == 0);
  CHECK(csv == histogram_csv(h));  // deterministic

  FringeResult fr;
  fr.phis = {0.0, 1.0};
  for (auto& r : fr.rates) r = {0.25, 0.5};
  const std::string fcsv = fringe_csv(fr);
  CHECK(fcsv.rfind("phi_rad,rate_e,rate_f,rate_g,rate_h\n", 0) == 0);
  CHECK(fcsv.find("0,0.25,0.25,0.25,0.25\n") != std::string::npos);
}

TEST_CASE("parallel and serial correlation agree on large streams") {
  Rng rng(2718);
  Rng ra = rng.derive(1), rb = rng.derive(2);
  const double duration = 4e6;
  const auto a = poisson_record('e', 0.02, duration, ra);
  const auto b = poisson_record('f', 0.02, duration, rb);
  const auto h1 = cross_correlate(a, b, 0.25, 40.0, duration);
  const auto h2 = cross_correlate_serial(a, b, 0.25, 40.0, duration);
  CHECK(h1.counts == h2.counts);
  CHECK(h1.normalized == h2.normalized);
}
