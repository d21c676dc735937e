#include <doctest.h>

#include <cmath>
#include <numbers>

#include "locsim/linalg.hpp"
#include "locsim/rng.hpp"
#include "oracles.hpp"

using namespace locsim;
using std::numbers::pi;

namespace {

double cx_dist(Cx a, Cx b) { return std::abs(a - b); }

// Random unitary assembled from couplers and phases on random modes.
TransitionMatrix random_unitary(Rng& rng, int dim, int elements) {
  TransitionMatrix u = TransitionMatrix::identity(dim);
  for (int i = 0; i < elements; ++i) {
    if (dim >= 2 && rng.uniform() < 0.7) {
      int a = static_cast<int>(rng.uniform() * dim);
      int b = static_cast<int>(rng.uniform() * dim);
      if (a == b) b = (b + 1) % dim;
      u = embed(coupler_matrix({rng.uniform()}), {a, b}, dim) * u;
    } else {
      const int m = static_cast<int>(rng.uniform() * dim);
      u = embed(phase_matrix({(rng.uniform() - 0.5) * 20.0}), {m}, dim) * u;
    }
  }
  return u;
}

}  // namespace

TEST_CASE("coupler matrix entries") {
  const double s = 1.0 / std::sqrt(2.0);
  const auto half = coupler_matrix({0.5});
  CHECK(cx_dist(half.at(0, 0), {s, 0}) < 1e-12);
  CHECK(cx_dist(half.at(0, 1), {0, s}) < 1e-12);
  CHECK(cx_dist(half.at(1, 0), {0, s}) < 1e-12);
  CHECK(cx_dist(half.at(1, 1), {s, 0}) < 1e-12);
  CHECK(half.is_unitary());

  const auto mirror = coupler_matrix({1.0});
  CHECK(mirror.max_abs_diff(TransitionMatrix::identity(2)) == 0.0);

  const auto cross = coupler_matrix({0.0});
  CHECK(cx_dist(cross.at(0, 0), {0, 0}) == 0.0);
  CHECK(cx_dist(cross.at(0, 1), {0, 1}) == 0.0);
  CHECK(cx_dist(cross.at(1, 0), {0, 1}) == 0.0);
  CHECK(cx_dist(cross.at(1, 1), {0, 0}) == 0.0);

  CHECK_THROWS_AS(coupler_matrix({-0.1}), DomainError);
  CHECK_THROWS_AS(coupler_matrix({1.1}), DomainError);
  CHECK_THROWS_AS(coupler_matrix({std::nan("")}), DomainError);
}

TEST_CASE("phase matrix entries") {
  CHECK(cx_dist(phase_matrix({0.0}).at(0, 0), {1, 0}) == 0.0);
  CHECK(cx_dist(phase_matrix({pi}).at(0, 0), {-1, 0}) < 1e-15);
  CHECK(cx_dist(phase_matrix({pi / 2}).at(0, 0), {0, 1}) < 1e-15);
  CHECK(std::abs(std::abs(phase_matrix({123.456}).at(0, 0)) - 1.0) < 1e-15);
  CHECK_THROWS_AS(phase_matrix({std::nan("")}), DomainError);
  CHECK_THROWS_AS(phase_matrix({HUGE_VAL}), DomainError);
}

TEST_CASE("embed places blocks and leaves identity elsewhere") {
  CHECK(embed(TransitionMatrix::identity(2), {0, 1}, 4)
            .max_abs_diff(TransitionMatrix::identity(4)) == 0.0);

  const auto lifted = embed(coupler_matrix({0.5}), {1, 2}, 4);
  const auto block = coupler_matrix({0.5});
  CHECK(cx_dist(lifted.at(1, 1), block.at(0, 0)) == 0.0);
  CHECK(cx_dist(lifted.at(1, 2), block.at(0, 1)) == 0.0);
  CHECK(cx_dist(lifted.at(2, 1), block.at(1, 0)) == 0.0);
  CHECK(cx_dist(lifted.at(2, 2), block.at(1, 1)) == 0.0);
  CHECK(cx_dist(lifted.at(0, 0), {1, 0}) == 0.0);
  CHECK(cx_dist(lifted.at(3, 3), {1, 0}) == 0.0);
  CHECK(cx_dist(lifted.at(0, 3), {0, 0}) == 0.0);
  CHECK(lifted.is_unitary());

  const auto ps = embed(phase_matrix({pi}), {3}, 4);
  for (int i = 0; i < 3; ++i) CHECK(cx_dist(ps.at(i, i), {1, 0}) == 0.0);
  CHECK(cx_dist(ps.at(3, 3), {-1, 0}) < 1e-15);

  CHECK_THROWS_AS(embed(coupler_matrix({0.5}), {1, 1}, 4), StructureError);
  CHECK_THROWS_AS(embed(coupler_matrix({0.5}), {0, 4}, 4), StructureError);
  CHECK_THROWS_AS(embed(coupler_matrix({0.5}), {0}, 4), StructureError);
}

TEST_CASE("compose applies elements in circuit order") {
  Rng rng(101);
  const auto u = random_unitary(rng, 3, 8);
  CHECK(compose({u}).max_abs_diff(u) == 0.0);
  CHECK(compose({u, u.dagger()}).max_abs_diff(TransitionMatrix::identity(3)) <
        1e-10);

  CHECK_THROWS_AS(compose({}), StructureError);
  CHECK_THROWS_AS(
      compose({TransitionMatrix::identity(2), TransitionMatrix::identity(3)}),
      StructureError);
}

TEST_CASE("composed Mach-Zehnder reproduces the analytic through magnitude") {
  for (int i = 0; i <= 24; ++i) {
    const double phi = 2.0 * pi * i / 24.0;
    const auto mz = compose({
        coupler_matrix({0.5}),
        embed(phase_matrix({phi}), {1}, 2),
        coupler_matrix({0.5}),
    });
    CHECK(std::abs(std::abs(mz.at(0, 0)) - oracles::mz_through_magnitude(phi)) <
          1e-12);
    CHECK(mz.is_unitary());
  }
}

TEST_CASE("compose is associative") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + static_cast<int>(rng.uniform() * 5);
    const auto a = random_unitary(rng, dim, 5);
    const auto b = random_unitary(rng, dim, 5);
    const auto c = random_unitary(rng, dim, 5);
    CHECK(compose({a, b, c}).max_abs_diff(compose({compose({a, b}), c})) < 1e-12);
  }
}

TEST_CASE("chip probabilities at the design phases") {
  const auto at_phi = [](double phi) {
    return output_distribution(chip_unitary({phi}), kChipInputA).probabilities;
  };
  const double third = 1.0 / 3.0;

  const auto p0 = at_phi(0.0);
  CHECK(std::abs(p0[kPortE] - third) < 1e-12);
  CHECK(std::abs(p0[kPortF] - third) < 1e-12);
  CHECK(p0[kPortG] == 0.0);  // 1 - e^{i 0} vanishes exactly
  CHECK(std::abs(p0[kPortH] - third) < 1e-12);

  const auto ppi = at_phi(pi);
  CHECK(std::abs(ppi[kPortE] - third) < 1e-12);
  CHECK(std::abs(ppi[kPortF] - third) < 1e-12);
  CHECK(std::abs(ppi[kPortG] - third) < 1e-12);
  CHECK(ppi[kPortH] < 1e-30);

  const auto phalf = at_phi(pi / 2);
  CHECK(std::abs(phalf[kPortG] - 1.0 / 6.0) < 1e-12);
  CHECK(std::abs(phalf[kPortH] - 1.0 / 6.0) < 1e-12);
}

TEST_CASE("chip column matches the independent matrix-product oracle") {
  Rng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    const double phi = rng.uniform() * 2.0 * pi;
    const auto u = chip_unitary({phi});
    const auto ref = oracles::chip_product(phi);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) CHECK(cx_dist(u.at(r, c), ref[r][c]) < 1e-12);
  }
}

TEST_CASE("chip column equals the closed form up to a global phase") {
  for (int i = 0; i < 64; ++i) {
    const double phi = 2.0 * pi * i / 64.0;
    const auto dist = output_distribution(chip_unitary({phi}), kChipInputA);
    const auto ref = oracles::closed_form_chip_column(phi);
    // Normalize the global phase on the e amplitude.
    const Cx rot = ref[0] / dist.amplitudes[kPortE];
    CHECK(std::abs(std::abs(rot) - 1.0) < 1e-12);
    for (int m = 0; m < 4; ++m)
      CHECK(cx_dist(dist.amplitudes[static_cast<std::size_t>(m)] * rot,
                    ref[static_cast<std::size_t>(m)]) < 1e-9);
  }
}

TEST_CASE("chip fringe shares: g+h constant, e and f flat") {
  const double third = 1.0 / 3.0;
  double e_min = 1.0, e_max = 0.0, f_min = 1.0, f_max = 0.0;
  for (int i = 0; i <= 128; ++i) {
    const double phi = 2.0 * pi * i / 128.0;
    const auto p = output_distribution(chip_unitary({phi}), kChipInputA)
                       .probabilities;
    CHECK(std::abs(p[kPortG] + p[kPortH] - third) < 1e-9);
    CHECK(std::abs(p[kPortG] - std::pow(std::sin(phi / 2), 2) / 3.0) < 1e-9);
    double total = 0.0;
    for (double v : p) total += v;
    CHECK(std::abs(total - 1.0) < 1e-9);
    e_min = std::min(e_min, p[kPortE]);
    e_max = std::max(e_max, p[kPortE]);
    f_min = std::min(f_min, p[kPortF]);
    f_max = std::max(f_max, p[kPortF]);
  }
  CHECK(e_max - e_min < 1e-9);
  CHECK(f_max - f_min < 1e-9);
}

TEST_CASE("chip unitarity over random settings") {
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const double phi = (rng.uniform() - 0.5) * 8.0 * pi;
    const ChipReflectivities etas{rng.uniform(), rng.uniform(), rng.uniform(),
                                  rng.uniform()};
    CHECK(chip_unitary({phi}, etas).unitarity_defect() < 1e-10);
  }
  CHECK_THROWS_AS(chip_unitary({0.0}, {1.2, 0.5, 0.5, 0.5}), DomainError);
}

TEST_CASE("output_distribution basics") {
  const auto id = TransitionMatrix::identity(4);
  const auto d = output_distribution(id, 2);
  CHECK(d.probabilities[2] == 1.0);
  CHECK(d.probabilities[0] == 0.0);
  CHECK_THROWS_AS(output_distribution(id, 4), StructureError);
  CHECK_THROWS_AS(output_distribution(id, -1), StructureError);
}
