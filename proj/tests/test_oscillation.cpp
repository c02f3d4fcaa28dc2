#include <doctest.h>

#include <cmath>

#include "fif/matrices.hpp"
#include "fif/oscillation.hpp"
#include "test_support.hpp"

using namespace fif;
using fif::testing::kPi;

TEST_CASE("oscillation sums of simple functions") {
  const FifModel line = fif::testing::line_model(3);
  for (const OscillationSum& s : oscillation_table(line, 6)) {
    CHECK(s.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(s.gap) <= 1e-12);
    CHECK(s.certified_upper >= s.value);
  }
  const FifModel c = fif::testing::constant_model(0.7);
  for (const OscillationSum& s : oscillation_table(c, 5)) CHECK(s.value == 0.0);
}

TEST_CASE("oscillation sums are nondecreasing in the level and refinement") {
  const FifModel m = fif::testing::example61();
  const auto t = oscillation_table(m, 7);
  for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i].value >= t[i - 1].value);
  for (const OscillationSum& s : t) {
    CHECK(s.gap >= 0.0);
    CHECK(s.certified_upper >= s.value);
  }
  double prev = 0.0;
  for (int r = 0; r <= 5; ++r) {
    const double v = oscillation_sum(m, 3, {r, {}}).value;
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("oscillation vectors sum to the oscillation at the combined level") {
  const FifModel m = fif::testing::example61();
  for (int k = 1; k <= 3; ++k)
    for (int p = 1; p <= 3; ++p) {
      const OscillationVector v = oscillation_vector(m, k, p);
      const double O = oscillation_sum(m, k + p).value;
      CHECK(v.entries.size() == static_cast<std::size_t>(std::pow(3, k)));
      CHECK(std::abs(v.l1() - O) <= 1e-12 * O);
    }
  const FifModel line = fif::testing::line_model(3);
  const OscillationVector a = oscillation_vector(line, 1, 1);
  REQUIRE(a.entries.size() == 3);
  for (double e : a.entries) CHECK(e == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("modulus bounds dominate observed cell oscillations") {
  const FifModel m = fif::testing::example61();
  const auto omega = modulus_bounds(m, engine_bounds(m), 8);
  const GridValues g = grid_values(m, 10);
  for (int level = 0; level <= 8; ++level) {
    const std::size_t cells = static_cast<std::size_t>(std::pow(3, level));
    std::vector<double> lo(cells), hi(cells);
    kernels::cell_ranges(g.values, cells, lo, hi, Exec::serial);
    double worst = 0.0;
    for (std::size_t j = 0; j < cells; ++j) worst = std::max(worst, hi[j] - lo[j]);
    CHECK(worst <= omega[static_cast<std::size_t>(level)]);
    if (level > 0) CHECK(omega[static_cast<std::size_t>(level)] <= omega[static_cast<std::size_t>(level - 1)]);
  }
}

TEST_CASE("recursion offsets") {
  const FifModel line = fif::testing::line_model(2);
  const EngineBounds b = engine_bounds(line);
  const auto u = recursion_offsets(line, 2, b);
  REQUIRE(u.size() == 4);
  // S constant: beta = 0, so u holds Var(q_i) over half cells: q_i(x) = x/2 + const
  for (double v : u) CHECK(v == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("divergence certificate for example61") {
  const FifModel m = fif::testing::example61();
  const DivergenceCertificate c = divergence_check(m, 8, gamma_summary(m, 1));
  CHECK(c.verdict == Verdict::Divergent);
  REQUIRE(c.threshold);
  CHECK(*c.threshold == doctest::Approx(8 * kPi).epsilon(1e-12));
  CHECK(c.criterion == DivergenceCriterion::nonnegative);
  CHECK(*c.threshold_general > *c.threshold);
  CHECK(c.gamma_lower_star == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(c.variation_sum_q == 0.0);
  REQUIRE(c.k0);
  CHECK(*c.k0 == 4);
  CHECK(c.O_k0 > 8 * kPi);
  CHECK(c.table[static_cast<std::size_t>(*c.k0 - 2)].value <= 8 * kPi);  // k0 is the smallest
}

TEST_CASE("divergence certificate: bounded and degenerate cases") {
  const DivergenceCertificate c = divergence_check(fif::testing::constant_model(2.0), 6);
  CHECK(c.verdict == Verdict::Bounded);
  const DivergenceCertificate line = divergence_check(fif::testing::line_model(3), 6);
  CHECK(line.verdict == Verdict::Bounded);
  // gamma = 2 * 0.6 > 1 ... with N = 2 and lambda = 0.45: gamma_* = 0.9 < 1, not stable either way
  const FifModel w = fif::testing::weierstrass(0.45, 2);
  const DivergenceCertificate u = divergence_check(w, 6);
  CHECK(u.verdict != Verdict::Divergent);
}

TEST_CASE("weierstrass: the nonnegative criterion has threshold zero") {
  for (double lambda : {0.5, 0.6, 0.8}) {
    const FifModel w = fif::testing::weierstrass(lambda);
    const DivergenceCertificate c = divergence_check(w, 4);
    CHECK(c.verdict == Verdict::Divergent);
    REQUIRE(c.threshold_nonnegative);
    CHECK(*c.threshold_nonnegative == 0.0);
    CHECK(*c.k0 == 1);
  }
}
