#include <doctest.h>

#include <cmath>
#include <random>

#include "fif/expr.hpp"
#include "test_support.hpp"

using namespace fif;
using fif::testing::kPi;
using fif::testing::sampled_range;

namespace {

const char* const kS1 = "0.5 + sin(2*pi*x)/4";

// Random expression over the grammar, built from a seeded generator.
std::string random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  auto num = [&] {
    const double v = std::round(U(rng) * 100.0) / 100.0;
    return v < 0 ? "(" + std::to_string(v) + ")" : std::to_string(v);
  };
  switch (pick(rng)) {
    case 0: return "x";
    case 1: return num();
    case 2: return "pi";
    case 3: return "(" + random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1) + ")";
    case 4: return "(" + random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1) + ")";
    case 5: return random_expr(rng, depth - 1) + " * " + random_expr(rng, depth - 1);
    case 6: return "sin(" + random_expr(rng, depth - 1) + ")";
    case 7: return "cos(3 * " + random_expr(rng, depth - 1) + ")";
    case 8: return "abs(" + random_expr(rng, depth - 1) + ")";
    default: return random_expr(rng, depth - 1) + " / 1.5";
  }
}

}  // namespace

TEST_CASE("parse_expr evaluates the grammar") {
  const ExprFunction s1 = parse_expr(kS1);
  CHECK(s1(0.25) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(s1(0.0) == doctest::Approx(0.5));
  const ExprFunction zero = parse_expr("0");
  CHECK(zero(0.3) == 0.0);
  CHECK_FALSE(zero.depends_on_x());
  const ExprFunction x = parse_expr("x");
  CHECK(x(0.7) == 0.7);
  CHECK(lipschitz_bound(x, {0, 1}) == 1.0);
  CHECK(parse_expr("-x * 2 - -3")(1.0) == doctest::Approx(1.0));
  CHECK(parse_expr("2 * (x + 1) / 4")(1.0) == doctest::Approx(1.0));
  CHECK(parse_expr("cos(pi)")(0.0) == doctest::Approx(-1.0));
  CHECK(parse_expr("abs(x - 1)")(0.25) == doctest::Approx(0.75));
  CHECK(parse_expr("1e-3 * x")(2.0) == doctest::Approx(2e-3));
}

TEST_CASE("parse_expr reports errors with positions") {
  try {
    parse_expr("1 + * x");
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
  try {
    parse_expr("0.5 + foo(x)");
    FAIL("expected a ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 6);
    CHECK(std::string(e.what()).find("foo") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_expr("sin(x"), ParseError);
  CHECK_THROWS_AS(parse_expr("1 / x"), ParseError);
  CHECK_THROWS_AS(parse_expr("1 / (2 - 2)"), ParseError);
  CHECK_THROWS_AS(parse_expr(""), ParseError);
  CHECK_THROWS_AS(parse_expr("x x"), ParseError);
  CHECK_THROWS_AS(parse_table("(0, 0) (1, 1) (0.5, 2)"), ParseError);
  CHECK_THROWS_AS(parse_table("(0, 0)"), ParseError);
  CHECK_THROWS_AS(parse_table("(0 0) (1, 1)"), ParseError);
}

TEST_CASE("print/parse round trip is the identity") {
  const char* sources[] = {kS1,
                           "0.5 - sin(2*pi*x)/4",
                           "cos(2*pi*(x + 1)/3)",
                           "-(x - 1) * -2",
                           "1 - (x - 2)",
                           "x / 3 / 4",
                           "-x * 2",
                           "abs(sin(x)) + 1e-20",
                           "- - x",
                           "0.1 + 0.2"};
  for (const char* src : sources) {
    const ExprFunction f = parse_expr(src);
    const ExprFunction g = parse_expr(f.to_string());
    CHECK_MESSAGE(same_tree(f, g), src << " -> " << f.to_string());
    CHECK(g.to_string() == f.to_string());
  }
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const ExprFunction f = parse_expr(random_expr(rng, 4));
    const ExprFunction g = parse_expr(f.to_string());
    REQUIRE_MESSAGE(same_tree(f, g), f.to_string());
  }
}

TEST_CASE("tables are piecewise linear and usable in expressions") {
  TableRegistry tables{{"zig", parse_table("(0, 0) (0.5, -1) (1, 0.5)")}};
  const ExprFunction f = parse_expr("zig(x) + 1", tables);
  CHECK(f(0.25) == doctest::Approx(0.5));
  CHECK(f(2.0) == doctest::Approx(1.5));  // held at the end value
  CHECK(f.is_piecewise_linear());
  CHECK_FALSE(f.is_analytic());
  CHECK(lipschitz_bound(f, {0, 1}) == doctest::Approx(3.0));
  const Extrema e = interval_extrema(f, {0, 1});
  CHECK(e.min.value() == doctest::Approx(0.0));
  CHECK(e.max.value() == doctest::Approx(1.5));
  CHECK(e.min.width() == 0.0);
  CHECK(parse_expr(f.to_string(), tables).to_string() == f.to_string());
  CHECK_THROWS_AS(parse_expr("zig(x)"), ParseError);
}

TEST_CASE("normal forms") {
  const auto t = parse_expr("cos(2*pi*x/3) + cos(2*pi*(x + 1)/3) + cos(2*pi*(x + 2)/3)").trig_affine();
  REQUIRE(t);
  CHECK(t->is_zero());
  const auto s = parse_expr("3*sin(-2*x + 1) - x/2 + 4").trig_affine();
  REQUIRE(s);
  CHECK(s->slope == -0.5);
  REQUIRE(s->harmonics.size() == 1);
  CHECK(s->harmonics[0].frequency == 2.0);
  for (double x : {-1.0, 0.0, 0.3, 2.0}) CHECK((*s)(x) == doctest::Approx(3 * std::sin(-2 * x + 1) - x / 2 + 4));
  CHECK_FALSE(parse_expr("sin(x) * sin(x)").trig_affine());
  CHECK_FALSE(parse_expr("sin(sin(x))").trig_affine());
  CHECK(parse_expr("abs(x - 0.5) * 2 + 1").is_piecewise_linear());
  CHECK_FALSE(parse_expr("abs(sin(x))").is_piecewise_linear());
}

TEST_CASE("interval_extrema_abs: closed forms") {
  const ExprFunction s1 = parse_expr(kS1);
  const Extrema a = interval_extrema_abs(s1, {0.0, 1.0 / 3.0});
  CHECK(a.max.value() == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(a.max.width() == 0.0);
  CHECK(a.max.where == doctest::Approx(0.25));
  const Extrema b = interval_extrema_abs(s1, {1.0 / 3.0, 2.0 / 3.0});
  CHECK(b.max.value() == doctest::Approx(0.5 + std::sqrt(3.0) / 8.0).epsilon(1e-15));
  CHECK(b.min.value() == doctest::Approx(0.5 - std::sqrt(3.0) / 8.0).epsilon(1e-15));
  const Extrema c = interval_extrema_abs(parse_expr("x"), {0.2, 0.5});
  CHECK(c.min.value() == 0.2);
  CHECK(c.max.value() == 0.5);
  const Extrema d = interval_extrema_abs(parse_expr("x - 0.5"), {0.0, 1.0});
  CHECK(d.min.value() == 0.0);
  CHECK(d.max.value() == 0.5);
  const Extrema e = interval_extrema_abs(parse_expr("-2 - x"), {0.0, 1.0});
  CHECK(e.min.value() == 2.0);
  CHECK(e.max.value() == 3.0);
}

TEST_CASE("interval_extrema: branch and bound against dense sampling") {
  const char* sources[] = {"x * sin(7*x) + cos(3*x)", "sin(x) * cos(2*x) * x", "abs(sin(5*x)) - x*x",
                           "sin(2*pi*x) * sin(2*pi*x)", "sin(sin(4*x))"};
  for (const char* src : sources) {
    const ExprFunction f = parse_expr(src);
    for (Interval J : {Interval{0.0, 1.0}, Interval{-2.0, 0.5}, Interval{0.3, 0.31}}) {
      const Extrema e = interval_extrema(f, J);
      const auto [lo, hi] = sampled_range(f, J.lo, J.hi);
      CHECK_MESSAGE(e.max.certified, src);
      CHECK_MESSAGE(e.max.hi >= hi, src);
      CHECK_MESSAGE(e.min.lo <= lo, src);
      // the reported abscissae attain the enclosures
      CHECK_MESSAGE(f(e.max.where) >= e.max.lo - 1e-12, src);
      CHECK_MESSAGE(f(e.min.where) <= e.min.hi + 1e-12, src);
      CHECK(J.contains(e.max.where));
      CHECK(J.contains(e.min.where));
      CHECK(e.max.width() <= 1e-12 * std::max(1.0, std::abs(e.max.hi)) + 1e-15);
    }
  }
}

TEST_CASE("property: enclosures contain sampled extrema and split consistently") {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int t = 0; t < 150; ++t) {
    const ExprFunction f = parse_expr(random_expr(rng, 3));
    const Interval J{0.0, 1.0};
    bool finite = true;
    for (int i = 0; i <= 100; ++i) finite = finite && std::isfinite(f(i / 100.0));
    if (!finite) continue;
    ++checked;
    const Extrema e = interval_extrema_abs(f, J);
    const auto [lo, hi] = sampled_range([&](double x) { return std::abs(f(x)); }, J.lo, J.hi, 2001);
    if (e.max.certified) CHECK_MESSAGE(e.max.hi >= hi - 1e-12 * std::max(1.0, hi), f.to_string());
    if (e.min.certified) CHECK_MESSAGE(e.min.lo <= lo + 1e-12 * std::max(1.0, lo), f.to_string());

    const Extrema whole = interval_extrema(f, J);
    const Extrema left = interval_extrema(f, {0.0, 0.5});
    const Extrema right = interval_extrema(f, {0.5, 1.0});
    const double tol = 1e-10 * std::max(1.0, std::abs(whole.max.value()) + std::abs(whole.min.value()));
    CHECK(std::abs(whole.max.value() - std::max(left.max.value(), right.max.value())) <= tol);
    CHECK(std::abs(whole.min.value() - std::min(left.min.value(), right.min.value())) <= tol);

    const double L = lipschitz_bound(f, J);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double a = i / 1000.0, b = (i + 1) / 1000.0;
      worst = std::max(worst, std::abs(f(b) - f(a)) / (b - a));
    }
    CHECK_MESSAGE(L >= worst * (1 - 1e-9), f.to_string());
  }
  CHECK(checked > 100);
}

TEST_CASE("lipschitz_bound") {
  const ExprFunction s1 = parse_expr(kS1);
  CHECK(lipschitz_bound(s1, {0, 1}) == doctest::Approx(kPi / 2).epsilon(1e-15));
  double fd = 0.0;  // finite-difference oracle
  for (int i = 0; i < 100000; ++i) {
    const double a = i / 100000.0, b = (i + 1) / 100000.0;
    fd = std::max(fd, std::abs(s1(b) - s1(a)) / (b - a));
  }
  CHECK(fd <= lipschitz_bound(s1, {0, 1}));
  CHECK(fd == doctest::Approx(kPi / 2).epsilon(1e-6));
  CHECK(lipschitz_bound(parse_expr("3.5"), {0, 1}) == 0.0);
  TableRegistry t{{"pl", parse_table("(0, 0) (0.5, -1) (1, 0.5)")}};
  CHECK(lipschitz_bound(parse_expr("pl(x)", t), {0, 1}) == doctest::Approx(3.0));
  CHECK(lipschitz_bound(parse_expr("x * x"), {0, 2}) == doctest::Approx(4.0));
}

TEST_CASE("total_variation and variation_bound") {
  const ExprFunction c = parse_expr("cos(2*pi*x)");
  double prev = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const VariationEstimate v = total_variation(c, {0, 1}, k);
    CHECK(v.value >= prev - 1e-12);  // nondecreasing in k
    CHECK(v.value <= 4.0 + 1e-12);
    prev = v.value;
  }
  CHECK(prev == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(total_variation(c, {0, 1}, 10).converged);
  const VariationBound vb = variation_bound(c, {0, 1});
  CHECK(vb.exact);
  CHECK(vb.lower == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(total_variation(parse_expr("7"), {0, 3}, 5).value == 0.0);

  const ExprFunction qsum = parse_expr("cos(2*pi*x/3) + cos(2*pi*(x + 1)/3) + cos(2*pi*(x + 2)/3)");
  for (int k = 1; k <= 6; ++k) CHECK(total_variation(qsum, {0, 1}, k).value <= 1e-13);  // rounding only
  CHECK(variation_bound(qsum, {0, 1}).upper == 0.0);

  // sinusoid plus slope: exact against a fine partition sum
  const ExprFunction g = parse_expr("0.3*x + sin(2*pi*x)/4");
  double part = 0.0;
  for (int i = 0; i < 200000; ++i) part += std::abs(g((i + 1) / 200000.0) - g(i / 200000.0));
  const VariationBound gb = variation_bound(g, {0, 1});
  CHECK(gb.exact);
  CHECK(gb.upper == doctest::Approx(part).epsilon(1e-9));

  const ExprFunction h = parse_expr("x * sin(9*x)");
  const VariationBound hb = variation_bound(h, {0, 2});
  CHECK_FALSE(hb.exact);
  double fine = 0.0;
  for (int i = 0; i < 200000; ++i) fine += std::abs(h(2.0 * (i + 1) / 200000.0) - h(2.0 * i / 200000.0));
  CHECK(hb.lower <= fine + 1e-9);
  CHECK(hb.upper >= fine - 1e-9);
}

TEST_CASE("count_zeros and zero structure") {
  CHECK(count_zeros(parse_expr(kS1), {0, 1}).count == 0);
  CHECK(count_zeros(parse_expr(kS1), {0, 1}).kind == ZeroCount::Kind::exact);
  CHECK(count_zeros(parse_expr("x - 1/2"), {0, 1}).count == 1);
  const ZeroCount s = count_zeros(parse_expr("sin(2*pi*x)"), {0, 1});
  CHECK(s.kind == ZeroCount::Kind::exact);
  CHECK(s.count == 3);
  CHECK(count_zeros(parse_expr("cos(2*pi*x)"), {0, 1}).count == 2);
  CHECK(count_zeros(parse_expr("0.5 + 0.5*sin(2*pi*x)"), {0, 1}).count == 1);  // tangency at 3/4
  CHECK(count_zeros(parse_expr("0"), {0, 1}).kind == ZeroCount::Kind::infinite);
  CHECK(count_zeros(parse_expr("abs(x - 0.5) - 0.25"), {0, 1}).count == 2);
  CHECK(count_zeros(parse_expr("abs(x - 0.5) - abs(x - 0.5)"), {0, 1}).kind == ZeroCount::Kind::infinite);
  const ZeroCount u = count_zeros(parse_expr("x * sin(10*x) - 0.1"), {0, 2});
  CHECK(u.kind == ZeroCount::Kind::unknown);
  CHECK(u.count > 0);

  CHECK(vanishes_on_subinterval(parse_expr(kS1), {0, 1}) == Tristate::no);
  CHECK(vanishes_on_subinterval(parse_expr("0"), {0, 1}) == Tristate::yes);
  CHECK(vanishes_on_subinterval(parse_expr("abs(x - 0.5) + x - 0.5"), {0, 1}) == Tristate::yes);
  CHECK(vanishes_on_subinterval(parse_expr("x * sin(10 * x)"), {0, 1}) == Tristate::no);
  CHECK(finitely_many_zeros(parse_expr("sin(2*pi*x)"), {0, 1}) == Tristate::yes);
  CHECK(finitely_many_zeros(parse_expr("x * sin(10 * x)"), {0, 1}) == Tristate::yes);
  CHECK(finitely_many_zeros(parse_expr("0"), {0, 1}) == Tristate::no);
}
