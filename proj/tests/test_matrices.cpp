#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <sstream>

#include "fif/matrices.hpp"
#include "test_support.hpp"

using namespace fif;
using fif::testing::sampled_range;

namespace {

double eigen_radius(const SparseMatrix& A) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(A.rows), static_cast<Eigen::Index>(A.cols));
  for (std::size_t r = 0; r < A.rows; ++r)
    for (std::size_t p = A.row_ptr[r]; p < A.row_ptr[r + 1]; ++p)
      D(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(A.col[p])) = A.val[p];
  return D.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("spectral radius of small matrices") {
  const SpectralResult r = spectral_radius(sparse_from_dense({{2, 1}, {1, 2}}));
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.lo <= 3.0 + 1e-12);
  CHECK(r.hi >= 3.0 - 1e-12);

  // constant row sums: rho equals the row sum, bracket closes immediately
  const SpectralResult c = spectral_radius(sparse_from_dense({{0.2, 0.5, 0.3}, {1.0, 0.0, 0.0}, {0.1, 0.1, 0.8}}));
  CHECK(c.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(c.iterations <= 2);

  // reducible: block triangular; the larger diagonal block wins
  const SpectralResult t = spectral_radius(sparse_from_dense({{2, 5, 0}, {0, 3, 1}, {0, 0, 1}}));
  CHECK(t.value == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(t.components == 3);
  // periodic (imprimitive) pattern
  CHECK(spectral_radius(sparse_from_dense({{0, 4}, {1, 0}})).value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(spectral_radius(sparse_from_dense({{0, 0}, {0, 0}})).value == 0.0);
}

TEST_CASE("spectral radius against the Eigen oracle") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + static_cast<int>(rng() % 30);
    std::vector<std::vector<double>> d(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    const double density = 0.15 + 0.85 * U(rng);
    for (auto& row : d)
      for (double& v : row) v = U(rng) < density ? U(rng) : 0.0;
    const SparseMatrix A = sparse_from_dense(d);
    const SpectralResult r = spectral_radius(A, {1e-10, 1000000, Exec::serial});
    const double ref = eigen_radius(A);
    CHECK_MESSAGE(std::abs(r.value - ref) <= 1e-6 * std::max(1.0, ref), "n=" << n << " t=" << t);
  }
}

TEST_CASE("primitivity classification") {
  CHECK(primitivity_check(sparse_from_dense({{1, 1}, {1, 0}})).kind == Primitivity::Primitive);
  const PrimitivityReport p = primitivity_check(sparse_from_dense({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}));
  CHECK(p.kind == Primitivity::IrreducibleNotPrimitive);
  CHECK(p.period == 3);
  CHECK(primitivity_check(sparse_from_dense({{1, 1}, {0, 1}})).kind == Primitivity::Reducible);
  CHECK(primitivity_check(sparse_from_dense({{0, 0}, {0, 0}})).kind == Primitivity::Reducible);
  int count = 0;
  strongly_connected_components(sparse_from_dense({{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 1}, {0, 0, 1, 0}}), count);
  CHECK(count == 2);
}

TEST_CASE("level-1 matrices of example61") {
  const FifModel m = fif::testing::example61();
  const ScalingMatrices M = build_matrices(m, 1);
  REQUIRE(M.upper.dim == 3);
  CHECK(M.upper.entry(0, 0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(M.upper.entry(0, 1) == doctest::Approx(0.5 + std::sqrt(3.0) / 8).epsilon(1e-15));
  CHECK(M.upper.entry(0, 2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(M.lower.entry(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(M.lower.entry(2, 0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(M.upper.certified);
  // every basic entry against dense sampling of |S_i| on its cell
  for (int k : {1, 2, 3}) {
    const ScalingMatrices L = build_matrices(m, k);
    for (int i = 0; i < 3; ++i)
      for (std::size_t c = 0; c < L.upper.dim; ++c) {
        const Interval J = m.cell(k, c);
        const auto [lo, hi] = sampled_range([&](double x) { return std::abs(m.S[i](x)); }, J.lo, J.hi, 2001);
        CHECK(L.upper.basic_entry(i, c) >= hi - 1e-15);
        CHECK(L.upper.basic_entry(i, c) - hi <= 1e-7);
        CHECK(L.lower.basic_entry(i, c) <= lo + 1e-15);
        CHECK(lo - L.lower.basic_entry(i, c) <= 1e-7);
      }
  }
  CHECK(spectral_radius(M.upper.to_sparse()).value == doctest::Approx(1.966506).epsilon(1e-6));
}

TEST_CASE("matrix sparsity pattern") {
  const FifModel m = fif::testing::example61();
  for (int k = 1; k <= 4; ++k) {
    const ScalingMatrix U = build_matrix(m, k, MatrixKind::upper);
    const SparseMatrix A = U.to_sparse();
    const std::size_t block = U.dim / 3;
    for (std::size_t r = 0; r < A.rows; ++r) {
      const std::size_t i = r / block, l = r % block;
      CHECK(A.row_ptr[r + 1] - A.row_ptr[r] == 3);
      for (std::size_t p = A.row_ptr[r]; p < A.row_ptr[r + 1]; ++p) {
        REQUIRE(A.col[p] >= l * 3);
        REQUIRE(A.col[p] < l * 3 + 3);
        CHECK(A.val[p] == U.basic_entry(static_cast<int>(i), A.col[p]));
      }
    }
    // positive scalings give a primitive pattern whose k-th boolean power is positive
    CHECK(primitivity_check(A).kind == Primitivity::Primitive);
    std::vector<std::vector<char>> B(U.dim, std::vector<char>(U.dim, 0)), P;
    for (std::size_t r = 0; r < U.dim; ++r)
      for (std::size_t c = 0; c < U.dim; ++c) B[r][c] = U.entry(r, c) > 0;
    P = B;
    for (int s = 1; s < k; ++s) {
      std::vector<std::vector<char>> Q(U.dim, std::vector<char>(U.dim, 0));
      for (std::size_t r = 0; r < U.dim; ++r)
        for (std::size_t t = 0; t < U.dim; ++t)
          if (P[r][t])
            for (std::size_t c = 0; c < U.dim; ++c) Q[r][c] = Q[r][c] || B[t][c];
      P = Q;
    }
    bool positive = true;
    for (const auto& row : P)
      for (char v : row) positive = positive && v;
    CHECK(positive);
  }
}

TEST_CASE("refinement compatibility of basic entries") {
  const FifModel m = fif::testing::example61();
  for (int k = 1; k <= 4; ++k) {
    const ScalingMatrices a = build_matrices(m, k), b = build_matrices(m, k + 1);
    for (int i = 0; i < 3; ++i)
      for (std::size_t c = 0; c < a.upper.dim; ++c) {
        double hi = 0.0, lo = INFINITY;
        for (std::size_t t = 0; t < 3; ++t) {
          hi = std::max(hi, b.upper.basic_entry(i, 3 * c + t));
          lo = std::min(lo, b.lower.basic_entry(i, 3 * c + t));
        }
        CHECK(std::abs(a.upper.basic_entry(i, c) - hi) <= 1e-12);
        CHECK(std::abs(a.lower.basic_entry(i, c) - lo) <= 1e-12);
      }
  }
}

TEST_CASE("constant scalings give rho = N c at every level") {
  const FifModel w = fif::testing::weierstrass(0.6);
  for (int k = 1; k <= 5; ++k) {
    const ScalingMatrices M = build_matrices(w, k);
    CHECK(spectral_radius(M.upper.to_sparse()).value == doctest::Approx(1.8).epsilon(1e-12));
    CHECK(spectral_radius(M.lower.to_sparse()).value == doctest::Approx(1.8).epsilon(1e-12));
  }
  const SpectralSummary s = rho_sequence(w, 4);
  REQUIRE(s.rho_S);
  CHECK(*s.rho_S == doctest::Approx(1.8).epsilon(1e-12));
  CHECK(s.violations.empty());
}

TEST_CASE("sum function summaries") {
  const FifModel m = fif::testing::example61();
  const SumFunctionSummary g = gamma_summary(m, 3);
  CHECK(g.signs_certified);
  CHECK(g.all_nonnegative);
  CHECK(g.gamma_star.value() == doctest::Approx(1.75).epsilon(1e-14));
  CHECK(g.gamma_lower_star.value() == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(g.lipschitz_gamma == doctest::Approx(fif::testing::kPi / 2).epsilon(1e-14));
  CHECK_FALSE(g.constant);
  REQUIRE(g.levels.size() == 3);
  for (std::size_t k = 1; k < g.levels.size(); ++k) {
    CHECK(g.levels[k].upper <= g.levels[k - 1].upper + 1e-15);
    CHECK(g.levels[k].lower >= g.levels[k - 1].lower - 1e-15);
  }
  const SumFunctionSummary w = gamma_summary(fif::testing::weierstrass(0.8), 2);
  CHECK(w.constant);
  CHECK(w.gamma_star.value() == doctest::Approx(2.4).epsilon(1e-14));
}

TEST_CASE("rho sequence for example61 is monotone and brackets a common limit") {
  const FifModel m = fif::testing::example61();
  const SpectralSummary s = rho_sequence(m, 6);
  CHECK(s.violations.empty());
  for (std::size_t k = 1; k < s.levels.size(); ++k) {
    CHECK(s.levels[k].upper.value <= s.levels[k - 1].upper.value + 1e-8);
    CHECK(s.levels[k].lower.value >= s.levels[k - 1].lower.value - 1e-8);
    CHECK(s.levels[k].lower.value <= s.levels[k].upper.value);
    // radius sits between the column-sum bounds
    CHECK(s.levels[k].upper.value <= s.levels[k].gamma_upper + 1e-8);
    CHECK(s.levels[k].lower.value >= s.levels[k].gamma_lower - 1e-8);
  }
  CHECK(s.positivity_certified);
  REQUIRE(s.rho_S);
  CHECK(s.rho_S_reason == "positivity");
}

TEST_CASE("matrix output formats") {
  const FifModel m = fif::testing::example61();
  std::ostringstream coo;
  write_matrix_coo(coo, build_matrix(m, 1, MatrixKind::lower), "example61");
  const std::string s = coo.str();
  CHECK(s.find("\"kind\":\"lower\"") != std::string::npos);
  CHECK(s.find("\n1 1 0.5\n") != std::string::npos);
  std::ostringstream csv;
  write_radii_csv(csv, rho_sequence(m, 2));
  CHECK(csv.str().rfind("k,rho_upper,rho_lower\n1,", 0) == 0);
}
