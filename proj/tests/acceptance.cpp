// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails. Every tolerance is a named constant below.

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fif/dimension.hpp"
#include "fif/reference.hpp"
#include "test_support.hpp"

using namespace fif;

namespace {

// ---- pinned tolerances -------------------------------------------------------
constexpr double kRadiusTol = reference::kRadiusTolerance;  // 5e-4 absolute
constexpr double kEigenSolverTol = 1e-8;                    // relative bracket width
constexpr double kRadiusTableSeconds = 10.0;
constexpr double kEntryTol = 1e-12;
constexpr double kGammaTol = 1e-9;
constexpr double kDimensionLo = 1.374, kDimensionHi = 1.384;
constexpr double kThresholdTol = 1e-12;  // relative, threshold against 8 pi
constexpr int kMinRefinement = 4;
constexpr double kMonotoneSlack = 1e-6;
constexpr int kRandomModels = 20;
constexpr std::uint64_t kSeed = 20240611;
constexpr double kRoutesAgree = 1e-6;
constexpr double kBoxCountTol = 0.1;
constexpr int kBoxKMin = 4, kBoxKMax = 9;
constexpr double kResidualTol = 1e-9;
constexpr int kResidualPoints = 10000;
constexpr double kNestingTol = 1e-12;
constexpr double kOracleTol = 1e-6;
constexpr std::size_t kOracleMaxDim = 81;

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

FifModel example61() { return testing::example61(); }

std::vector<FifModel> random_models() {
  std::mt19937_64 rng(kSeed);
  std::vector<FifModel> out;
  for (int t = 0; t < kRandomModels; ++t) out.push_back(validate_model(testing::random_model_config(rng)));
  return out;
}

// ---- criteria ----------------------------------------------------------------

Outcome reference_radii() {
  const auto t0 = std::chrono::steady_clock::now();
  const SpectralSummary s = rho_sequence(example61(), 8, {kEigenSolverTol, 100000, Exec::parallel});
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  int matched = 0, total = 0;
  std::string misses;
  for (const reference::Radii& r : reference::kExample61Radii) {
    const RadiusLevel& L = s.levels[static_cast<std::size_t>(r.k - 1)];
    for (const auto& [got, want, tag] : {std::tuple{L.upper.value, r.upper, "upper"}, std::tuple{L.lower.value, r.lower, "lower"}}) {
      ++total;
      if (std::abs(got - want) <= kRadiusTol)
        ++matched;
      else
        misses += fmt(" k=%d %s %.6f vs %.5f;", r.k, tag, got, want);
    }
  }
  const bool fast = seconds < kRadiusTableSeconds;
  return {matched == total && fast,
          fmt("%d/%d radii within %.0e, %.2f s", matched, total, kRadiusTol, seconds) + (misses.empty() ? "" : " | off:" + misses)};
}

Outcome exact_entries() {
  const ScalingMatrices M = build_matrices(example61(), 1);
  const double a = 0.75, b = 0.5 + std::sqrt(3.0) / 8.0, c = 0.5, d = 0.5 - std::sqrt(3.0) / 8.0, e = 0.25;
  // rows: maps 1..3; columns: cells [0,1/3], [1/3,2/3], [2/3,1]
  const double upper[3][3] = {{a, b, c}, {a, b, c}, {c, b, a}};
  const double lower[3][3] = {{c, d, e}, {c, d, e}, {e, d, c}};
  double worst = 0.0;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t col = 0; col < 3; ++col) {
      worst = std::max(worst, std::abs(M.upper.entry(r, col) - upper[r][col]));
      worst = std::max(worst, std::abs(M.lower.entry(r, col) - lower[r][col]));
    }
  return {worst <= kEntryTol, fmt("max entry error %.2e (tol %.0e)", worst, kEntryTol)};
}

Outcome gamma_extrema() {
  const SumFunctionSummary g = gamma_summary(example61(), 1);
  const double lo = g.gamma_lower_star.value(), hi = g.gamma_star.value();
  const bool ok = std::abs(lo - 1.25) <= kGammaTol && std::abs(hi - 1.75) <= kGammaTol && g.gamma_lower_star.certified &&
                  g.gamma_star.certified;
  return {ok, fmt("gamma_* = %.15g, gamma^* = %.15g (tol %.0e)", lo, hi, kGammaTol)};
}

Outcome dimension_verdict() {
  const FifModel m = example61();
  DimensionOptions o;
  o.use_boxcount = false;
  const DimensionAnalysis a = analyze_dimension(m, o);
  const DimensionVerdict& v = a.verdict;
  const DivergenceCertificate& c = a.certificate;
  bool green = c.verdict == Verdict::Divergent && a.rho_part.has_value();
  std::string red;
  if (a.rho_part)
    for (const HypothesisCheck& h : a.rho_part->hypotheses)
      if (h.status != Tristate::yes) {
        green = false;
        red += " " + h.name;
      }
  const double O6 = c.table.size() >= 6 ? c.table[5].value : 0.0;
  const bool threshold_ok = c.threshold && std::abs(*c.threshold - 8 * kPi) <= kThresholdTol * 8 * kPi;
  const bool k6_ok = threshold_ok && O6 > *c.threshold;
  const bool in_range = v.exact && v.exact->value >= kDimensionLo && v.exact->value <= kDimensionHi;
  return {in_range && green && threshold_ok && k6_ok,
          fmt("dim %.6f (%s) in [%.3f, %.3f]; hypotheses %s; threshold %.6f; O_6 = %.4f; smallest certifying k0 = %d",
              v.exact ? v.exact->value : NAN, v.exact ? v.exact->provenance.c_str() : "none", kDimensionLo,
              kDimensionHi, green ? "all green" : ("red:" + red).c_str(), c.threshold ? *c.threshold : NAN, O6,
              c.k0 ? *c.k0 : -1)};
}

Outcome divergence_certificate() {
  const OscillationSum s = oscillation_sum(example61(), 6, {kMinRefinement, {}});
  return {s.refinement >= kMinRefinement && s.value > 8 * kPi,
          fmt("O_6 = %.6f (refinement %d, gap %.2e) vs 8 pi = %.6f", s.value, s.refinement, s.gap, 8 * kPi)};
}

Outcome monotonicity() {
  std::vector<FifModel> models{example61()};
  for (FifModel& m : random_models()) models.push_back(std::move(m));
  int failures = 0;
  double worst = 0.0;
  for (const FifModel& m : models) {
    const SpectralSummary s = rho_sequence(m, 6, {kEigenSolverTol, 100000, Exec::parallel});
    for (std::size_t k = 0; k < s.levels.size(); ++k) {
      const RadiusLevel& L = s.levels[k];
      const double sandwich = std::max({L.gamma_lower - L.lower.value, L.lower.value - L.upper.value,
                                        L.upper.value - L.gamma_upper});
      worst = std::max(worst, sandwich);
      failures += sandwich > kMonotoneSlack;
      if (k + 1 < s.levels.size()) {
        const RadiusLevel& next = s.levels[k + 1];
        const double up = next.upper.value - L.upper.value, down = L.lower.value - next.lower.value;
        worst = std::max({worst, up, down});
        failures += (up > kMonotoneSlack) + (down > kMonotoneSlack);
      }
    }
  }
  return {failures == 0, fmt("%zu models, k = 1..6: %d violations, worst excess %.2e (slack %.0e)", models.size(),
                             failures, worst, kMonotoneSlack)};
}

Outcome weierstrass_closed_form() {
  bool ok = true;
  std::string d;
  for (double lambda : {0.5, 0.6, 0.8}) {
    const FifModel w = testing::weierstrass(lambda, 3);
    DimensionOptions o;
    o.box_k_min = kBoxKMin;
    o.box_k_max = kBoxKMax;
    const DimensionAnalysis a = analyze_dimension(w, o);
    const double formula = 2.0 + std::log(lambda) / std::log(3.0);
    const double g = a.gamma_part.exact ? a.gamma_part.exact->value : NAN;
    const double r = a.rho_part && a.rho_part->exact ? a.rho_part->exact->value : NAN;
    const double box = a.verdict.boxcount ? a.verdict.boxcount->estimate : NAN;
    const bool agree = std::abs(g - r) <= kRoutesAgree && std::abs(g - formula) <= kRoutesAgree &&
                       std::abs(r - formula) <= kRoutesAgree;
    const bool box_ok = std::abs(box - formula) <= kBoxCountTol;
    ok = ok && agree && box_ok;
    d += fmt(" lambda=%.1f: formula %.6f gamma %.6f rho %.6f box %.4f;", lambda, formula, g, r, box);
  }
  return {ok, d.substr(1)};
}

Outcome self_affinity() {
  std::vector<FifModel> models{example61(), testing::weierstrass(0.5), testing::weierstrass(0.6),
                               testing::weierstrass(0.8), testing::line_model(3), testing::constant_model(0.5)};
  for (FifModel& m : random_models()) models.push_back(std::move(m));
  std::mt19937_64 rng(kSeed + 1);
  double residual = 0.0, nesting = 0.0;
  for (const FifModel& m : models) {
    const int k = m.n() == 2 ? 12 : 8;
    const GridValues coarse = grid_values(m, k - 1), fine = grid_values(m, k);
    const std::size_t M = coarse.cells;
    for (int t = 0; t < kResidualPoints; ++t) {
      const std::size_t j = rng() % (M + 1);
      const int i = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(m.n()));
      const double x = coarse.x(m.interval(), j);
      const double lhs = fine.values[static_cast<std::size_t>(i - 1) * M + j];
      residual = std::max(residual, std::abs(lhs - (m.S[i - 1](x) * coarse.values[j] + m.q[i - 1](x))));
    }
    const auto N = static_cast<std::size_t>(m.n());
    for (std::size_t j = 0; j <= M; ++j) nesting = std::max(nesting, std::abs(fine.values[N * j] - coarse.values[j]));
  }
  return {residual <= kResidualTol && nesting <= kNestingTol,
          fmt("%zu models: residual %.2e (tol %.0e) at %d points each, nesting %.2e (tol %.0e)", models.size(),
              residual, kResidualTol, kResidualPoints, nesting, kNestingTol)};
}

// Slack for a step O_k -> O_{k+1}: grid values under-estimate oscillations, by
// about the reported gap, so the inequalities are checked with
// gap(O_{k+1}) + gamma^* gap(O_k) added to the side that may be too small.
Outcome oscillation_sandwich() {
  const FifModel m = example61();
  const SumFunctionSummary g = gamma_summary(m, 1);
  const DivergenceCertificate c = divergence_check(m, 9, g);
  const Interval I = m.interval();
  const double E = c.sum_variation_q + c.bounds.beta * m.n() * I.width();
  const double gs = g.gamma_star.hi, gl = g.gamma_lower_star.lo;
  int failures = 0;
  double tightest = INFINITY;
  for (int k = 1; k <= 8; ++k) {
    const OscillationSum& a = c.table[static_cast<std::size_t>(k - 1)];
    const OscillationSum& b = c.table[static_cast<std::size_t>(k)];
    const double slack = b.gap + gs * a.gap;
    const double upper_margin = gs * a.value + E + slack - b.value;
    const double lower_margin = b.value + slack - (gl * a.value - E);
    failures += (upper_margin < 0) + (lower_margin < 0);
    tightest = std::min({tightest, upper_margin, lower_margin});
  }
  return {failures == 0, fmt("k = 1..8, E = %.6f: %d violations, smallest margin %.4f", E, failures, tightest)};
}

Outcome vector_recursion() {
  const FifModel m = example61();
  const EngineBounds bounds = engine_bounds(m);
  int failures = 0, checked = 0;
  double tightest = INFINITY;
  for (int k = 1; k <= 3; ++k) {
    const ScalingMatrices M = build_matrices(m, k);
    const SparseMatrix U = M.upper.to_sparse(), L = M.lower.to_sparse();
    const std::vector<double> u = recursion_offsets(m, k, bounds);
    for (int p = 1; p <= 3; ++p) {
      const OscillationVector vp = oscillation_vector(m, k, p), vq = oscillation_vector(m, k, p + 1);
      std::vector<double> Uv(U.rows), Lv(L.rows), Ug(U.rows);
      kernels::shifted_matvec(U, 0.0, vp.entries, Uv, Exec::serial);
      kernels::shifted_matvec(L, 0.0, vp.entries, Lv, Exec::serial);
      kernels::shifted_matvec(U, 0.0, vp.gaps, Ug, Exec::serial);
      for (std::size_t j = 0; j < u.size(); ++j) {
        const double slack = vq.gaps[j] + Ug[j];
        const double upper_margin = u[j] + Uv[j] + slack - vq.entries[j];
        const double lower_margin = vq.entries[j] + slack - (Lv[j] - u[j]);
        failures += (upper_margin < 0) + (lower_margin < 0);
        tightest = std::min({tightest, upper_margin, lower_margin});
        checked += 2;
      }
    }
  }
  return {failures == 0, fmt("%d entry inequalities (k, p <= 3): %d violations, smallest margin %.4f", checked,
                             failures, tightest)};
}

double oracle_radius(const SparseMatrix& A) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(A.rows), static_cast<Eigen::Index>(A.cols));
  for (std::size_t r = 0; r < A.rows; ++r)
    for (std::size_t p = A.row_ptr[r]; p < A.row_ptr[r + 1]; ++p)
      D(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(A.col[p])) = A.val[p];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(D, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

Outcome oracle_equivalence() {
  std::vector<SparseMatrix> mats;
  std::vector<FifModel> models{example61(), testing::weierstrass(0.5), testing::weierstrass(0.8)};
  for (FifModel& m : random_models()) models.push_back(std::move(m));
  for (const FifModel& m : models)
    for (int k = 1; checked_pow(static_cast<std::size_t>(m.n()), k) <= kOracleMaxDim; ++k) {
      const ScalingMatrices M = build_matrices(m, k);
      mats.push_back(M.upper.to_sparse());
      mats.push_back(M.lower.to_sparse());
    }
  std::mt19937_64 rng(kSeed + 2);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int t = 0; t < 60; ++t) {  // generic nonnegative matrices, including reducible and periodic patterns
    const std::size_t n = 1 + rng() % kOracleMaxDim;
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    const double density = t % 3 == 0 ? 2.0 / static_cast<double>(n) : U(rng);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (U(rng) < density && (t % 5 != 1 || c >= r)) d[r][c] = U(rng);  // t % 5 == 1: upper triangular
    mats.push_back(sparse_from_dense(d));
  }
  double worst = 0.0;
  int failures = 0;
  for (const SparseMatrix& A : mats) {
    const double ours = spectral_radius(A, {kEigenSolverTol, 1000000, Exec::parallel}).value;
    const double ref = oracle_radius(A);
    const double err = std::abs(ours - ref);
    worst = std::max(worst, err);
    failures += err > kOracleTol;
  }
  return {failures == 0, fmt("%zu matrices up to dimension %zu: %d disagreements, worst %.2e (tol %.0e)", mats.size(),
                             kOracleMaxDim, failures, worst, kOracleTol)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"reference radii of example61", reference_radii},
      {"exact level-1 matrix entries", exact_entries},
      {"sum-function extrema", gamma_extrema},
      {"dimension verdict for example61", dimension_verdict},
      {"divergence certificate at level 6", divergence_certificate},
      {"radius monotonicity and sandwich", monotonicity},
      {"weierstrass closed form", weierstrass_closed_form},
      {"self-affinity and grid nesting", self_affinity},
      {"oscillation recursion sandwich", oscillation_sandwich},
      {"oscillation vector recursion", vector_recursion},
      {"spectral radius oracle equivalence", oracle_equivalence},
  };
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  %2d  %-36s  %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
