#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fif/engine.hpp"
#include "fif/kernels.hpp"
#include "fif/model.hpp"

namespace fif {

enum class MatrixKind { upper, lower };

std::string_view to_string(MatrixKind kind);

/// Level-k vertical scaling matrix (N^k x N^k). Row (i-1) N^{k-1} + l
/// (1-based i, l) has its N structural entries in columns (l-1)N+1 .. lN,
/// holding the basic entries max (upper) or min (lower) of |S_i| over the
/// level-k cell of that column.
struct ScalingMatrix {
  int k = 1;
  MatrixKind kind = MatrixKind::upper;
  int n = 2;
  std::size_t dim = 0;
  std::vector<double> basic;  // basic[i * dim + c], i = 0..N-1, c = 0..dim-1
  double max_enclosure_width = 0.0;
  bool certified = true;

  double basic_entry(int i, std::size_t c) const { return basic[static_cast<std::size_t>(i) * dim + c]; }

  /// Entry at 0-based (row, col); zero off the structural pattern.
  double entry(std::size_t row, std::size_t col) const;

  /// CSR form with exact structural zeros (vanishing basic entries) dropped.
  SparseMatrix to_sparse() const;

  /// Column sums sum_i basic[i][c]; the max (upper) / min (lower) of these is
  /// the level-k sum-function bound.
  std::vector<double> column_sums() const;
};

struct ScalingMatrices {
  ScalingMatrix upper;
  ScalingMatrix lower;
};

struct MatrixOptions {
  std::size_t max_dim = kDefaultMaxCells;
  ExtremaOptions extrema{};
  Exec exec = Exec::parallel;
};

ScalingMatrices build_matrices(const FifModel& model, int k, const MatrixOptions& options = {});
ScalingMatrix build_matrix(const FifModel& model, int k, MatrixKind kind, const MatrixOptions& options = {});

struct SpectralOptions {
  double tol = 1e-8;
  std::size_t max_iterations = 100000;
  Exec exec = Exec::parallel;
};

/// rho(A) enclosed by the Collatz-Wielandt bracket [lo, hi]; value is its midpoint.
struct SpectralResult {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  int components = 1;  // strongly connected components of the positive pattern
};

/// Spectral radius of a nonnegative square matrix by power iteration on
/// A + I from the normalized all-ones vector. Reducible patterns are split
/// into strongly connected components and the largest component radius wins.
SpectralResult spectral_radius(const SparseMatrix& A, const SpectralOptions& options = {});

SparseMatrix sparse_from_dense(const std::vector<std::vector<double>>& dense);

enum class Primitivity { Primitive, IrreducibleNotPrimitive, Reducible };

std::string_view to_string(Primitivity p);

struct PrimitivityReport {
  Primitivity kind = Primitivity::Reducible;
  int components = 0;
  int period = 0;  // index of imprimitivity when irreducible
};

/// Classification of the pattern of strictly positive entries.
PrimitivityReport primitivity_check(const SparseMatrix& A);

/// Strongly connected components of the positive pattern; returns the
/// component id of each vertex and sets `count`.
std::vector<int> strongly_connected_components(const SparseMatrix& A, int& count);

struct SumFunctionLevel {
  int k = 1;
  double upper = 0.0;  // max over cells of sum_i max |S_i|
  double lower = 0.0;  // min over cells of sum_i min |S_i|
};

struct SumFunctionSummary {
  ExprFunction gamma;          // sum_i |S_i|, with signs resolved when certified
  bool signs_certified = false;
  bool all_nonnegative = false;
  IntervalBound gamma_star;        // max_I gamma
  IntervalBound gamma_lower_star;  // min_I gamma
  double lipschitz_gamma = 0.0;
  bool constant = false;  // certified constant (enclosure width < 1e-12)
  std::vector<SumFunctionLevel> levels;
};

SumFunctionSummary gamma_summary(const FifModel& model, int k_max, const MatrixOptions& options = {});

struct RadiusLevel {
  int k = 1;
  SpectralResult upper;
  SpectralResult lower;
  double gamma_upper = 0.0;
  double gamma_lower = 0.0;
  Primitivity upper_pattern = Primitivity::Reducible;
  Primitivity lower_pattern = Primitivity::Reducible;
  double enclosure_width = 0.0;
  bool entries_certified = true;
};

struct MonotonicityViolation {
  int k = 0;  // violation between levels k-1 and k
  MatrixKind kind = MatrixKind::upper;
  double previous = 0.0;
  double current = 0.0;
};

struct SpectralSummary {
  double tol = 1e-8;
  std::vector<RadiusLevel> levels;
  double rho_star_upper = 0.0;  // rho(upper M_K), deepest level
  double rho_star_lower = 0.0;  // rho(lower M_K)
  bool positivity_certified = false;  // min_I |S_i| > 0 for every i
  std::optional<double> rho_S;
  std::string rho_S_reason;  // "bracket-closed" or "positivity"
  std::optional<double> extrapolated;  // heuristic Aitken estimate of the common limit
  std::vector<MonotonicityViolation> violations;

  Interval bracket() const { return {rho_star_lower, rho_star_upper}; }
};

SpectralSummary rho_sequence(const FifModel& model, int k_max, const SpectralOptions& spectral = {},
                             const MatrixOptions& options = {});

/// Coordinate listing "row col value" (1-based) after a one-line JSON header.
void write_matrix_coo(std::ostream& out, const ScalingMatrix& m, const std::string& model_name);

/// "k,rho_upper,rho_lower" table.
void write_radii_csv(std::ostream& out, const SpectralSummary& s);

}  // namespace fif
