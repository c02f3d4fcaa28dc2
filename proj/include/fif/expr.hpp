#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fif/error.hpp"

namespace fif {

/// Closed real interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Enclosure [lo, hi] of an extremum. When `certified` is set the true
/// extremum lies inside; otherwise the enclosure is the best found before the
/// subdivision budget ran out. `where` is an abscissa attaining (or nearly
/// attaining) the witness value.
struct IntervalBound {
  double lo = 0.0;
  double hi = 0.0;
  bool certified = true;
  double where = 0.0;

  double value() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
};

struct Extrema {
  IntervalBound min;
  IntervalBound max;
};

struct ExtremaOptions {
  double relative_tolerance = 1e-12;
  std::size_t max_subdivisions = 100000;
};

/// Piecewise-linear table with strictly increasing abscissae. Outside the
/// table range the end values are held constant.
struct PiecewiseTable {
  std::vector<double> xs;
  std::vector<double> ys;

  PiecewiseTable(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;
  double max_abs_slope() const;
};

using TableRegistry = std::map<std::string, std::shared_ptr<const PiecewiseTable>, std::less<>>;

/// amplitude * sin(frequency * x + phase), frequency > 0.
struct Harmonic {
  double amplitude = 0.0;
  double frequency = 0.0;
  double phase = 0.0;
};

/// constant + slope * x + sum of harmonics with pairwise distinct frequencies.
struct TrigAffine {
  double constant = 0.0;
  double slope = 0.0;
  std::vector<Harmonic> harmonics;

  double operator()(double x) const;
  bool is_affine() const { return harmonics.empty(); }
  bool is_single_sinusoid() const { return slope == 0.0 && harmonics.size() == 1; }
  bool is_zero() const { return constant == 0.0 && slope == 0.0 && harmonics.empty(); }
  bool is_constant() const { return slope == 0.0 && harmonics.empty(); }
};

namespace detail {
struct Node;
struct Impl;
}  // namespace detail

/// Immutable real function of one variable given by an expression tree over
/// {constants, pi, x, + - * /, unary -, sin, cos, abs, piecewise tables}.
/// Copies share the tree; every operation is safe to call concurrently.
class ExprFunction {
 public:
  ExprFunction();  // the zero function

  static ExprFunction constant(double value);
  static ExprFunction variable();
  static ExprFunction table(std::string name, std::shared_ptr<const PiecewiseTable> table);

  double operator()(double x) const;

  /// Canonical text; parse(to_string()) reproduces the same tree.
  std::string to_string() const;

  bool depends_on_x() const;

  /// Replace every occurrence of x with `inner`.
  ExprFunction substitute(const ExprFunction& inner) const;

  /// Closed-form normal form when the expression is a trig-affine combination.
  const std::optional<TrigAffine>& trig_affine() const;

  /// True when the expression is piecewise linear (affine pieces, abs, tables
  /// of affine arguments); such expressions have exact extrema.
  bool is_piecewise_linear() const;

  /// True when the expression contains neither abs nor tables (real-analytic).
  bool is_analytic() const;

  const detail::Node& node() const;
  const detail::Impl& impl() const { return *impl_; }

  friend ExprFunction operator+(const ExprFunction& a, const ExprFunction& b);
  friend ExprFunction operator-(const ExprFunction& a, const ExprFunction& b);
  friend ExprFunction operator*(const ExprFunction& a, const ExprFunction& b);
  friend ExprFunction operator-(const ExprFunction& a);
  friend ExprFunction abs(const ExprFunction& a);

  explicit ExprFunction(std::shared_ptr<const detail::Node> root);

 private:
  std::shared_ptr<const detail::Impl> impl_;
};

/// Structural equality of two expression trees (same shape and constants).
bool same_tree(const ExprFunction& a, const ExprFunction& b);

ExprFunction parse_expr(std::string_view source, const TableRegistry& tables = {});

/// Parses a piecewise-linear table written as "(x0, y0) (x1, y1) ...".
/// Abscissae must be strictly increasing.
std::shared_ptr<const PiecewiseTable> parse_table(std::string_view source);

/// Signed extrema of f over J. Closed form for affine, single-sinusoid and
/// piecewise-linear expressions; branch-and-bound with derivative enclosures
/// otherwise.
Extrema interval_extrema(const ExprFunction& f, Interval J, const ExtremaOptions& options = {});

/// Extrema of |f| over J.
Extrema interval_extrema_abs(const ExprFunction& f, Interval J, const ExtremaOptions& options = {});

/// Enclosure of f over J from interval arithmetic alone (no subdivision).
Interval range_enclosure(const ExprFunction& f, Interval J);

/// L with |f(x') - f(x'')| <= L |x' - x''| on J.
double lipschitz_bound(const ExprFunction& f, Interval J);

struct VariationEstimate {
  double value = 0.0;    // O_level(f, J)
  double previous = 0.0; // O_{level-1}(f, J), 0 at level 1
  int level = 1;
  bool converged = false;
};

/// Oscillation sum of f over the base^level uniform cells of J; a lower
/// approximation of the total variation that is nondecreasing in level.
VariationEstimate total_variation(const ExprFunction& f, Interval J, int level, int base = 2,
                                  double tolerance = 1e-9);

struct VariationBound {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
};

/// Two-sided bound on Var(f, J); exact for trig-affine with at most one
/// harmonic, affine and piecewise-linear expressions.
VariationBound variation_bound(const ExprFunction& f, Interval J);

struct ZeroCount {
  enum class Kind { exact, infinite, unknown };
  Kind kind = Kind::unknown;
  std::size_t count = 0;  // exact count, or sampled estimate when unknown
};

ZeroCount count_zeros(const ExprFunction& f, Interval J);

enum class Tristate { yes, no, unknown };

/// Whether f vanishes identically on some nondegenerate subinterval of J.
Tristate vanishes_on_subinterval(const ExprFunction& f, Interval J);

/// Whether f has only finitely many zeros on J.
Tristate finitely_many_zeros(const ExprFunction& f, Interval J);

}  // namespace fif
