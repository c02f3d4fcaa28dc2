#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fif/expr.hpp"

namespace fif {

/// Interpolation data {(x_i, y_i)}, i = 0..N, on uniform knots over I.
struct InterpolationData {
  int n = 0;
  Interval interval{0.0, 1.0};
  std::vector<double> y;

  /// Knot x_i, computed from the exact fraction i/N of the interval.
  double knot(int i) const;
};

/// Declarative model description: expression texts plus numeric data.
struct ModelConfig {
  std::string name;
  int n = 0;
  Interval interval{0.0, 1.0};
  std::vector<double> y;
  std::vector<double> knots;  // optional; when given must be uniform
  std::vector<std::string> scaling;
  std::vector<std::string> offsets;
  std::map<std::string, std::string> tables;  // name -> "(x, y) ..." text
  std::vector<std::string> notes;             // informational flags (e.g. parameter regime)
};

/// A fractal interpolation function model: f(L_i(x)) = S_i(x) f(x) + q_i(x)
/// with L_i(x) = (x - x_0)/N + x_{i-1}.
struct FifModel {
  std::string name;
  InterpolationData data;
  std::vector<ExprFunction> S;
  std::vector<ExprFunction> q;
  std::vector<std::string> notes;

  int n() const { return data.n; }
  const Interval& interval() const { return data.interval; }

  /// L_i(x) for map index i in 1..N.
  double affine_map(int i, double x) const;

  /// j-th cell (0-based) of the uniform level-k partition of I.
  Interval cell(int k, std::size_t j) const;
};

enum class ViolationKind { NonUniformKnots, ScalingNotContractive, EndpointMismatch, ExpressionError, InvalidData };

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  int index = 0;        // 1-based map index when applicable
  double value = 0.0;   // certified max |S_i| or endpoint residual
  Interval witness{};   // subinterval attaining the reported value
  std::string message;
};

/// Thrown by validate_model with the complete list of violations.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

struct ValidationResult {
  std::optional<FifModel> model;
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

/// Endpoint-condition tolerance (absolute).
inline constexpr double kEndpointTolerance = 1e-9;

/// Checks uniform knots, |S_i| < 1 on I (certified), q_i of bounded variation
/// and the endpoint conditions S_i(x_0) y_0 + q_i(x_0) = y_{i-1},
/// S_i(x_N) y_N + q_i(x_N) = y_i.
ValidationResult check_model(const ModelConfig& config);

/// As check_model but throws ValidationError on any violation.
FifModel validate_model(const ModelConfig& config);

using BuiltinParams = std::map<std::string, std::string, std::less<>>;

/// Built-in models: "example61", "weierstrass" (n, lambda, phi) and "affine"
/// (n, d, y). Throws ConfigError for unknown names or parameters.
ModelConfig builtin_model(std::string_view name, const BuiltinParams& params = {});

/// g(num/den) for g(x) = sum_k lambda^k phi(N^k x), with phi 1-periodic.
/// Arguments are reduced mod 1 in exact integer arithmetic; the series is
/// truncated once the tail bound lambda^k / (1 - lambda) drops below 1e-15.
double weierstrass_series(int n, double lambda, const ExprFunction& phi, std::int64_t num, std::int64_t den);

}  // namespace fif
