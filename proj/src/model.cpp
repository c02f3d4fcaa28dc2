#include "fif/model.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "fif/kernels.hpp"

namespace fif {
namespace {

std::string number_text(double v) { return "(" + ExprFunction::constant(v).to_string() + ")"; }

std::vector<double> parse_list(std::string_view text, std::string_view what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view item = text.substr(start, end - start);
    const ExprFunction e = parse_expr(item);
    if (e.depends_on_x()) throw ConfigError(std::string(what) + ": expected constants");
    out.push_back(e(0.0));
    start = end + 1;
  }
  return out;
}

double param_number(const BuiltinParams& p, std::string_view key, double fallback) {
  const auto it = p.find(key);
  if (it == p.end()) return fallback;
  const ExprFunction e = parse_expr(it->second);
  if (e.depends_on_x()) throw ConfigError("builtin parameter " + std::string(key) + " must be a constant");
  return e(0.0);
}

int param_n(const BuiltinParams& p, int fallback) {
  const double n = param_number(p, "n", fallback);
  if (n != std::floor(n) || n < 2 || n > 1000) throw ConfigError("builtin parameter n must be an integer >= 2");
  return static_cast<int>(n);
}

void reject_unknown(const BuiltinParams& p, std::initializer_list<std::string_view> known, std::string_view name) {
  for (const auto& [key, _] : p) {
    bool ok = false;
    for (std::string_view k : known) ok = ok || key == k;
    if (!ok) throw ConfigError("builtin " + std::string(name) + ": unknown parameter '" + key + "'");
  }
}

ModelConfig example61() {
  ModelConfig c;
  c.name = "example61";
  c.n = 3;
  c.interval = {0.0, 1.0};
  // The only knot values consistent with the endpoint conditions of these maps.
  c.y = {2.0, 0.5, 0.5, 2.0};
  c.scaling = {"0.5 + sin(2*pi*x)/4", "0.5 + sin(2*pi*x)/4", "0.5 - sin(2*pi*x)/4"};
  c.offsets = {"cos(2*pi*x/3)", "cos(2*pi*(x + 1)/3)", "cos(2*pi*(x + 2)/3)"};
  return c;
}

ModelConfig weierstrass(const BuiltinParams& p) {
  reject_unknown(p, {"n", "lambda", "phi"}, "weierstrass");
  ModelConfig c;
  c.n = param_n(p, 3);
  const double lambda = param_number(p, "lambda", 0.6);
  const auto it = p.find("phi");
  const std::string phi_text = it == p.end() ? "cos(2*pi*x)" : it->second;
  const ExprFunction phi = parse_expr(phi_text);
  std::ostringstream name;
  name << "weierstrass(n=" << c.n << ",lambda=" << ExprFunction::constant(lambda).to_string() << ",phi=" << phi_text
       << ")";
  c.name = name.str();
  c.interval = {0.0, 1.0};
  for (int i = 1; i <= c.n; ++i) {
    c.scaling.push_back(ExprFunction::constant(lambda).to_string());
    const ExprFunction inner = parse_expr("(x + " + std::to_string(i - 1) + ") / " + std::to_string(c.n));
    c.offsets.push_back(phi.substitute(inner).to_string());
  }
  if (!(std::abs(lambda) < 1.0)) throw ConfigError("weierstrass: |lambda| must be < 1");
  for (int i = 0; i <= c.n; ++i) c.y.push_back(weierstrass_series(c.n, lambda, phi, i, c.n));
  if (!(lambda > 1.0 / c.n && lambda < 1.0))
    c.notes.push_back("lambda outside (1/N, 1): the graph dimension is 1");
  return c;
}

ModelConfig affine(const BuiltinParams& p) {
  reject_unknown(p, {"n", "d", "y", "interval"}, "affine");
  ModelConfig c;
  c.name = "affine";
  c.n = param_n(p, 2);
  if (const auto it = p.find("interval"); it != p.end()) {
    const std::vector<double> iv = parse_list(it->second, "interval");
    if (iv.size() != 2 || !(iv[0] < iv[1])) throw ConfigError("affine: interval must be 'a;b' with a < b");
    c.interval = {iv[0], iv[1]};
  }
  std::vector<double> d(static_cast<std::size_t>(c.n), 0.0);
  if (const auto it = p.find("d"); it != p.end()) d = parse_list(it->second, "d");
  if (d.size() != static_cast<std::size_t>(c.n)) throw ConfigError("affine: d needs n entries");
  if (const auto it = p.find("y"); it != p.end()) {
    c.y = parse_list(it->second, "y");
  } else {
    for (int j = 0; j <= c.n; ++j) c.y.push_back(static_cast<double>(j) / c.n);
  }
  if (c.y.size() != static_cast<std::size_t>(c.n) + 1) throw ConfigError("affine: y needs n+1 entries");
  const double len = c.interval.width();
  for (int i = 1; i <= c.n; ++i) {
    const double di = d[static_cast<std::size_t>(i - 1)];
    const double a = c.y[static_cast<std::size_t>(i - 1)] - di * c.y.front();
    const double b = c.y[static_cast<std::size_t>(i)] - di * c.y.back();
    c.scaling.push_back(ExprFunction::constant(di).to_string());
    c.offsets.push_back(number_text(a) + " + " + number_text(b - a) + " * (x - " + number_text(c.interval.lo) +
                        ") / " + number_text(len));
  }
  return c;
}

Interval witness_cell(Interval I, double where) {
  constexpr std::size_t cells = 1024;
  const double t = (where - I.lo) / I.width();
  const std::size_t j = std::min(cells - 1, static_cast<std::size_t>(std::max(0.0, t) * cells));
  return {grid_point(I, j, cells), grid_point(I, j + 1, cells)};
}

}  // namespace

double InterpolationData::knot(int i) const { return grid_point(interval, static_cast<std::size_t>(i), n); }

double FifModel::affine_map(int i, double x) const {
  return (x - data.interval.lo) / data.n + data.knot(i - 1);
}

Interval FifModel::cell(int k, std::size_t j) const {
  const std::size_t cells = checked_pow(static_cast<std::size_t>(data.n), k);
  return {grid_point(data.interval, j, cells), grid_point(data.interval, j + 1, cells)};
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::NonUniformKnots: return "NonUniformKnots";
    case ViolationKind::ScalingNotContractive: return "ScalingNotContractive";
    case ViolationKind::EndpointMismatch: return "EndpointMismatch";
    case ViolationKind::ExpressionError: return "ExpressionError";
    case ViolationKind::InvalidData: return "InvalidData";
  }
  return "?";
}

namespace {

std::string join_messages(const std::vector<Violation>& v) {
  std::string out = "model validation failed:";
  for (const Violation& x : v) out += "\n  " + std::string(to_string(x.kind)) + ": " + x.message;
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(join_messages(violations)), violations_(std::move(violations)) {}

ValidationResult check_model(const ModelConfig& config) {
  ValidationResult r;
  auto add = [&](ViolationKind kind, int index, std::string message, double value = 0.0, Interval witness = {}) {
    r.violations.push_back({kind, index, value, witness, std::move(message)});
  };
  const int n = config.n;
  Interval I = config.interval;

  if (n < 2) add(ViolationKind::InvalidData, 0, "n must be >= 2");
  if (!(std::isfinite(I.lo) && std::isfinite(I.hi) && I.lo < I.hi))
    add(ViolationKind::InvalidData, 0, "interval must be finite with a < b");
  if (config.y.size() != static_cast<std::size_t>(n) + 1)
    add(ViolationKind::InvalidData, 0, "y needs n+1 = " + std::to_string(n + 1) + " values");
  for (double v : config.y)
    if (!std::isfinite(v)) add(ViolationKind::InvalidData, 0, "y values must be finite");
  if (config.scaling.size() != static_cast<std::size_t>(n) || config.offsets.size() != static_cast<std::size_t>(n))
    add(ViolationKind::InvalidData, 0, "need exactly n scaling and n offset functions");
  if (!r.ok()) return r;

  if (!config.knots.empty()) {
    if (config.knots.size() != static_cast<std::size_t>(n) + 1) {
      add(ViolationKind::NonUniformKnots, 0, "knots need n+1 values");
    } else {
      I = {config.knots.front(), config.knots.back()};
      const double h = I.width() / n;
      for (int i = 1; i <= n; ++i) {
        const double step = config.knots[static_cast<std::size_t>(i)] - config.knots[static_cast<std::size_t>(i - 1)];
        if (!(std::abs(step - h) <= 1e-12 * std::max(1.0, std::abs(I.width())))) {
          std::ostringstream m;
          m << "x_" << i << " - x_" << i - 1 << " = " << step << " differs from |I|/N = " << h;
          add(ViolationKind::NonUniformKnots, i, m.str(), step);
        }
      }
      if (!(I.lo < I.hi)) add(ViolationKind::InvalidData, 0, "knots must increase");
    }
    if (!r.ok()) return r;
  }

  TableRegistry tables;
  for (const auto& [name, text] : config.tables) {
    try {
      tables[name] = parse_table(text);
    } catch (const Error& e) {
      add(ViolationKind::ExpressionError, 0, "table " + name + ": " + e.what());
    }
  }

  FifModel m;
  m.name = config.name;
  m.notes = config.notes;
  m.data = {n, I, config.y};
  auto parse_all = [&](const std::vector<std::string>& texts, std::vector<ExprFunction>& out, char tag) {
    for (std::size_t i = 0; i < texts.size(); ++i) {
      try {
        out.push_back(parse_expr(texts[i], tables));
      } catch (const Error& e) {
        add(ViolationKind::ExpressionError, static_cast<int>(i + 1),
            std::string(1, tag) + std::to_string(i + 1) + " = \"" + texts[i] + "\": " + e.what());
        out.emplace_back();
      }
    }
  };
  parse_all(config.scaling, m.S, 'S');
  parse_all(config.offsets, m.q, 'q');
  if (!r.ok()) return r;

  for (int i = 1; i <= n; ++i) {
    const ExprFunction& S = m.S[static_cast<std::size_t>(i - 1)];
    const Extrema e = interval_extrema_abs(S, I);
    if (e.max.hi >= 1.0) {
      std::ostringstream msg;
      if (e.max.lo >= 1.0)
        msg << "max |S_" << i << "| = " << e.max.lo << " >= 1";
      else
        msg << "cannot certify max |S_" << i << "| < 1 (enclosure [" << e.max.lo << ", " << e.max.hi << "])";
      const Interval w = witness_cell(I, e.max.where);
      msg << " on [" << w.lo << ", " << w.hi << "]";
      add(ViolationKind::ScalingNotContractive, i, msg.str(), e.max.lo, w);
    }
    const VariationBound var = variation_bound(m.q[static_cast<std::size_t>(i - 1)], I);
    if (!std::isfinite(var.upper))
      add(ViolationKind::InvalidData, i, "q_" + std::to_string(i) + " has no finite variation bound");
  }

  const auto& y = m.data.y;
  for (int i = 1; i <= n; ++i) {
    const ExprFunction& S = m.S[static_cast<std::size_t>(i - 1)];
    const ExprFunction& q = m.q[static_cast<std::size_t>(i - 1)];
    const double left = S(I.lo) * y.front() + q(I.lo) - y[static_cast<std::size_t>(i - 1)];
    const double right = S(I.hi) * y.back() + q(I.hi) - y[static_cast<std::size_t>(i)];
    for (const auto& [res, end, target] : {std::tuple{left, "x_0", i - 1}, std::tuple{right, "x_N", i}}) {
      if (!(std::abs(res) <= kEndpointTolerance)) {
        std::ostringstream msg;
        msg << "map " << i << ": S_" << i << "(" << end << ") y + q_" << i << "(" << end << ") - y_" << target
            << " = " << res;
        add(ViolationKind::EndpointMismatch, i, msg.str(), res);
      }
    }
  }
  if (r.ok()) r.model = std::move(m);
  return r;
}

FifModel validate_model(const ModelConfig& config) {
  ValidationResult r = check_model(config);
  if (!r.ok()) throw ValidationError(std::move(r.violations));
  return std::move(*r.model);
}

ModelConfig builtin_model(std::string_view name, const BuiltinParams& params) {
  if (name == "example61") {
    reject_unknown(params, {}, name);
    return example61();
  }
  if (name == "weierstrass") return weierstrass(params);
  if (name == "affine") return affine(params);
  throw ConfigError("unknown builtin model '" + std::string(name) + "' (known: example61, weierstrass, affine)");
}

double weierstrass_series(int n, double lambda, const ExprFunction& phi, std::int64_t num, std::int64_t den) {
  if (den <= 0) throw std::invalid_argument("weierstrass_series: den must be positive");
  if (!(std::abs(lambda) < 1.0)) throw ConfigError("weierstrass_series: |lambda| must be < 1");
  using wide = __int128;
  std::int64_t r = num % den;
  if (r < 0) r += den;
  double sum = 0.0, weight = 1.0;
  const double tail = 1.0 / (1.0 - std::abs(lambda));
  for (int k = 0; k < 10000; ++k) {
    sum += weight * phi(static_cast<double>(r) / static_cast<double>(den));
    weight *= lambda;
    if (std::abs(weight) * tail < 1e-15) break;
    r = static_cast<std::int64_t>((static_cast<wide>(r) * n) % den);
  }
  return sum;
}

}  // namespace fif
