// Normal forms, interval enclosures and the extrema / Lipschitz / variation /
// zero-counting operations built on them.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

#include "expr_detail.hpp"
#include "fif/expr.hpp"

namespace fif {
namespace detail {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// Trig-affine normal form

void normalize(TrigAffine& t) {
  std::vector<Harmonic> hs;
  for (Harmonic h : t.harmonics) {
    if (h.amplitude == 0.0) continue;
    if (h.amplitude < 0.0) {
      h.amplitude = -h.amplitude;
      h.phase += kPi;
    }
    hs.push_back(h);
  }
  std::sort(hs.begin(), hs.end(), [](const Harmonic& a, const Harmonic& b) { return a.frequency < b.frequency; });

  std::vector<Harmonic> merged;
  for (std::size_t i = 0; i < hs.size();) {
    std::size_t j = i + 1;
    while (j < hs.size() && hs[j].frequency - hs[i].frequency <= 1e-14 * hs[j].frequency) ++j;
    if (j == i + 1) {
      merged.push_back(hs[i]);
    } else {
      double re = 0.0, im = 0.0, scale = 0.0;
      for (std::size_t m = i; m < j; ++m) {
        re += hs[m].amplitude * std::cos(hs[m].phase);
        im += hs[m].amplitude * std::sin(hs[m].phase);
        scale += hs[m].amplitude;
      }
      const double amp = std::hypot(re, im);
      if (amp > 1e-13 * scale) merged.push_back({amp, hs[i].frequency, std::atan2(im, re)});
    }
    i = j;
  }
  t.harmonics = std::move(merged);
}

TrigAffine scaled(TrigAffine t, double c) {
  t.constant *= c;
  t.slope *= c;
  for (Harmonic& h : t.harmonics) h.amplitude *= c;
  normalize(t);
  return t;
}

TrigAffine combined(const TrigAffine& a, const TrigAffine& b, double sign) {
  TrigAffine t = a;
  t.constant += sign * b.constant;
  t.slope += sign * b.slope;
  for (Harmonic h : b.harmonics) {
    h.amplitude *= sign;
    t.harmonics.push_back(h);
  }
  normalize(t);
  return t;
}

// ---------------------------------------------------------------------------
// Interval arithmetic

Interval hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
Interval operator-(Interval a, Interval b) { return {a.lo - b.hi, a.hi - b.lo}; }
Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

Interval operator*(Interval a, Interval b) {
  const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Interval scale(Interval a, double c) { return hull(a.lo * c, a.hi * c); }

// sin over [a, b]: peaks at pi/2 + 2 pi m, troughs at -pi/2 + 2 pi m.
Interval sin_range(Interval u) {
  if (u.width() >= kTwoPi) return {-1.0, 1.0};
  Interval r = hull(std::sin(u.lo), std::sin(u.hi));
  const double peak = kPi / 2 + kTwoPi * std::ceil((u.lo - kPi / 2) / kTwoPi);
  if (peak <= u.hi) r.hi = 1.0;
  const double trough = -kPi / 2 + kTwoPi * std::ceil((u.lo + kPi / 2) / kTwoPi);
  if (trough <= u.hi) r.lo = -1.0;
  return r;
}

Interval cos_range(Interval u) {
  if (u.width() >= kTwoPi) return {-1.0, 1.0};
  Interval r = hull(std::cos(u.lo), std::cos(u.hi));
  const double peak = kTwoPi * std::ceil(u.lo / kTwoPi);
  if (peak <= u.hi) r.hi = 1.0;
  const double trough = kPi + kTwoPi * std::ceil((u.lo - kPi) / kTwoPi);
  if (trough <= u.hi) r.lo = -1.0;
  return r;
}

Interval abs_range(Interval u) {
  if (u.lo >= 0.0) return u;
  if (u.hi <= 0.0) return -u;
  return {0.0, std::max(-u.lo, u.hi)};
}

Interval table_range(const PiecewiseTable& t, Interval u) {
  Interval r = hull(t(u.lo), t(u.hi));
  for (std::size_t i = 0; i < t.xs.size(); ++i)
    if (u.lo < t.xs[i] && t.xs[i] < u.hi) r = hull(std::min(r.lo, t.ys[i]), std::max(r.hi, t.ys[i]));
  return r;
}

Interval table_slopes(const PiecewiseTable& t, Interval u) {
  bool any = false;
  Interval r{0.0, 0.0};
  auto add = [&](double s) {
    if (!any) {
      r = {s, s};
      any = true;
    } else {
      r = {std::min(r.lo, s), std::max(r.hi, s)};
    }
  };
  if (u.lo <= t.xs.front() || u.hi >= t.xs.back()) add(0.0);
  for (std::size_t i = 1; i < t.xs.size(); ++i)
    if (t.xs[i] >= u.lo && t.xs[i - 1] <= u.hi) add((t.ys[i] - t.ys[i - 1]) / (t.xs[i] - t.xs[i - 1]));
  return r;
}

struct Enclosure {
  Interval value;
  Interval slope;  // enclosure of the derivative (generalized for abs / tables)
};

Enclosure enclose(const Node& n, Interval x) {
  switch (n.op) {
    case Op::number:
    case Op::pi:
      return {{n.value, n.value}, {0.0, 0.0}};
    case Op::variable:
      return {x, {1.0, 1.0}};
    case Op::add: {
      const Enclosure a = enclose(*n.lhs, x), b = enclose(*n.rhs, x);
      return {a.value + b.value, a.slope + b.slope};
    }
    case Op::sub: {
      const Enclosure a = enclose(*n.lhs, x), b = enclose(*n.rhs, x);
      return {a.value - b.value, a.slope - b.slope};
    }
    case Op::mul: {
      const Enclosure a = enclose(*n.lhs, x), b = enclose(*n.rhs, x);
      return {a.value * b.value, a.slope * b.value + a.value * b.slope};
    }
    case Op::div: {
      const Enclosure a = enclose(*n.lhs, x);
      const double c = 1.0 / evaluate(*n.rhs, 0.0);
      return {scale(a.value, c), scale(a.slope, c)};
    }
    case Op::neg: {
      const Enclosure a = enclose(*n.lhs, x);
      return {-a.value, -a.slope};
    }
    case Op::sin: {
      const Enclosure u = enclose(*n.lhs, x);
      return {sin_range(u.value), cos_range(u.value) * u.slope};
    }
    case Op::cos: {
      const Enclosure u = enclose(*n.lhs, x);
      return {cos_range(u.value), -(sin_range(u.value) * u.slope)};
    }
    case Op::abs: {
      const Enclosure u = enclose(*n.lhs, x);
      Interval d = u.slope;
      if (u.value.hi < 0.0) {
        d = -d;
      } else if (u.value.lo <= 0.0) {
        const double m = std::max(std::abs(d.lo), std::abs(d.hi));
        d = {-m, m};
      }
      return {abs_range(u.value), d};
    }
    case Op::table: {
      const Enclosure u = enclose(*n.lhs, x);
      return {table_range(*n.table, u.value), table_slopes(*n.table, u.value) * u.slope};
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Piecewise-linear breakpoints

void collect_breakpoints(const Node& n, Interval J, std::vector<double>& out);

std::vector<double> sorted_points(const Node& n, Interval J) {
  std::vector<double> pts{J.lo, J.hi};
  collect_breakpoints(n, J, pts);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

void collect_breakpoints(const Node& n, Interval J, std::vector<double>& out) {
  if (!has_variable(n)) return;
  switch (n.op) {
    case Op::add:
    case Op::sub:
    case Op::mul:
      collect_breakpoints(*n.lhs, J, out);
      collect_breakpoints(*n.rhs, J, out);
      return;
    case Op::div:
    case Op::neg:
      collect_breakpoints(*n.lhs, J, out);
      return;
    case Op::abs: {
      const std::vector<double> pts = sorted_points(*n.lhs, J);
      double prev = evaluate(*n.lhs, pts[0]);
      if (prev == 0.0) out.push_back(pts[0]);
      for (std::size_t i = 1; i < pts.size(); ++i) {
        const double v = evaluate(*n.lhs, pts[i]);
        if (v == 0.0) {
          out.push_back(pts[i]);
        } else if ((prev < 0.0 && v > 0.0) || (prev > 0.0 && v < 0.0)) {
          const double root = pts[i - 1] - prev * (pts[i] - pts[i - 1]) / (v - prev);
          out.push_back(std::clamp(root, pts[i - 1], pts[i]));
        }
        prev = v;
      }
      for (double p : pts) out.push_back(p);
      return;
    }
    case Op::table: {
      const std::optional<TrigAffine> arg = trig_affine_form(*n.lhs);
      if (!arg || arg->slope == 0.0) return;
      for (double t : n.table->xs) {
        const double x = (t - arg->constant) / arg->slope;
        if (J.contains(x)) out.push_back(x);
      }
      return;
    }
    default:
      return;
  }
}

// ---------------------------------------------------------------------------
// Extrema

IntervalBound exact_bound(double v, double where) { return {v, v, true, where}; }

std::optional<Extrema> closed_form_extrema(const Impl& f, Interval J) {
  const auto& p = f.program;
  if (f.trig && (f.trig->is_affine() || f.trig->is_single_sinusoid())) {
    double vmin = p(J.lo), vmax = vmin, wmin = J.lo, wmax = J.lo;
    const double vb = p(J.hi);
    if (vb < vmin) vmin = vb, wmin = J.hi;
    if (vb > vmax) vmax = vb, wmax = J.hi;
    if (f.trig->is_single_sinusoid()) {
      const Harmonic& h = f.trig->harmonics.front();
      const double ta = h.frequency * J.lo + h.phase, tb = h.frequency * J.hi + h.phase;
      const double peak = kPi / 2 + kTwoPi * std::ceil((ta - kPi / 2) / kTwoPi);
      if (peak <= tb) vmax = f.trig->constant + h.amplitude, wmax = (peak - h.phase) / h.frequency;
      const double trough = -kPi / 2 + kTwoPi * std::ceil((ta + kPi / 2) / kTwoPi);
      if (trough <= tb) vmin = f.trig->constant - h.amplitude, wmin = (trough - h.phase) / h.frequency;
    }
    return Extrema{exact_bound(vmin, wmin), exact_bound(vmax, wmax)};
  }
  if (f.pwl) {
    const std::vector<double> pts = sorted_points(*f.root, J);
    double vmin = p(pts[0]), vmax = vmin, wmin = pts[0], wmax = pts[0];
    for (double x : pts) {
      const double v = p(x);
      if (v < vmin) vmin = v, wmin = x;
      if (v > vmax) vmax = v, wmax = x;
    }
    return Extrema{exact_bound(vmin, wmin), exact_bound(vmax, wmax)};
  }
  return std::nullopt;
}

struct Cell {
  double lo, hi, ub;
  bool operator<(const Cell& o) const { return ub < o.ub; }
};

// Branch and bound for max of sign * f over J.
IntervalBound maximize(const Impl& f, Interval J, double sign, const ExtremaOptions& opt) {
  double best = -INFINITY, where = J.lo;
  auto g = [&](double x) {
    const double v = sign * f.program(x);
    if (v > best) best = v, where = x;
    return v;
  };
  auto bound = [&](double a, double b) {
    const Enclosure e = enclose(*f.root, {a, b});
    const double vhi = sign > 0 ? e.value.hi : -e.value.lo;
    const Interval d = sign > 0 ? e.slope : -e.slope;
    if (d.lo >= 0.0) return g(b);
    if (d.hi <= 0.0) return g(a);
    const double gm = g(0.5 * (a + b));
    return std::min(vhi, gm + 0.5 * (b - a) * std::max(d.hi, -d.lo));
  };

  g(J.lo);
  g(J.hi);
  std::priority_queue<Cell> heap;
  heap.push({J.lo, J.hi, bound(J.lo, J.hi)});
  std::size_t splits = 0;
  bool certified = true;
  double stuck = -INFINITY;  // bounds of cells too narrow to split further
  for (;;) {
    if (heap.empty()) break;
    const double tol = opt.relative_tolerance * std::max(1.0, std::abs(best));
    const Cell c = heap.top();
    if (c.ub <= best + tol) break;
    if (splits >= opt.max_subdivisions) {
      certified = false;
      break;
    }
    heap.pop();
    ++splits;
    const double m = 0.5 * (c.lo + c.hi);
    if (!(m > c.lo && m < c.hi)) {
      stuck = std::max(stuck, c.ub);
      continue;
    }
    for (const auto& [a, b] : {std::pair{c.lo, m}, std::pair{m, c.hi}}) {
      const double ub = bound(a, b);
      if (ub > best) heap.push({a, b, ub});
    }
  }
  double hi = std::max(best, stuck);
  if (!heap.empty()) hi = std::max(hi, heap.top().ub);
  if (sign > 0) return {best, hi, certified, where};
  return {-hi, -best, certified, where};
}

// Points where the derivative of slope*x + A sin(w x + p) vanishes inside J.
std::vector<double> sinusoid_critical_points(double slope, const Harmonic& h, Interval J) {
  std::vector<double> out;
  const double r = -slope / (h.amplitude * h.frequency);
  if (std::abs(r) > 1.0) return out;
  const double base = std::acos(r);
  const double ta = h.frequency * J.lo + h.phase, tb = h.frequency * J.hi + h.phase;
  for (double root : {base, -base}) {
    for (double t = root + kTwoPi * std::ceil((ta - root) / kTwoPi); t <= tb; t += kTwoPi) {
      const double x = (t - h.phase) / h.frequency;
      if (x > J.lo && x < J.hi) out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::optional<TrigAffine> trig_affine_form(const Node& n) {
  if (!has_variable(n)) {
    TrigAffine t;
    t.constant = evaluate(n, 0.0);
    return t;
  }
  switch (n.op) {
    case Op::variable: {
      TrigAffine t;
      t.slope = 1.0;
      return t;
    }
    case Op::add:
    case Op::sub: {
      auto a = trig_affine_form(*n.lhs), b = trig_affine_form(*n.rhs);
      if (!a || !b) return std::nullopt;
      return combined(*a, *b, n.op == Op::add ? 1.0 : -1.0);
    }
    case Op::neg: {
      auto a = trig_affine_form(*n.lhs);
      if (!a) return std::nullopt;
      return scaled(*a, -1.0);
    }
    case Op::mul: {
      if (!has_variable(*n.lhs)) {
        auto b = trig_affine_form(*n.rhs);
        if (!b) return std::nullopt;
        return scaled(*b, evaluate(*n.lhs, 0.0));
      }
      if (!has_variable(*n.rhs)) {
        auto a = trig_affine_form(*n.lhs);
        if (!a) return std::nullopt;
        return scaled(*a, evaluate(*n.rhs, 0.0));
      }
      return std::nullopt;
    }
    case Op::div: {
      auto a = trig_affine_form(*n.lhs);
      if (!a) return std::nullopt;
      return scaled(*a, 1.0 / evaluate(*n.rhs, 0.0));
    }
    case Op::sin:
    case Op::cos: {
      auto arg = trig_affine_form(*n.lhs);
      if (!arg || !arg->is_affine()) return std::nullopt;
      Harmonic h{1.0, arg->slope, arg->constant + (n.op == Op::cos ? kPi / 2 : 0.0)};
      if (h.frequency < 0.0) {
        h.frequency = -h.frequency;
        h.phase = kPi - h.phase;
      }
      TrigAffine t;
      t.harmonics.push_back(h);
      return t;
    }
    default:
      return std::nullopt;
  }
}

bool piecewise_linear_form(const Node& n) {
  if (!has_variable(n)) return true;
  switch (n.op) {
    case Op::variable:
      return true;
    case Op::add:
    case Op::sub:
      return piecewise_linear_form(*n.lhs) && piecewise_linear_form(*n.rhs);
    case Op::mul:
      return (!has_variable(*n.lhs) && piecewise_linear_form(*n.rhs)) ||
             (!has_variable(*n.rhs) && piecewise_linear_form(*n.lhs));
    case Op::div:
    case Op::neg:
    case Op::abs:
      return piecewise_linear_form(*n.lhs);
    case Op::table: {
      const auto arg = trig_affine_form(*n.lhs);
      return arg && arg->is_affine();
    }
    default:
      return false;
  }
}

}  // namespace detail

namespace {

const detail::Impl& impl_of(const ExprFunction& f) { return f.impl(); }

}  // namespace

Extrema interval_extrema(const ExprFunction& f, Interval J, const ExtremaOptions& options) {
  if (J.hi < J.lo) throw std::invalid_argument("interval_extrema: empty interval");
  const detail::Impl& impl = impl_of(f);
  if (auto exact = detail::closed_form_extrema(impl, J)) return *exact;
  if (J.hi == J.lo) {
    const double v = f(J.lo);
    return {{v, v, true, J.lo}, {v, v, true, J.lo}};
  }
  return {detail::maximize(impl, J, -1.0, options), detail::maximize(impl, J, 1.0, options)};
}

Extrema interval_extrema_abs(const ExprFunction& f, Interval J, const ExtremaOptions& options) {
  const Extrema e = interval_extrema(f, J, options);
  const IntervalBound& M = e.max;
  const IntervalBound& m = e.min;
  const bool certified = M.certified && m.certified;

  Extrema out;
  if (M.lo >= -m.hi)
    out.max = {std::max(M.lo, -m.hi), std::max(M.hi, -m.lo), certified, M.where};
  else
    out.max = {std::max(M.lo, -m.hi), std::max(M.hi, -m.lo), certified, m.where};

  if (m.lo > 0.0) {
    out.min = {m.lo, m.hi, certified, m.where};
  } else if (M.hi < 0.0) {
    out.min = {-M.hi, -M.lo, certified, M.where};
  } else if (m.hi <= 0.0 && M.lo >= 0.0) {
    // sign change or touching zero: continuity puts a zero inside J
    const double where = m.hi == 0.0 ? m.where : M.lo == 0.0 ? M.where : 0.5 * (m.where + M.where);
    out.min = {0.0, 0.0, certified, where};
  } else {
    out.min = {0.0, std::max({0.0, m.hi, -M.lo}), false, m.where};
  }
  return out;
}

Interval range_enclosure(const ExprFunction& f, Interval J) { return detail::enclose(f.node(), J).value; }

double lipschitz_bound(const ExprFunction& f, Interval J) {
  const detail::Impl& impl = impl_of(f);
  const detail::Enclosure e = detail::enclose(*impl.root, J);
  double L = std::max(std::abs(e.slope.lo), std::abs(e.slope.hi));
  if (impl.trig) {
    double t = std::abs(impl.trig->slope);
    for (const Harmonic& h : impl.trig->harmonics) t += h.amplitude * h.frequency;
    L = std::min(L, t);
  }
  if (impl.pwl && J.hi > J.lo) {
    const std::vector<double> pts = detail::sorted_points(*impl.root, J);
    double exact = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i)
      if (pts[i] > pts[i - 1])
        exact = std::max(exact, std::abs((f(pts[i]) - f(pts[i - 1])) / (pts[i] - pts[i - 1])));
    L = std::min(L, exact);
  }
  return L;
}

VariationEstimate total_variation(const ExprFunction& f, Interval J, int level, int base, double tolerance) {
  if (level < 1) throw std::invalid_argument("total_variation: level must be >= 1");
  if (base < 2) throw std::invalid_argument("total_variation: base must be >= 2");
  if (static_cast<double>(level) * std::log2(static_cast<double>(base)) > 24.0)
    throw CapacityError("total_variation: too many cells");
  auto osc_sum = [&](std::size_t cells) {
    double sum = 0.0;
    for (std::size_t j = 0; j < cells; ++j) {
      const double a = J.lo + J.width() * (static_cast<double>(j) / static_cast<double>(cells));
      const double b = J.lo + J.width() * (static_cast<double>(j + 1) / static_cast<double>(cells));
      const Extrema e = interval_extrema(f, {a, b});
      sum += e.max.value() - e.min.value();
    }
    return sum;
  };
  std::size_t cells = 1;
  for (int i = 0; i < level; ++i) cells *= static_cast<std::size_t>(base);
  VariationEstimate v;
  v.level = level;
  v.value = osc_sum(cells);
  v.previous = osc_sum(cells / static_cast<std::size_t>(base));
  v.converged = std::abs(v.value - v.previous) < tolerance;
  return v;
}

VariationBound variation_bound(const ExprFunction& f, Interval J) {
  const detail::Impl& impl = impl_of(f);
  // Trig-affine expressions are measured through their normal form so that
  // cancelling sums (e.g. harmonics adding to zero) have exactly zero variation.
  auto value = [&](double x) { return impl.trig ? (*impl.trig)(x) : f(x); };
  auto path_length = [&](std::vector<double> pts) {
    pts.push_back(J.lo);
    pts.push_back(J.hi);
    std::sort(pts.begin(), pts.end());
    double sum = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) sum += std::abs(value(pts[i]) - value(pts[i - 1]));
    return sum;
  };
  if (impl.pwl) {
    const double v = path_length(detail::sorted_points(*impl.root, J));
    return {v, v, true};
  }
  if (impl.trig && impl.trig->harmonics.size() <= 1) {
    std::vector<double> pts;
    if (!impl.trig->harmonics.empty())
      pts = detail::sinusoid_critical_points(impl.trig->slope, impl.trig->harmonics.front(), J);
    const double v = path_length(pts);
    return {v, v, true};
  }
  constexpr std::size_t samples = 1u << 14;
  std::vector<double> pts(samples + 1);
  for (std::size_t i = 0; i <= samples; ++i)
    pts[i] = J.lo + J.width() * (static_cast<double>(i) / static_cast<double>(samples));
  VariationBound b;
  b.lower = path_length(pts);
  constexpr std::size_t cells = 1024;
  for (std::size_t i = 0; i < cells; ++i) {
    const Interval c{pts[i * (samples / cells)], pts[(i + 1) * (samples / cells)]};
    b.upper += lipschitz_bound(f, c) * c.width();
  }
  b.upper = std::max(b.upper, b.lower);
  return b;
}

ZeroCount count_zeros(const ExprFunction& f, Interval J) {
  const detail::Impl& impl = impl_of(f);
  using Kind = ZeroCount::Kind;
  if (impl.trig) {
    const TrigAffine& t = *impl.trig;
    if (t.is_zero()) return {Kind::infinite, 0};
    if (t.is_affine()) {
      if (t.slope == 0.0) return {Kind::exact, 0};
      const double root = -t.constant / t.slope;
      const double slack = 1e-15 * std::max({1.0, std::abs(J.lo), std::abs(J.hi)});
      return {Kind::exact, (root >= J.lo - slack && root <= J.hi + slack) ? 1u : 0u};
    }
    if (t.is_single_sinusoid()) {
      const Harmonic& h = t.harmonics.front();
      const double v = -t.constant / h.amplitude;
      if (std::abs(v) > 1.0 + 1e-15) return {Kind::exact, 0};
      const double s = std::asin(std::clamp(v, -1.0, 1.0));
      const double ta = h.frequency * J.lo + h.phase, tb = h.frequency * J.hi + h.phase;
      const double eps = 1e-12 * std::max({1.0, std::abs(ta), std::abs(tb)});
      std::vector<double> roots;
      for (double root : {s, detail::kPi - s})
        for (double th = root + detail::kTwoPi * std::ceil((ta - eps - root) / detail::kTwoPi); th <= tb + eps; th += detail::kTwoPi)
          roots.push_back(th);
      std::sort(roots.begin(), roots.end());
      std::size_t n = 0;
      for (std::size_t i = 0; i < roots.size(); ++i)
        if (i == 0 || roots[i] - roots[i - 1] > eps) ++n;
      return {Kind::exact, n};
    }
  }
  if (impl.pwl) {
    const std::vector<double> pts = detail::sorted_points(*impl.root, J);
    std::vector<double> vals(pts.size());
    double scale = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) scale = std::max(scale, std::abs(vals[i] = f(pts[i])));
    const double zero = 1e-14 * scale;
    std::size_t n = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (std::abs(vals[i]) <= zero) {
        if (i > 0 && std::abs(vals[i - 1]) <= zero) return {Kind::infinite, 0};
        ++n;
      } else if (i > 0 && std::abs(vals[i - 1]) > zero && (vals[i] > 0) != (vals[i - 1] > 0)) {
        ++n;
      }
    }
    return {Kind::exact, n};
  }
  constexpr std::size_t samples = 10000;
  std::size_t n = 0;
  double prev = f(J.lo);
  if (prev == 0.0) ++n;
  for (std::size_t i = 1; i <= samples; ++i) {
    const double v = f(J.lo + J.width() * (static_cast<double>(i) / samples));
    if (v == 0.0 || (prev != 0.0 && (v > 0) != (prev > 0))) ++n;
    prev = v;
  }
  return {Kind::unknown, n};
}

Tristate vanishes_on_subinterval(const ExprFunction& f, Interval J) {
  const detail::Impl& impl = impl_of(f);
  if (impl.trig) return impl.trig->is_zero() ? Tristate::yes : Tristate::no;
  if (impl.pwl) return count_zeros(f, J).kind == ZeroCount::Kind::infinite ? Tristate::yes : Tristate::no;
  if (impl.analytic) {
    // a real-analytic function vanishing on a subinterval vanishes everywhere
    for (int i = 0; i <= 256; ++i)
      if (f(J.lo + J.width() * (i / 256.0)) != 0.0) return Tristate::no;
    return Tristate::yes;
  }
  if (interval_extrema_abs(f, J).min.lo > 0.0) return Tristate::no;
  return Tristate::unknown;
}

Tristate finitely_many_zeros(const ExprFunction& f, Interval J) {
  const ZeroCount z = count_zeros(f, J);
  if (z.kind == ZeroCount::Kind::exact) return Tristate::yes;
  if (z.kind == ZeroCount::Kind::infinite) return Tristate::no;
  const detail::Impl& impl = impl_of(f);
  if (impl.analytic) return vanishes_on_subinterval(f, J) == Tristate::no ? Tristate::yes : Tristate::no;
  if (interval_extrema_abs(f, J).min.lo > 0.0) return Tristate::yes;
  return Tristate::unknown;
}

}  // namespace fif
