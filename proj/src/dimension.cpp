#include "fif/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fif {
namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

Tristate tri(bool b) { return b ? Tristate::yes : Tristate::no; }

double dim_of(double growth, int n) { return 1.0 + std::log(growth) / std::log(static_cast<double>(n)); }

bool f_nonconstant_on_grid(const FifModel& model) {
  const GridValues g = grid_values(model, 2, {kDefaultMaxCells, Exec::serial});
  const auto [lo, hi] = std::minmax_element(g.values.begin(), g.values.end());
  return *hi > *lo;
}

}  // namespace

std::vector<ZeroStructure> zero_structure(const FifModel& model) {
  std::vector<ZeroStructure> out;
  for (const ExprFunction& S : model.S)
    out.push_back({count_zeros(S, model.interval()), vanishes_on_subinterval(S, model.interval()),
                   finitely_many_zeros(S, model.interval())});
  return out;
}

PartialVerdict dim_bounds_gamma(const FifModel& model, const SumFunctionSummary& gamma,
                                const DivergenceCertificate& cert) {
  PartialVerdict v;
  const int N = model.n();
  const double g_hi = gamma.gamma_star.hi, g_lo = gamma.gamma_lower_star.lo;
  const bool divergent = cert.verdict == Verdict::Divergent;

  v.upper = TaggedBound{std::max(1.0, dim_of(g_hi, N)), "gamma"};
  v.hypotheses.push_back({"gamma_lower_star > 1", tri(g_lo > 1.0), "gamma_* = " + fmt(g_lo)});
  v.hypotheses.push_back({"variation divergent", divergent ? Tristate::yes : cert.verdict == Verdict::Bounded ? Tristate::no : Tristate::unknown,
                          std::string(to_string(cert.verdict)) + ": " + cert.reason});
  if (g_lo > 1.0 && divergent)
    v.lower = TaggedBound{dim_of(g_lo, N), "gamma"};
  else
    v.notes.push_back("gamma lower bound omitted: needs gamma_* > 1 and divergent variation");

  v.hypotheses.push_back({"gamma constant", tri(gamma.constant),
                          "gamma in [" + fmt(gamma.gamma_lower_star.lo) + ", " + fmt(gamma.gamma_star.hi) + "]"});
  if (!gamma.constant) return v;

  const double g0 = 0.5 * (gamma.gamma_star.value() + gamma.gamma_lower_star.value());
  if (g0 <= 1.0 || cert.verdict == Verdict::Bounded) {
    v.exact = TaggedBound{1.0, "constant-gamma"};
    return v;
  }
  if (divergent) {
    v.exact = TaggedBound{dim_of(g0, N), "constant-gamma"};
    return v;
  }
  ExprFunction q_sum = model.q.front();
  for (std::size_t i = 1; i < model.q.size(); ++i) q_sum = q_sum + model.q[i];
  const auto& t = q_sum.trig_affine();
  const bool sum_constant = (t && t->is_constant()) || variation_bound(q_sum, model.interval()).upper == 0.0;
  const bool nonconstant = f_nonconstant_on_grid(model);
  v.hypotheses.push_back({"sum of offsets constant", tri(sum_constant), q_sum.to_string()});
  v.hypotheses.push_back({"f non-constant", tri(nonconstant), "checked on the level-2 grid"});
  if (sum_constant && nonconstant) v.exact = TaggedBound{dim_of(g0, N), "constant-gamma"};
  return v;
}

PartialVerdict dim_bounds_rho(const FifModel& model, const SpectralSummary& spectral,
                              const DivergenceCertificate& cert, const std::vector<ZeroStructure>& zeros) {
  PartialVerdict v;
  const int N = model.n();
  const RadiusLevel& K = spectral.levels.back();

  bool no_vanishing = true, finite_zeros = true;
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    no_vanishing = no_vanishing && zeros[i].vanishes_on_subinterval == Tristate::no;
    finite_zeros = finite_zeros && zeros[i].finitely_many_zeros == Tristate::yes;
  }
  const bool divergent = cert.verdict == Verdict::Divergent;
  const bool gamma_ok = cert.gamma_lower_star >= 1.0;
  v.hypotheses.push_back({"no S_i vanishes on a subinterval", tri(no_vanishing), ""});
  v.hypotheses.push_back({"every S_i has finitely many zeros", tri(finite_zeros), ""});
  v.hypotheses.push_back({"gamma_lower_star >= 1", tri(gamma_ok), "gamma_* = " + fmt(cert.gamma_lower_star)});
  v.hypotheses.push_back({"matrix limits coincide", spectral.rho_S ? Tristate::yes : Tristate::unknown,
                          spectral.rho_S ? spectral.rho_S_reason
                                         : "bracket [" + fmt(spectral.rho_star_lower) + ", " +
                                               fmt(spectral.rho_star_upper) + "] open"});

  if (no_vanishing)
    v.upper = TaggedBound{std::max(1.0, dim_of(K.upper.hi, N)), "rho"};
  else
    v.notes.push_back("rho upper bound omitted: some S_i may vanish on a subinterval");
  const bool lower_ok = gamma_ok && finite_zeros && divergent;
  if (lower_ok && K.lower.lo > 0.0)
    v.lower = TaggedBound{dim_of(K.lower.lo, N), "rho"};
  else
    v.notes.push_back("rho lower bound omitted: needs gamma_* >= 1, finitely many zeros and divergent variation");

  if (spectral.rho_S && no_vanishing && lower_ok) {
    v.exact = TaggedBound{dim_of(*spectral.rho_S, N), "rho-equal"};
    v.exact_range = Interval{dim_of(K.lower.lo, N), dim_of(K.upper.hi, N)};
    if (spectral.extrapolated)
      v.notes.push_back("heuristic extrapolated rho_S = " + fmt(*spectral.extrapolated) + " (dimension " +
                        fmt(dim_of(*spectral.extrapolated, N)) + "), not certified");
  }
  return v;
}

BoxCountResult boxcount_dimension(const FifModel& model, const GridValues& samples, int k_min, int k_max,
                                  Exec exec) {
  if (k_min < 1 || k_max < k_min + 1) throw std::invalid_argument("boxcount: need 1 <= k_min < k_max");
  if (samples.level < k_max + 2)
    throw ResolutionError("boxcount: samples at level " + std::to_string(samples.level) +
                          " cannot resolve k = " + std::to_string(k_max) + " (need level >= " +
                          std::to_string(k_max + 2) + ")");
  const int N = model.n();
  const double logN = std::log(static_cast<double>(N));
  BoxCountResult r;
  r.k_min = k_min;
  r.k_max = k_max;
  r.sample_level = samples.level;
  std::vector<double> xs, ys;
  for (int k = k_min; k <= k_max; ++k) {
    BoxCountLevel L;
    L.k = k;
    const std::size_t cells = checked_pow(static_cast<std::size_t>(N), k);
    L.eps = model.interval().width() / static_cast<double>(cells);
    L.count = kernels::box_count(samples.values, cells, L.eps, exec);
    L.oscillation = kernels::oscillation_sum(samples.values, cells, exec);
    L.oscillation_estimate = 1.0 + std::log(L.oscillation + 1.0) / (k * logN);
    xs.push_back(k * logN);
    ys.push_back(std::log(static_cast<double>(L.count)));
    r.levels.push_back(L);
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  r.estimate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  r.window_lo = INFINITY;
  r.window_hi = -INFINITY;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double s = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
    r.window_lo = std::min(r.window_lo, s);
    r.window_hi = std::max(r.window_hi, s);
  }
  return r;
}

BoxCountResult boxcount_dimension(const FifModel& model, int k_min, int k_max, std::optional<int> level,
                                  const EngineOptions& options) {
  int L = k_max + 5;
  if (level) {
    L = *level;
  } else {
    while (L > k_max + 2 && static_cast<double>(options.max_cells) < std::pow(model.n(), L)) --L;
  }
  if (L < k_max + 2)
    throw ResolutionError("boxcount: sample level " + std::to_string(L) + " is below k_max + 2 = " +
                          std::to_string(k_max + 2));
  return boxcount_dimension(model, grid_values(model, L, options), k_min, k_max, options.exec);
}

DimensionVerdict assemble_verdict(const std::vector<PartialVerdict>& partials,
                                  const std::optional<BoxCountResult>& boxcount) {
  if (partials.empty()) throw std::invalid_argument("assemble_verdict: no estimator results");
  DimensionVerdict v;
  for (const PartialVerdict& p : partials) {
    if (p.lower && p.lower->value > v.lower.value) v.lower = *p.lower;
    if (p.upper && p.upper->value < v.upper.value) v.upper = *p.upper;
    if (p.exact && !v.exact) {
      v.exact = p.exact;
      v.exact_range = p.exact_range;
    } else if (p.exact) {
      v.notes.push_back("additional exact value " + fmt(p.exact->value) + " (" + p.exact->provenance + ")");
    }
    v.hypotheses.insert(v.hypotheses.end(), p.hypotheses.begin(), p.hypotheses.end());
    v.notes.insert(v.notes.end(), p.notes.begin(), p.notes.end());
  }
  auto dump = [&] {
    std::ostringstream s;
    s << "lower " << v.lower.value << " (" << v.lower.provenance << "), upper " << v.upper.value << " ("
      << v.upper.provenance << ")";
    if (v.exact) s << ", exact " << v.exact->value << " (" << v.exact->provenance << ")";
    for (std::size_t i = 0; i < partials.size(); ++i) {
      s << "\n  estimator " << i << ":";
      if (partials[i].lower) s << " lower " << partials[i].lower->value << " (" << partials[i].lower->provenance << ")";
      if (partials[i].upper) s << " upper " << partials[i].upper->value << " (" << partials[i].upper->provenance << ")";
      if (partials[i].exact) s << " exact " << partials[i].exact->value << " (" << partials[i].exact->provenance << ")";
    }
    return s.str();
  };
  constexpr double slack = 1e-9;
  if (v.lower.value > v.upper.value + slack) throw InconsistencyError("dimension bounds cross: " + dump());
  if (v.exact && (v.exact->value < v.lower.value - slack || v.exact->value > v.upper.value + slack))
    throw InconsistencyError("exact dimension outside the bounds: " + dump());
  if (!v.exact && v.upper.value - v.lower.value <= 1e-12) v.exact = TaggedBound{v.upper.value, "bounds-coincide"};
  v.boxcount = boxcount;
  if (boxcount) v.notes.push_back("box-count estimate " + fmt(boxcount->estimate) + " is empirical (annotation only)");
  return v;
}

DimensionAnalysis analyze_dimension(const FifModel& model, const DimensionOptions& o) {
  DimensionAnalysis a;
  MatrixOptions mopt;
  mopt.max_dim = o.engine.max_cells;
  mopt.exec = o.engine.exec;
  OscillationOptions oopt{o.refinement, o.engine};
  a.bounds = engine_bounds(model);
  a.gamma = gamma_summary(model, o.use_gamma ? o.k_max : 1, mopt);
  a.certificate = divergence_check(model, o.k_max, a.gamma, oopt);
  a.zeros = zero_structure(model);
  std::vector<PartialVerdict> parts;
  a.gamma_part = dim_bounds_gamma(model, a.gamma, a.certificate);
  if (o.use_gamma) parts.push_back(a.gamma_part);
  if (o.use_rho) {
    SpectralOptions sopt;
    sopt.tol = o.tol;
    sopt.exec = o.engine.exec;
    a.spectral = rho_sequence(model, o.k_max, sopt, mopt);
    a.rho_part = dim_bounds_rho(model, *a.spectral, a.certificate, a.zeros);
    parts.push_back(*a.rho_part);
  }
  std::optional<BoxCountResult> box;
  if (o.use_boxcount) box = boxcount_dimension(model, o.box_k_min, o.box_k_max, o.box_level, o.engine);
  if (parts.empty()) {
    PartialVerdict empty;
    empty.notes.push_back("no rigorous estimator selected");
    parts.push_back(empty);
  }
  a.verdict = assemble_verdict(parts, box);
  return a;
}

}  // namespace fif
