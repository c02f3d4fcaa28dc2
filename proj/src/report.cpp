#include "fif/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace fif {

std::string_view to_string(Tristate t) {
  switch (t) {
    case Tristate::yes: return "yes";
    case Tristate::no: return "no";
    case Tristate::unknown: return "unknown";
  }
  return "?";
}

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json tagged(const std::optional<TaggedBound>& b) {
  if (!b) return nullptr;
  return Json{{"value", b->value}, {"provenance", b->provenance}};
}

Json tagged(const TaggedBound& b) { return Json{{"value", b.value}, {"provenance", b.provenance}}; }

Json hypotheses(const std::vector<HypothesisCheck>& hs) {
  Json out = Json::array();
  for (const HypothesisCheck& h : hs)
    out.push_back({{"name", h.name}, {"status", std::string(to_string(h.status))}, {"detail", h.detail}});
  return out;
}

std::string zero_kind(ZeroCount::Kind k) {
  switch (k) {
    case ZeroCount::Kind::exact: return "exact";
    case ZeroCount::Kind::infinite: return "infinite";
    case ZeroCount::Kind::unknown: return "unknown";
  }
  return "?";
}

}  // namespace

Json to_json(const Interval& I) { return Json::array({I.lo, I.hi}); }

Json to_json(const IntervalBound& b) {
  return {{"lo", b.lo}, {"hi", b.hi}, {"certified", b.certified}, {"where", b.where}};
}

Json to_json(const Violation& v) {
  return {{"kind", std::string(to_string(v.kind))},
          {"index", v.index},
          {"value", v.value},
          {"witness", to_json(v.witness)},
          {"message", v.message}};
}

Json to_json(const FifModel& m) {
  Json S = Json::array(), q = Json::array();
  for (const ExprFunction& f : m.S) S.push_back(f.to_string());
  for (const ExprFunction& f : m.q) q.push_back(f.to_string());
  return {{"name", m.name},
          {"N", m.n()},
          {"interval", to_json(m.interval())},
          {"y", m.data.y},
          {"scaling", S},
          {"offsets", q},
          {"notes", m.notes}};
}

Json to_json(const EngineBounds& b) {
  return {{"M_f", b.M_f},         {"q_star", b.q_star}, {"S_star", b.S_star},
          {"lambda_S", b.lambda_S}, {"lambda_S_definition", "max_i Lipschitz bound of S_i on I"},
          {"beta", b.beta},       {"lambda_q", b.lambda_q}};
}

Json to_json(const OscillationSum& s) {
  return {{"k", s.k},
          {"refinement", s.refinement},
          {"O_k", s.value},
          {"gap", std::isnan(s.gap) ? Json(nullptr) : Json(s.gap)},
          {"certified_upper", s.certified_upper}};
}

Json to_json(const DivergenceCertificate& c) {
  Json table = Json::array();
  for (const OscillationSum& s : c.table) {
    Json row = to_json(s);
    row["exceeds_threshold"] = c.threshold ? Json(s.value > *c.threshold) : Json(nullptr);
    table.push_back(row);
  }
  return {{"verdict", std::string(to_string(c.verdict))},
          {"k0", optional_json(c.k0)},
          {"O_k0", c.k0 ? Json(c.O_k0) : Json(nullptr)},
          {"threshold", optional_json(c.threshold)},
          {"criterion", c.threshold ? Json(std::string(to_string(c.criterion))) : Json(nullptr)},
          {"threshold_general", optional_json(c.threshold_general)},
          {"threshold_nonnegative", optional_json(c.threshold_nonnegative)},
          {"gamma_lower_star", c.gamma_lower_star},
          {"sum_variation_q", c.sum_variation_q},
          {"variation_sum_q", c.variation_sum_q},
          {"bounds", to_json(c.bounds)},
          {"reason", c.reason},
          {"table", table}};
}

Json to_json(const SumFunctionSummary& s) {
  Json levels = Json::array();
  for (const SumFunctionLevel& l : s.levels) levels.push_back({{"k", l.k}, {"gamma_upper", l.upper}, {"gamma_lower", l.lower}});
  return {{"gamma", s.gamma.to_string()},
          {"signs_certified", s.signs_certified},
          {"all_nonnegative", s.all_nonnegative},
          {"gamma_star", to_json(s.gamma_star)},
          {"gamma_lower_star", to_json(s.gamma_lower_star)},
          {"lipschitz_gamma", s.lipschitz_gamma},
          {"constant", s.constant},
          {"levels", levels}};
}

Json to_json(const SpectralResult& r) {
  return {{"value", r.value},
          {"lo", r.lo},
          {"hi", r.hi},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"components", r.components}};
}

Json to_json(const SpectralSummary& s) {
  Json levels = Json::array();
  for (const RadiusLevel& l : s.levels)
    levels.push_back({{"k", l.k},
                      {"rho_upper", to_json(l.upper)},
                      {"rho_lower", to_json(l.lower)},
                      {"gamma_upper", l.gamma_upper},
                      {"gamma_lower", l.gamma_lower},
                      {"upper_pattern", std::string(to_string(l.upper_pattern))},
                      {"lower_pattern", std::string(to_string(l.lower_pattern))},
                      {"enclosure_width", l.enclosure_width},
                      {"entries_certified", l.entries_certified}});
  Json violations = Json::array();
  for (const MonotonicityViolation& v : s.violations)
    violations.push_back(
        {{"k", v.k}, {"kind", std::string(to_string(v.kind))}, {"previous", v.previous}, {"current", v.current}});
  return {{"tol", s.tol},
          {"levels", levels},
          {"rho_star_upper", s.rho_star_upper},
          {"rho_star_lower", s.rho_star_lower},
          {"bracket", to_json(s.bracket())},
          {"positivity_certified", s.positivity_certified},
          {"rho_S", optional_json(s.rho_S)},
          {"rho_S_reason", s.rho_S ? Json(s.rho_S_reason) : Json(nullptr)},
          {"extrapolated", optional_json(s.extrapolated)},
          {"extrapolation_is_heuristic", true},
          {"monotonicity_violations", violations}};
}

Json to_json(const ZeroStructure& z) {
  return {{"zero_count_kind", zero_kind(z.count.kind)},
          {"zero_count", z.count.count},
          {"vanishes_on_subinterval", std::string(to_string(z.vanishes_on_subinterval))},
          {"finitely_many_zeros", std::string(to_string(z.finitely_many_zeros))}};
}

Json to_json(const PartialVerdict& p) {
  return {{"lower", tagged(p.lower)},
          {"upper", tagged(p.upper)},
          {"exact", tagged(p.exact)},
          {"exact_range", p.exact_range ? to_json(*p.exact_range) : Json(nullptr)},
          {"hypotheses", hypotheses(p.hypotheses)},
          {"notes", p.notes}};
}

Json to_json(const BoxCountResult& b) {
  Json levels = Json::array();
  for (const BoxCountLevel& l : b.levels)
    levels.push_back({{"k", l.k},
                      {"eps", l.eps},
                      {"count", l.count},
                      {"oscillation", l.oscillation},
                      {"oscillation_estimate", l.oscillation_estimate}});
  return {{"estimate", b.estimate},
          {"k_range", Json::array({b.k_min, b.k_max})},
          {"sample_level", b.sample_level},
          {"confidence_window", Json::array({b.window_lo, b.window_hi})},
          {"empirical", true},
          {"levels", levels}};
}

Json to_json(const DimensionVerdict& v) {
  return {{"lower_bound", tagged(v.lower)},
          {"upper_bound", tagged(v.upper)},
          {"exact", tagged(v.exact)},
          {"exact_range", v.exact_range ? to_json(*v.exact_range) : Json(nullptr)},
          {"hypotheses", hypotheses(v.hypotheses)},
          {"notes", v.notes},
          {"boxcount", v.boxcount ? to_json(*v.boxcount) : Json(nullptr)}};
}

Json to_json(const DimensionAnalysis& a) {
  Json zeros = Json::array();
  for (const ZeroStructure& z : a.zeros) zeros.push_back(to_json(z));
  return {{"verdict", to_json(a.verdict)},
          {"engine_bounds", to_json(a.bounds)},
          {"sum_function", to_json(a.gamma)},
          {"divergence", to_json(a.certificate)},
          {"spectral", a.spectral ? to_json(*a.spectral) : Json(nullptr)},
          {"scaling_zeros", zeros},
          {"gamma_route", to_json(a.gamma_part)},
          {"rho_route", a.rho_part ? to_json(*a.rho_part) : Json(nullptr)}};
}

void write_oscillation_csv(std::ostream& out, const DivergenceCertificate& c) {
  out << "k,O_k,gap,certified_upper,threshold_general,threshold_nonnegative,verdict\n";
  auto opt = [](const std::optional<double>& v) { return v ? format17(*v) : std::string(); };
  for (const OscillationSum& s : c.table)
    out << s.k << ',' << format17(s.value) << ',' << (std::isnan(s.gap) ? std::string() : format17(s.gap)) << ','
        << format17(s.certified_upper) << ',' << opt(c.threshold_general) << ',' << opt(c.threshold_nonnegative)
        << ',' << to_string(c.verdict) << '\n';
}

void write_boxcount_csv(std::ostream& out, const BoxCountResult& b) {
  out << "k,eps,count,oscillation,oscillation_estimate\n";
  for (const BoxCountLevel& l : b.levels)
    out << l.k << ',' << format17(l.eps) << ',' << l.count << ',' << format17(l.oscillation) << ','
        << format17(l.oscillation_estimate) << '\n';
}

}  // namespace fif
