// fifdim: command-line front end for building fractal interpolation models
// and estimating the box dimension of their graphs.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 validation failure,
// 3 capacity exceeded, 4 internal inconsistency.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fif/config.hpp"
#include "fif/dimension.hpp"
#include "fif/reference.hpp"
#include "fif/report.hpp"

namespace {

using namespace fif;

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kCapacity = 3, kInconsistent = 4 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string out;
  std::string format = "json";
  std::string report;
  std::string method = "all";
  std::string kind = "both";
  double tol = 1e-8;
  int kmax = 8;
  int kmin = 4;
  int refine = kDefaultRefinement;
  int threads = 0;
  int level = 0;
  int k = 1;
};

class Stopwatch {
 public:
  void stage(const std::string& name, const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    timings_[name] = std::chrono::duration<double, std::milli>(t1 - t0).count();
  }
  const Json& timings() const { return timings_; }

 private:
  Json timings_ = Json::object();
};

// Writes to --out when given, stdout otherwise.
void emit(const Options& o, const std::string& text) {
  if (o.out.empty() || o.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw IoError("cannot write '" + o.out + "'");
  f << text;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

FifModel load(const Options& o) {
  if (o.config.rfind("builtin:", 0) != 0 && !std::filesystem::exists(o.config))
    throw IoError("config file '" + o.config + "' not found");
  return validate_model(load_model_config(o.config));
}

void write_run_report(const Options& o, const std::string& command, const FifModel* model, const Json& outputs,
                      const Stopwatch& sw) {
  if (o.report.empty()) return;
  Json r;
  r["tool_version"] = kToolVersion;
  r["command"] = command;
  r["parameters"] = {{"config", o.config}, {"tol", o.tol},       {"kmax", o.kmax},     {"kmin", o.kmin},
                     {"refine", o.refine}, {"threads", o.threads}, {"level", o.level}, {"method", o.method},
                     {"format", o.format}};
  if (model) {
    const std::string canonical = to_json(*model).dump();
    char hash[20];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(canonical)));
    r["model"] = {{"name", model->name}, {"hash", hash}};
  }
  r["outputs"] = outputs;
  r["timings_ms"] = sw.timings();
  std::ofstream f(o.report, std::ios::binary);
  if (!f) throw IoError("cannot write '" + o.report + "'");
  f << r.dump(2) << "\n";
}

int cmd_validate(const Options& o) {
  if (o.config.rfind("builtin:", 0) != 0 && !std::filesystem::exists(o.config))
    throw IoError("config file '" + o.config + "' not found");
  const ValidationResult r = check_model(load_model_config(o.config));
  Json out;
  out["valid"] = r.ok();
  Json v = Json::array();
  for (const Violation& x : r.violations) v.push_back(to_json(x));
  out["violations"] = v;
  if (r.model) out["model"] = to_json(*r.model);
  if (o.format == "json") {
    emit(o, out.dump(2) + "\n");
  } else {
    std::ostringstream s;
    if (r.ok()) s << "valid: " << (r.model->name.empty() ? o.config : r.model->name) << "\n";
    for (const Violation& x : r.violations) s << to_string(x.kind) << ": " << x.message << "\n";
    emit(o, s.str());
  }
  Stopwatch sw;
  write_run_report(o, "validate", r.model ? &*r.model : nullptr, out, sw);
  return r.ok() ? kOk : kValidation;
}

int cmd_eval(const Options& o) {
  const FifModel m = load(o);
  Stopwatch sw;
  GridValues g;
  sw.stage("grid", [&] { g = grid_values(m, o.level > 0 ? o.level : 6); });
  std::ostringstream s;
  write_samples_csv(s, m, g);
  emit(o, s.str());
  write_run_report(o, "eval", &m, {{"level", g.level}, {"points", g.values.size()}}, sw);
  return kOk;
}

int cmd_osc(const Options& o) {
  const FifModel m = load(o);
  Stopwatch sw;
  SumFunctionSummary gamma;
  DivergenceCertificate cert;
  sw.stage("sum_function", [&] { gamma = gamma_summary(m, 1); });
  sw.stage("oscillation", [&] { cert = divergence_check(m, o.kmax, gamma, {o.refine, {}}); });
  const Json j = to_json(cert);
  if (o.format == "csv") {
    std::ostringstream s;
    write_oscillation_csv(s, cert);
    emit(o, s.str());
  } else {
    emit(o, j.dump(2) + "\n");
  }
  write_run_report(o, "osc", &m, j, sw);
  return kOk;
}

int cmd_matrices(const Options& o) {
  const FifModel m = load(o);
  Stopwatch sw;
  ScalingMatrices mats;
  sw.stage("build", [&] { mats = build_matrices(m, o.k); });
  std::ostringstream s;
  if (o.kind == "upper" || o.kind == "both") write_matrix_coo(s, mats.upper, m.name);
  if (o.kind == "lower" || o.kind == "both") write_matrix_coo(s, mats.lower, m.name);
  emit(o, s.str());
  write_run_report(o, "matrices", &m, {{"k", o.k}, {"dim", mats.upper.dim}}, sw);
  return kOk;
}

int cmd_rho(const Options& o) {
  const FifModel m = load(o);
  Stopwatch sw;
  SpectralSummary s;
  SpectralOptions sopt;
  sopt.tol = o.tol;
  sw.stage("rho_sequence", [&] { s = rho_sequence(m, o.kmax, sopt); });
  const Json j = to_json(s);
  if (o.format == "csv") {
    std::ostringstream out;
    write_radii_csv(out, s);
    emit(o, out.str());
  } else {
    emit(o, j.dump(2) + "\n");
  }
  write_run_report(o, "rho", &m, j, sw);
  return s.violations.empty() ? kOk : kInconsistent;
}

DimensionOptions dimension_options(const Options& o) {
  DimensionOptions d;
  if (o.method != "all" && o.method != "gamma" && o.method != "rho" && o.method != "boxcount")
    throw CLI::ValidationError("--method", "must be gamma, rho, boxcount or all");
  d.use_gamma = o.method == "all" || o.method == "gamma";
  d.use_rho = o.method == "all" || o.method == "rho";
  d.use_boxcount = o.method == "all" || o.method == "boxcount";
  d.k_max = o.kmax;
  d.refinement = o.refine;
  d.tol = o.tol;
  if (o.level > 0) d.box_level = o.level;
  return d;
}

int cmd_dim(const Options& o) {
  const FifModel m = load(o);
  Stopwatch sw;
  DimensionAnalysis a;
  sw.stage("dimension", [&] { a = analyze_dimension(m, dimension_options(o)); });
  Json j = to_json(a);
  j = Json{{"model", to_json(m)}, {"method", o.method}, {"analysis", j}};
  const DimensionVerdict& v = a.verdict;
  if (o.format == "csv") {
    std::ostringstream s;
    s << "lower,lower_provenance,upper,upper_provenance,exact,exact_provenance,boxcount\n"
      << format17(v.lower.value) << "," << v.lower.provenance << "," << format17(v.upper.value) << ","
      << v.upper.provenance << "," << (v.exact ? format17(v.exact->value) : "") << ","
      << (v.exact ? v.exact->provenance : "") << "," << (v.boxcount ? format17(v.boxcount->estimate) : "") << "\n";
    emit(o, s.str());
  } else if (o.format == "text") {
    std::ostringstream s;
    s << "model: " << m.name << "\n";
    s << "lower bound: " << v.lower.value << " (" << v.lower.provenance << ")\n";
    s << "upper bound: " << v.upper.value << " (" << v.upper.provenance << ")\n";
    if (v.exact) s << "exact: " << v.exact->value << " (" << v.exact->provenance << ")\n";
    const DivergenceCertificate& c = a.certificate;
    s << "variation: " << to_string(c.verdict) << " - " << c.reason << "\n";
    for (const HypothesisCheck& h : v.hypotheses)
      s << "  [" << to_string(h.status) << "] " << h.name << (h.detail.empty() ? "" : ": " + h.detail) << "\n";
    for (const std::string& n : v.notes) s << "note: " << n << "\n";
    emit(o, s.str());
  } else {
    emit(o, j.dump(2) + "\n");
  }
  write_run_report(o, "dim", &m, j, sw);
  return kOk;
}

int cmd_boxcount(const Options& o) {
  const FifModel m = load(o);
  Stopwatch sw;
  BoxCountResult b;
  const int kmax = o.kmax;
  sw.stage("boxcount", [&] {
    b = boxcount_dimension(m, o.kmin, kmax, o.level > 0 ? std::optional<int>(o.level) : std::nullopt);
  });
  const Json j = to_json(b);
  if (o.format == "csv") {
    std::ostringstream s;
    write_boxcount_csv(s, b);
    emit(o, s.str());
  } else {
    emit(o, j.dump(2) + "\n");
  }
  write_run_report(o, "boxcount", &m, j, sw);
  return kOk;
}

std::string fixed5(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5f", v);
  return buf;
}

int cmd_reproduce(const Options& o, const std::string& name) {
  if (name != "example61") throw CLI::ValidationError("reproduce", "only example61 has reference values");
  const FifModel m = validate_model(builtin_model(name));
  Stopwatch sw;
  SpectralSummary s;
  DimensionAnalysis a;
  SpectralOptions sopt;
  sopt.tol = o.tol;
  sw.stage("rho_sequence", [&] { s = rho_sequence(m, 8, sopt); });
  DimensionOptions d;
  d.tol = o.tol;
  d.use_boxcount = false;
  sw.stage("dimension", [&] { a = analyze_dimension(m, d); });

  std::ostringstream out;
  out << "Spectral radii of the vertical scaling matrices (example61)\n";
  out << " k   upper     reference  delta      lower     reference  delta      within " << reference::kRadiusTolerance
      << "\n";
  int matched = 0;
  Json rows = Json::array();
  for (const reference::Radii& r : reference::kExample61Radii) {
    const RadiusLevel& L = s.levels[static_cast<std::size_t>(r.k - 1)];
    const double du = L.upper.value - r.upper, dl = L.lower.value - r.lower;
    const bool ok_u = std::abs(du) <= reference::kRadiusTolerance, ok_l = std::abs(dl) <= reference::kRadiusTolerance;
    matched += ok_u + ok_l;
    char line[160];
    std::snprintf(line, sizeof line, " %d   %s   %s    %+.2e  %s   %s    %+.2e  %s/%s\n", r.k,
                  fixed5(L.upper.value).c_str(), fixed5(r.upper).c_str(), du, fixed5(L.lower.value).c_str(),
                  fixed5(r.lower).c_str(), dl, ok_u ? "yes" : "NO", ok_l ? "yes" : "NO");
    out << line;
    rows.push_back({{"k", r.k},
                    {"upper", L.upper.value},
                    {"upper_reference", r.upper},
                    {"lower", L.lower.value},
                    {"lower_reference", r.lower}});
  }
  out << matched << " of " << 2 * reference::kExample61Radii.size() << " radii within tolerance\n";
  const DimensionVerdict& v = a.verdict;
  out << "box dimension: ";
  if (v.exact) out << fixed5(v.exact->value) << " (" << v.exact->provenance << ")";
  out << "  bounds [" << fixed5(v.lower.value) << ", " << fixed5(v.upper.value) << "]  reference "
      << reference::kExample61Dimension << "\n";
  out << "divergence: " << to_string(a.certificate.verdict);
  if (a.certificate.k0)
    out << " at k0 = " << *a.certificate.k0 << " (O_k0 = " << fixed5(a.certificate.O_k0)
        << ", threshold = " << fixed5(*a.certificate.threshold) << ")";
  out << "\n";
  emit(o, out.str());
  write_run_report(o, "reproduce", &m,
                   {{"radii", rows}, {"matched", matched}, {"verdict", to_json(v)}}, sw);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fifdim: fractal interpolation functions and the box dimension of their graphs"};
  app.require_subcommand(1);
  Options o;
  std::string reproduce_name = "example61";

  auto common = [&](CLI::App* c, bool needs_config = true) {
    if (needs_config)
      c->add_option("config", o.config, "model config file or builtin:NAME[:key=value,...]")->required();
    c->add_option("--out", o.out, "output file (default stdout)");
    c->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json", "text"}));
    c->add_option("--threads", o.threads, "worker thread cap (0 = default)")->check(CLI::NonNegativeNumber);
    c->add_option("--report", o.report, "write a run report with timings to this file");
  };
  auto levels = [&](CLI::App* c) {
    c->add_option("--kmax", o.kmax, "deepest level")->check(CLI::Range(1, 30));
    c->add_option("--refine", o.refine, "extra grid levels for oscillations")->check(CLI::Range(0, 20));
    c->add_option("--tol", o.tol, "eigensolver relative tolerance")->check(CLI::PositiveNumber);
  };

  auto* validate = app.add_subcommand("validate", "check model hypotheses and endpoint conditions");
  common(validate);
  o.format = "text";
  auto* eval = app.add_subcommand("eval", "grid samples of f as CSV (x,f)");
  common(eval);
  eval->add_option("--level", o.level, "grid level (N^level cells)")->check(CLI::Range(1, 60));
  auto* osc = app.add_subcommand("osc", "oscillation sums and divergence certificate");
  common(osc);
  levels(osc);
  auto* matrices = app.add_subcommand("matrices", "export vertical scaling matrices (coordinate format)");
  common(matrices);
  matrices->add_option("--level,-k", o.k, "matrix level")->check(CLI::Range(1, 30));
  matrices->add_option("--kind", o.kind, "upper, lower or both")->check(CLI::IsMember({"upper", "lower", "both"}));
  auto* rho = app.add_subcommand("rho", "spectral radii of the scaling matrices for k = 1..kmax");
  common(rho);
  levels(rho);
  auto* dim = app.add_subcommand("dim", "box-dimension verdict");
  common(dim);
  levels(dim);
  dim->add_option("--method", o.method, "gamma, rho, boxcount or all")
      ->check(CLI::IsMember({"gamma", "rho", "boxcount", "all"}));
  dim->add_option("--level", o.level, "box-count sample level")->check(CLI::Range(1, 60));
  auto* box = app.add_subcommand("boxcount", "empirical box-counting estimate");
  common(box);
  box->add_option("--kmin", o.kmin, "smallest box level")->check(CLI::Range(1, 30));
  box->add_option("--kmax", o.kmax, "largest box level")->check(CLI::Range(2, 30));
  box->add_option("--level", o.level, "sample level (default kmax + 5 within budget)")->check(CLI::Range(1, 60));
  auto* reproduce = app.add_subcommand("reproduce", "compare example61 with its reference radii and dimension");
  common(reproduce, false);
  reproduce->add_option("name", reproduce_name, "example name")->check(CLI::IsMember({"example61"}));
  reproduce->add_option("--tol", o.tol, "eigensolver relative tolerance")->check(CLI::PositiveNumber);

  // defaults differ per command: json for data commands, text for validate
  for (CLI::App* c : {eval, osc, matrices, rho, dim, box, reproduce})
    c->preparse_callback([&](std::size_t) { o.format = "json"; });
  validate->preparse_callback([&](std::size_t) { o.format = "text"; });
  box->preparse_callback([&](std::size_t) {
    o.format = "json";
    o.kmax = 9;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  set_thread_count(o.threads);

  try {
    if (*validate) return cmd_validate(o);
    if (*eval) return cmd_eval(o);
    if (*osc) return cmd_osc(o);
    if (*matrices) return cmd_matrices(o);
    if (*rho) return cmd_rho(o);
    if (*dim) return cmd_dim(o);
    if (*box) return cmd_boxcount(o);
    if (*reproduce) return cmd_reproduce(o, reproduce_name);
  } catch (const ValidationError& e) {
    std::cerr << "fifdim: " << e.what() << "\n";
    return kValidation;
  } catch (const ParseError& e) {
    std::cerr << "fifdim: " << e.what() << "\n";
    return kValidation;
  } catch (const ConfigError& e) {
    std::cerr << "fifdim: " << e.what() << "\n";
    return kValidation;
  } catch (const CapacityError& e) {
    std::cerr << "fifdim: capacity exceeded: " << e.what() << "\n";
    return kCapacity;
  } catch (const InconsistencyError& e) {
    std::cerr << "fifdim: internal inconsistency: " << e.what() << "\n";
    return kInconsistent;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "fifdim: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "fifdim: " << e.what() << "\n";
    return kUsage;
  } catch (const ResolutionError& e) {
    std::cerr << "fifdim: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "fifdim: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
