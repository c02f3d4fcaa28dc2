#include "fif/oscillation.hpp"

#include <cmath>
#include <numeric>

namespace fif {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Divergent: return "Divergent";
    case Verdict::Bounded: return "Bounded";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "?";
}

std::string_view to_string(DivergenceCriterion c) {
  return c == DivergenceCriterion::general ? "general" : "nonnegative";
}

std::vector<double> modulus_bounds(const FifModel& model, const EngineBounds& b, int levels) {
  std::vector<double> omega(static_cast<std::size_t>(levels) + 1);
  const double cap = 2.0 * b.M_f;
  const double step = (b.lambda_S * b.M_f + b.lambda_q) * model.interval().width();
  omega[0] = cap;
  double scale = 1.0;  // N^{-(m-1)}
  for (int m = 1; m <= levels; ++m) {
    omega[static_cast<std::size_t>(m)] = std::min(cap, b.S_star * omega[static_cast<std::size_t>(m - 1)] + step * scale);
    scale /= model.n();
  }
  return omega;
}

namespace {

void check_levels(int k, int r) {
  if (k < 1) throw std::invalid_argument("oscillation: k must be >= 1");
  if (r < 0) throw std::invalid_argument("oscillation: refinement must be >= 0");
}

OscillationSum summarize(const FifModel& model, int k, int r, const GridValues& fine, const GridValues* coarse,
                         const std::vector<double>& omega, Exec exec) {
  const std::size_t cells = checked_pow(static_cast<std::size_t>(model.n()), k);
  OscillationSum s;
  s.k = k;
  s.refinement = r;
  s.value = kernels::oscillation_sum(fine.values, cells, exec);
  s.gap = coarse ? s.value - kernels::oscillation_sum(coarse->values, cells, exec) : NAN;
  s.certified_upper = s.value + static_cast<double>(cells) * 2.0 * omega[static_cast<std::size_t>(fine.level)];
  return s;
}

}  // namespace

OscillationSum oscillation_sum(const FifModel& model, int k, const OscillationOptions& options) {
  return oscillation_table(model, k, options).back();
}

std::vector<OscillationSum> oscillation_table(const FifModel& model, int k_max, const OscillationOptions& options) {
  const int r = options.refinement;
  check_levels(k_max, r);
  const int top = k_max + r;
  checked_pow(static_cast<std::size_t>(model.n()), top, options.engine.max_cells);
  const std::vector<double> omega = modulus_bounds(model, engine_bounds(model), top);

  std::vector<GridValues> grids{initial_grid(model)};
  while (grids.back().level < top) grids.push_back(refine_grid(model, grids.back(), options.engine));
  auto level = [&](int L) -> const GridValues& { return grids[static_cast<std::size_t>(L - 1)]; };

  std::vector<OscillationSum> table;
  for (int k = 1; k <= k_max; ++k)
    table.push_back(summarize(model, k, r, level(k + r), r > 0 ? &level(k + r - 1) : nullptr, omega,
                              options.engine.exec));
  return table;
}

double OscillationVector::l1() const { return std::accumulate(entries.begin(), entries.end(), 0.0); }

OscillationVector oscillation_vector(const FifModel& model, int k, int p, const OscillationOptions& options) {
  const int r = options.refinement;
  check_levels(k, r);
  if (p < 1) throw std::invalid_argument("oscillation_vector: p must be >= 1");
  const auto N = static_cast<std::size_t>(model.n());
  const int top = k + p + r;
  checked_pow(N, top, options.engine.max_cells);

  GridValues coarse = grid_values(model, top - 1 >= 1 ? top - 1 : 1, options.engine);
  const GridValues fine = refine_grid(model, coarse, options.engine);

  const std::size_t fine_cells = checked_pow(N, k + p), group = checked_pow(N, p), dim = checked_pow(N, k);
  auto per_cell = [&](const GridValues& g) {
    std::vector<double> lo(fine_cells), hi(fine_cells);
    kernels::cell_ranges(g.values, fine_cells, lo, hi, options.engine.exec);
    std::vector<double> out(dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j)
      for (std::size_t t = 0; t < group; ++t) out[j] += hi[j * group + t] - lo[j * group + t];
    return out;
  };
  OscillationVector v;
  v.k = k;
  v.p = p;
  v.refinement = r;
  v.entries = per_cell(fine);
  if (r > 0) {
    const std::vector<double> prev = per_cell(coarse);
    v.gaps.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) v.gaps[j] = v.entries[j] - prev[j];
  } else {
    v.gaps.assign(dim, NAN);
  }
  return v;
}

std::vector<double> recursion_offsets(const FifModel& model, int k, const EngineBounds& bounds) {
  const auto N = static_cast<std::size_t>(model.n());
  const std::size_t block = checked_pow(N, k - 1);
  const double head = bounds.beta * model.interval().width() / static_cast<double>(block);
  std::vector<double> u(N * block);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t l = 0; l < block; ++l)
      u[i * block + l] = head + variation_bound(model.q[i], model.cell(k - 1, l)).upper;
  return u;
}

DivergenceCertificate divergence_check(const FifModel& model, int k_max, const SumFunctionSummary& gamma,
                                       const OscillationOptions& options) {
  DivergenceCertificate c;
  c.bounds = engine_bounds(model);
  c.table = oscillation_table(model, k_max, options);
  c.gamma_lower_star = gamma.gamma_lower_star.lo;
  const Interval I = model.interval();
  ExprFunction q_sum = model.q.front();
  for (std::size_t i = 0; i < model.q.size(); ++i) {
    c.sum_variation_q += variation_bound(model.q[i], I).upper;
    if (i > 0) q_sum = q_sum + model.q[i];
  }
  c.variation_sum_q = variation_bound(q_sum, I).upper;

  // Bounded: stable oscillation sums under a contraction of the sum function.
  const auto& t = c.table;
  if (gamma.gamma_star.hi < 1.0 && t.size() >= 3) {
    const std::size_t n = t.size();
    if (std::abs(t[n - 1].value - t[n - 2].value) <= 1e-9 && std::abs(t[n - 2].value - t[n - 3].value) <= 1e-9) {
      c.verdict = Verdict::Bounded;
      c.reason = "gamma^* < 1 and O_k stable within 1e-9 over three levels";
      return c;
    }
  }
  const double excess = c.gamma_lower_star - 1.0;
  if (!(excess > 0.0)) {
    c.reason = "gamma_* <= 1: the threshold criterion does not apply";
    return c;
  }
  const double N = model.n();
  c.threshold_general =
      (2.0 * c.bounds.M_f * c.bounds.lambda_S * N * I.width() + c.sum_variation_q) / excess;
  c.threshold = c.threshold_general;
  if (gamma.all_nonnegative) {
    c.threshold_nonnegative = (gamma.lipschitz_gamma * c.bounds.M_f * I.width() + c.variation_sum_q) / excess;
    if (*c.threshold_nonnegative < *c.threshold) {
      c.threshold = c.threshold_nonnegative;
      c.criterion = DivergenceCriterion::nonnegative;
    }
  }
  for (const OscillationSum& s : c.table) {
    if (s.value > *c.threshold) {
      c.verdict = Verdict::Divergent;
      c.k0 = s.k;
      c.O_k0 = s.value;
      c.reason = "O_" + std::to_string(s.k) + " exceeds the threshold";
      return c;
    }
  }
  c.reason = "no O_k with k <= " + std::to_string(k_max) + " exceeds the threshold (inconclusive)";
  return c;
}

DivergenceCertificate divergence_check(const FifModel& model, int k_max, const OscillationOptions& options) {
  return divergence_check(model, k_max, gamma_summary(model, 1), options);
}

}  // namespace fif
