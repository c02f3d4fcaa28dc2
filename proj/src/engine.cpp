#include "fif/engine.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace fif {

GridValues initial_grid(const FifModel& model) {
  GridValues g;
  g.level = 1;
  g.cells = static_cast<std::size_t>(model.n());
  g.values = model.data.y;
  return g;
}

GridValues refine_grid(const FifModel& model, const GridValues& prev, const EngineOptions& options) {
  const auto N = static_cast<std::size_t>(model.n());
  if (prev.cells > options.max_cells / N)
    throw CapacityError("grid level " + std::to_string(prev.level + 1) + " exceeds the budget of " +
                        std::to_string(options.max_cells) + " cells");
  const std::size_t M = prev.cells;
  GridValues next;
  next.level = prev.level + 1;
  next.cells = N * M;
  next.values.resize(next.cells + 1);
  kernels::refine(model.S, model.q, model.interval(), prev.values, next.values, options.exec);

  const Interval I = model.interval();
  for (std::size_t i = 1; i < N; ++i) {
    // point i*M is x_i: the image of x_N under map i and of x_0 under map i+1
    const double left = model.S[i - 1](I.hi) * prev.values[M] + model.q[i - 1](I.hi);
    const double right = next.values[i * M];
    if (!(std::abs(left - right) <= 1e-9)) {
      std::ostringstream msg;
      msg << "maps " << i << " and " << i + 1 << " disagree at x_" << i << ": " << left << " vs " << right;
      throw InconsistencyError(msg.str());
    }
  }
  // Knots: pin to the data values (which both maps reproduce within tolerance).
  for (std::size_t i = 0; i <= N; ++i) next.values[i * M] = model.data.y[i];
  return next;
}

GridValues grid_values(const FifModel& model, int k, const EngineOptions& options) {
  if (k < 1) throw std::invalid_argument("grid_values: level must be >= 1");
  checked_pow(static_cast<std::size_t>(model.n()), k, options.max_cells);
  GridValues g = initial_grid(model);
  while (g.level < k) g = refine_grid(model, g, options);
  return g;
}

EngineBounds engine_bounds(const FifModel& model) {
  EngineBounds b;
  const Interval I = model.interval();
  for (std::size_t i = 0; i < model.S.size(); ++i) {
    b.S_star = std::max(b.S_star, interval_extrema_abs(model.S[i], I).max.hi);
    b.q_star = std::max(b.q_star, interval_extrema_abs(model.q[i], I).max.hi);
    b.lambda_S = std::max(b.lambda_S, lipschitz_bound(model.S[i], I));
    b.lambda_q = std::max(b.lambda_q, lipschitz_bound(model.q[i], I));
  }
  double ymax = 0.0;
  for (double y : model.data.y) ymax = std::max(ymax, std::abs(y));
  b.M_f = std::max(b.q_star / (1.0 - b.S_star), ymax);
  b.beta = 2.0 * b.M_f * b.lambda_S;
  return b;
}

std::vector<std::pair<double, double>> sample_graph(const FifModel& model, int k, const EngineOptions& options) {
  const GridValues g = grid_values(model, k, options);
  std::vector<std::pair<double, double>> out(g.values.size());
  for (std::size_t j = 0; j < g.values.size(); ++j) out[j] = {g.x(model.interval(), j), g.values[j]};
  return out;
}

void write_samples_csv(std::ostream& out, const FifModel& model, const GridValues& grid) {
  out << "x,f\n";
  char buf[64];
  for (std::size_t j = 0; j < grid.values.size(); ++j) {
    const int len = std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", grid.x(model.interval(), j), grid.values[j]);
    out.write(buf, len);
  }
}

}  // namespace fif
