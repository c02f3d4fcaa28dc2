#pragma once

#include <cstddef>
#include <iosfwd>
#include <utility>
#include <vector>

#include "fif/kernels.hpp"
#include "fif/model.hpp"

namespace fif {

/// Default memory budget for grids: at most 2^24 cells per level.
inline constexpr std::size_t kDefaultMaxCells = std::size_t{1} << 24;

struct EngineOptions {
  std::size_t max_cells = kDefaultMaxCells;
  Exec exec = Exec::parallel;
};

/// f on the uniform grid with N^level cells over I (N^level + 1 values).
/// Level 1 holds the knot values.
struct GridValues {
  int level = 1;
  std::size_t cells = 0;
  std::vector<double> values;

  double x(const Interval& I, std::size_t j) const { return grid_point(I, j, cells); }
};

/// Knot values (level 1).
GridValues initial_grid(const FifModel& model);

/// Next level via one sweep of f(L_i(x)) = S_i(x) f(x) + q_i(x). Points shared
/// by adjacent maps are taken from the left map after asserting agreement with
/// the right map to 1e-9; knots keep their data values so every level nests
/// exactly in the next.
GridValues refine_grid(const FifModel& model, const GridValues& prev, const EngineOptions& options = {});

/// f on the level-k grid (k >= 1). Throws CapacityError past the budget.
GridValues grid_values(const FifModel& model, int k, const EngineOptions& options = {});

struct EngineBounds {
  double M_f = 0.0;       // bound on max |f|
  double q_star = 0.0;    // max_i max_I |q_i|
  double S_star = 0.0;    // max_i max_I |S_i|
  double lambda_S = 0.0;  // max_i Lipschitz bound of S_i on I
  double beta = 0.0;      // 2 M_f lambda_S
  double lambda_q = 0.0;  // max_i Lipschitz bound of q_i on I
};

/// M_f = max(q*/(1 - S*), max_i |y_i|).
EngineBounds engine_bounds(const FifModel& model);

std::vector<std::pair<double, double>> sample_graph(const FifModel& model, int k, const EngineOptions& options = {});

/// Two-column CSV "x,f" with 17 significant digits.
void write_samples_csv(std::ostream& out, const FifModel& model, const GridValues& grid);

}  // namespace fif
