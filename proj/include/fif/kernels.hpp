#pragma once

// Data-parallel kernels with a serial reference implementation of each.
// Both variants perform the same floating-point operations in the same order
// per output element, so their results are bitwise identical.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fif/expr.hpp"

namespace fif {

enum class Exec { serial, parallel };

/// Caps the number of worker threads used by parallel kernels (0 = runtime default).
void set_thread_count(int threads);
int thread_count();

/// Abscissa of grid point j on the uniform grid with `cells` cells over I.
/// Computed as lo + width * (j / cells) so that nested grids share bitwise
/// identical abscissae.
inline double grid_point(Interval I, std::size_t j, std::size_t cells) {
  return I.lo + I.width() * (static_cast<double>(j) / static_cast<double>(cells));
}

/// Compressed sparse row matrix.
struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> col;
  std::vector<double> val;

  std::size_t nonzeros() const { return val.size(); }
  double at(std::size_t r, std::size_t c) const;
};

namespace kernels {

/// One refinement sweep of the functional recursion f(L_i(x)) = S_i(x) f(x) + q_i(x).
/// `prev` holds f on the grid with M = prev.size()-1 cells; `next` receives the
/// N*M+1 values of the finer grid. Entry i*M+m is produced by map i from source
/// point m; the final point comes from the last map. Shared points between maps
/// are left as the right map's value and reconciled by the caller.
void refine(std::span<const ExprFunction> S, std::span<const ExprFunction> q, Interval I,
            std::span<const double> prev, std::span<double> next, Exec exec);

/// Per-cell min and max of grid values: `cells` equal blocks over `values`
/// (values.size()-1 must be a multiple of cells).
void cell_ranges(std::span<const double> values, std::size_t cells, std::span<double> lo, std::span<double> hi,
                 Exec exec);

/// Sum of per-cell oscillations (max - min), accumulated in cell order.
double oscillation_sum(std::span<const double> values, std::size_t cells, Exec exec);

/// y = (A + shift * I) x.
void shifted_matvec(const SparseMatrix& A, double shift, std::span<const double> x, std::span<double> y, Exec exec);

/// Number of eps-lattice squares met by the graph, counted column by column:
/// floor(max/eps) - floor(min/eps) + 1 per column of `cells` columns.
std::uint64_t box_count(std::span<const double> values, std::size_t cells, double eps, Exec exec);

}  // namespace kernels
}  // namespace fif

namespace fif {

/// base^exp, throwing CapacityError once the result would exceed `limit`.
std::size_t checked_pow(std::size_t base, int exp, std::size_t limit = std::size_t{1} << 62);

}  // namespace fif
