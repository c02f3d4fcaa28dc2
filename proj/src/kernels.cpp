#include "fif/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <omp.h>

namespace fif {

void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int thread_count() { return omp_get_max_threads(); }

double SparseMatrix::at(std::size_t r, std::size_t c) const {
  for (std::size_t p = row_ptr[r]; p < row_ptr[r + 1]; ++p)
    if (col[p] == c) return val[p];
  return 0.0;
}

namespace kernels {

namespace {

inline double refine_point(std::span<const ExprFunction> S, std::span<const ExprFunction> q, Interval I,
                           std::span<const double> prev, std::size_t M, std::size_t j) {
  const std::size_t i = std::min(j / M, S.size() - 1);
  const std::size_t m = j - i * M;
  const double x = grid_point(I, m, M);
  return S[i](x) * prev[m] + q[i](x);
}

inline void cell_range(std::span<const double> values, std::size_t block, std::size_t c, double& lo, double& hi) {
  const double* v = values.data() + c * block;
  double a = v[0], b = v[0];
  for (std::size_t t = 1; t <= block; ++t) {
    a = std::min(a, v[t]);
    b = std::max(b, v[t]);
  }
  lo = a;
  hi = b;
}

}  // namespace

void refine(std::span<const ExprFunction> S, std::span<const ExprFunction> q, Interval I,
            std::span<const double> prev, std::span<double> next, Exec exec) {
  const std::size_t M = prev.size() - 1;
  const std::size_t total = next.size();
  const auto n = static_cast<std::int64_t>(total);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < n; ++j) next[j] = refine_point(S, q, I, prev, M, static_cast<std::size_t>(j));
  } else {
    for (std::size_t j = 0; j < total; ++j) next[j] = refine_point(S, q, I, prev, M, j);
  }
}

void cell_ranges(std::span<const double> values, std::size_t cells, std::span<double> lo, std::span<double> hi,
                 Exec exec) {
  const std::size_t block = (values.size() - 1) / cells;
  const auto n = static_cast<std::int64_t>(cells);
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < n; ++c) cell_range(values, block, static_cast<std::size_t>(c), lo[c], hi[c]);
  } else {
    for (std::size_t c = 0; c < cells; ++c) cell_range(values, block, c, lo[c], hi[c]);
  }
}

double oscillation_sum(std::span<const double> values, std::size_t cells, Exec exec) {
  std::vector<double> lo(cells), hi(cells);
  cell_ranges(values, cells, lo, hi, exec);
  double sum = 0.0;
  for (std::size_t c = 0; c < cells; ++c) sum += hi[c] - lo[c];
  return sum;
}

void shifted_matvec(const SparseMatrix& A, double shift, std::span<const double> x, std::span<double> y, Exec exec) {
  const auto rows = static_cast<std::int64_t>(A.rows);
  auto row = [&](std::size_t r) {
    double s = shift * x[r];
    for (std::size_t p = A.row_ptr[r]; p < A.row_ptr[r + 1]; ++p) s += A.val[p] * x[A.col[p]];
    y[r] = s;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::int64_t r = 0; r < rows; ++r) row(static_cast<std::size_t>(r));
  } else {
    for (std::size_t r = 0; r < A.rows; ++r) row(r);
  }
}

std::uint64_t box_count(std::span<const double> values, std::size_t cells, double eps, Exec exec) {
  const std::size_t block = (values.size() - 1) / cells;
  const auto n = static_cast<std::int64_t>(cells);
  auto column = [&](std::size_t c) {
    double lo, hi;
    cell_range(values, block, c, lo, hi);
    return static_cast<std::uint64_t>(std::floor(hi / eps) - std::floor(lo / eps)) + 1;
  };
  std::uint64_t total = 0;
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static) reduction(+ : total)
    for (std::int64_t c = 0; c < n; ++c) total += column(static_cast<std::size_t>(c));
  } else {
    for (std::size_t c = 0; c < cells; ++c) total += column(c);
  }
  return total;
}

}  // namespace kernels
}  // namespace fif

namespace fif {

std::size_t checked_pow(std::size_t base, int exp, std::size_t limit) {
  std::size_t r = 1;
  for (int e = 0; e < exp; ++e) {
    if (r > limit / base) throw CapacityError(std::to_string(base) + "^" + std::to_string(exp) + " exceeds the capacity budget");
    r *= base;
  }
  return r;
}

}  // namespace fif
