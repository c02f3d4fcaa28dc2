#include "fif/matrices.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <queue>

#include <json.hpp>

namespace fif {

std::string_view to_string(MatrixKind kind) { return kind == MatrixKind::upper ? "upper" : "lower"; }

std::string_view to_string(Primitivity p) {
  switch (p) {
    case Primitivity::Primitive: return "Primitive";
    case Primitivity::IrreducibleNotPrimitive: return "IrreducibleNotPrimitive";
    case Primitivity::Reducible: return "Reducible";
  }
  return "?";
}

double ScalingMatrix::entry(std::size_t row, std::size_t col) const {
  const std::size_t block = dim / static_cast<std::size_t>(n);  // N^{k-1}
  const std::size_t i = row / block, l = row % block;
  if (col / static_cast<std::size_t>(n) != l) return 0.0;
  return basic_entry(static_cast<int>(i), col);
}

SparseMatrix ScalingMatrix::to_sparse() const {
  const auto N = static_cast<std::size_t>(n);
  const std::size_t block = dim / N;
  SparseMatrix A;
  A.rows = A.cols = dim;
  A.row_ptr.assign(1, 0);
  A.col.reserve(dim * N);
  A.val.reserve(dim * N);
  for (std::size_t row = 0; row < dim; ++row) {
    const std::size_t i = row / block, l = row % block;
    for (std::size_t t = 0; t < N; ++t) {
      const std::size_t c = l * N + t;
      const double v = basic[i * dim + c];
      if (v != 0.0) {
        A.col.push_back(static_cast<std::uint32_t>(c));
        A.val.push_back(v);
      }
    }
    A.row_ptr.push_back(A.val.size());
  }
  return A;
}

std::vector<double> ScalingMatrix::column_sums() const {
  std::vector<double> sums(dim, 0.0);
  for (int i = 0; i < n; ++i)
    for (std::size_t c = 0; c < dim; ++c) sums[c] += basic_entry(i, c);
  return sums;
}

ScalingMatrices build_matrices(const FifModel& model, int k, const MatrixOptions& options) {
  if (k < 1) throw std::invalid_argument("build_matrices: level must be >= 1");
  const int N = model.n();
  const std::size_t dim = checked_pow(static_cast<std::size_t>(N), k, options.max_dim);
  ScalingMatrices out;
  for (ScalingMatrix* m : {&out.upper, &out.lower}) {
    m->k = k;
    m->n = N;
    m->dim = dim;
    m->basic.assign(static_cast<std::size_t>(N) * dim, 0.0);
  }
  out.upper.kind = MatrixKind::upper;
  out.lower.kind = MatrixKind::lower;

  std::vector<double> width(dim, 0.0);
  std::vector<char> certified(dim, 1);
  const Interval I = model.interval();
  auto fill = [&](std::size_t c) {
    const Interval cell{grid_point(I, c, dim), grid_point(I, c + 1, dim)};
    for (int i = 0; i < N; ++i) {
      const Extrema e = interval_extrema_abs(model.S[static_cast<std::size_t>(i)], cell, options.extrema);
      out.upper.basic[static_cast<std::size_t>(i) * dim + c] = e.max.value();
      out.lower.basic[static_cast<std::size_t>(i) * dim + c] = e.min.value();
      width[c] = std::max({width[c], e.max.width(), e.min.width()});
      if (!e.max.certified || !e.min.certified) certified[c] = 0;
    }
  };
  const auto n = static_cast<std::int64_t>(dim);
  if (options.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t c = 0; c < n; ++c) fill(static_cast<std::size_t>(c));
  } else {
    for (std::size_t c = 0; c < dim; ++c) fill(c);
  }
  const double w = *std::max_element(width.begin(), width.end());
  const bool cert = std::all_of(certified.begin(), certified.end(), [](char x) { return x != 0; });
  for (ScalingMatrix* m : {&out.upper, &out.lower}) {
    m->max_enclosure_width = w;
    m->certified = cert;
  }
  return out;
}

ScalingMatrix build_matrix(const FifModel& model, int k, MatrixKind kind, const MatrixOptions& options) {
  ScalingMatrices m = build_matrices(model, k, options);
  return kind == MatrixKind::upper ? std::move(m.upper) : std::move(m.lower);
}

SparseMatrix sparse_from_dense(const std::vector<std::vector<double>>& dense) {
  SparseMatrix A;
  A.rows = dense.size();
  A.cols = dense.empty() ? 0 : dense.front().size();
  for (const auto& row : dense) {
    if (row.size() != A.cols) throw std::invalid_argument("sparse_from_dense: ragged matrix");
    for (std::size_t c = 0; c < row.size(); ++c)
      if (row[c] != 0.0) {
        A.col.push_back(static_cast<std::uint32_t>(c));
        A.val.push_back(row[c]);
      }
    A.row_ptr.push_back(A.val.size());
  }
  return A;
}

std::vector<int> strongly_connected_components(const SparseMatrix& A, int& count) {
  const std::size_t n = A.rows;
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  struct Frame {
    std::size_t v;
    std::size_t p;
  };
  std::vector<Frame> frames;
  int next_index = 0;
  count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (index[s] != -1) continue;
    auto open = [&](std::size_t v) {
      index[v] = low[v] = next_index++;
      stack.push_back(v);
      on_stack[v] = 1;
      frames.push_back({v, A.row_ptr[v]});
    };
    open(s);
    while (!frames.empty()) {
      const std::size_t v = frames.back().v;
      const std::size_t p = frames.back().p;
      if (p < A.row_ptr[v + 1]) {
        frames.back().p = p + 1;
        if (!(A.val[p] > 0.0)) continue;
        const std::size_t w = A.col[p];
        if (index[w] == -1)
          open(w);
        else if (on_stack[w])
          low[v] = std::min(low[v], index[w]);
        continue;
      }
      if (low[v] == index[v]) {
        for (;;) {
          const std::size_t w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = count;
          if (w == v) break;
        }
        ++count;
      }
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
    }
  }
  return comp;
}

PrimitivityReport primitivity_check(const SparseMatrix& A) {
  PrimitivityReport r;
  if (A.rows == 0) return r;
  strongly_connected_components(A, r.components);
  if (r.components != 1) return r;
  std::vector<long> level(A.rows, -1);
  std::queue<std::size_t> bfs;
  level[0] = 0;
  bfs.push(0);
  long g = 0;
  while (!bfs.empty()) {
    const std::size_t u = bfs.front();
    bfs.pop();
    for (std::size_t p = A.row_ptr[u]; p < A.row_ptr[u + 1]; ++p) {
      if (!(A.val[p] > 0.0)) continue;
      const std::size_t v = A.col[p];
      if (level[v] == -1) {
        level[v] = level[u] + 1;
        bfs.push(v);
      } else {
        g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
      }
    }
  }
  if (g == 0) return r;  // a single vertex without a loop: the 1x1 zero matrix
  r.period = static_cast<int>(g);
  r.kind = g == 1 ? Primitivity::Primitive : Primitivity::IrreducibleNotPrimitive;
  return r;
}

namespace {

SpectralResult power_iteration(const SparseMatrix& A, const SpectralOptions& o) {
  const std::size_t n = A.rows;
  SpectralResult r;
  std::vector<double> x(n, 1.0 / static_cast<double>(n)), y(n);
  double lo = 0.0, hi = INFINITY;
  for (std::size_t it = 1; it <= o.max_iterations; ++it) {
    kernels::shifted_matvec(A, 1.0, x, y, o.exec);
    double rlo = INFINITY, rhi = -INFINITY, sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ratio = y[j] / x[j];
      rlo = std::min(rlo, ratio);
      rhi = std::max(rhi, ratio);
      sum += y[j];
    }
    // Collatz-Wielandt: every bracket is valid, keep the tightest seen.
    lo = std::max(lo, rlo - 1.0);
    hi = std::min(hi, rhi - 1.0);
    r.iterations = it;
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= o.tol * std::max(mid, 1e-300)) {
      r.converged = true;
      break;
    }
    for (std::size_t j = 0; j < n; ++j) x[j] = y[j] / sum;
  }
  r.lo = std::max(lo, 0.0);
  r.hi = std::max(hi, r.lo);
  r.value = 0.5 * (r.lo + r.hi);
  return r;
}

SparseMatrix submatrix(const SparseMatrix& A, const std::vector<std::size_t>& vertices, const std::vector<int>& local) {
  SparseMatrix B;
  B.rows = B.cols = vertices.size();
  for (std::size_t v : vertices) {
    for (std::size_t p = A.row_ptr[v]; p < A.row_ptr[v + 1]; ++p)
      if (local[A.col[p]] >= 0) {
        B.col.push_back(static_cast<std::uint32_t>(local[A.col[p]]));
        B.val.push_back(A.val[p]);
      }
    B.row_ptr.push_back(B.val.size());
  }
  return B;
}

}  // namespace

SpectralResult spectral_radius(const SparseMatrix& A, const SpectralOptions& options) {
  if (A.rows != A.cols) throw std::invalid_argument("spectral_radius: matrix must be square");
  if (!(options.tol > 0.0)) throw std::invalid_argument("spectral_radius: tol must be positive");
  for (double v : A.val)
    if (!(v >= 0.0)) throw std::invalid_argument("spectral_radius: matrix must be nonnegative");
  SpectralResult out;
  if (A.rows == 0) {
    out.converged = true;
    return out;
  }
  int count = 0;
  const std::vector<int> comp = strongly_connected_components(A, count);
  if (count == 1 && A.rows > 1) {
    out = power_iteration(A, options);
    out.components = 1;
    return out;
  }
  std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(count));
  for (std::size_t v = 0; v < A.rows; ++v) members[static_cast<std::size_t>(comp[v])].push_back(v);
  std::vector<int> local(A.rows, -1);
  out.converged = true;
  out.components = count;
  for (const auto& vs : members) {
    SpectralResult r;
    if (vs.size() == 1) {
      r.value = r.lo = r.hi = A.at(vs[0], vs[0]);
      r.converged = true;
    } else {
      for (std::size_t t = 0; t < vs.size(); ++t) local[vs[t]] = static_cast<int>(t);
      r = power_iteration(submatrix(A, vs, local), options);
      for (std::size_t v : vs) local[v] = -1;
    }
    out.lo = std::max(out.lo, r.lo);
    out.hi = std::max(out.hi, r.hi);
    out.iterations += r.iterations;
    out.converged = out.converged && r.converged;
  }
  out.value = 0.5 * (out.lo + out.hi);
  return out;
}

SumFunctionSummary gamma_summary(const FifModel& model, int k_max, const MatrixOptions& options) {
  const Interval I = model.interval();
  SumFunctionSummary s;
  s.signs_certified = true;
  s.all_nonnegative = true;
  std::vector<int> sign;
  for (const ExprFunction& S : model.S) {
    const Extrema e = interval_extrema(S, I, options.extrema);
    if (e.min.lo >= 0.0 && e.min.certified) {
      sign.push_back(1);
    } else if (e.max.hi <= 0.0 && e.max.certified) {
      sign.push_back(-1);
      s.all_nonnegative = false;
    } else {
      s.signs_certified = false;
      s.all_nonnegative = false;
    }
  }
  // With certified signs |S_i| = +-S_i on all of I, which keeps gamma smooth
  // and usually in closed form.
  std::optional<ExprFunction> g;
  for (std::size_t i = 0; i < model.S.size(); ++i) {
    const ExprFunction term = s.signs_certified ? (sign[i] > 0 ? model.S[i] : -model.S[i]) : abs(model.S[i]);
    g = g ? *g + term : term;
  }
  s.gamma = *g;
  const Extrema e = interval_extrema(s.gamma, I, options.extrema);
  s.gamma_star = e.max;
  s.gamma_lower_star = e.min;
  s.lipschitz_gamma = lipschitz_bound(s.gamma, I);
  const auto& t = s.gamma.trig_affine();
  s.constant = (t && t->is_constant()) || (e.max.hi - e.min.lo < 1e-12 && e.max.certified && e.min.certified);
  for (int k = 1; k <= k_max; ++k) {
    const ScalingMatrices m = build_matrices(model, k, options);
    const std::vector<double> up = m.upper.column_sums(), lo = m.lower.column_sums();
    s.levels.push_back({k, *std::max_element(up.begin(), up.end()), *std::min_element(lo.begin(), lo.end())});
  }
  return s;
}

namespace {

std::optional<double> aitken(double a, double b, double c) {
  const double d1 = b - a, d2 = c - b, denom = d2 - d1;
  if (denom == 0.0 || !std::isfinite(denom)) return std::nullopt;
  const double r = c - d2 * d2 / denom;
  return std::isfinite(r) ? std::optional<double>(r) : std::nullopt;
}

}  // namespace

SpectralSummary rho_sequence(const FifModel& model, int k_max, const SpectralOptions& spectral,
                             const MatrixOptions& options) {
  if (k_max < 1) throw std::invalid_argument("rho_sequence: k_max must be >= 1");
  SpectralSummary s;
  s.tol = spectral.tol;
  for (int k = 1; k <= k_max; ++k) {
    const ScalingMatrices m = build_matrices(model, k, options);
    const SparseMatrix up = m.upper.to_sparse(), lo = m.lower.to_sparse();
    RadiusLevel L;
    L.k = k;
    L.upper = spectral_radius(up, spectral);
    L.lower = spectral_radius(lo, spectral);
    L.upper_pattern = primitivity_check(up).kind;
    L.lower_pattern = primitivity_check(lo).kind;
    const std::vector<double> cu = m.upper.column_sums(), cl = m.lower.column_sums();
    L.gamma_upper = *std::max_element(cu.begin(), cu.end());
    L.gamma_lower = *std::min_element(cl.begin(), cl.end());
    L.enclosure_width = m.upper.max_enclosure_width;
    L.entries_certified = m.upper.certified;
    if (!s.levels.empty()) {
      const RadiusLevel& P = s.levels.back();
      const double slack = 1e-12 * std::max(1.0, P.upper.hi) + model.n() * (L.enclosure_width + P.enclosure_width);
      if (L.upper.lo > P.upper.hi + slack) s.violations.push_back({k, MatrixKind::upper, P.upper.value, L.upper.value});
      if (L.lower.hi < P.lower.lo - slack) s.violations.push_back({k, MatrixKind::lower, P.lower.value, L.lower.value});
    }
    s.levels.push_back(L);
  }
  const RadiusLevel& K = s.levels.back();
  s.rho_star_upper = K.upper.value;
  s.rho_star_lower = K.lower.value;
  s.positivity_certified = true;
  for (const ExprFunction& S : model.S)
    s.positivity_certified = s.positivity_certified && interval_extrema_abs(S, model.interval()).min.lo > 0.0;
  if (s.rho_star_upper - s.rho_star_lower < 10.0 * spectral.tol * std::max(1.0, s.rho_star_upper)) {
    s.rho_S = 0.5 * (s.rho_star_upper + s.rho_star_lower);
    s.rho_S_reason = "bracket-closed";
  } else if (s.positivity_certified) {
    s.rho_S = 0.5 * (s.rho_star_upper + s.rho_star_lower);
    s.rho_S_reason = "positivity";
  }
  if (s.levels.size() >= 3) {
    const std::size_t n = s.levels.size();
    const auto u = aitken(s.levels[n - 3].upper.value, s.levels[n - 2].upper.value, s.levels[n - 1].upper.value);
    const auto l = aitken(s.levels[n - 3].lower.value, s.levels[n - 2].lower.value, s.levels[n - 1].lower.value);
    if (u && l) s.extrapolated = 0.5 * (*u + *l);
  }
  return s;
}

void write_matrix_coo(std::ostream& out, const ScalingMatrix& m, const std::string& model_name) {
  const SparseMatrix A = m.to_sparse();
  nlohmann::ordered_json header = {{"model", model_name},
                                   {"k", m.k},
                                   {"kind", std::string(to_string(m.kind))},
                                   {"N", m.n},
                                   {"dim", m.dim},
                                   {"nonzeros", A.nonzeros()},
                                   {"max_enclosure_width", m.max_enclosure_width},
                                   {"certified", m.certified}};
  out << "# " << header.dump() << "\n";
  char buf[96];
  for (std::size_t r = 0; r < A.rows; ++r)
    for (std::size_t p = A.row_ptr[r]; p < A.row_ptr[r + 1]; ++p) {
      const int len = std::snprintf(buf, sizeof buf, "%zu %u %.17g\n", r + 1, A.col[p] + 1, A.val[p]);
      out.write(buf, len);
    }
}

void write_radii_csv(std::ostream& out, const SpectralSummary& s) {
  out << "k,rho_upper,rho_lower\n";
  char buf[96];
  for (const RadiusLevel& L : s.levels) {
    const int len = std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", L.k, L.upper.value, L.lower.value);
    out.write(buf, len);
  }
}

}  // namespace fif
