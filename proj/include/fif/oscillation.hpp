#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fif/engine.hpp"
#include "fif/matrices.hpp"
#include "fif/model.hpp"

namespace fif {

inline constexpr int kDefaultRefinement = 4;

struct OscillationOptions {
  int refinement = kDefaultRefinement;
  EngineOptions engine{};
};

/// O_k(f, I) approximated from grid level k + r.
struct OscillationSum {
  int k = 1;
  int refinement = 0;
  double value = 0.0;            // grid max - min summed over cells (a lower bound)
  double gap = 0.0;              // value minus the same sum from grid level k + r - 1 (NaN when r = 0)
  double certified_upper = 0.0;  // value + N^k * 2 * Omega_{k+r}
};

/// Omega_m for m = 0..levels: bounds on the oscillation of f over any level-m
/// cell, from Omega_m = min(2 M_f, S* Omega_{m-1} + (lambda_S M_f + lambda_q) |I| N^{-(m-1)}).
std::vector<double> modulus_bounds(const FifModel& model, const EngineBounds& bounds, int levels);

OscillationSum oscillation_sum(const FifModel& model, int k, const OscillationOptions& options = {});

/// O_k for k = 1..k_max, sharing grid refinements.
std::vector<OscillationSum> oscillation_table(const FifModel& model, int k_max, const OscillationOptions& options = {});

/// Entry j = O_p(f, I_j^k), j = 0..N^k-1, from grid level k + p + r.
struct OscillationVector {
  int k = 1;
  int p = 1;
  int refinement = 0;
  std::vector<double> entries;
  std::vector<double> gaps;  // per-entry difference to the level k + p + r - 1 approximation

  double l1() const;
};

OscillationVector oscillation_vector(const FifModel& model, int k, int p, const OscillationOptions& options = {});

/// u vector of the vector recursion: entry (i-1) N^{k-1} + l (1-based i, l) is
/// beta N^{1-k} |I| + Var(q_i, I_l^{k-1}) (variation upper bounds).
std::vector<double> recursion_offsets(const FifModel& model, int k, const EngineBounds& bounds);

enum class Verdict { Divergent, Bounded, Undetermined };
enum class DivergenceCriterion { general, nonnegative };

std::string_view to_string(Verdict v);
std::string_view to_string(DivergenceCriterion c);

struct DivergenceCertificate {
  Verdict verdict = Verdict::Undetermined;
  std::optional<int> k0;  // smallest level whose O_k exceeds the threshold
  double O_k0 = 0.0;
  std::optional<double> threshold;  // min of the applicable thresholds
  DivergenceCriterion criterion = DivergenceCriterion::general;
  std::optional<double> threshold_general;
  std::optional<double> threshold_nonnegative;
  double gamma_lower_star = 0.0;
  double sum_variation_q = 0.0;  // sum_i Var(q_i, I)
  double variation_sum_q = 0.0;  // Var(sum_i q_i, I)
  EngineBounds bounds;
  std::vector<OscillationSum> table;
  std::string reason;
};

/// Variation divergence certificate from O_k, k <= k_max. Divergent when some
/// O_k exceeds (2 M_f lambda_S N |I| + sum Var(q_i)) / (gamma_* - 1) or, when
/// every S_i >= 0, (lambda' M_f |I| + Var(sum q_i)) / (gamma_* - 1). Bounded
/// only when gamma^* < 1 and O_k is stable to 1e-9 over three levels.
DivergenceCertificate divergence_check(const FifModel& model, int k_max, const SumFunctionSummary& gamma,
                                       const OscillationOptions& options = {});
DivergenceCertificate divergence_check(const FifModel& model, int k_max, const OscillationOptions& options = {});

}  // namespace fif
