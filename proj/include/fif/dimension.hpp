#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fif/engine.hpp"
#include "fif/matrices.hpp"
#include "fif/model.hpp"
#include "fif/oscillation.hpp"

namespace fif {

/// Raised when graph samples are too coarse for the requested box sizes.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// A dimension value with the name of the result that produced it:
/// lower bounds: continuity | gamma | rho | boxcount-empirical;
/// upper bounds: gamma | rho | trivial-2;
/// exact values: constant-gamma | rho-equal | bounds-coincide.
struct TaggedBound {
  double value = 0.0;
  std::string provenance;
};

struct HypothesisCheck {
  std::string name;
  Tristate status = Tristate::unknown;
  std::string detail;
};

struct PartialVerdict {
  std::optional<TaggedBound> lower;
  std::optional<TaggedBound> upper;
  std::optional<TaggedBound> exact;
  std::optional<Interval> exact_range;  // uncertainty of the exact value (rho path)
  std::vector<HypothesisCheck> hypotheses;
  std::vector<std::string> notes;
};

/// Zero structure of one scaling function on I.
struct ZeroStructure {
  ZeroCount count;
  Tristate vanishes_on_subinterval = Tristate::unknown;
  Tristate finitely_many_zeros = Tristate::unknown;
};

std::vector<ZeroStructure> zero_structure(const FifModel& model);

/// Sum-function route: upper max(1, 1 + log gamma^* / log N) always; lower
/// 1 + log gamma_* / log N when gamma_* > 1 and the variation diverges; exact
/// when gamma is constant (divergent variation, or constant sum of offsets
/// with a non-constant f).
PartialVerdict dim_bounds_gamma(const FifModel& model, const SumFunctionSummary& gamma,
                                const DivergenceCertificate& cert);

/// Matrix route: upper from rho(upper M_K) when no S_i vanishes on a
/// subinterval; lower from rho(lower M_K) when gamma_* >= 1, every S_i has
/// finitely many zeros and the variation diverges; exact 1 + log rho_S / log N
/// when additionally the common limit rho_S is established.
PartialVerdict dim_bounds_rho(const FifModel& model, const SpectralSummary& spectral,
                              const DivergenceCertificate& cert, const std::vector<ZeroStructure>& zeros);

struct BoxCountLevel {
  int k = 0;
  double eps = 0.0;
  std::uint64_t count = 0;
  double oscillation = 0.0;           // O_k from the samples
  double oscillation_estimate = 0.0;  // 1 + log(O_k + 1) / (k log N)
};

struct BoxCountResult {
  double estimate = 0.0;  // least-squares slope of log N(eps_k) against k log N
  int k_min = 0;
  int k_max = 0;
  int sample_level = 0;
  double window_lo = 0.0;  // spread of the successive per-level slopes
  double window_hi = 0.0;
  std::vector<BoxCountLevel> levels;
};

/// Column-wise box counting with eps_k = N^{-k} |I| on the lattice through 0.
/// Requires samples.level >= k_max + 2.
BoxCountResult boxcount_dimension(const FifModel& model, const GridValues& samples, int k_min, int k_max,
                                  Exec exec = Exec::parallel);

/// Default sample level: min(k_max + 5, deepest level within the budget).
BoxCountResult boxcount_dimension(const FifModel& model, int k_min, int k_max, std::optional<int> level = {},
                                  const EngineOptions& options = {});

struct DimensionVerdict {
  TaggedBound lower{1.0, "continuity"};
  TaggedBound upper{2.0, "trivial-2"};
  std::optional<TaggedBound> exact;
  std::optional<Interval> exact_range;
  std::vector<HypothesisCheck> hypotheses;
  std::vector<std::string> notes;
  std::optional<BoxCountResult> boxcount;  // annotation only
};

/// Tightest valid bounds win; throws InconsistencyError when bounds cross.
DimensionVerdict assemble_verdict(const std::vector<PartialVerdict>& partials,
                                  const std::optional<BoxCountResult>& boxcount = {});

struct DimensionOptions {
  bool use_gamma = true;
  bool use_rho = true;
  bool use_boxcount = true;
  int k_max = 8;          // deepest matrix level and oscillation level
  int refinement = kDefaultRefinement;
  double tol = 1e-8;
  int box_k_min = 4;
  int box_k_max = 9;
  std::optional<int> box_level;
  EngineOptions engine{};
};

/// Everything computed by the dimension pipeline.
struct DimensionAnalysis {
  EngineBounds bounds;
  SumFunctionSummary gamma;
  DivergenceCertificate certificate;
  std::optional<SpectralSummary> spectral;
  std::vector<ZeroStructure> zeros;
  PartialVerdict gamma_part;
  std::optional<PartialVerdict> rho_part;
  DimensionVerdict verdict;
};

DimensionAnalysis analyze_dimension(const FifModel& model, const DimensionOptions& options = {});

}  // namespace fif
