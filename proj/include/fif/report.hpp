#pragma once

// JSON and CSV serialization of pipeline results. Output is deterministic:
// identical inputs give byte-identical documents (no timestamps or timings).

#include <iosfwd>
#include <json.hpp>

#include "fif/dimension.hpp"
#include "fif/engine.hpp"
#include "fif/matrices.hpp"
#include "fif/model.hpp"
#include "fif/oscillation.hpp"

namespace fif {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

std::string_view to_string(Tristate t);

Json to_json(const Interval& I);
Json to_json(const IntervalBound& b);
Json to_json(const Violation& v);
Json to_json(const FifModel& model);
Json to_json(const EngineBounds& b);
Json to_json(const OscillationSum& s);
Json to_json(const DivergenceCertificate& c);
Json to_json(const SumFunctionSummary& s);
Json to_json(const SpectralResult& r);
Json to_json(const SpectralSummary& s);
Json to_json(const ZeroStructure& z);
Json to_json(const PartialVerdict& p);
Json to_json(const BoxCountResult& b);
Json to_json(const DimensionVerdict& v);
Json to_json(const DimensionAnalysis& a);

/// "k,O_k,gap,certified_upper,threshold_general,threshold_nonnegative,verdict".
void write_oscillation_csv(std::ostream& out, const DivergenceCertificate& c);

/// "k,eps,count,oscillation,oscillation_estimate".
void write_boxcount_csv(std::ostream& out, const BoxCountResult& b);

/// Formats with 17 significant digits ("nan" for NaN).
std::string format17(double v);

}  // namespace fif
