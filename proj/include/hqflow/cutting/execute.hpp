#pragma once

#include <cstdint>
#include <vector>

#include "hqflow/cutting/variants.hpp"
#include "hqflow/quantum/pauli.hpp"
#include "hqflow/quantum/statevector.hpp"

namespace hqflow::cutting {

enum class ExecMode { Exact, Sampled };

const char* to_string(ExecMode mode);
ExecMode exec_mode_from_string(const std::string& s);

/// Estimate of one observable term on one fragment. Exact mode has zero
/// standard error by construction.
struct FragmentValue {
  double value = 0.0;
  double stderror = 0.0;
};

/// Results of one fragment execution, one entry per observable term.
struct FragmentResult {
  int variantIndex = 0;
  int fragmentId = 0;
  ExecMode mode = ExecMode::Exact;
  std::int64_t shots = 0;
  std::vector<FragmentValue> terms;
};

/// Evaluates a fragment program against the local restrictions of the
/// observable terms. Sign measurements branch the evaluation: in exact mode
/// both projective outcomes are evaluated and weighted by their Born
/// probability (outcome 1 with negative sign); in sampled mode each shot
/// draws a branch, then a computational-basis outcome in the term's
/// eigenbasis. Deterministic in `seed`.
FragmentResult evaluate_fragment(const FragmentProgram& program, const quantum::Observable& observable,
                                 ExecMode mode, std::int64_t shots, std::uint64_t seed);

/// Evaluates every fragment of `variant` whose assigned backend is `role`.
/// Fragments routed elsewhere are skipped (the caller records a no-op).
std::vector<FragmentResult> execute_variant(const SubcircuitVariant& variant, BackendRole role,
                                            const quantum::Observable& observable, ExecMode mode,
                                            std::int64_t shots, std::uint64_t baseSeed);

/// Rough work estimate used as the simulated duration hint.
double fragment_cost_estimate(const FragmentProgram& program, ExecMode mode, std::int64_t shots);

/// Artifact encoding of one fragment's results.
std::string fragment_result_to_json(const FragmentResult& result);
FragmentResult fragment_result_from_json(const std::string& text);

}  // namespace hqflow::cutting
