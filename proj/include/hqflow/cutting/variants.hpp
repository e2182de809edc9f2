#pragma once

#include <string>
#include <variant>
#include <vector>

#include "hqflow/cutting/plan.hpp"
#include "hqflow/cutting/policy.hpp"
#include "hqflow/cutting/qpd.hpp"

namespace hqflow::cutting {

/// Fragment circuits are plain gate lists plus mid-circuit sign
/// measurements injected by the decomposition.
struct MeasureSign {
  int qubit = 0;
  bool operator==(const MeasureSign&) const = default;
};

using FragmentInstr = std::variant<quantum::Gate, MeasureSign>;

struct FragmentProgram {
  int fragmentId = 0;
  int numQubits = 0;
  std::vector<int> globalQubits;  // ascending; local qubit i = globalQubits[i]
  std::vector<FragmentInstr> instrs;

  bool operator==(const FragmentProgram&) const = default;
};

/// One element of the Cartesian product over per-cut decomposition terms:
/// fully local fragment circuits plus the product coefficient.
struct SubcircuitVariant {
  int variantIndex = 0;
  double coefficient = 1.0;
  std::vector<FragmentProgram> fragments;       // one per plan fragment
  std::vector<BackendRole> assignedBackend;     // parallel to fragments

  bool operator==(const SubcircuitVariant&) const = default;
};

/// Decompositions for each cut gate of the plan, in cut order.
std::vector<std::vector<QPDTerm>> cut_decompositions(const CutPlan& plan);

/// Number of variants: product of per-cut term counts (6^cuts here).
std::int64_t variant_count(const CutPlan& plan);

/// Builds variant `index` (mixed-radix digits over the cuts, first cut least
/// significant). Every fragment circuit is fully local.
SubcircuitVariant build_variant(const CutPlan& plan, const std::vector<std::vector<QPDTerm>>& decomps,
                                std::int64_t index, const BackendPolicy& policy);

/// The full Cartesian product.
std::vector<SubcircuitVariant> generate_variants(const CutPlan& plan,
                                                 const BackendPolicy& policy = default_policy());

/// JSON encodings for the shared artifact store.
std::string fragment_to_json(const FragmentProgram& program, int variantIndex, BackendRole backend);
FragmentProgram fragment_from_json(const std::string& text);

}  // namespace hqflow::cutting
