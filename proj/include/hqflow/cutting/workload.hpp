#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hqflow/cutting/plan.hpp"
#include "hqflow/cutting/policy.hpp"
#include "hqflow/cutting/variants.hpp"
#include "hqflow/quantum/pauli.hpp"

namespace hqflow::cutting {

/// Reference circuit family: `layers` blocks of RY+RZ rotations on every
/// qubit followed by a CZ chain (q, q+1), then one trailing RY layer.
/// Rotation angles are uniform in [0, 2*pi), drawn from `seed`.
quantum::Circuit make_hea_circuit(int numQubits, int layers, std::uint64_t seed);

/// Knobs of the reference cutting workload. Defaults give a 3-cut plan
/// (216 variants) splitting into a 5-qubit fragment (QPU policy bucket) and
/// a 6-qubit fragment (CPU bucket).
struct WorkloadConfig {
  int numQubits = 11;
  int layers = 3;
  int maxFragmentQubits = 6;
  std::uint64_t seed = 42;
  std::string planId = "hea";
};

/// Artifact key schema under the shared volume root.
std::string plan_manifest_path(const std::string& root, const std::string& planId);
std::string fragment_path(const std::string& root, const std::string& planId, int variant, int fragment);
std::string fragment_result_path(const std::string& root, const std::string& planId, int variant,
                                 int fragment);
std::string reconstruction_path(const std::string& root);

/// Everything the execute and reconstruct stages need to know about a plan,
/// written once by the create stage.
struct PlanManifest {
  std::string planId;
  quantum::Circuit circuit;
  quantum::Observable observable;
  int maxFragmentQubits = 0;
  std::vector<int> cutGateIndices;
  std::int64_t variantCount = 0;
  std::vector<double> coefficients;  // per variant
  struct FragmentMeta {
    int id = 0;
    std::vector<int> globalQubits;
    BackendRole backend = BackendRole::CPU;
  };
  std::vector<FragmentMeta> fragments;
};

PlanManifest make_manifest(const std::string& planId, const CutPlan& plan,
                           const std::vector<SubcircuitVariant>& variants,
                           const quantum::Observable& observable, int maxFragmentQubits);

std::string manifest_to_json(const PlanManifest& manifest);
PlanManifest manifest_from_json(const std::string& text);

}  // namespace hqflow::cutting
