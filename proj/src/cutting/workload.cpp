#include "hqflow/cutting/workload.hpp"

#include <json.hpp>

#include "hqflow/common/rng.hpp"
#include "hqflow/quantum/serialize.hpp"

namespace hqflow::cutting {

using nlohmann::json;

quantum::Circuit make_hea_circuit(int numQubits, int layers, std::uint64_t seed) {
  constexpr double kTwoPi = 6.28318530717958647692;
  Rng rng(seed);
  quantum::Circuit c;
  c.numQubits = numQubits;
  for (int layer = 0; layer < layers; ++layer) {
    for (int q = 0; q < numQubits; ++q) c.add(quantum::Gate::ry(q, rng.next_double() * kTwoPi));
    for (int q = 0; q < numQubits; ++q) c.add(quantum::Gate::rz(q, rng.next_double() * kTwoPi));
    for (int q = 0; q + 1 < numQubits; ++q) c.add(quantum::Gate::cz(q, q + 1));
  }
  for (int q = 0; q < numQubits; ++q) c.add(quantum::Gate::ry(q, rng.next_double() * kTwoPi));
  return c;
}

std::string plan_manifest_path(const std::string& root, const std::string& planId) {
  return root + "/variants/" + planId + "/plan.json";
}

std::string fragment_path(const std::string& root, const std::string& planId, int variant, int fragment) {
  return root + "/variants/" + planId + "/" + std::to_string(variant) + "/frag-" +
         std::to_string(fragment) + ".frag";
}

std::string fragment_result_path(const std::string& root, const std::string& planId, int variant,
                                 int fragment) {
  return root + "/variants/" + planId + "/" + std::to_string(variant) + "/frag-" +
         std::to_string(fragment) + ".result.json";
}

std::string reconstruction_path(const std::string& root) { return root + "/result.json"; }

PlanManifest make_manifest(const std::string& planId, const CutPlan& plan,
                           const std::vector<SubcircuitVariant>& variants,
                           const quantum::Observable& observable, int maxFragmentQubits) {
  PlanManifest m;
  m.planId = planId;
  m.circuit = plan.circuit;
  m.observable = observable;
  m.maxFragmentQubits = maxFragmentQubits;
  m.cutGateIndices = plan.cutGateIndices;
  m.variantCount = static_cast<std::int64_t>(variants.size());
  m.coefficients.reserve(variants.size());
  for (const auto& v : variants) m.coefficients.push_back(v.coefficient);
  if (!variants.empty()) {
    const auto& first = variants.front();
    for (std::size_t f = 0; f < first.fragments.size(); ++f) {
      PlanManifest::FragmentMeta meta;
      meta.id = first.fragments[f].fragmentId;
      meta.globalQubits = first.fragments[f].globalQubits;
      meta.backend = first.assignedBackend[f];
      m.fragments.push_back(std::move(meta));
    }
  }
  return m;
}

std::string manifest_to_json(const PlanManifest& m) {
  json j;
  j["format"] = "hqflow-plan";
  j["version"] = 1;
  j["plan_id"] = m.planId;
  j["circuit"] = json::parse(quantum::circuit_to_json(m.circuit));
  j["observable"] = json::parse(quantum::observable_to_json(m.observable));
  j["max_fragment_qubits"] = m.maxFragmentQubits;
  j["cut_gate_indices"] = m.cutGateIndices;
  j["variant_count"] = m.variantCount;
  j["coefficients"] = m.coefficients;
  json frags = json::array();
  for (const auto& f : m.fragments) {
    frags.push_back({{"id", f.id}, {"global_qubits", f.globalQubits}, {"backend", to_string(f.backend)}});
  }
  j["fragments"] = frags;
  return j.dump();
}

PlanManifest manifest_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw quantum::SerializeError(std::string("bad plan json: ") + e.what());
  }
  if (j.value("format", "") != "hqflow-plan") throw quantum::SerializeError("not a plan document");
  if (j.value("version", 0) != 1) throw quantum::SerializeError("unsupported plan version");
  PlanManifest m;
  m.planId = j.at("plan_id").get<std::string>();
  m.circuit = quantum::circuit_from_json(j.at("circuit").dump());
  m.observable = quantum::observable_from_json(j.at("observable").dump());
  m.maxFragmentQubits = j.at("max_fragment_qubits").get<int>();
  m.cutGateIndices = j.at("cut_gate_indices").get<std::vector<int>>();
  m.variantCount = j.at("variant_count").get<std::int64_t>();
  m.coefficients = j.at("coefficients").get<std::vector<double>>();
  for (const auto& fj : j.at("fragments")) {
    PlanManifest::FragmentMeta meta;
    meta.id = fj.at("id").get<int>();
    meta.globalQubits = fj.at("global_qubits").get<std::vector<int>>();
    meta.backend = backend_role_from_string(fj.at("backend").get<std::string>());
    m.fragments.push_back(std::move(meta));
  }
  return m;
}

}  // namespace hqflow::cutting
