#include "hqflow/cutting/variants.hpp"

#include <algorithm>

#include <json.hpp>

#include "hqflow/quantum/serialize.hpp"

namespace hqflow::cutting {

using nlohmann::json;
using quantum::Gate;
using quantum::GateKind;

std::vector<std::vector<QPDTerm>> cut_decompositions(const CutPlan& plan) {
  std::vector<std::vector<QPDTerm>> out;
  for (int idx : plan.cutGateIndices) {
    out.push_back(decompose_gate(plan.circuit.gates[static_cast<std::size_t>(idx)].kind));
  }
  return out;
}

std::int64_t variant_count(const CutPlan& plan) {
  std::int64_t count = 1;
  for (const auto& terms : cut_decompositions(plan)) {
    count *= static_cast<std::int64_t>(terms.size());
  }
  return count;
}

namespace {

/// Appends the atoms of a local op at `localQubit` of a fragment program.
void append_local_op(FragmentProgram& frag, int localQubit, const LocalOp& op) {
  for (const auto& atom : op.atoms) {
    if (atom.kind == LocalOpAtom::Kind::Unitary) {
      frag.instrs.emplace_back(Gate::u1q(localQubit, atom.matrix));
    } else {
      frag.instrs.emplace_back(MeasureSign{localQubit});
    }
  }
}

}  // namespace

SubcircuitVariant build_variant(const CutPlan& plan, const std::vector<std::vector<QPDTerm>>& decomps,
                                std::int64_t index, const BackendPolicy& policy) {
  SubcircuitVariant variant;
  variant.variantIndex = static_cast<int>(index);

  // mixed-radix digit per cut, first cut least significant
  std::vector<std::size_t> digit(plan.cutGateIndices.size());
  std::int64_t rest = index;
  for (std::size_t c = 0; c < decomps.size(); ++c) {
    const auto radix = static_cast<std::int64_t>(decomps[c].size());
    digit[c] = static_cast<std::size_t>(rest % radix);
    rest /= radix;
    variant.coefficient *= decomps[c][digit[c]].coefficient;
  }

  // local index maps
  std::vector<int> localIndex(static_cast<std::size_t>(plan.circuit.numQubits), -1);
  for (const auto& qubits : plan.fragmentQubits) {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      localIndex[static_cast<std::size_t>(qubits[i])] = static_cast<int>(i);
    }
  }
  for (int f = 0; f < plan.num_fragments(); ++f) {
    FragmentProgram frag;
    frag.fragmentId = f;
    frag.globalQubits = plan.fragmentQubits[static_cast<std::size_t>(f)];
    frag.numQubits = static_cast<int>(frag.globalQubits.size());
    variant.fragments.push_back(std::move(frag));
    variant.assignedBackend.push_back(policy(variant.fragments.back().numQubits));
  }

  auto frag_of = [&](int qubit) -> FragmentProgram& {
    return variant.fragments[static_cast<std::size_t>(plan.qubitFragment[static_cast<std::size_t>(qubit)])];
  };

  std::size_t cutPos = 0;
  std::vector<int> sortedCuts = plan.cutGateIndices;  // already sorted
  for (std::size_t i = 0; i < plan.circuit.gates.size(); ++i) {
    const Gate& g = plan.circuit.gates[i];
    const bool isCut = cutPos < sortedCuts.size() && sortedCuts[cutPos] == static_cast<int>(i);
    if (isCut) {
      const QPDTerm& term = decomps[cutPos][digit[cutPos]];
      append_local_op(frag_of(g.q0), localIndex[static_cast<std::size_t>(g.q0)], term.opA);
      append_local_op(frag_of(g.q1), localIndex[static_cast<std::size_t>(g.q1)], term.opB);
      ++cutPos;
      continue;
    }
    if (g.arity() == 1) {
      Gate local = g;
      local.q0 = localIndex[static_cast<std::size_t>(g.q0)];
      frag_of(g.q0).instrs.emplace_back(local);
    } else {
      // both endpoints are in the same fragment (uncut edges stay connected)
      Gate local = g;
      local.q0 = localIndex[static_cast<std::size_t>(g.q0)];
      local.q1 = localIndex[static_cast<std::size_t>(g.q1)];
      frag_of(g.q0).instrs.emplace_back(local);
    }
  }
  return variant;
}

std::vector<SubcircuitVariant> generate_variants(const CutPlan& plan, const BackendPolicy& policy) {
  const auto decomps = cut_decompositions(plan);
  const std::int64_t count = variant_count(plan);
  std::vector<SubcircuitVariant> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t v = 0; v < count; ++v) {
    out.push_back(build_variant(plan, decomps, v, policy));
  }
  return out;
}

std::string fragment_to_json(const FragmentProgram& program, int variantIndex, BackendRole backend) {
  json j;
  j["format"] = "hqflow-fragment";
  j["version"] = 1;
  j["variant"] = variantIndex;
  j["fragment"] = program.fragmentId;
  j["backend"] = to_string(backend);
  j["num_qubits"] = program.numQubits;
  j["global_qubits"] = program.globalQubits;
  json instrs = json::array();
  for (const auto& instr : program.instrs) {
    if (const auto* gate = std::get_if<Gate>(&instr)) {
      json gj;
      gj["kind"] = quantum::to_string(gate->kind);
      json qubits = json::array();
      qubits.push_back(gate->q0);
      if (gate->arity() == 2) qubits.push_back(gate->q1);
      gj["qubits"] = qubits;
      if (gate->kind == GateKind::RX || gate->kind == GateKind::RY || gate->kind == GateKind::RZ) {
        gj["angle"] = gate->angle;
      }
      if (gate->kind == GateKind::U1q) {
        json m = json::array();
        for (const auto& v : gate->matrix.m) {
          m.push_back(v.real());
          m.push_back(v.imag());
        }
        gj["matrix"] = m;
      }
      instrs.push_back(gj);
    } else {
      instrs.push_back(json{{"measure_sign", std::get<MeasureSign>(instr).qubit}});
    }
  }
  j["instrs"] = instrs;
  return j.dump();
}

FragmentProgram fragment_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw quantum::SerializeError(std::string("bad fragment json: ") + e.what());
  }
  if (j.value("format", "") != "hqflow-fragment") throw quantum::SerializeError("not a fragment document");
  if (j.value("version", 0) != 1) throw quantum::SerializeError("unsupported fragment version");
  FragmentProgram out;
  out.fragmentId = j.at("fragment").get<int>();
  out.numQubits = j.at("num_qubits").get<int>();
  out.globalQubits = j.at("global_qubits").get<std::vector<int>>();
  for (const auto& ij : j.at("instrs")) {
    if (ij.contains("measure_sign")) {
      out.instrs.emplace_back(MeasureSign{ij.at("measure_sign").get<int>()});
      continue;
    }
    Gate g;
    const std::string kind = ij.at("kind").get<std::string>();
    if (kind == "h") g.kind = GateKind::H;
    else if (kind == "x") g.kind = GateKind::X;
    else if (kind == "z") g.kind = GateKind::Z;
    else if (kind == "rx") g.kind = GateKind::RX;
    else if (kind == "ry") g.kind = GateKind::RY;
    else if (kind == "rz") g.kind = GateKind::RZ;
    else if (kind == "cz") g.kind = GateKind::CZ;
    else if (kind == "cnot") g.kind = GateKind::CNOT;
    else if (kind == "u1q") g.kind = GateKind::U1q;
    else throw quantum::SerializeError("unknown instr kind '" + kind + "'");
    const auto& qubits = ij.at("qubits");
    g.q0 = qubits.at(0).get<int>();
    if (g.arity() == 2) g.q1 = qubits.at(1).get<int>();
    if (ij.contains("angle")) g.angle = ij.at("angle").get<double>();
    if (ij.contains("matrix")) {
      const auto& m = ij.at("matrix");
      for (int i = 0; i < 4; ++i) {
        g.matrix.m[static_cast<std::size_t>(i)] =
            quantum::cd(m.at(2 * i).get<double>(), m.at(2 * i + 1).get<double>());
      }
    }
    out.instrs.emplace_back(g);
  }
  return out;
}

}  // namespace hqflow::cutting
