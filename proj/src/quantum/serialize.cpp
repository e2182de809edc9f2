#include "hqflow/quantum/serialize.hpp"

#include <json.hpp>

namespace hqflow::quantum {

using nlohmann::json;

namespace {

json matrix_to_json(const Mat2& m) {
  json out = json::array();
  for (const cd& v : m.m) {
    out.push_back(v.real());
    out.push_back(v.imag());
  }
  return out;
}

Mat2 matrix_from_json(const json& j) {
  if (!j.is_array() || j.size() != 8) throw SerializeError("u1q matrix needs 8 numbers");
  Mat2 m;
  for (int i = 0; i < 4; ++i) {
    m.m[static_cast<std::size_t>(i)] = cd(j[2 * i].get<double>(), j[2 * i + 1].get<double>());
  }
  return m;
}

GateKind kind_from_string(const std::string& s) {
  if (s == "h") return GateKind::H;
  if (s == "x") return GateKind::X;
  if (s == "z") return GateKind::Z;
  if (s == "rx") return GateKind::RX;
  if (s == "ry") return GateKind::RY;
  if (s == "rz") return GateKind::RZ;
  if (s == "cz") return GateKind::CZ;
  if (s == "cnot") return GateKind::CNOT;
  if (s == "u1q") return GateKind::U1q;
  throw SerializeError("unknown gate kind '" + s + "'");
}

bool has_angle(GateKind k) { return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ; }

}  // namespace

std::string circuit_to_json(const Circuit& circuit) {
  json j;
  j["format"] = "hqflow-circuit";
  j["version"] = 1;
  j["num_qubits"] = circuit.numQubits;
  json gates = json::array();
  for (const auto& g : circuit.gates) {
    json gj;
    gj["kind"] = to_string(g.kind);
    json qubits = json::array();
    qubits.push_back(g.q0);
    if (g.arity() == 2) qubits.push_back(g.q1);
    gj["qubits"] = qubits;
    if (has_angle(g.kind)) gj["angle"] = g.angle;
    if (g.kind == GateKind::U1q) gj["matrix"] = matrix_to_json(g.matrix);
    gates.push_back(gj);
  }
  j["gates"] = gates;
  return j.dump();
}

Circuit circuit_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SerializeError(std::string("bad circuit json: ") + e.what());
  }
  if (j.value("format", "") != "hqflow-circuit") throw SerializeError("not a circuit document");
  if (j.value("version", 0) != 1) throw SerializeError("unsupported circuit version");
  Circuit circuit;
  circuit.numQubits = j.at("num_qubits").get<int>();
  for (const auto& gj : j.at("gates")) {
    Gate g;
    g.kind = kind_from_string(gj.at("kind").get<std::string>());
    const auto& qubits = gj.at("qubits");
    g.q0 = qubits.at(0).get<int>();
    if (g.arity() == 2) g.q1 = qubits.at(1).get<int>();
    if (has_angle(g.kind)) g.angle = gj.at("angle").get<double>();
    if (g.kind == GateKind::U1q) g.matrix = matrix_from_json(gj.at("matrix"));
    circuit.gates.push_back(g);
  }
  circuit.validate();
  return circuit;
}

std::string observable_to_json(const Observable& obs) {
  json j;
  j["format"] = "hqflow-observable";
  j["version"] = 1;
  j["num_qubits"] = obs.numQubits;
  json terms = json::array();
  for (const auto& t : obs.terms) {
    terms.push_back({{"coefficient", t.coefficient}, {"paulis", t.str()}});
  }
  j["terms"] = terms;
  return j.dump();
}

Observable observable_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SerializeError(std::string("bad observable json: ") + e.what());
  }
  if (j.value("format", "") != "hqflow-observable") throw SerializeError("not an observable document");
  if (j.value("version", 0) != 1) throw SerializeError("unsupported observable version");
  Observable obs;
  obs.numQubits = j.at("num_qubits").get<int>();
  for (const auto& tj : j.at("terms")) {
    obs.terms.push_back(
        PauliTerm::from_string(tj.at("paulis").get<std::string>(), tj.at("coefficient").get<double>()));
  }
  return obs;
}

}  // namespace hqflow::quantum
