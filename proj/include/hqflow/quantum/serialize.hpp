#pragma once

#include <string>

#include "hqflow/quantum/circuit.hpp"
#include "hqflow/quantum/pauli.hpp"

namespace hqflow::quantum {

struct SerializeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Portable versioned JSON encodings. Schema (version 1):
//   circuit:    {"format": "hqflow-circuit", "version": 1, "num_qubits": n,
//                "gates": [{"kind": "h"|"x"|"z"|"rx"|"ry"|"rz"|"cz"|"cnot"|"u1q",
//                           "qubits": [..], "angle"?: rad,
//                           "matrix"?: [re00,im00,re01,im01,re10,im10,re11,im11]}]}
//   observable: {"format": "hqflow-observable", "version": 1, "num_qubits": n,
//                "terms": [{"coefficient": c, "paulis": "ZZIZ"}]}
// Pauli strings address qubit i with character i (LSB first).

std::string circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const std::string& text);

std::string observable_to_json(const Observable& obs);
Observable observable_from_json(const std::string& text);

}  // namespace hqflow::quantum
