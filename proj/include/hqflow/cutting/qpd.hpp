#pragma once

#include <stdexcept>
#include <vector>

#include "hqflow/quantum/circuit.hpp"

namespace hqflow::cutting {

struct UnsupportedGateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One local action replacing half of a cut gate: either a single-qubit
/// unitary or a Z-basis measurement whose outcome multiplies the branch
/// weight by +1/-1 (the qubit continues in the projected state).
struct LocalOpAtom {
  enum class Kind { Unitary, MeasureZSign };
  Kind kind = Kind::Unitary;
  quantum::Mat2 matrix{};  // Unitary only

  static LocalOpAtom unitary(const quantum::Mat2& m) { return {Kind::Unitary, m}; }
  static LocalOpAtom measure_z_sign() { return {Kind::MeasureZSign, {}}; }
};

struct LocalOp {
  std::vector<LocalOpAtom> atoms;  // applied in order
  bool has_measure() const;
};

/// One term of a quasiprobability decomposition: coefficient times the
/// product channel (opA on the first qubit) x (opB on the second).
struct QPDTerm {
  double coefficient = 0.0;
  LocalOp opA;
  LocalOp opB;
};

/// Six-term local decomposition of CZ or CNOT. The signed coefficients sum
/// in absolute value to gamma = 3. Correctness is established by the
/// channel-equality oracle in the test suite, not assumed.
std::vector<QPDTerm> decompose_gate(quantum::GateKind kind);

/// gamma = sum |c_k| of a decomposition (sampling-overhead base).
double gamma(const std::vector<QPDTerm>& terms);

}  // namespace hqflow::cutting
