#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hqflow::quantum {

struct ObservableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One weighted Pauli string. Character i of the string form addresses
/// qubit i (least significant bit first).
struct PauliTerm {
  double coefficient = 1.0;
  int numQubits = 0;
  std::uint64_t xmask = 0;  // X or Y positions
  std::uint64_t zmask = 0;  // Z or Y positions

  static PauliTerm from_string(const std::string& paulis, double coefficient = 1.0);
  std::string str() const;
  char at(int qubit) const;
  std::uint64_t support() const { return xmask | zmask; }

  /// Restriction to a qubit subset: keeps the factors on `qubits` (in the
  /// given order as new qubits 0..k-1) and drops identity elsewhere. The
  /// coefficient moves unchanged; callers that split one term across
  /// disjoint subsets must apply the coefficient exactly once.
  PauliTerm restrict_to(const std::vector<int>& qubits) const;

  bool operator==(const PauliTerm&) const = default;
};

struct Observable {
  int numQubits = 0;
  std::vector<PauliTerm> terms;

  static Observable single(const PauliTerm& term) { return Observable{term.numQubits, {term}}; }
  /// Z on every qubit; the reference pipeline's default.
  static Observable full_z(int numQubits);

  bool operator==(const Observable&) const = default;
};

}  // namespace hqflow::quantum
