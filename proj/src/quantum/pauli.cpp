#include "hqflow/quantum/pauli.hpp"

namespace hqflow::quantum {

PauliTerm PauliTerm::from_string(const std::string& paulis, double coefficient) {
  if (paulis.empty() || paulis.size() > 64) {
    throw ObservableError("pauli string must have 1..64 characters");
  }
  PauliTerm t;
  t.coefficient = coefficient;
  t.numQubits = static_cast<int>(paulis.size());
  for (std::size_t q = 0; q < paulis.size(); ++q) {
    const std::uint64_t bit = 1ULL << q;
    switch (paulis[q]) {
      case 'I': break;
      case 'X': t.xmask |= bit; break;
      case 'Y':
        t.xmask |= bit;
        t.zmask |= bit;
        break;
      case 'Z': t.zmask |= bit; break;
      default: throw ObservableError(std::string("bad pauli character '") + paulis[q] + "'");
    }
  }
  return t;
}

char PauliTerm::at(int qubit) const {
  const std::uint64_t bit = 1ULL << qubit;
  const bool x = xmask & bit;
  const bool z = zmask & bit;
  if (x && z) return 'Y';
  if (x) return 'X';
  if (z) return 'Z';
  return 'I';
}

std::string PauliTerm::str() const {
  std::string out;
  for (int q = 0; q < numQubits; ++q) out.push_back(at(q));
  return out;
}

PauliTerm PauliTerm::restrict_to(const std::vector<int>& qubits) const {
  PauliTerm out;
  out.coefficient = coefficient;
  out.numQubits = static_cast<int>(qubits.size());
  for (std::size_t local = 0; local < qubits.size(); ++local) {
    const std::uint64_t src = 1ULL << qubits[local];
    const std::uint64_t dst = 1ULL << local;
    if (xmask & src) out.xmask |= dst;
    if (zmask & src) out.zmask |= dst;
  }
  return out;
}

Observable Observable::full_z(int numQubits) {
  PauliTerm t;
  t.coefficient = 1.0;
  t.numQubits = numQubits;
  t.zmask = numQubits >= 64 ? ~0ULL : ((1ULL << numQubits) - 1);
  return single(t);
}

}  // namespace hqflow::quantum
