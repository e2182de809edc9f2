#include "hqflow/quantum/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "hqflow/common/rng.hpp"

namespace hqflow::quantum {

StateVector StateVector::zero(int numQubits) {
  StateVector s;
  s.numQubits = numQubits;
  s.amps.assign(1ULL << numQubits, cd(0));
  s.amps[0] = cd(1);
  return s;
}

double StateVector::norm_sq(KernelPolicy policy) const {
  return policy == KernelPolicy::Serial ? kernels::serial::norm_sq(amps) : kernels::par::norm_sq(amps);
}

void apply_gate(StateVector& state, const Gate& gate, KernelPolicy policy) {
  const bool serial = policy == KernelPolicy::Serial;
  switch (gate.kind) {
    case GateKind::CZ:
      serial ? kernels::serial::apply_cz(state.amps, gate.q0, gate.q1)
             : kernels::par::apply_cz(state.amps, gate.q0, gate.q1);
      return;
    case GateKind::CNOT:
      serial ? kernels::serial::apply_cnot(state.amps, gate.q0, gate.q1)
             : kernels::par::apply_cnot(state.amps, gate.q0, gate.q1);
      return;
    default: {
      const Mat2 u = gate.mat1q();
      serial ? kernels::serial::apply_1q(state.amps, gate.q0, u)
             : kernels::par::apply_1q(state.amps, gate.q0, u);
      return;
    }
  }
}

StateVector simulate(const Circuit& circuit, KernelPolicy policy, int qubitCap) {
  circuit.validate();
  if (circuit.numQubits > qubitCap) {
    throw CapacityError("circuit needs " + std::to_string(circuit.numQubits) +
                        " qubits, cap is " + std::to_string(qubitCap));
  }
  StateVector state = StateVector::zero(circuit.numQubits);
  for (const auto& gate : circuit.gates) apply_gate(state, gate, policy);
  return state;
}

double expectation(const StateVector& state, const PauliTerm& term, KernelPolicy policy) {
  if (term.numQubits != state.numQubits) {
    throw DimensionError("observable has " + std::to_string(term.numQubits) + " qubits, state has " +
                         std::to_string(state.numQubits));
  }
  const cd value = policy == KernelPolicy::Serial
                       ? kernels::serial::expectation_pauli(state.amps, term.xmask, term.zmask)
                       : kernels::par::expectation_pauli(state.amps, term.xmask, term.zmask);
  return term.coefficient * value.real();
}

double expectation(const StateVector& state, const Observable& obs, KernelPolicy policy) {
  double sum = 0.0;
  for (const auto& term : obs.terms) sum += expectation(state, term, policy);
  return sum;
}

double prob_zero(const StateVector& state, int qubit, KernelPolicy policy) {
  return policy == KernelPolicy::Serial ? kernels::serial::prob_zero(state.amps, qubit)
                                        : kernels::par::prob_zero(state.amps, qubit);
}

void collapse(StateVector& state, int qubit, int outcome, double prob, KernelPolicy policy) {
  policy == KernelPolicy::Serial ? kernels::serial::collapse(state.amps, qubit, outcome, prob)
                                 : kernels::par::collapse(state.amps, qubit, outcome, prob);
}

namespace {

/// Rotates a copy of the state so that measuring the term in the Z basis
/// measures the original term: H for X, Sdg then H for Y.
StateVector rotate_to_eigenbasis(const StateVector& state, const PauliTerm& term) {
  StateVector rotated = state;
  for (int q = 0; q < term.numQubits; ++q) {
    switch (term.at(q)) {
      case 'X':
        apply_gate(rotated, Gate::h(q));
        break;
      case 'Y':
        apply_gate(rotated, Gate::u1q(q, mat_sdg()));
        apply_gate(rotated, Gate::h(q));
        break;
      default: break;
    }
  }
  return rotated;
}

}  // namespace

ShotEstimate sample_shots(const StateVector& state, const Observable& obs, std::int64_t shots,
                          std::uint64_t seed) {
  if (shots < 1) throw DimensionError("shots must be >= 1");
  double value = 0.0;
  double variance = 0.0;
  Rng rng(seed);
  std::vector<double> prefix;
  for (const auto& term : obs.terms) {
    if (term.numQubits != state.numQubits) {
      throw DimensionError("observable/state qubit mismatch");
    }
    if (term.support() == 0) {
      value += term.coefficient;  // identity term, zero variance
      continue;
    }
    StateVector rotated = rotate_to_eigenbasis(state, term);
    kernels::probability_prefix(rotated.amps, prefix);
    const double total = prefix.back();
    double sum = 0.0;
    for (std::int64_t s = 0; s < shots; ++s) {
      const double u = rng.next_double() * total;
      const auto it = std::upper_bound(prefix.begin(), prefix.end(), u);
      const std::uint64_t idx = static_cast<std::uint64_t>(it - prefix.begin());
      const int parity = std::popcount(idx & term.support()) & 1;
      sum += parity ? -1.0 : 1.0;
    }
    const double mean = sum / static_cast<double>(shots);
    // sample variance of +/-1 outcomes
    double sVar = 0.0;
    if (shots > 1) {
      sVar = (1.0 - mean * mean) * static_cast<double>(shots) / static_cast<double>(shots - 1);
      sVar = std::max(0.0, sVar);
    }
    value += term.coefficient * mean;
    variance += term.coefficient * term.coefficient * sVar / static_cast<double>(shots);
  }
  return ShotEstimate{value, std::sqrt(variance), shots};
}

}  // namespace hqflow::quantum
