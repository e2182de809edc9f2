#pragma once

#include <cstdint>
#include <vector>

#include "hqflow/quantum/circuit.hpp"
#include "hqflow/quantum/kernels.hpp"
#include "hqflow/quantum/pauli.hpp"

namespace hqflow::quantum {

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class KernelPolicy { Serial, Parallel };

constexpr int kDefaultQubitCap = 24;

struct StateVector {
  int numQubits = 0;
  std::vector<cd> amps;

  static StateVector zero(int numQubits);
  double norm_sq(KernelPolicy policy = KernelPolicy::Parallel) const;
};

void apply_gate(StateVector& state, const Gate& gate, KernelPolicy policy = KernelPolicy::Parallel);

/// Exact state from |0...0>. Throws CapacityError past the qubit cap and
/// CircuitError for invalid circuits.
StateVector simulate(const Circuit& circuit, KernelPolicy policy = KernelPolicy::Parallel,
                     int qubitCap = kDefaultQubitCap);

/// <psi|O|psi>. Throws DimensionError on qubit-count mismatch.
double expectation(const StateVector& state, const Observable& obs,
                   KernelPolicy policy = KernelPolicy::Parallel);
double expectation(const StateVector& state, const PauliTerm& term,
                   KernelPolicy policy = KernelPolicy::Parallel);

double prob_zero(const StateVector& state, int qubit, KernelPolicy policy = KernelPolicy::Parallel);
void collapse(StateVector& state, int qubit, int outcome, double prob,
              KernelPolicy policy = KernelPolicy::Parallel);

struct ShotEstimate {
  double value = 0.0;
  double stderror = 0.0;
  std::int64_t shots = 0;
};

/// Unbiased estimate of <O> from computational-basis samples taken after
/// rotating each term into its eigenbasis. Deterministic in `seed`.
ShotEstimate sample_shots(const StateVector& state, const Observable& obs, std::int64_t shots,
                          std::uint64_t seed);

}  // namespace hqflow::quantum
