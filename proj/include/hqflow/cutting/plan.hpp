#pragma once

#include <stdexcept>
#include <vector>

#include "hqflow/quantum/circuit.hpp"

namespace hqflow::cutting {

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PlanError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A cut plan: which entangling gates to remove and the fragment partition
/// (connected components of the gate-interaction graph after removal).
/// Fragments are numbered by their smallest qubit, qubit lists ascending.
struct CutPlan {
  quantum::Circuit circuit;
  std::vector<int> cutGateIndices;            // sorted ascending
  std::vector<int> qubitFragment;             // qubit -> fragment id
  std::vector<std::vector<int>> fragmentQubits;
  bool vacuous = false;  // cuts were made but the graph stayed connected

  int num_fragments() const { return static_cast<int>(fragmentQubits.size()); }
  int max_fragment_qubits() const;
};

struct PlanLimits {
  /// Exhaustive search examines at most this many cut subsets before
  /// falling back to the greedy planner.
  std::size_t maxSubsets = 200000;
};

/// Computes the fragment partition for a given cut set (also validates that
/// every cut index points at an entangling gate).
CutPlan make_plan(const quantum::Circuit& circuit, std::vector<int> cutGateIndices);

/// Smallest cut set (exhaustive over entangling-gate subsets in cardinality
/// then lexicographic order, greedy fallback past the cap) such that every
/// fragment has at most `maxFragmentQubits` qubits.
CutPlan plan_cuts(const quantum::Circuit& circuit, int maxFragmentQubits, const PlanLimits& limits = {});

}  // namespace hqflow::cutting
