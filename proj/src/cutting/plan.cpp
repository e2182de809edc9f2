#include "hqflow/cutting/plan.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

namespace hqflow::cutting {

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

/// Component partition of the interaction graph with `cuts` removed.
std::vector<int> components(const quantum::Circuit& circuit, const std::set<int>& cuts) {
  Dsu dsu(circuit.numQubits);
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    const auto& g = circuit.gates[i];
    if (g.arity() != 2) continue;
    if (cuts.count(static_cast<int>(i))) continue;
    dsu.unite(g.q0, g.q1);
  }
  std::vector<int> root(circuit.numQubits);
  for (int q = 0; q < circuit.numQubits; ++q) root[q] = dsu.find(q);
  return root;
}

int max_component_size(const std::vector<int>& roots) {
  std::vector<int> counts(roots.size(), 0);
  int best = 0;
  for (int r : roots) best = std::max(best, ++counts[static_cast<std::size_t>(r)]);
  return best;
}

std::vector<int> entangling_indices(const quantum::Circuit& circuit) {
  std::vector<int> out;
  for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
    if (circuit.gates[i].arity() == 2) out.push_back(static_cast<int>(i));
  }
  return out;
}

/// Advances comb to the next k-combination of {0..n-1} in lexicographic
/// order; false when exhausted.
bool next_combination(std::vector<std::size_t>& comb, std::size_t n) {
  const std::size_t k = comb.size();
  for (std::size_t i = k; i-- > 0;) {
    if (comb[i] + (k - i) < n) {
      ++comb[i];
      for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

int CutPlan::max_fragment_qubits() const {
  int best = 0;
  for (const auto& f : fragmentQubits) best = std::max(best, static_cast<int>(f.size()));
  return best;
}

CutPlan make_plan(const quantum::Circuit& circuit, std::vector<int> cutGateIndices) {
  circuit.validate();
  std::sort(cutGateIndices.begin(), cutGateIndices.end());
  for (int idx : cutGateIndices) {
    if (idx < 0 || idx >= static_cast<int>(circuit.gates.size())) {
      throw PlanError("cut index " + std::to_string(idx) + " out of range");
    }
    if (!quantum::is_entangling(circuit.gates[static_cast<std::size_t>(idx)].kind)) {
      throw PlanError("cut index " + std::to_string(idx) + " is not an entangling gate");
    }
  }
  CutPlan plan;
  plan.circuit = circuit;
  plan.cutGateIndices = cutGateIndices;

  std::set<int> cuts(cutGateIndices.begin(), cutGateIndices.end());
  auto roots = components(circuit, cuts);

  // number fragments by smallest member qubit
  plan.qubitFragment.assign(static_cast<std::size_t>(circuit.numQubits), -1);
  for (int q = 0; q < circuit.numQubits; ++q) {
    if (plan.qubitFragment[static_cast<std::size_t>(q)] != -1) continue;
    int id = static_cast<int>(plan.fragmentQubits.size());
    plan.fragmentQubits.emplace_back();
    for (int p = q; p < circuit.numQubits; ++p) {
      if (roots[static_cast<std::size_t>(p)] == roots[static_cast<std::size_t>(q)] &&
          plan.qubitFragment[static_cast<std::size_t>(p)] == -1) {
        plan.qubitFragment[static_cast<std::size_t>(p)] = id;
        plan.fragmentQubits.back().push_back(p);
      }
    }
  }
  plan.vacuous = !cutGateIndices.empty() && plan.num_fragments() < 2;
  return plan;
}

CutPlan plan_cuts(const quantum::Circuit& circuit, int maxFragmentQubits, const PlanLimits& limits) {
  if (maxFragmentQubits < 1) throw InfeasibleError("maxFragmentQubits must be >= 1");
  circuit.validate();

  const std::vector<int> entangling = entangling_indices(circuit);
  std::size_t examined = 0;

  // exhaustive, by cardinality then lexicographic over entangling positions
  bool capped = false;
  for (std::size_t k = 0; k <= entangling.size() && !capped; ++k) {
    std::vector<std::size_t> comb(k);
    std::iota(comb.begin(), comb.end(), 0);
    do {
      if (++examined > limits.maxSubsets) {
        capped = true;
        break;
      }
      std::set<int> cuts;
      for (std::size_t c : comb) cuts.insert(entangling[c]);
      if (max_component_size(components(circuit, cuts)) <= maxFragmentQubits) {
        return make_plan(circuit, std::vector<int>(cuts.begin(), cuts.end()));
      }
    } while (next_combination(comb, entangling.size()));
  }

  // greedy fallback: repeatedly cut the gate that most reduces the largest
  // component (lowest index on ties)
  std::set<int> cuts;
  while (true) {
    auto roots = components(circuit, cuts);
    if (max_component_size(roots) <= maxFragmentQubits) {
      return make_plan(circuit, std::vector<int>(cuts.begin(), cuts.end()));
    }
    int bestGate = -1;
    int bestSize = std::numeric_limits<int>::max();
    for (int idx : entangling) {
      if (cuts.count(idx)) continue;
      std::set<int> trial = cuts;
      trial.insert(idx);
      int size = max_component_size(components(circuit, trial));
      if (size < bestSize) {
        bestSize = size;
        bestGate = idx;
      }
    }
    if (bestGate < 0) {
      throw InfeasibleError("no cut set reaches a fragment bound of " +
                            std::to_string(maxFragmentQubits));
    }
    cuts.insert(bestGate);
  }
}

}  // namespace hqflow::cutting
