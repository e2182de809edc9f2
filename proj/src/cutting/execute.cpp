#include "hqflow/cutting/execute.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "hqflow/common/rng.hpp"
#include "hqflow/quantum/kernels.hpp"
#include "hqflow/quantum/serialize.hpp"

namespace hqflow::cutting {

using quantum::Gate;
using quantum::KernelPolicy;
using quantum::PauliTerm;
using quantum::StateVector;

const char* to_string(ExecMode mode) { return mode == ExecMode::Exact ? "exact" : "sampled"; }

ExecMode exec_mode_from_string(const std::string& s) {
  if (s == "exact") return ExecMode::Exact;
  if (s == "sampled") return ExecMode::Sampled;
  throw std::invalid_argument("unknown execution mode '" + s + "'");
}

namespace {

constexpr double kBranchEps = 1e-15;

/// A leaf of the branch tree: final state, trajectory probability and the
/// accumulated measurement sign.
struct Branch {
  StateVector state;
  double probability = 1.0;
  int sign = 1;
};

/// Expands the sign measurements of a program into all trajectory branches.
/// Fragments see at most one measurement per cut touching them, so the
/// branch count stays tiny.
std::vector<Branch> expand_branches(const FragmentProgram& program) {
  std::vector<Branch> done;
  std::vector<std::pair<Branch, std::size_t>> work;
  work.push_back({Branch{StateVector::zero(program.numQubits), 1.0, 1}, 0});
  while (!work.empty()) {
    auto [branch, pos] = std::move(work.back());
    work.pop_back();
    bool finished = true;
    for (std::size_t i = pos; i < program.instrs.size(); ++i) {
      if (const auto* gate = std::get_if<Gate>(&program.instrs[i])) {
        quantum::apply_gate(branch.state, *gate, KernelPolicy::Serial);
        continue;
      }
      const int qubit = std::get<MeasureSign>(program.instrs[i]).qubit;
      const double p0 = quantum::prob_zero(branch.state, qubit, KernelPolicy::Serial);
      const double p1 = 1.0 - p0;
      if (p1 > kBranchEps) {
        Branch other;
        other.state = branch.state;
        quantum::collapse(other.state, qubit, 1, p1, KernelPolicy::Serial);
        other.probability = branch.probability * p1;
        other.sign = -branch.sign;
        work.push_back({std::move(other), i + 1});
      }
      if (p0 > kBranchEps) {
        quantum::collapse(branch.state, qubit, 0, p0, KernelPolicy::Serial);
        branch.probability *= p0;
        // sign unchanged for outcome 0
      } else {
        finished = false;  // dead branch
        break;
      }
    }
    if (finished) done.push_back(std::move(branch));
  }
  return done;
}

PauliTerm local_term(const PauliTerm& global, const FragmentProgram& program) {
  PauliTerm t = global.restrict_to(program.globalQubits);
  t.coefficient = 1.0;  // coefficients are applied once, at reconstruction
  return t;
}

StateVector rotate_to_eigenbasis(const StateVector& state, const PauliTerm& term) {
  StateVector rotated = state;
  for (int q = 0; q < term.numQubits; ++q) {
    switch (term.at(q)) {
      case 'X':
        quantum::apply_gate(rotated, Gate::h(q), KernelPolicy::Serial);
        break;
      case 'Y':
        quantum::apply_gate(rotated, Gate::u1q(q, quantum::mat_sdg()), KernelPolicy::Serial);
        quantum::apply_gate(rotated, Gate::h(q), KernelPolicy::Serial);
        break;
      default: break;
    }
  }
  return rotated;
}

}  // namespace

FragmentResult evaluate_fragment(const FragmentProgram& program, const quantum::Observable& observable,
                                 ExecMode mode, std::int64_t shots, std::uint64_t seed) {
  FragmentResult result;
  result.variantIndex = -1;
  result.fragmentId = program.fragmentId;
  result.mode = mode;
  result.shots = mode == ExecMode::Sampled ? shots : 0;

  const auto branches = expand_branches(program);

  if (mode == ExecMode::Exact) {
    for (const auto& term : observable.terms) {
      const PauliTerm local = local_term(term, program);
      double value = 0.0;
      for (const auto& b : branches) {
        value += b.sign * b.probability * quantum::expectation(b.state, local, KernelPolicy::Serial);
      }
      result.terms.push_back(FragmentValue{value, 0.0});
    }
    return result;
  }

  if (shots < 1) throw std::invalid_argument("sampled mode needs shots >= 1");
  Rng rng(seed);
  // cumulative branch probabilities (they partition unity up to dead branches)
  std::vector<double> branchCum;
  branchCum.reserve(branches.size());
  double acc = 0.0;
  for (const auto& b : branches) {
    acc += b.probability;
    branchCum.push_back(acc);
  }
  const double totalProb = acc;

  for (const auto& term : observable.terms) {
    const PauliTerm local = local_term(term, program);
    // per-branch outcome distributions in the term eigenbasis
    std::vector<std::vector<double>> outcomeCum(branches.size());
    for (std::size_t b = 0; b < branches.size(); ++b) {
      StateVector rotated = rotate_to_eigenbasis(branches[b].state, local);
      quantum::kernels::probability_prefix(rotated.amps, outcomeCum[b]);
    }
    const std::uint64_t support = local.support();
    double sum = 0.0;
    for (std::int64_t s = 0; s < shots; ++s) {
      const double u = rng.next_double() * totalProb;
      const std::size_t b = static_cast<std::size_t>(
          std::upper_bound(branchCum.begin(), branchCum.end(), u) - branchCum.begin());
      const std::size_t bi = std::min(b, branches.size() - 1);
      double v = static_cast<double>(branches[bi].sign);
      if (support != 0) {
        const auto& cum = outcomeCum[bi];
        const double w = rng.next_double() * cum.back();
        const std::uint64_t idx =
            static_cast<std::uint64_t>(std::upper_bound(cum.begin(), cum.end(), w) - cum.begin());
        if (std::popcount(idx & support) & 1) v = -v;
      }
      sum += v;
    }
    const double mean = sum / static_cast<double>(shots);
    double sVar = 0.0;
    if (shots > 1) {
      sVar = std::max(0.0, (1.0 - mean * mean)) * static_cast<double>(shots) /
             static_cast<double>(shots - 1);
    }
    result.terms.push_back(FragmentValue{mean, std::sqrt(sVar / static_cast<double>(shots))});
  }
  return result;
}

std::vector<FragmentResult> execute_variant(const SubcircuitVariant& variant, BackendRole role,
                                            const quantum::Observable& observable, ExecMode mode,
                                            std::int64_t shots, std::uint64_t baseSeed) {
  std::vector<FragmentResult> out;
  for (std::size_t f = 0; f < variant.fragments.size(); ++f) {
    if (variant.assignedBackend[f] != role) continue;
    const std::uint64_t seed =
        mix_seed(mix_seed(baseSeed, static_cast<std::uint64_t>(variant.variantIndex)),
                 static_cast<std::uint64_t>(variant.fragments[f].fragmentId));
    FragmentResult result = evaluate_fragment(variant.fragments[f], observable, mode, shots, seed);
    result.variantIndex = variant.variantIndex;
    out.push_back(std::move(result));
  }
  return out;
}

double fragment_cost_estimate(const FragmentProgram& program, ExecMode mode, std::int64_t shots) {
  const double amps = static_cast<double>(1ULL << program.numQubits);
  const double gates = static_cast<double>(program.instrs.size());
  double cost = gates * amps * 1e-8;
  if (mode == ExecMode::Sampled) cost += static_cast<double>(shots) * 2e-7;
  return std::max(cost, 1e-5);
}

std::string fragment_result_to_json(const FragmentResult& result) {
  nlohmann::json j;
  j["format"] = "hqflow-fragment-result";
  j["version"] = 1;
  j["variant"] = result.variantIndex;
  j["fragment"] = result.fragmentId;
  j["mode"] = to_string(result.mode);
  j["shots"] = result.shots;
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : result.terms) {
    terms.push_back({{"value", t.value}, {"stderr", t.stderror}});
  }
  j["terms"] = terms;
  return j.dump();
}

FragmentResult fragment_result_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw quantum::SerializeError(std::string("bad fragment result json: ") + e.what());
  }
  if (j.value("format", "") != "hqflow-fragment-result") {
    throw quantum::SerializeError("not a fragment result document");
  }
  if (j.value("version", 0) != 1) throw quantum::SerializeError("unsupported fragment result version");
  FragmentResult out;
  out.variantIndex = j.at("variant").get<int>();
  out.fragmentId = j.at("fragment").get<int>();
  out.mode = exec_mode_from_string(j.at("mode").get<std::string>());
  out.shots = j.at("shots").get<std::int64_t>();
  for (const auto& tj : j.at("terms")) {
    out.terms.push_back(FragmentValue{tj.at("value").get<double>(), tj.at("stderr").get<double>()});
  }
  return out;
}

}  // namespace hqflow::cutting
