#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "hqflow/cutting/execute.hpp"

namespace hqflow::cutting {

struct MissingArtifactError : std::runtime_error {
  MissingArtifactError(std::string msg, std::vector<std::string> keys)
      : std::runtime_error(std::move(msg)), missingKeys(std::move(keys)) {}
  std::vector<std::string> missingKeys;
};

struct ReconstructionResult {
  double value = 0.0;
  ExecMode mode = ExecMode::Exact;
  double uncertainty = 0.0;                // propagated stderror (sampled mode)
  std::vector<double> contributions;       // per variant, signed and weighted
};

/// Inputs to reconstruction: per-variant coefficients plus every fragment's
/// per-term values. Indexed [variant][fragment].
struct VariantResults {
  std::vector<double> coefficients;                         // per variant
  std::vector<std::vector<FragmentResult>> fragmentResults; // [variant][fragment]
  ExecMode mode = ExecMode::Exact;
};

/// Combines fragment outputs into the global expectation:
///   value = sum_t c_t sum_v coeff_v prod_f value(v, f, t).
/// First-order uncertainty propagation across independent fragment
/// estimates. Throws MissingArtifactError listing every absent
/// (variant, fragment) pair.
ReconstructionResult reconstruct(const VariantResults& results, const quantum::Observable& observable,
                                 int numFragments);

}  // namespace hqflow::cutting
