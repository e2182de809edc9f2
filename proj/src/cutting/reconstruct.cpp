#include "hqflow/cutting/reconstruct.hpp"

#include <cmath>

namespace hqflow::cutting {

ReconstructionResult reconstruct(const VariantResults& results, const quantum::Observable& observable,
                                 int numFragments) {
  const std::size_t variants = results.coefficients.size();
  std::vector<std::string> missing;
  // index results by fragment id per variant
  std::vector<std::vector<const FragmentResult*>> byFragment(variants);
  for (std::size_t v = 0; v < variants; ++v) {
    byFragment[v].assign(static_cast<std::size_t>(numFragments), nullptr);
    if (v < results.fragmentResults.size()) {
      for (const auto& fr : results.fragmentResults[v]) {
        if (fr.fragmentId >= 0 && fr.fragmentId < numFragments) {
          byFragment[v][static_cast<std::size_t>(fr.fragmentId)] = &fr;
        }
      }
    }
    for (int f = 0; f < numFragments; ++f) {
      if (byFragment[v][static_cast<std::size_t>(f)] == nullptr) {
        missing.push_back("variant " + std::to_string(v) + " fragment " + std::to_string(f));
      }
    }
  }
  if (!missing.empty()) {
    throw MissingArtifactError(std::to_string(missing.size()) + " fragment results missing", missing);
  }

  ReconstructionResult out;
  out.mode = results.mode;
  out.contributions.assign(variants, 0.0);
  double variance = 0.0;
  for (std::size_t t = 0; t < observable.terms.size(); ++t) {
    const double ct = observable.terms[t].coefficient;
    for (std::size_t v = 0; v < variants; ++v) {
      double product = 1.0;
      for (int f = 0; f < numFragments; ++f) {
        product *= byFragment[v][static_cast<std::size_t>(f)]->terms[t].value;
      }
      const double cv = results.coefficients[v];
      out.contributions[v] += ct * cv * product;
      if (results.mode == ExecMode::Sampled) {
        // var(prod_f m_f) ~ sum_f s_f^2 prod_{g != f} m_g^2 for independent
        // fragment estimates (first order)
        double varProd = 0.0;
        for (int f = 0; f < numFragments; ++f) {
          const auto& fv = byFragment[v][static_cast<std::size_t>(f)]->terms[t];
          double others = 1.0;
          for (int g = 0; g < numFragments; ++g) {
            if (g == f) continue;
            const double m = byFragment[v][static_cast<std::size_t>(g)]->terms[t].value;
            others *= m * m;
          }
          varProd += fv.stderror * fv.stderror * others;
        }
        variance += ct * ct * cv * cv * varProd;
      }
    }
  }
  for (double c : out.contributions) out.value += c;
  out.uncertainty = std::sqrt(variance);
  return out;
}

}  // namespace hqflow::cutting
