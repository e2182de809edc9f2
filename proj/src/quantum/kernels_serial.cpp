#include <bit>
#include <cmath>

#include "hqflow/quantum/kernels.hpp"

namespace hqflow::quantum::kernels::serial {

void apply_1q(std::span<cd> state, int qubit, const Mat2& u) {
  const std::uint64_t mask = 1ULL << qubit;
  const std::uint64_t lo = mask - 1;
  const std::uint64_t hi = ~lo;
  const std::uint64_t half = state.size() >> 1;
  const cd a = u.m[0], b = u.m[1], c = u.m[2], d = u.m[3];
  for (std::uint64_t i = 0; i < half; ++i) {
    const std::uint64_t i0 = ((i & hi) << 1) | (i & lo);
    const std::uint64_t i1 = i0 | mask;
    const cd t0 = state[i0];
    const cd t1 = state[i1];
    state[i0] = a * t0 + b * t1;
    state[i1] = c * t0 + d * t1;
  }
}

void apply_cz(std::span<cd> state, int a, int b) {
  const std::uint64_t ma = 1ULL << a;
  const std::uint64_t mb = 1ULL << b;
  const std::uint64_t size = state.size();
  for (std::uint64_t i = 0; i < size; ++i) {
    if ((i & ma) && (i & mb)) state[i] = -state[i];
  }
}

void apply_cnot(std::span<cd> state, int control, int target) {
  const std::uint64_t mc = 1ULL << control;
  const std::uint64_t mt = 1ULL << target;
  const std::uint64_t size = state.size();
  for (std::uint64_t i = 0; i < size; ++i) {
    if ((i & mc) && !(i & mt)) std::swap(state[i], state[i | mt]);
  }
}

double norm_sq(std::span<const cd> state) {
  double sum = 0.0;
  for (const cd& amp : state) sum += std::norm(amp);
  return sum;
}

double prob_zero(std::span<const cd> state, int qubit) {
  const std::uint64_t mask = 1ULL << qubit;
  double sum = 0.0;
  for (std::uint64_t i = 0; i < state.size(); ++i) {
    if (!(i & mask)) sum += std::norm(state[i]);
  }
  return sum;
}

void collapse(std::span<cd> state, int qubit, int outcome, double prob) {
  const std::uint64_t mask = 1ULL << qubit;
  const double inv = 1.0 / std::sqrt(prob);
  const std::uint64_t want = outcome ? mask : 0;
  for (std::uint64_t i = 0; i < state.size(); ++i) {
    state[i] = ((i & mask) == want) ? state[i] * inv : cd(0);
  }
}

cd expectation_pauli(std::span<const cd> state, std::uint64_t xmask, std::uint64_t zmask) {
  static const cd iPow[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
  const cd phaseY = iPow[std::popcount(xmask & zmask) & 3];
  cd sum(0, 0);
  for (std::uint64_t k = 0; k < state.size(); ++k) {
    const double sign = (std::popcount(k & zmask) & 1) ? -1.0 : 1.0;
    sum += std::conj(state[k ^ xmask]) * (sign * state[k]);
  }
  return phaseY * sum;
}

}  // namespace hqflow::quantum::kernels::serial

namespace hqflow::quantum::kernels {

void probability_prefix(std::span<const cd> state, std::vector<double>& out) {
  out.resize(state.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    acc += std::norm(state[i]);
    out[i] = acc;
  }
}

}  // namespace hqflow::quantum::kernels
