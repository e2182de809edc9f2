#include <bit>
#include <cmath>

#include "hqflow/quantum/kernels.hpp"

// OpenMP versions of the amplitude kernels. Small states fall through to
// plain loops via the `if` clauses; reductions accumulate into a fixed
// 256-chunk decomposition summed serially, so the result is independent of
// the thread count and schedule.

namespace hqflow::quantum::kernels::par {

namespace {

constexpr std::int64_t kParallelThreshold = 1 << 12;
constexpr int kChunks = 256;

template <typename Fn>
double chunked_sum(std::int64_t size, Fn&& partial) {
  if (size < kParallelThreshold) return partial(0, size);
  double parts[kChunks];
  const std::int64_t chunk = (size + kChunks - 1) / kChunks;
#pragma omp parallel for schedule(static)
  for (int c = 0; c < kChunks; ++c) {
    const std::int64_t begin = c * chunk;
    const std::int64_t end = std::min(size, begin + chunk);
    parts[c] = begin < end ? partial(begin, end) : 0.0;
  }
  double sum = 0.0;
  for (int c = 0; c < kChunks; ++c) sum += parts[c];
  return sum;
}

}  // namespace

void apply_1q(std::span<cd> state, int qubit, const Mat2& u) {
  const std::uint64_t mask = 1ULL << qubit;
  const std::uint64_t lo = mask - 1;
  const std::uint64_t hi = ~lo;
  const std::int64_t half = static_cast<std::int64_t>(state.size() >> 1);
  const cd a = u.m[0], b = u.m[1], c = u.m[2], d = u.m[3];
#pragma omp parallel for schedule(static) if (half >= kParallelThreshold)
  for (std::int64_t i = 0; i < half; ++i) {
    const std::uint64_t k = static_cast<std::uint64_t>(i);
    const std::uint64_t i0 = ((k & hi) << 1) | (k & lo);
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
  const std::int64_t size = static_cast<std::int64_t>(state.size());
#pragma omp parallel for schedule(static) if (size >= kParallelThreshold)
  for (std::int64_t i = 0; i < size; ++i) {
    const std::uint64_t k = static_cast<std::uint64_t>(i);
    if ((k & ma) && (k & mb)) state[k] = -state[k];
  }
}

void apply_cnot(std::span<cd> state, int control, int target) {
  const std::uint64_t mc = 1ULL << control;
  const std::uint64_t mt = 1ULL << target;
  const std::int64_t size = static_cast<std::int64_t>(state.size());
#pragma omp parallel for schedule(static) if (size >= kParallelThreshold)
  for (std::int64_t i = 0; i < size; ++i) {
    const std::uint64_t k = static_cast<std::uint64_t>(i);
    if ((k & mc) && !(k & mt)) std::swap(state[k], state[k | mt]);
  }
}

double norm_sq(std::span<const cd> state) {
  return chunked_sum(static_cast<std::int64_t>(state.size()), [&](std::int64_t begin, std::int64_t end) {
    double sum = 0.0;
    for (std::int64_t i = begin; i < end; ++i) sum += std::norm(state[static_cast<std::uint64_t>(i)]);
    return sum;
  });
}

double prob_zero(std::span<const cd> state, int qubit) {
  const std::uint64_t mask = 1ULL << qubit;
  return chunked_sum(static_cast<std::int64_t>(state.size()), [&](std::int64_t begin, std::int64_t end) {
    double sum = 0.0;
    for (std::int64_t i = begin; i < end; ++i) {
      const std::uint64_t k = static_cast<std::uint64_t>(i);
      if (!(k & mask)) sum += std::norm(state[k]);
    }
    return sum;
  });
}

void collapse(std::span<cd> state, int qubit, int outcome, double prob) {
  const std::uint64_t mask = 1ULL << qubit;
  const double inv = 1.0 / std::sqrt(prob);
  const std::uint64_t want = outcome ? mask : 0;
  const std::int64_t size = static_cast<std::int64_t>(state.size());
#pragma omp parallel for schedule(static) if (size >= kParallelThreshold)
  for (std::int64_t i = 0; i < size; ++i) {
    const std::uint64_t k = static_cast<std::uint64_t>(i);
    state[k] = ((k & mask) == want) ? state[k] * inv : cd(0);
  }
}

cd expectation_pauli(std::span<const cd> state, std::uint64_t xmask, std::uint64_t zmask) {
  static const cd iPow[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
  const cd phaseY = iPow[std::popcount(xmask & zmask) & 3];
  const std::int64_t size = static_cast<std::int64_t>(state.size());

  double re = chunked_sum(size, [&](std::int64_t begin, std::int64_t end) {
    double sum = 0.0;
    for (std::int64_t i = begin; i < end; ++i) {
      const std::uint64_t k = static_cast<std::uint64_t>(i);
      const double sign = (std::popcount(k & zmask) & 1) ? -1.0 : 1.0;
      sum += (std::conj(state[k ^ xmask]) * (sign * state[k])).real();
    }
    return sum;
  });
  double im = chunked_sum(size, [&](std::int64_t begin, std::int64_t end) {
    double sum = 0.0;
    for (std::int64_t i = begin; i < end; ++i) {
      const std::uint64_t k = static_cast<std::uint64_t>(i);
      const double sign = (std::popcount(k & zmask) & 1) ? -1.0 : 1.0;
      sum += (std::conj(state[k ^ xmask]) * (sign * state[k])).imag();
    }
    return sum;
  });
  return phaseY * cd(re, im);
}

}  // namespace hqflow::quantum::kernels::par
