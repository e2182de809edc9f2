// Benchmark comparing the serial reference kernels against the OpenMP
// versions on statevector workloads of growing width. Also reports the
// worst deviation between the two paths, which must stay at rounding level.
//
//   hqflow-bench [max_qubits] [repeats]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hqflow/common/rng.hpp"
#include "hqflow/quantum/statevector.hpp"

using namespace hqflow;
using namespace hqflow::quantum;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

Circuit layered_circuit(int numQubits, int layers, std::uint64_t seed) {
  Rng rng(seed);
  Circuit c;
  c.numQubits = numQubits;
  for (int l = 0; l < layers; ++l) {
    for (int q = 0; q < numQubits; ++q) c.add(Gate::ry(q, rng.next_double() * 6.28318));
    for (int q = 0; q + 1 < numQubits; ++q) c.add(Gate::cz(q, q + 1));
    for (int q = 0; q + 1 < numQubits; q += 2) c.add(Gate::cnot(q, q + 1));
  }
  return c;
}

struct Timing {
  double simulateMs = 0;
  double expectationMs = 0;
  double value = 0;
};

Timing run_once(const Circuit& c, KernelPolicy policy, int repeats) {
  Timing t;
  StateVector state;
  double t0 = now_ms();
  for (int r = 0; r < repeats; ++r) state = simulate(c, policy);
  t.simulateMs = (now_ms() - t0) / repeats;

  PauliTerm term = PauliTerm::from_string(std::string(static_cast<std::size_t>(c.numQubits), 'Z'));
  t0 = now_ms();
  for (int r = 0; r < repeats; ++r) t.value = expectation(state, term, policy);
  t.expectationMs = (now_ms() - t0) / repeats;
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  const int maxQubits = argc > 1 ? std::atoi(argv[1]) : 22;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp: not enabled in this build\n");
#endif
  std::printf("%7s %12s %12s %8s %12s %12s %8s %10s\n", "qubits", "sim ser ms", "sim omp ms",
              "speedup", "exp ser ms", "exp omp ms", "speedup", "max |d|");
  for (int n = 14; n <= maxQubits; n += 2) {
    Circuit c = layered_circuit(n, 4, 7);
    Timing serial = run_once(c, KernelPolicy::Serial, repeats);
    Timing par = run_once(c, KernelPolicy::Parallel, repeats);

    // states are elementwise identical; expectation differs only by the
    // reduction association
    StateVector a = simulate(c, KernelPolicy::Serial);
    StateVector b = simulate(c, KernelPolicy::Parallel);
    double worst = 0;
    for (std::size_t i = 0; i < a.amps.size(); ++i) {
      worst = std::max(worst, std::abs(a.amps[i] - b.amps[i]));
    }
    worst = std::max(worst, std::abs(serial.value - par.value));

    std::printf("%7d %12.3f %12.3f %8.2f %12.3f %12.3f %8.2f %10.2e\n", n, serial.simulateMs,
                par.simulateMs, serial.simulateMs / par.simulateMs, serial.expectationMs,
                par.expectationMs, serial.expectationMs / par.expectationMs, worst);
  }
  return 0;
}
