#pragma once

// Brute-force dense-matrix reference for small systems. Builds full
// 2^n x 2^n operators with Kronecker products and multiplies them out;
// deliberately independent of the kernel implementations it checks.

#include <complex>
#include <vector>

#include "hqflow/quantum/circuit.hpp"
#include "hqflow/quantum/pauli.hpp"

namespace hqflow::testing {

using cd = std::complex<double>;
using Matrix = std::vector<std::vector<cd>>;

inline Matrix identity(std::size_t dim) {
  Matrix m(dim, std::vector<cd>(dim, cd(0)));
  for (std::size_t i = 0; i < dim; ++i) m[i][i] = cd(1);
  return m;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  std::size_t n = a.size();
  Matrix out(n, std::vector<cd>(n, cd(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (a[i][k] == cd(0)) continue;
      for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
    }
  }
  return out;
}

inline std::vector<cd> matvec(const Matrix& a, const std::vector<cd>& v) {
  std::vector<cd> out(v.size(), cd(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) out[i] += a[i][j] * v[j];
  }
  return out;
}

/// Lifts a 2x2 matrix onto `qubit` of an n-qubit system. Qubit 0 is the
/// least significant index bit, so entry (i, j) couples basis states whose
/// non-target bits agree.
inline Matrix lift_1q(const quantum::Mat2& u, int qubit, int numQubits) {
  std::size_t dim = 1ULL << numQubits;
  std::uint64_t mask = 1ULL << qubit;
  Matrix out(dim, std::vector<cd>(dim, cd(0)));
  for (std::uint64_t i = 0; i < dim; ++i) {
    for (std::uint64_t j = 0; j < dim; ++j) {
      if ((i & ~mask) != (j & ~mask)) continue;
      int r = (i & mask) ? 1 : 0;
      int c = (j & mask) ? 1 : 0;
      out[i][j] = u(r, c);
    }
  }
  return out;
}

inline Matrix gate_matrix(const quantum::Gate& g, int numQubits) {
  using quantum::GateKind;
  std::size_t dim = 1ULL << numQubits;
  if (g.kind == GateKind::CZ) {
    Matrix out = identity(dim);
    std::uint64_t ma = 1ULL << g.q0, mb = 1ULL << g.q1;
    for (std::uint64_t i = 0; i < dim; ++i) {
      if ((i & ma) && (i & mb)) out[i][i] = cd(-1);
    }
    return out;
  }
  if (g.kind == GateKind::CNOT) {
    Matrix out(dim, std::vector<cd>(dim, cd(0)));
    std::uint64_t mc = 1ULL << g.q0, mt = 1ULL << g.q1;
    for (std::uint64_t j = 0; j < dim; ++j) {
      std::uint64_t i = (j & mc) ? (j ^ mt) : j;
      out[i][j] = cd(1);
    }
    return out;
  }
  return lift_1q(g.mat1q(), g.q0, numQubits);
}

/// Whole-circuit unitary applied to |0..0>.
inline std::vector<cd> simulate_dense(const quantum::Circuit& circuit) {
  std::size_t dim = 1ULL << circuit.numQubits;
  std::vector<cd> state(dim, cd(0));
  state[0] = cd(1);
  for (const auto& g : circuit.gates) state = matvec(gate_matrix(g, circuit.numQubits), state);
  return state;
}

inline Matrix pauli_matrix(const quantum::PauliTerm& term) {
  std::size_t dim = 1ULL << term.numQubits;
  Matrix out = identity(dim);
  for (int q = 0; q < term.numQubits; ++q) {
    quantum::Mat2 u;
    switch (term.at(q)) {
      case 'I': u = quantum::Mat2::identity(); break;
      case 'X': u = quantum::mat_x(); break;
      case 'Y': u = quantum::Mat2{{cd(0), cd(0, -1), cd(0, 1), cd(0)}}; break;
      case 'Z': u = quantum::mat_z(); break;
    }
    out = matmul(lift_1q(u, q, term.numQubits), out);
  }
  return out;
}

inline double expectation_dense(const std::vector<cd>& state, const quantum::Observable& obs) {
  cd sum(0);
  for (const auto& term : obs.terms) {
    Matrix p = pauli_matrix(term);
    std::vector<cd> pv = matvec(p, state);
    cd inner(0);
    for (std::size_t i = 0; i < state.size(); ++i) inner += std::conj(state[i]) * pv[i];
    sum += term.coefficient * inner;
  }
  return sum.real();
}

}  // namespace hqflow::testing
