#pragma once

// Dense channel arithmetic on two-qubit density operators, used to prove
// that a quasiprobability decomposition reproduces a gate's channel:
//   sum_k c_k (A_k x B_k) rho (A_k x B_k)^dagger == U rho U^dagger
// on a basis of inputs. Works on 4x4 matrices directly; shares nothing with
// the statevector implementation it validates.

#include "hqflow/cutting/qpd.hpp"
#include "support/dense_oracle.hpp"

namespace hqflow::testing {

inline Matrix dagger(const Matrix& a) {
  std::size_t n = a.size();
  Matrix out(n, std::vector<cd>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i][j] = std::conj(a[j][i]);
  }
  return out;
}

inline Matrix add_scaled(const Matrix& a, const Matrix& b, cd scale) {
  Matrix out = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) out[i][j] += scale * b[i][j];
  }
  return out;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
  }
  return worst;
}

/// rho -> M rho M^dagger
inline Matrix conjugate(const Matrix& m, const Matrix& rho) {
  return matmul(matmul(m, rho), dagger(m));
}

/// Applies one local op on `qubit` of a two-qubit operator. Measurement
/// atoms contribute the signed projective difference P0 rho P0 - P1 rho P1.
inline Matrix apply_local_op(const cutting::LocalOp& op, int qubit, Matrix rho) {
  for (const auto& atom : op.atoms) {
    if (atom.kind == cutting::LocalOpAtom::Kind::Unitary) {
      rho = conjugate(lift_1q(atom.matrix, qubit, 2), rho);
    } else {
      quantum::Mat2 p0{{cd(1), cd(0), cd(0), cd(0)}};
      quantum::Mat2 p1{{cd(0), cd(0), cd(0), cd(1)}};
      Matrix plus = conjugate(lift_1q(p0, qubit, 2), rho);
      Matrix minus = conjugate(lift_1q(p1, qubit, 2), rho);
      rho = add_scaled(plus, minus, cd(-1));
    }
  }
  return rho;
}

/// sum_k c_k (opA_k on qubit 0, opB_k on qubit 1) applied to rho.
inline Matrix apply_decomposition(const std::vector<cutting::QPDTerm>& terms, const Matrix& rho) {
  Matrix out(4, std::vector<cd>(4, cd(0)));
  for (const auto& term : terms) {
    Matrix t = apply_local_op(term.opA, 0, rho);
    t = apply_local_op(term.opB, 1, t);
    out = add_scaled(out, t, cd(term.coefficient));
  }
  return out;
}

/// The 16 two-qubit Pauli basis operators P (qubit 0) x Q (qubit 1).
inline std::vector<Matrix> pauli_basis_2q() {
  std::vector<quantum::Mat2> paulis = {
      quantum::Mat2::identity(),
      quantum::mat_x(),
      quantum::Mat2{{cd(0), cd(0, -1), cd(0, 1), cd(0)}},  // Y
      quantum::mat_z(),
  };
  std::vector<Matrix> out;
  for (const auto& p : paulis) {
    for (const auto& q : paulis) {
      out.push_back(matmul(lift_1q(p, 0, 2), lift_1q(q, 1, 2)));
    }
  }
  return out;
}

/// Worst-case deviation of the decomposition from the gate channel over all
/// 16 Pauli basis inputs (linearity extends the bound to every state).
inline double channel_equality_error(const std::vector<cutting::QPDTerm>& terms,
                                     const quantum::Gate& gate) {
  Matrix u = gate_matrix(gate, 2);
  double worst = 0.0;
  for (const auto& rho : pauli_basis_2q()) {
    Matrix viaDecomp = apply_decomposition(terms, rho);
    Matrix viaGate = conjugate(u, rho);
    worst = std::max(worst, max_abs_diff(viaDecomp, viaGate));
  }
  return worst;
}

}  // namespace hqflow::testing
