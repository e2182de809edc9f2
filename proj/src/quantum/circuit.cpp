#include "hqflow/quantum/circuit.hpp"

#include <cmath>

namespace hqflow::quantum {

const char* to_string(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::Z: return "z";
    case GateKind::RX: return "rx";
    case GateKind::RY: return "ry";
    case GateKind::RZ: return "rz";
    case GateKind::CZ: return "cz";
    case GateKind::CNOT: return "cnot";
    case GateKind::U1q: return "u1q";
  }
  return "?";
}

bool is_entangling(GateKind kind) { return kind == GateKind::CZ || kind == GateKind::CNOT; }

Mat2 Mat2::identity() { return Mat2{{cd(1), cd(0), cd(0), cd(1)}}; }

Mat2 Mat2::mul(const Mat2& rhs) const {
  Mat2 out;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      out.m[static_cast<std::size_t>(r * 2 + c)] = (*this)(r, 0) * rhs(0, c) + (*this)(r, 1) * rhs(1, c);
    }
  }
  return out;
}

Mat2 Mat2::dagger() const {
  Mat2 out;
  out.m = {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
  return out;
}

bool Mat2::unitary(double tol) const {
  Mat2 p = mul(dagger());
  return std::abs(p.m[0] - cd(1)) < tol && std::abs(p.m[1]) < tol && std::abs(p.m[2]) < tol &&
         std::abs(p.m[3] - cd(1)) < tol;
}

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

Mat2 mat_h() { return Mat2{{cd(kInvSqrt2), cd(kInvSqrt2), cd(kInvSqrt2), cd(-kInvSqrt2)}}; }
Mat2 mat_x() { return Mat2{{cd(0), cd(1), cd(1), cd(0)}}; }
Mat2 mat_z() { return Mat2{{cd(1), cd(0), cd(0), cd(-1)}}; }
Mat2 mat_s() { return Mat2{{cd(1), cd(0), cd(0), cd(0, 1)}}; }
Mat2 mat_sdg() { return Mat2{{cd(1), cd(0), cd(0), cd(0, -1)}}; }

Mat2 mat_rx(double theta) {
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return Mat2{{cd(c), cd(0, -s), cd(0, -s), cd(c)}};
}

Mat2 mat_ry(double theta) {
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return Mat2{{cd(c), cd(-s), cd(s), cd(c)}};
}

Mat2 mat_rz(double theta) {
  return Mat2{{std::polar(1.0, -theta / 2), cd(0), cd(0), std::polar(1.0, theta / 2)}};
}

Gate Gate::h(int q) { return Gate{GateKind::H, q}; }
Gate Gate::x(int q) { return Gate{GateKind::X, q}; }
Gate Gate::z(int q) { return Gate{GateKind::Z, q}; }
Gate Gate::rx(int q, double theta) { return Gate{GateKind::RX, q, -1, theta}; }
Gate Gate::ry(int q, double theta) { return Gate{GateKind::RY, q, -1, theta}; }
Gate Gate::rz(int q, double theta) { return Gate{GateKind::RZ, q, -1, theta}; }
Gate Gate::cz(int a, int b) { return Gate{GateKind::CZ, a, b}; }
Gate Gate::cnot(int control, int target) { return Gate{GateKind::CNOT, control, target}; }

Gate Gate::u1q(int q, const Mat2& matrix) {
  Gate g{GateKind::U1q, q};
  g.matrix = matrix;
  return g;
}

Mat2 Gate::mat1q() const {
  switch (kind) {
    case GateKind::H: return mat_h();
    case GateKind::X: return mat_x();
    case GateKind::Z: return mat_z();
    case GateKind::RX: return mat_rx(angle);
    case GateKind::RY: return mat_ry(angle);
    case GateKind::RZ: return mat_rz(angle);
    case GateKind::U1q: return matrix;
    case GateKind::CZ:
    case GateKind::CNOT: break;
  }
  throw CircuitError("two-qubit gate has no single-qubit matrix");
}

bool Gate::operator==(const Gate& o) const {
  if (kind != o.kind || q0 != o.q0 || q1 != o.q1) return false;
  if (angle != o.angle) return false;
  if (kind == GateKind::U1q) return matrix.m == o.matrix.m;
  return true;
}

void Circuit::validate() const {
  if (numQubits < 1) throw CircuitError("circuit needs at least one qubit");
  for (const auto& g : gates) {
    if (g.q0 < 0 || g.q0 >= numQubits) {
      throw CircuitError("gate qubit " + std::to_string(g.q0) + " out of range");
    }
    if (g.arity() == 2) {
      if (g.q1 < 0 || g.q1 >= numQubits) {
        throw CircuitError("gate qubit " + std::to_string(g.q1) + " out of range");
      }
      if (g.q0 == g.q1) throw CircuitError("two-qubit gate needs distinct qubits");
    }
    if (g.kind == GateKind::U1q && !g.matrix.unitary()) {
      throw CircuitError("u1q matrix is not unitary");
    }
  }
}

}  // namespace hqflow::quantum
