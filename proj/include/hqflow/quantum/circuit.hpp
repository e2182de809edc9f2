#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hqflow::quantum {

using cd = std::complex<double>;

enum class GateKind { H, X, Z, RX, RY, RZ, CZ, CNOT, U1q };

const char* to_string(GateKind kind);
bool is_entangling(GateKind kind);

/// Row-major 2x2 complex matrix.
struct Mat2 {
  std::array<cd, 4> m{};

  cd operator()(int r, int c) const { return m[static_cast<std::size_t>(r * 2 + c)]; }
  static Mat2 identity();
  Mat2 mul(const Mat2& rhs) const;  // this * rhs
  Mat2 dagger() const;
  bool unitary(double tol = 1e-12) const;
};

Mat2 mat_h();
Mat2 mat_x();
Mat2 mat_z();
Mat2 mat_s();        // diag(1, i)
Mat2 mat_sdg();      // diag(1, -i)
Mat2 mat_rx(double theta);
Mat2 mat_ry(double theta);
Mat2 mat_rz(double theta);

struct Gate {
  GateKind kind = GateKind::H;
  int q0 = 0;
  int q1 = -1;         // second qubit for CZ/CNOT (control is q0 for CNOT)
  double angle = 0.0;  // RX/RY/RZ only
  Mat2 matrix{};       // U1q only

  int arity() const { return (kind == GateKind::CZ || kind == GateKind::CNOT) ? 2 : 1; }

  static Gate h(int q);
  static Gate x(int q);
  static Gate z(int q);
  static Gate rx(int q, double theta);
  static Gate ry(int q, double theta);
  static Gate rz(int q, double theta);
  static Gate cz(int a, int b);
  static Gate cnot(int control, int target);
  static Gate u1q(int q, const Mat2& matrix);

  /// Matrix of a single-qubit gate (throws for CZ/CNOT).
  Mat2 mat1q() const;

  bool operator==(const Gate& o) const;
};

struct CircuitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Circuit {
  int numQubits = 1;
  std::vector<Gate> gates;

  /// Checks qubit ranges, two-qubit distinctness and U1q unitarity.
  void validate() const;

  Circuit& add(Gate gate) {
    gates.push_back(gate);
    return *this;
  }

  bool operator==(const Circuit& o) const { return numQubits == o.numQubits && gates == o.gates; }
};

}  // namespace hqflow::quantum
