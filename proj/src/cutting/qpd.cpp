#include "hqflow/cutting/qpd.hpp"

#include <cmath>

namespace hqflow::cutting {

using quantum::GateKind;
using quantum::Mat2;

bool LocalOp::has_measure() const {
  for (const auto& a : atoms) {
    if (a.kind == LocalOpAtom::Kind::MeasureZSign) return true;
  }
  return false;
}

namespace {

LocalOp op_unitary(const Mat2& m) { return LocalOp{{LocalOpAtom::unitary(m)}}; }
LocalOp op_measure() { return LocalOp{{LocalOpAtom::measure_z_sign()}}; }
LocalOp op_identity() { return LocalOp{}; }

/// CZ = (S x S) e^{i pi/4 (Z x Z - I)} up to phase; the ZZ rotation's channel
/// splits into identity, ZxZ, and four measure+phase cross terms with
/// coefficients +-1/2. Folding the local S rotations into each term gives
/// the six operations below (rotations after a Z measurement drop out).
std::vector<QPDTerm> decompose_cz() {
  const Mat2 s = quantum::mat_s();
  const Mat2 sdg = quantum::mat_sdg();
  const Mat2 z = quantum::mat_z();
  return {
      {+0.5, op_unitary(s), op_unitary(s)},
      {+0.5, op_unitary(sdg), op_unitary(sdg)},
      {+0.5, op_identity(), op_measure()},
      {-0.5, op_unitary(z), op_measure()},
      {+0.5, op_measure(), op_identity()},
      {-0.5, op_measure(), op_unitary(z)},
  };
}

/// CNOT = (I x H) CZ (I x H): conjugate every target-side operation by H.
std::vector<QPDTerm> decompose_cnot() {
  const Mat2 h = quantum::mat_h();
  const Mat2 s = quantum::mat_s();
  const Mat2 sdg = quantum::mat_sdg();
  const Mat2 z = quantum::mat_z();
  const Mat2 x = quantum::mat_x();
  const Mat2 hsh = h.mul(s).mul(h);
  const Mat2 hsdgh = h.mul(sdg).mul(h);
  const LocalOp measureX{{LocalOpAtom::unitary(h), LocalOpAtom::measure_z_sign(), LocalOpAtom::unitary(h)}};
  return {
      {+0.5, op_unitary(s), op_unitary(hsh)},
      {+0.5, op_unitary(sdg), op_unitary(hsdgh)},
      {+0.5, op_identity(), measureX},
      {-0.5, op_unitary(z), measureX},
      {+0.5, op_measure(), op_identity()},
      {-0.5, op_measure(), op_unitary(x)},
  };
}

}  // namespace

std::vector<QPDTerm> decompose_gate(GateKind kind) {
  switch (kind) {
    case GateKind::CZ: return decompose_cz();
    case GateKind::CNOT: return decompose_cnot();
    default: break;
  }
  throw UnsupportedGateError(std::string("no decomposition for gate '") + quantum::to_string(kind) + "'");
}

double gamma(const std::vector<QPDTerm>& terms) {
  double sum = 0.0;
  for (const auto& t : terms) sum += std::abs(t.coefficient);
  return sum;
}

}  // namespace hqflow::cutting
