#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "hqflow/quantum/circuit.hpp"

namespace hqflow::quantum::kernels {

// Two implementations of every amplitude kernel: a plain serial reference
// and an OpenMP-parallel version. The parallel gate kernels are bitwise
// identical to serial (elementwise updates); the parallel reductions use a
// fixed chunk decomposition so results do not depend on thread count.
//
// Qubit 0 is the least significant bit of the amplitude index.

namespace serial {

void apply_1q(std::span<cd> state, int qubit, const Mat2& u);
void apply_cz(std::span<cd> state, int a, int b);
void apply_cnot(std::span<cd> state, int control, int target);
double norm_sq(std::span<const cd> state);
double prob_zero(std::span<const cd> state, int qubit);
/// Projects onto `outcome` of `qubit` and renormalizes (prob must be > 0).
void collapse(std::span<cd> state, int qubit, int outcome, double prob);
/// <psi| P |psi> for the Pauli string encoded by masks: xmask marks X/Y
/// positions, zmask marks Z/Y positions.
cd expectation_pauli(std::span<const cd> state, std::uint64_t xmask, std::uint64_t zmask);

}  // namespace serial

namespace par {

void apply_1q(std::span<cd> state, int qubit, const Mat2& u);
void apply_cz(std::span<cd> state, int a, int b);
void apply_cnot(std::span<cd> state, int control, int target);
double norm_sq(std::span<const cd> state);
double prob_zero(std::span<const cd> state, int qubit);
void collapse(std::span<cd> state, int qubit, int outcome, double prob);
cd expectation_pauli(std::span<const cd> state, std::uint64_t xmask, std::uint64_t zmask);

}  // namespace par

/// Cumulative |amp|^2 table for sampling; out.back() == norm_sq.
void probability_prefix(std::span<const cd> state, std::vector<double>& out);

}  // namespace hqflow::quantum::kernels
