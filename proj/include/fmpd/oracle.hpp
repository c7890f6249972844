#pragma once

#include <span>
#include <vector>

#include "fmpd/masks.hpp"
#include "fmpd/op_counter.hpp"
#include "fmpd/poly.hpp"

namespace fmpd {

// Brute-force ground truth. These recompute every product from scratch by
// looping over set bits and never touch the transform code paths.

// q_i = r_i * prod_{k: i_k=1} x_k
double naive_term(const MultilinearPoly& poly, const EvalPoint& x, VarMask i);

// a_i = sum of q_j over supersets j of i, in increasing j order.
double naive_partial_sum(const MultilinearPoly& poly, const EvalPoint& x, VarMask i);

// Division-free mixed derivative: sum over supersets j of `mask` of
// r_j * prod of x_k for set bits of j outside the mask. Valid at zero
// coordinates.
double naive_derivative(const MultilinearPoly& poly, const EvalPoint& x, VarMask mask);

// The naive counterpart the transform is compared against: given the term
// table q, computes every a_i by separate superset summation. 3^n - 2^n
// additions when instrumented.
std::vector<double> naive_sums_from_terms(std::span<const double> terms,
                                          OpCounter* counter = nullptr);

} // namespace fmpd
