#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "fmpd/lattice.hpp"
#include "fmpd/masks.hpp"
#include "fmpd/op_counter.hpp"
#include "fmpd/poly.hpp"
#include "fmpd/truncation.hpp"

namespace fmpd {

// Step 3 was asked to divide by a coordinate that is exactly zero. Callers
// should route such masks through safe_derivative instead.
struct ZeroCoordinateError : std::domain_error {
    using std::domain_error::domain_error;
};

// Step 1, first half: buffer[i] = product of x_k over set bits of i.
// 2^n - n - 1 multiplications; buffer[0] and the single-bit entries are
// assigned, not multiplied.
LatticeBuffer products_table(const EvalPoint& x, OpCounter* counter = nullptr);

// Step 1, second half: in place, buffer[i] = r_i * buffer[i] for i >= 1 and
// buffer[0] = r_0. 2^n - 1 multiplications.
void term_table(LatticeBuffer& buf, const MultilinearPoly& poly, OpCounter* counter = nullptr);

// Step 2: in-place butterfly. Silo s adds the entry at distance 2^(s-1)
// into every destination whose silo bit is clear; after silo n the buffer
// holds every partial sum a_i. n * 2^(n-1) additions.
void fmpd_partial_sums(LatticeBuffer& buf, OpCounter* counter = nullptr);

// Step 2 truncated to derivative order plan.l: executes only the plan's
// additions, in full-transform order. Entries with popcount(i) <= l end up
// bit-identical to the full transform; the rest are unspecified.
void fmpd_partial_sums_truncated(LatticeBuffer& buf, const TruncationPlan& plan,
                                 OpCounter* counter = nullptr);

// Step 2 with the silo's additions split across worker threads, full
// barrier between silos. Output bit-identical to the sequential path for
// any worker count. plan == nullptr runs the full transform.
// per_worker_additions, when given, receives each worker's addition tally.
void parallel_partial_sums(LatticeBuffer& buf, const TruncationPlan* plan, int workers,
                           OpCounter* counter = nullptr,
                           std::vector<std::uint64_t>* per_worker_additions = nullptr);

// Derivative values keyed by differentiation mask, mask 0 = the value.
struct DerivativeSet {
    int n = 0;
    int max_order = 0;
    std::vector<std::pair<VarMask, double>> values;  // ascending by mask

    const double* find(VarMask mask) const;
    double at(VarMask mask) const;  // throws std::out_of_range
};

// Step 3: derivative(t) = sums[t] / products[t]. Mask 0 is a_0 unmodified;
// the all-ones mask (reachable only at max_order = n) is the top
// coefficient; neither divides. Requesting every mask costs 2^n - 2
// divisions. Throws ZeroCoordinateError if a requested mask touches a
// coordinate that is exactly 0.0.
DerivativeSet derivatives_from_sums(const LatticeBuffer& sums, const LatticeBuffer& products,
                                    const MultilinearPoly& poly, int max_order,
                                    OpCounter* counter = nullptr);
DerivativeSet derivatives_from_sums(const LatticeBuffer& sums, const LatticeBuffer& products,
                                    const MultilinearPoly& poly, std::span<const VarMask> masks,
                                    OpCounter* counter = nullptr);

// Division-free fallback for masks touching zero coordinates.
double safe_derivative(const MultilinearPoly& poly, const EvalPoint& x, VarMask mask);

struct DeriveOptions {
    int workers = 1;
    OpCounter* counter = nullptr;
};

// The whole pipeline: value and every mixed derivative of order <= l.
// Uses the truncated transform for l < n-1, the full one otherwise; masks
// touching exact-zero coordinates are diverted to safe_derivative. The
// result is bit-identical for every worker count.
DerivativeSet derive_all(const MultilinearPoly& poly, const EvalPoint& x, int l,
                         const DeriveOptions& opts = {});

} // namespace fmpd
