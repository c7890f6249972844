#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fmpd/masks.hpp"

namespace fmpd {

// Coordinates x_1..x_n; x[k-1] holds x_k.
using EvalPoint = std::vector<double>;

// Thrown when a request would exceed the dense-buffer variable ceiling.
struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Hard cap on n for dense 2^n buffers (default 26, ~512 MiB of doubles).
int max_vars();
void set_max_vars(int n);

// Dense multilinear polynomial: coeffs[i] = r_i, one coefficient per
// variable subset, 2^n of them. Immutable after construction.
class MultilinearPoly {
public:
    MultilinearPoly(int n, std::vector<double> coeffs);

    int n() const { return n_; }
    std::size_t size() const { return coeffs_.size(); }
    double coeff(VarMask i) const { return coeffs_[i]; }
    std::span<const double> coeffs() const { return coeffs_; }
    VarMask full_mask() const { return (VarMask{1} << n_) - 1; }

private:
    int n_;
    std::vector<double> coeffs_;
};

// Validates 1 <= n <= max_vars() and finite coordinates.
void check_point(const EvalPoint& x);
void check_same_n(const MultilinearPoly& poly, const EvalPoint& x);

} // namespace fmpd
