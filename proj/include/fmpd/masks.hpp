#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fmpd {

// Variable subsets are encoded as bitmasks: bit (k-1) set means variable
// x_k participates. Index i of a coefficient/product array is the mask of
// the variables occurring in that monomial.
using VarMask = std::uint64_t;

inline int mask_order(VarMask m) { return std::popcount(m); }

inline bool is_superset(VarMask j, VarMask i) { return (j & i) == i; }

// Mask with bits k-1 set for each 1-based variable index k in `vars`.
VarMask mask_of_vars(std::span<const int> vars, int n);

// 1-based variable indices of the set bits, ascending.
std::vector<int> mask_vars(VarMask m);

// n binary digits, most significant variable first (paper order i_n...i_1).
std::string mask_to_binary(VarMask m, int n);

// Human label like "x1*x3", or "1" for the empty mask.
std::string mask_vars_label(VarMask m);

// Visits every superset j of i within n variables in increasing numeric
// order, starting with i itself.
template <typename F>
void for_each_superset(VarMask i, int n, F&& visit) {
    const VarMask free_bits = ((n >= 64 ? ~VarMask{0} : ((VarMask{1} << n) - 1))) & ~i;
    VarMask t = 0;
    while (true) {
        visit(i | t);
        if (t == free_bits) break;
        t = (t - free_bits) & free_bits;
    }
}

} // namespace fmpd
