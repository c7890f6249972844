#include "fmpd/poly.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "fmpd/masks.hpp"

namespace fmpd {

namespace {
std::atomic<int> g_max_vars{26};
}

int max_vars() { return g_max_vars.load(); }

void set_max_vars(int n) {
    if (n < 1 || n > 62) throw std::invalid_argument("max_vars must be in [1, 62]");
    g_max_vars.store(n);
}

MultilinearPoly::MultilinearPoly(int n, std::vector<double> coeffs)
    : n_(n), coeffs_(std::move(coeffs)) {
    if (n_ < 1) throw std::invalid_argument("polynomial needs at least one variable");
    if (n_ > max_vars())
        throw ResourceLimitError("variable count " + std::to_string(n_) +
                                 " exceeds dense limit " + std::to_string(max_vars()));
    if (coeffs_.size() != (std::size_t{1} << n_))
        throw std::invalid_argument("coefficient vector length must be 2^n");
    for (double c : coeffs_)
        if (!std::isfinite(c)) throw std::invalid_argument("coefficients must be finite");
}

void check_point(const EvalPoint& x) {
    if (x.empty()) throw std::invalid_argument("point needs at least one coordinate");
    if (static_cast<int>(x.size()) > max_vars())
        throw ResourceLimitError("point dimension exceeds dense limit");
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("coordinates must be finite");
}

void check_same_n(const MultilinearPoly& poly, const EvalPoint& x) {
    if (static_cast<std::size_t>(poly.n()) != x.size())
        throw std::invalid_argument("polynomial and point dimension mismatch");
}

VarMask mask_of_vars(std::span<const int> vars, int n) {
    VarMask m = 0;
    for (int k : vars) {
        if (k < 1 || k > n) throw std::invalid_argument("variable index out of range");
        const VarMask bit = VarMask{1} << (k - 1);
        if (m & bit) throw std::invalid_argument("duplicate variable index");
        m |= bit;
    }
    return m;
}

std::vector<int> mask_vars(VarMask m) {
    std::vector<int> vars;
    for (int k = 1; m != 0; ++k, m >>= 1)
        if (m & 1) vars.push_back(k);
    return vars;
}

std::string mask_to_binary(VarMask m, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int k = 0; k < n; ++k)
        if (m & (VarMask{1} << k)) s[static_cast<std::size_t>(n - 1 - k)] = '1';
    return s;
}

std::string mask_vars_label(VarMask m) {
    if (m == 0) return "1";
    std::string s;
    for (int k : mask_vars(m)) {
        if (!s.empty()) s += '*';
        s += 'x';
        s += std::to_string(k);
    }
    return s;
}

} // namespace fmpd
