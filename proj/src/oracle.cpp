#include "fmpd/oracle.hpp"

#include <bit>
#include <stdexcept>

namespace fmpd {

double naive_term(const MultilinearPoly& poly, const EvalPoint& x, VarMask i) {
    check_same_n(poly, x);
    double prod = 1.0;
    for (int k = 0; k < poly.n(); ++k)
        if (i & (VarMask{1} << k)) prod *= x[static_cast<std::size_t>(k)];
    return poly.coeff(i) * prod;
}

double naive_partial_sum(const MultilinearPoly& poly, const EvalPoint& x, VarMask i) {
    double acc = 0.0;
    bool first = true;
    for_each_superset(i, poly.n(), [&](VarMask j) {
        if (first) {
            acc = naive_term(poly, x, j);
            first = false;
        } else {
            acc += naive_term(poly, x, j);
        }
    });
    return acc;
}

double naive_derivative(const MultilinearPoly& poly, const EvalPoint& x, VarMask mask) {
    check_same_n(poly, x);
    double acc = 0.0;
    bool first = true;
    for_each_superset(mask, poly.n(), [&](VarMask j) {
        double prod = 1.0;
        const VarMask extra = j & ~mask;
        for (int k = 0; k < poly.n(); ++k)
            if (extra & (VarMask{1} << k)) prod *= x[static_cast<std::size_t>(k)];
        const double term = poly.coeff(j) * prod;
        if (first) {
            acc = term;
            first = false;
        } else {
            acc += term;
        }
    });
    return acc;
}

std::vector<double> naive_sums_from_terms(std::span<const double> terms, OpCounter* counter) {
    const std::size_t size = terms.size();
    if (size == 0 || (size & (size - 1)) != 0)
        throw std::invalid_argument("term table length must be a power of two");
    const int n = std::countr_zero(size);
    std::vector<double> sums(size);
    for (VarMask i = 0; i < size; ++i) {
        double acc = 0.0;
        bool first = true;
        for_each_superset(i, n, [&](VarMask j) {
            if (first) {
                acc = terms[j];
                first = false;
            } else {
                acc += terms[j];
                if (counter) ++counter->additions;
            }
        });
        sums[i] = acc;
    }
    return sums;
}

} // namespace fmpd
