#pragma once

// Test-only oracles and helpers. The finite-difference checks evaluate the
// polynomial with their own extended-precision summation so they stay
// independent of both the transform and the double-precision oracle.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "fmpd/masks.hpp"
#include "fmpd/poly.hpp"

namespace testsup {

// Kahan-compensated term summation in long double.
inline long double eval_poly_ld(const fmpd::MultilinearPoly& poly,
                                const std::vector<long double>& x) {
    long double sum = 0.0L, comp = 0.0L;
    const std::size_t size = poly.size();
    for (std::size_t i = 0; i < size; ++i) {
        long double term = static_cast<long double>(poly.coeff(i));
        for (int k = 0; k < poly.n(); ++k)
            if (i & (std::size_t{1} << k)) term *= x[static_cast<std::size_t>(k)];
        const long double y = term - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

inline std::vector<long double> widen(const fmpd::EvalPoint& x) {
    return std::vector<long double>(x.begin(), x.end());
}

inline long double fd_step(double xk) {
    return 1e-5L * std::max<long double>(1.0L, std::fabs(static_cast<long double>(xk)));
}

// Central difference for d/dx_k (k is 1-based).
inline double fd_gradient(const fmpd::MultilinearPoly& poly, const fmpd::EvalPoint& x, int k) {
    std::vector<long double> xs = widen(x);
    const long double h = fd_step(x[static_cast<std::size_t>(k - 1)]);
    xs[static_cast<std::size_t>(k - 1)] += h;
    const long double up = eval_poly_ld(poly, xs);
    xs[static_cast<std::size_t>(k - 1)] -= 2.0L * h;
    const long double down = eval_poly_ld(poly, xs);
    return static_cast<double>((up - down) / (2.0L * h));
}

// Four-point central difference for d^2/dx_j dx_k, j != k (1-based).
inline double fd_second(const fmpd::MultilinearPoly& poly, const fmpd::EvalPoint& x, int j,
                        int k) {
    const long double hj = fd_step(x[static_cast<std::size_t>(j - 1)]);
    const long double hk = fd_step(x[static_cast<std::size_t>(k - 1)]);
    auto at = [&](long double sj, long double sk) {
        std::vector<long double> xs = widen(x);
        xs[static_cast<std::size_t>(j - 1)] += sj * hj;
        xs[static_cast<std::size_t>(k - 1)] += sk * hk;
        return eval_poly_ld(poly, xs);
    };
    const long double num = at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1);
    return static_cast<double>(num / (4.0L * hj * hk));
}

inline double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

// Integer-valued instance with every intermediate well below 2^53, so the
// transform and the oracle must agree bit for bit.
inline std::pair<fmpd::MultilinearPoly, fmpd::EvalPoint> integer_instance(int n,
                                                                          std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::vector<double> coeffs(std::size_t{1} << n);
    for (double& c : coeffs) c = static_cast<double>(static_cast<std::int64_t>(eng() % 17) - 8);
    fmpd::EvalPoint x(static_cast<std::size_t>(n));
    for (double& v : x) v = static_cast<double>(static_cast<std::int64_t>(eng() % 7) - 3);
    return {fmpd::MultilinearPoly(n, std::move(coeffs)), std::move(x)};
}

} // namespace testsup
