#include <doctest.h>

#include <cmath>
#include <vector>

#include "fmpd/counts.hpp"
#include "fmpd/engine.hpp"
#include "fmpd/io.hpp"
#include "fmpd/oracle.hpp"
#include "test_support.hpp"

using namespace fmpd;

namespace {
const MultilinearPoly kPoly2{2, {1, 2, 3, 4}};
const EvalPoint kPoint2{5, 7};

LatticeBuffer terms_for(const MultilinearPoly& poly, const EvalPoint& x,
                        OpCounter* ctr = nullptr) {
    LatticeBuffer buf = products_table(x, ctr);
    term_table(buf, poly, ctr);
    return buf;
}
} // namespace

TEST_CASE("products_table lists every subset product") {
    const LatticeBuffer p = products_table(EvalPoint{2, 3, 5});
    CHECK(p.data == std::vector<double>{1, 2, 3, 6, 5, 10, 15, 30});
    CHECK(p.stage == Stage::products);

    const LatticeBuffer ones = products_table(EvalPoint{1, 1, 1, 1});
    for (double v : ones.data) CHECK(v == 1.0);
}

TEST_CASE("products_table multiplication count is 2^n - n - 1") {
    OpCounter ctr;
    const LatticeBuffer p = products_table(kPoint2, &ctr);
    CHECK(p.data == std::vector<double>{1, 5, 7, 35});
    CHECK(ctr.multiplications == 1);  // 2^2 - 2 - 1
    for (int n = 1; n <= 10; ++n) {
        OpCounter c;
        const auto [poly, x] = random_instance(n, {.seed = 5u + static_cast<unsigned>(n)});
        products_table(x, &c);
        CHECK(c.multiplications == counts::muls_products(n));
    }
}

TEST_CASE("products_table rejects bad points") {
    CHECK_THROWS_AS(products_table(EvalPoint{}), std::invalid_argument);
    CHECK_THROWS_AS(products_table(EvalPoint{1.0, std::nan("")}), std::invalid_argument);
}

TEST_CASE("term_table scales products by coefficients in place") {
    LatticeBuffer buf = products_table(kPoint2);
    OpCounter ctr;
    term_table(buf, kPoly2, &ctr);
    CHECK(buf.data == std::vector<double>{1, 10, 21, 140});
    CHECK(buf.stage == Stage::terms);
    CHECK(ctr.multiplications == 3);  // 2^2 - 1

    // zero polynomial clears everything
    LatticeBuffer z = products_table(kPoint2);
    term_table(z, MultilinearPoly{2, {0, 0, 0, 0}});
    CHECK(z.data == std::vector<double>{0, 0, 0, 0});

    // unit coefficient keeps exactly one product
    LatticeBuffer u = products_table(kPoint2);
    term_table(u, MultilinearPoly{2, {0, 0, 1, 0}});
    CHECK(u.data == std::vector<double>{0, 0, 7, 0});
}

TEST_CASE("term_table validates stage and dimensions") {
    LatticeBuffer buf = products_table(kPoint2);
    CHECK_THROWS_AS(term_table(buf, MultilinearPoly{3, std::vector<double>(8, 1.0)}),
                    std::invalid_argument);
    term_table(buf, kPoly2);
    CHECK_THROWS_AS(term_table(buf, kPoly2), std::invalid_argument);  // already at terms
}

TEST_CASE("fmpd_partial_sums on the n=2 running example") {
    LatticeBuffer buf = terms_for(kPoly2, kPoint2);
    OpCounter ctr;
    fmpd_partial_sums(buf, &ctr);
    CHECK(buf.data == std::vector<double>{172, 150, 161, 140});
    CHECK(buf.stage == Stage::partial_sums);
    CHECK(ctr.additions == 4);

    LatticeBuffer zeros;
    zeros.n = 3;
    zeros.stage = Stage::terms;
    zeros.data.assign(8, 0.0);
    fmpd_partial_sums(zeros);
    for (double v : zeros.data) CHECK(v == 0.0);
}

TEST_CASE("fmpd_partial_sums requires the terms stage") {
    LatticeBuffer buf = products_table(kPoint2);
    CHECK_THROWS_AS(fmpd_partial_sums(buf), std::invalid_argument);
}

TEST_CASE("fmpd_partial_sums matches the oracle for random instances") {
    for (int n = 1; n <= 10; ++n) {
        const auto [poly, x] = random_instance(n, {.seed = 40u + static_cast<unsigned>(n)});
        OpCounter ctr;
        LatticeBuffer buf = terms_for(poly, x);
        double scale = 0.0;
        for (double q : buf.data) scale += std::abs(q);
        fmpd_partial_sums(buf, &ctr);
        CHECK(ctr.additions == counts::adds_fmpd(n));
        for (VarMask i = 0; i < buf.size(); ++i) {
            const double want = naive_partial_sum(poly, x, i);
            CHECK(std::abs(buf[i] - want) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("n=8 instrumented additions are exactly 1024") {
    const auto [poly, x] = random_instance(8, {.seed = 8});
    LatticeBuffer buf = terms_for(poly, x);
    OpCounter ctr;
    fmpd_partial_sums(buf, &ctr);
    CHECK(ctr.additions == 1024);
}

TEST_CASE("integer instances are reproduced exactly") {
    for (int n = 1; n <= 12; ++n) {
        const auto [poly, x] = testsup::integer_instance(n, 77u + static_cast<unsigned>(n));
        LatticeBuffer buf = terms_for(poly, x);
        fmpd_partial_sums(buf);
        for (VarMask i = 0; i < buf.size(); ++i)
            CHECK(buf[i] == naive_partial_sum(poly, x, i));
    }
}

TEST_CASE("derivatives_from_sums on the running example") {
    const LatticeBuffer products = products_table(kPoint2);
    LatticeBuffer sums = products;
    term_table(sums, kPoly2);
    fmpd_partial_sums(sums);

    OpCounter ctr;
    const DerivativeSet all = derivatives_from_sums(sums, products, kPoly2, 2, &ctr);
    CHECK(all.at(0b00) == 172.0);
    CHECK(all.at(0b01) == 30.0);
    CHECK(all.at(0b10) == 23.0);
    CHECK(all.at(0b11) == 4.0);  // top coefficient, no division
    CHECK(ctr.divisions == 2);   // 2^2 - 2

    const VarMask wanted[] = {VarMask{0}, VarMask{0b10}};
    const DerivativeSet some = derivatives_from_sums(sums, products, kPoly2, wanted);
    CHECK(some.at(0) == 172.0);
    CHECK(some.at(0b10) == 23.0);
    CHECK(some.find(0b01) == nullptr);
}

TEST_CASE("requesting all masks costs 2^n - 2 divisions") {
    const auto [poly, x] = random_instance(8, {.seed = 55});
    const LatticeBuffer products = products_table(x);
    LatticeBuffer sums = products;
    term_table(sums, poly);
    fmpd_partial_sums(sums);
    OpCounter ctr;
    derivatives_from_sums(sums, products, poly, 8, &ctr);
    CHECK(ctr.divisions == 254);
}

TEST_CASE("zero coordinates make step 3 refuse and safe_derivative take over") {
    const EvalPoint x{0, 7};
    const LatticeBuffer products = products_table(x);
    LatticeBuffer sums = products;
    term_table(sums, kPoly2);
    fmpd_partial_sums(sums);
    CHECK_THROWS_AS(derivatives_from_sums(sums, products, kPoly2, 1), ZeroCoordinateError);

    CHECK(safe_derivative(kPoly2, x, 0b01) == 30.0);  // 2 + 4*7
    CHECK(safe_derivative(kPoly2, x, 0) == naive_partial_sum(kPoly2, x, 0));
    CHECK(safe_derivative(kPoly2, EvalPoint{0, 0}, 0b11) == 4.0);
}

TEST_CASE("derive_all on the running example") {
    const DerivativeSet set = derive_all(kPoly2, kPoint2, 2);
    REQUIRE(set.values.size() == 4);
    CHECK(set.at(0) == 172.0);
    CHECK(set.at(0b01) == 30.0);
    CHECK(set.at(0b10) == 23.0);
    CHECK(set.at(0b11) == 4.0);

    const DerivativeSet value_only = derive_all(kPoly2, kPoint2, 0);
    REQUIRE(value_only.values.size() == 1);
    CHECK(value_only.at(0) == naive_partial_sum(kPoly2, kPoint2, 0));
}

TEST_CASE("derive_all routes zero-coordinate masks through direct summation") {
    const auto [poly, x0] = random_instance(6, {.seed = 66, .zero_coords = 2});
    VarMask zeros = 0;
    for (std::size_t k = 0; k < x0.size(); ++k)
        if (x0[k] == 0.0) zeros |= VarMask{1} << k;
    REQUIRE(mask_order(zeros) == 2);

    const DerivativeSet set = derive_all(poly, x0, 6);
    for (const auto& [mask, value] : set.values) {
        const double want = naive_derivative(poly, x0, mask);
        if (mask & zeros)
            CHECK(value == want);  // delegated, so exactly equal
        else
            CHECK(std::abs(value - want) <= 1e-12 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("derive_all matches finite differences") {
    for (int n : {2, 5, 8}) {
        const auto [poly, x] = random_instance(n, {.seed = 90u + static_cast<unsigned>(n)});
        const DerivativeSet set = derive_all(poly, x, 2);
        for (int k = 1; k <= n; ++k) {
            const double got = set.at(VarMask{1} << (k - 1));
            CHECK(testsup::rel_err(got, testsup::fd_gradient(poly, x, k)) < 1e-5);
        }
        for (int j = 1; j <= n; ++j)
            for (int k = j + 1; k <= n; ++k) {
                const VarMask mask = (VarMask{1} << (j - 1)) | (VarMask{1} << (k - 1));
                CHECK(testsup::rel_err(set.at(mask), testsup::fd_second(poly, x, j, k)) < 1e-5);
            }
    }
}

TEST_CASE("derive_all validates the order") {
    CHECK_THROWS_AS(derive_all(kPoly2, kPoint2, 3), std::invalid_argument);
    CHECK_THROWS_AS(derive_all(kPoly2, kPoint2, -1), std::invalid_argument);
}
