#include <doctest.h>

#include <random>
#include <vector>

#include "fmpd/kernels.hpp"

using fmpd::kernels::Kernels;

namespace {

std::vector<double> random_vec(std::size_t len, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> dist;
    std::vector<double> v(len);
    for (double& e : v) e = dist(eng);
    return v;
}

} // namespace

TEST_CASE("kernel variants are bit-identical to the scalar reference") {
    const Kernels& ref = fmpd::kernels::scalar();
    for (const Kernels* k : fmpd::kernels::available()) {
        CAPTURE(k->name);
        // odd lengths on purpose: tails must go through the scalar remainder
        for (std::size_t len : {std::size_t{1}, std::size_t{3}, std::size_t{4}, std::size_t{7},
                                std::size_t{64}, std::size_t{1023}}) {
            const std::vector<double> a = random_vec(len, 1000 + len);
            const std::vector<double> b = random_vec(len, 2000 + len);

            std::vector<double> d1 = a, d2 = a;
            ref.add_arrays(d1.data(), b.data(), len);
            k->add_arrays(d2.data(), b.data(), len);
            CHECK(d1 == d2);

            d1 = a;
            d2 = a;
            ref.mul_arrays(d1.data(), b.data(), len);
            k->mul_arrays(d2.data(), b.data(), len);
            CHECK(d1 == d2);

            std::vector<double> s1(len), s2(len);
            ref.scale_into(s1.data(), a.data(), 1.7, len);
            k->scale_into(s2.data(), a.data(), 1.7, len);
            CHECK(s1 == s2);

            ref.div_into(s1.data(), a.data(), b.data(), len);
            k->div_into(s2.data(), a.data(), b.data(), len);
            CHECK(s1 == s2);
        }
    }
}

TEST_CASE("kernel selection") {
    const auto& avail = fmpd::kernels::available();
    REQUIRE(!avail.empty());
    CHECK(avail.front() == &fmpd::kernels::scalar());

    // active() must be one of the available variants
    bool found = false;
    for (const Kernels* k : avail)
        if (k == &fmpd::kernels::active()) found = true;
    CHECK(found);

    CHECK_FALSE(fmpd::kernels::select("no-such-isa"));
    CHECK(fmpd::kernels::select("scalar"));
    CHECK(&fmpd::kernels::active() == &fmpd::kernels::scalar());
    CHECK(fmpd::kernels::select(avail.back()->name));
}
