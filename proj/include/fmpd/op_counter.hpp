#pragma once

#include <cstdint>

namespace fmpd {

// Tallies of floating point operations in instrumented runs. Counting is
// off whenever the OpCounter* passed to an operation is null.
struct OpCounter {
    std::uint64_t additions = 0;
    std::uint64_t multiplications = 0;
    std::uint64_t divisions = 0;

    void reset() { additions = multiplications = divisions = 0; }

    OpCounter& operator+=(const OpCounter& o) {
        additions += o.additions;
        multiplications += o.multiplications;
        divisions += o.divisions;
        return *this;
    }
};

} // namespace fmpd
