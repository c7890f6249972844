#pragma once

#include <cstdint>
#include <vector>

namespace fmpd {

// One maximal stretch of consecutive selected offsets inside a cluster.
struct OffsetRun {
    std::uint64_t start;
    std::uint64_t len;
};

// Selected additions of one silo. The selection depends only on the offset
// within a cluster (the low s-1 bits of the destination index), so one
// pattern serves every cluster of the silo.
struct SiloPattern {
    std::vector<OffsetRun> runs;      // ascending, within [0, 2^(s-1))
    std::uint64_t per_cluster = 0;    // selected additions per cluster
    bool full = false;                // no omissions in this silo
};

// Addition schedule for the order-l truncated transform: in silo s the
// addition with destination d is kept iff popcount(d mod 2^(s-1)) <= l,
// the backward closure of the outputs of derivative order <= l.
struct TruncationPlan {
    int n = 0;
    int l = 0;
    std::vector<SiloPattern> silos;     // silos[s-1] for silo s = 1..n
    std::uint64_t total_additions = 0;  // equals adds_fmpd_l(n, l)

    int first_omission_silo() const;    // l+2, or n+1 when nothing is omitted
};

// Requires 0 <= l < n (use the full transform for l = n).
TruncationPlan truncation_plan(int n, int l);

} // namespace fmpd
