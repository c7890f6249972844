#include "fmpd/truncation.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "fmpd/poly.hpp"

namespace fmpd {

int TruncationPlan::first_omission_silo() const {
    for (int s = 1; s <= n; ++s)
        if (!silos[static_cast<std::size_t>(s - 1)].full) return s;
    return n + 1;
}

TruncationPlan truncation_plan(int n, int l) {
    if (n < 1) throw std::invalid_argument("truncation_plan: n must be >= 1");
    if (n > max_vars()) throw ResourceLimitError("truncation_plan: n exceeds dense limit");
    if (l < 0 || l >= n)
        throw std::invalid_argument("truncation_plan: need 0 <= l < n (got l=" +
                                    std::to_string(l) + ", n=" + std::to_string(n) + ")");

    TruncationPlan plan;
    plan.n = n;
    plan.l = l;
    plan.silos.resize(static_cast<std::size_t>(n));
    for (int s = 1; s <= n; ++s) {
        SiloPattern& pat = plan.silos[static_cast<std::size_t>(s - 1)];
        const std::uint64_t width = std::uint64_t{1} << (s - 1);
        if (s - 1 <= l) {
            // every offset has popcount <= s-1 <= l: nothing to omit
            pat.full = true;
            pat.runs.push_back({0, width});
            pat.per_cluster = width;
        } else {
            std::uint64_t run_start = 0;
            bool in_run = false;
            for (std::uint64_t j = 0; j < width; ++j) {
                if (std::popcount(j) <= l) {
                    if (!in_run) {
                        run_start = j;
                        in_run = true;
                    }
                    ++pat.per_cluster;
                } else if (in_run) {
                    pat.runs.push_back({run_start, j - run_start});
                    in_run = false;
                }
            }
            if (in_run) pat.runs.push_back({run_start, width - run_start});
        }
        const std::uint64_t clusters = std::uint64_t{1} << (n - s);
        plan.total_additions += pat.per_cluster * clusters;
    }
    return plan;
}

} // namespace fmpd
