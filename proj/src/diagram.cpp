#include "fmpd/diagram.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

#include "fmpd/masks.hpp"
#include "fmpd/poly.hpp"
#include "fmpd/truncation.hpp"

namespace fmpd {

std::string butterfly_dot(int n, std::optional<int> l) {
    if (n < 1) throw std::invalid_argument("diagram: n must be >= 1");
    if (n > 8) throw ResourceLimitError("diagram: n > 8 is unreadable, refusing");
    std::optional<TruncationPlan> plan;
    if (l) plan = truncation_plan(n, *l);

    const std::size_t size = std::size_t{1} << n;
    std::ostringstream os;
    os << "digraph fmpd {\n";
    os << "  rankdir=LR;\n";
    os << "  ranksep=1.0;\n";
    os << "  node [shape=plaintext fontname=\"monospace\"];\n";
    // one column of nodes per silo boundary; column 0 holds the terms q_i,
    // column n the partial sums a_i
    for (int col = 0; col <= n; ++col) {
        os << "  { rank=same;";
        for (std::size_t i = 0; i < size; ++i)
            os << " c" << col << "_" << i << " [label=\"" << mask_to_binary(i, n) << "\"];";
        os << " }\n";
    }
    for (int s = 1; s <= n; ++s) {
        const std::size_t dist = std::size_t{1} << (s - 1);
        for (std::size_t c = 0; c < size; c += 2 * dist) {
            for (std::size_t j = 0; j < dist; ++j) {
                const std::size_t dst = c + j;
                const std::size_t src = dst + dist;
                bool performed = true;
                if (plan) performed = std::popcount(j) <= plan->l;
                os << "  c" << (s - 1) << "_" << src << " -> c" << s << "_" << dst;
                if (!performed) os << " [style=dashed]";
                os << ";\n";
            }
        }
    }
    os << "}\n";
    return os.str();
}

} // namespace fmpd
