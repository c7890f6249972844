#pragma once

#include <optional>
#include <string>

namespace fmpd {

// DOT butterfly diagram: n+1 columns of 2^n nodes (one column per silo
// boundary), one edge per addition from addend to destination. With l set,
// additions the order-l plan omits are drawn dashed. Guarded to n <= 8.
std::string butterfly_dot(int n, std::optional<int> l = std::nullopt);

} // namespace fmpd
