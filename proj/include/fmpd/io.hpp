#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "fmpd/poly.hpp"

namespace fmpd {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& what)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

enum class PolyFileKind { dense, sparse };

// Polynomial text format. Header `MLP1 <dense|sparse> <n> [count]`, then
// either 2^n whitespace-separated decimals or `count` lines of
// `<index> <value>` with strictly increasing indices. Lines starting with
// '#' are comments. Point files: `PNT1 <n>` then n decimals.
MultilinearPoly parse_poly(std::string_view text);
std::string serialize_poly(const MultilinearPoly& poly, PolyFileKind kind);

EvalPoint parse_point(std::string_view text);
std::string serialize_point(const EvalPoint& x);

MultilinearPoly load_poly_file(const std::string& path);
EvalPoint load_point_file(const std::string& path);

// Seeded instance generation. The draw sequence is fixed (mt19937_64;
// 53-bit uniform doubles; coefficients in index order, then coordinates,
// then forced-zero positions), so instances are identical across platforms.
struct InstanceSpec {
    std::uint64_t seed = 0;
    double coeff_lo = -1.0;
    double coeff_hi = 1.0;
    double point_lo = -1.5;
    double point_hi = 1.5;
    // coordinates are redrawn until |x_k| >= deadzone, keeping the division
    // path well away from 0 unless zeros are forced explicitly
    double point_deadzone = 0.2;
    int zero_coords = 0;  // coordinates forced to exactly 0.0
};

std::pair<MultilinearPoly, EvalPoint> random_instance(int n, const InstanceSpec& spec = {});

// FNV-1a over the raw bits of coefficients then coordinates.
std::uint64_t instance_hash(const MultilinearPoly& poly, const EvalPoint& x);

} // namespace fmpd
