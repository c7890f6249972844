#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace fmpd::kernels {

// Elementwise primitives the three pipeline steps are built from. Every
// variant must produce bit-identical results to the scalar reference: one
// IEEE add/mul/div per element, no fused multiply-add, no reordering.
struct Kernels {
    const char* name;
    // dst[i] += src[i]
    void (*add_arrays)(double* dst, const double* src, std::size_t len);
    // dst[i] *= src[i]
    void (*mul_arrays)(double* dst, const double* src, std::size_t len);
    // dst[i] = c * src[i]
    void (*scale_into)(double* dst, const double* src, double c, std::size_t len);
    // out[i] = num[i] / den[i]
    void (*div_into)(double* out, const double* num, const double* den, std::size_t len);
};

const Kernels& scalar();

// Currently selected variant (best available at startup unless overridden).
const Kernels& active();

// Variants usable on this host, scalar first.
const std::vector<const Kernels*>& available();

// Force a variant by name ("scalar", "avx2", "neon"); false if unavailable.
bool select(std::string_view name);

} // namespace fmpd::kernels
