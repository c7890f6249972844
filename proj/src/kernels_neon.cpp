// NEON variants (aarch64). Same bit-exactness contract as the AVX2 table:
// plain lane-wise IEEE ops only.

#include <arm_neon.h>

#include "fmpd/kernels.hpp"

namespace fmpd::kernels {

namespace {

void add_arrays_neon(double* dst, const double* src, std::size_t len) {
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        float64x2_t a = vld1q_f64(dst + i);
        float64x2_t b = vld1q_f64(src + i);
        vst1q_f64(dst + i, vaddq_f64(a, b));
    }
    for (; i < len; ++i) dst[i] += src[i];
}

void mul_arrays_neon(double* dst, const double* src, std::size_t len) {
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        float64x2_t a = vld1q_f64(dst + i);
        float64x2_t b = vld1q_f64(src + i);
        vst1q_f64(dst + i, vmulq_f64(a, b));
    }
    for (; i < len; ++i) dst[i] *= src[i];
}

void scale_into_neon(double* dst, const double* src, double c, std::size_t len) {
    const float64x2_t vc = vdupq_n_f64(c);
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        float64x2_t b = vld1q_f64(src + i);
        vst1q_f64(dst + i, vmulq_f64(vc, b));
    }
    for (; i < len; ++i) dst[i] = c * src[i];
}

void div_into_neon(double* out, const double* num, const double* den, std::size_t len) {
    std::size_t i = 0;
    for (; i + 2 <= len; i += 2) {
        float64x2_t a = vld1q_f64(num + i);
        float64x2_t b = vld1q_f64(den + i);
        vst1q_f64(out + i, vdivq_f64(a, b));
    }
    for (; i < len; ++i) out[i] = num[i] / den[i];
}

const Kernels kNeon{"neon", add_arrays_neon, mul_arrays_neon, scale_into_neon, div_into_neon};

} // namespace

const Kernels& detail_neon() { return kNeon; }

} // namespace fmpd::kernels
