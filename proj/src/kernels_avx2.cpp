// AVX2 variants of the elementwise kernels. Compiled with -mavx2 only; the
// dispatcher never hands out this table unless the CPU reports AVX2.
// No FMA and unaligned loads throughout, so each lane is the same single
// IEEE operation the scalar reference performs.

#include <immintrin.h>

#include "fmpd/kernels.hpp"

namespace fmpd::kernels {

namespace {

void add_arrays_avx2(double* dst, const double* src, std::size_t len) {
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256d a = _mm256_loadu_pd(dst + i);
        __m256d b = _mm256_loadu_pd(src + i);
        _mm256_storeu_pd(dst + i, _mm256_add_pd(a, b));
    }
    for (; i < len; ++i) dst[i] += src[i];
}

void mul_arrays_avx2(double* dst, const double* src, std::size_t len) {
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256d a = _mm256_loadu_pd(dst + i);
        __m256d b = _mm256_loadu_pd(src + i);
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(a, b));
    }
    for (; i < len; ++i) dst[i] *= src[i];
}

void scale_into_avx2(double* dst, const double* src, double c, std::size_t len) {
    const __m256d vc = _mm256_set1_pd(c);
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256d b = _mm256_loadu_pd(src + i);
        _mm256_storeu_pd(dst + i, _mm256_mul_pd(vc, b));
    }
    for (; i < len; ++i) dst[i] = c * src[i];
}

void div_into_avx2(double* out, const double* num, const double* den, std::size_t len) {
    std::size_t i = 0;
    for (; i + 4 <= len; i += 4) {
        __m256d a = _mm256_loadu_pd(num + i);
        __m256d b = _mm256_loadu_pd(den + i);
        _mm256_storeu_pd(out + i, _mm256_div_pd(a, b));
    }
    for (; i < len; ++i) out[i] = num[i] / den[i];
}

const Kernels kAvx2{"avx2", add_arrays_avx2, mul_arrays_avx2, scale_into_avx2, div_into_avx2};

} // namespace

const Kernels& detail_avx2() { return kAvx2; }

} // namespace fmpd::kernels
