#include "fmpd/kernels.hpp"

#include <atomic>

namespace fmpd::kernels {

#ifdef FMPD_HAVE_AVX2_TU
const Kernels& detail_avx2();
#endif
#ifdef FMPD_HAVE_NEON_TU
const Kernels& detail_neon();
#endif

namespace {

void add_arrays_scalar(double* dst, const double* src, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) dst[i] += src[i];
}

void mul_arrays_scalar(double* dst, const double* src, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) dst[i] *= src[i];
}

void scale_into_scalar(double* dst, const double* src, double c, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) dst[i] = c * src[i];
}

void div_into_scalar(double* out, const double* num, const double* den, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) out[i] = num[i] / den[i];
}

const Kernels kScalar{"scalar", add_arrays_scalar, mul_arrays_scalar, scale_into_scalar,
                      div_into_scalar};

bool avx2_supported() {
#if defined(FMPD_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

std::vector<const Kernels*> build_available() {
    std::vector<const Kernels*> list{&kScalar};
#ifdef FMPD_HAVE_AVX2_TU
    if (avx2_supported()) list.push_back(&detail_avx2());
#endif
#ifdef FMPD_HAVE_NEON_TU
    list.push_back(&detail_neon());
#endif
    return list;
}

std::atomic<const Kernels*> g_active{nullptr};

} // namespace

const Kernels& scalar() { return kScalar; }

const std::vector<const Kernels*>& available() {
    static const std::vector<const Kernels*> list = build_available();
    return list;
}

const Kernels& active() {
    const Kernels* k = g_active.load(std::memory_order_relaxed);
    if (!k) {
        k = available().back();
        g_active.store(k, std::memory_order_relaxed);
    }
    return *k;
}

bool select(std::string_view name) {
    for (const Kernels* k : available()) {
        if (name == k->name) {
            g_active.store(k, std::memory_order_relaxed);
            return true;
        }
    }
    return false;
}

} // namespace fmpd::kernels
