#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

#include "ariswpc/kernels.hpp"

// AVX2 backend. Loading 4 Complex values and unpacking yields lane order
// [e0, e2, e1, e3]; both operands share the permutation, so lane j of the
// vector accumulator holds canonical accumulator {0:acc0, 1:acc2, 2:acc1,
// 3:acc3}. Adding the low and high 128-bit halves therefore produces
// [acc0+acc1, acc2+acc3], matching the canonical combine exactly.

namespace ariswpc::kernels::detail {

namespace {

// (lane0 + lane1 of low half) + (lane0 + lane1 of high half), for
// accumulators in canonical lane order.
__attribute__((target("avx2")))
inline double combine_ordered(__m256d acc) {
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const double a = _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
    const double b = _mm_cvtsd_f64(hi) + _mm_cvtsd_f64(_mm_unpackhi_pd(hi, hi));
    return a + b;
}

// (low half + high half), then horizontal add, for accumulators in the
// unpack-permuted lane order [0, 2, 1, 3].
__attribute__((target("avx2")))
inline double combine_unpacked(__m256d acc) {
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(pair) + _mm_cvtsd_f64(_mm_unpackhi_pd(pair, pair));
}

}  // namespace

__attribute__((target("avx2")))
double cascaded_magnitude_sum_avx2(const Complex* h2, const Complex* h3, std::size_t n) {
    if (n == 0) {
        return 0.0;
    }
    const double* p2 = &h2[0].re;
    const double* p3 = &h3[0].re;
    __m256d acc = _mm256_setzero_pd();
    const std::size_t n4 = n & ~std::size_t{3};
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d a2 = _mm256_loadu_pd(p2 + 2 * i);
        const __m256d b2 = _mm256_loadu_pd(p2 + 2 * i + 4);
        const __m256d a3 = _mm256_loadu_pd(p3 + 2 * i);
        const __m256d b3 = _mm256_loadu_pd(p3 + 2 * i + 4);
        const __m256d re2 = _mm256_unpacklo_pd(a2, b2);
        const __m256d im2 = _mm256_unpackhi_pd(a2, b2);
        const __m256d re3 = _mm256_unpacklo_pd(a3, b3);
        const __m256d im3 = _mm256_unpackhi_pd(a3, b3);
        const __m256d m2 = _mm256_sqrt_pd(
            _mm256_add_pd(_mm256_mul_pd(re2, re2), _mm256_mul_pd(im2, im2)));
        const __m256d m3 = _mm256_sqrt_pd(
            _mm256_add_pd(_mm256_mul_pd(re3, re3), _mm256_mul_pd(im3, im3)));
        acc = _mm256_add_pd(acc, _mm256_mul_pd(m2, m3));
    }
    double s = combine_unpacked(acc);
    for (std::size_t i = n4; i < n; ++i) {
        const double r2 = p2[2 * i], i2 = p2[2 * i + 1];
        const double r3 = p3[2 * i], i3 = p3[2 * i + 1];
        s += std::sqrt(r2 * r2 + i2 * i2) * std::sqrt(r3 * r3 + i3 * i3);
    }
    return s;
}

__attribute__((target("avx2")))
MomentSums moment_accumulate_avx2(const double* x, std::size_t n) {
    __m256d vsum = _mm256_setzero_pd();
    __m256d vsq = _mm256_setzero_pd();
    const std::size_t n4 = n & ~std::size_t{3};
    for (std::size_t i = 0; i < n4; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        vsum = _mm256_add_pd(vsum, v);
        vsq = _mm256_add_pd(vsq, _mm256_mul_pd(v, v));
    }
    MomentSums out;
    out.sum = combine_ordered(vsum);
    out.sum_sq = combine_ordered(vsq);
    for (std::size_t i = n4; i < n; ++i) {
        out.sum += x[i];
        out.sum_sq += x[i] * x[i];
    }
    return out;
}

}  // namespace ariswpc::kernels::detail

#endif  // x86_64
