#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <cstddef>

#include "ariswpc/kernels.hpp"

// NEON backend. vld2q_f64 deinterleaves two Complex values per load, so one
// blocked-4 iteration uses two accumulators: acc_a lanes hold canonical
// accumulators {0,1}, acc_b lanes hold {2,3}. Combining lane sums of acc_a
// then acc_b reproduces the canonical (acc0+acc1)+(acc2+acc3).

namespace ariswpc::kernels::detail {

double cascaded_magnitude_sum_neon(const Complex* h2, const Complex* h3, std::size_t n) {
    if (n == 0) {
        return 0.0;
    }
    const double* p2 = &h2[0].re;
    const double* p3 = &h3[0].re;
    float64x2_t acc_a = vdupq_n_f64(0.0);
    float64x2_t acc_b = vdupq_n_f64(0.0);
    const std::size_t n4 = n & ~std::size_t{3};
    for (std::size_t i = 0; i < n4; i += 4) {
        const float64x2x2_t c2a = vld2q_f64(p2 + 2 * i);
        const float64x2x2_t c2b = vld2q_f64(p2 + 2 * i + 4);
        const float64x2x2_t c3a = vld2q_f64(p3 + 2 * i);
        const float64x2x2_t c3b = vld2q_f64(p3 + 2 * i + 4);
        const float64x2_t m2a = vsqrtq_f64(
            vaddq_f64(vmulq_f64(c2a.val[0], c2a.val[0]), vmulq_f64(c2a.val[1], c2a.val[1])));
        const float64x2_t m3a = vsqrtq_f64(
            vaddq_f64(vmulq_f64(c3a.val[0], c3a.val[0]), vmulq_f64(c3a.val[1], c3a.val[1])));
        const float64x2_t m2b = vsqrtq_f64(
            vaddq_f64(vmulq_f64(c2b.val[0], c2b.val[0]), vmulq_f64(c2b.val[1], c2b.val[1])));
        const float64x2_t m3b = vsqrtq_f64(
            vaddq_f64(vmulq_f64(c3b.val[0], c3b.val[0]), vmulq_f64(c3b.val[1], c3b.val[1])));
        acc_a = vaddq_f64(acc_a, vmulq_f64(m2a, m3a));
        acc_b = vaddq_f64(acc_b, vmulq_f64(m2b, m3b));
    }
    const double ab = vgetq_lane_f64(acc_a, 0) + vgetq_lane_f64(acc_a, 1);
    const double cd = vgetq_lane_f64(acc_b, 0) + vgetq_lane_f64(acc_b, 1);
    double s = ab + cd;
    for (std::size_t i = n4; i < n; ++i) {
        const double r2 = p2[2 * i], i2 = p2[2 * i + 1];
        const double r3 = p3[2 * i], i3 = p3[2 * i + 1];
        s += std::sqrt(r2 * r2 + i2 * i2) * std::sqrt(r3 * r3 + i3 * i3);
    }
    return s;
}

MomentSums moment_accumulate_neon(const double* x, std::size_t n) {
    float64x2_t sum_a = vdupq_n_f64(0.0);
    float64x2_t sum_b = vdupq_n_f64(0.0);
    float64x2_t sq_a = vdupq_n_f64(0.0);
    float64x2_t sq_b = vdupq_n_f64(0.0);
    const std::size_t n4 = n & ~std::size_t{3};
    for (std::size_t i = 0; i < n4; i += 4) {
        const float64x2_t va = vld1q_f64(x + i);
        const float64x2_t vb = vld1q_f64(x + i + 2);
        sum_a = vaddq_f64(sum_a, va);
        sum_b = vaddq_f64(sum_b, vb);
        sq_a = vaddq_f64(sq_a, vmulq_f64(va, va));
        sq_b = vaddq_f64(sq_b, vmulq_f64(vb, vb));
    }
    MomentSums out;
    out.sum = (vgetq_lane_f64(sum_a, 0) + vgetq_lane_f64(sum_a, 1)) +
              (vgetq_lane_f64(sum_b, 0) + vgetq_lane_f64(sum_b, 1));
    out.sum_sq = (vgetq_lane_f64(sq_a, 0) + vgetq_lane_f64(sq_a, 1)) +
                 (vgetq_lane_f64(sq_b, 0) + vgetq_lane_f64(sq_b, 1));
    for (std::size_t i = n4; i < n; ++i) {
        out.sum += x[i];
        out.sum_sq += x[i] * x[i];
    }
    return out;
}

}  // namespace ariswpc::kernels::detail

#endif  // __aarch64__
