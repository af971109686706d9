#include <cmath>
#include <cstddef>

#include "ariswpc/kernels.hpp"

// Reference backend. Defines the canonical reduction order all SIMD
// variants must reproduce bit-for-bit: blocked-4 lane accumulators,
// (acc0+acc1)+(acc2+acc3), sequential tail.

namespace ariswpc::kernels::detail {

namespace {

inline double magnitude_product(const Complex& a, const Complex& b) {
    const double ma = std::sqrt(a.re * a.re + a.im * a.im);
    const double mb = std::sqrt(b.re * b.re + b.im * b.im);
    return ma * mb;
}

}  // namespace

double cascaded_magnitude_sum_scalar(const Complex* h2, const Complex* h3, std::size_t n) {
    if (n == 0) {
        return 0.0;
    }
    double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
    const std::size_t n4 = n & ~std::size_t{3};
    for (std::size_t i = 0; i < n4; i += 4) {
        acc0 += magnitude_product(h2[i + 0], h3[i + 0]);
        acc1 += magnitude_product(h2[i + 1], h3[i + 1]);
        acc2 += magnitude_product(h2[i + 2], h3[i + 2]);
        acc3 += magnitude_product(h2[i + 3], h3[i + 3]);
    }
    double s = (acc0 + acc1) + (acc2 + acc3);
    for (std::size_t i = n4; i < n; ++i) {
        s += magnitude_product(h2[i], h3[i]);
    }
    return s;
}

MomentSums moment_accumulate_scalar(const double* x, std::size_t n) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    double q0 = 0.0, q1 = 0.0, q2 = 0.0, q3 = 0.0;
    const std::size_t n4 = n & ~std::size_t{3};
    for (std::size_t i = 0; i < n4; i += 4) {
        s0 += x[i + 0];
        s1 += x[i + 1];
        s2 += x[i + 2];
        s3 += x[i + 3];
        q0 += x[i + 0] * x[i + 0];
        q1 += x[i + 1] * x[i + 1];
        q2 += x[i + 2] * x[i + 2];
        q3 += x[i + 3] * x[i + 3];
    }
    MomentSums out;
    out.sum = (s0 + s1) + (s2 + s3);
    out.sum_sq = (q0 + q1) + (q2 + q3);
    for (std::size_t i = n4; i < n; ++i) {
        out.sum += x[i];
        out.sum_sq += x[i] * x[i];
    }
    return out;
}

}  // namespace ariswpc::kernels::detail
