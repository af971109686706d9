#pragma once

#include <cstddef>
#include <string>

#include "ariswpc/complex.hpp"

namespace ariswpc::kernels {

// Data-parallel inner loops with interchangeable backends. Every backend
// evaluates the same canonical reduction: four lane accumulators over
// elements i ≡ 0..3 (mod 4), combined as (acc0+acc1)+(acc2+acc3), then the
// remaining tail elements added one by one. Each elementary op (mul, add,
// sqrt) is exactly rounded and contraction is disabled at compile time, so
// all backends return bit-identical doubles and tests may compare them
// with ==.
enum class Backend {
    scalar,
    avx2,
    neon,
};

const char* backend_name(Backend b);

// Best backend supported by the running CPU (detected once).
Backend preferred_backend();

// Backend used by the free functions below. Defaults to preferred_backend().
Backend active_backend();

// Force a backend; returns false (and leaves the active backend unchanged)
// if the CPU cannot run it.
bool set_backend(Backend b);

// sum over i of |h2[i]| * |h3[i]|, the phase-aligned cascade sum.
double cascaded_magnitude_sum(const Complex* h2, const Complex* h3, std::size_t n);

// Accumulate sum of x[i] and sum of x[i]^2 in one pass.
struct MomentSums {
    double sum = 0.0;
    double sum_sq = 0.0;
};
MomentSums moment_accumulate(const double* x, std::size_t n);

// Per-backend entry points (used by equivalence tests; prefer the
// dispatching functions above).
namespace detail {
double cascaded_magnitude_sum_scalar(const Complex*, const Complex*, std::size_t);
MomentSums moment_accumulate_scalar(const double*, std::size_t);
#if defined(__x86_64__) || defined(_M_X64)
double cascaded_magnitude_sum_avx2(const Complex*, const Complex*, std::size_t);
MomentSums moment_accumulate_avx2(const double*, std::size_t);
#endif
#if defined(__aarch64__)
double cascaded_magnitude_sum_neon(const Complex*, const Complex*, std::size_t);
MomentSums moment_accumulate_neon(const double*, std::size_t);
#endif
}  // namespace detail

}  // namespace ariswpc::kernels
