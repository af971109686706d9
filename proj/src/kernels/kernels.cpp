#include <atomic>

#include "ariswpc/kernels.hpp"

namespace ariswpc::kernels {

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "unknown";
}

namespace {

bool backend_supported(Backend b) {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2") != 0;
#else
            return false;
#endif
        case Backend::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Backend detect_preferred() {
#if defined(__aarch64__)
    return Backend::neon;
#else
    return backend_supported(Backend::avx2) ? Backend::avx2 : Backend::scalar;
#endif
}

std::atomic<Backend>& active_slot() {
    static std::atomic<Backend> slot{detect_preferred()};
    return slot;
}

}  // namespace

Backend preferred_backend() {
    static const Backend b = detect_preferred();
    return b;
}

Backend active_backend() {
    return active_slot().load(std::memory_order_relaxed);
}

bool set_backend(Backend b) {
    if (!backend_supported(b)) {
        return false;
    }
    active_slot().store(b, std::memory_order_relaxed);
    return true;
}

double cascaded_magnitude_sum(const Complex* h2, const Complex* h3, std::size_t n) {
    switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2:
            return detail::cascaded_magnitude_sum_avx2(h2, h3, n);
#endif
#if defined(__aarch64__)
        case Backend::neon:
            return detail::cascaded_magnitude_sum_neon(h2, h3, n);
#endif
        default:
            return detail::cascaded_magnitude_sum_scalar(h2, h3, n);
    }
}

MomentSums moment_accumulate(const double* x, std::size_t n) {
    switch (active_backend()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2:
            return detail::moment_accumulate_avx2(x, n);
#endif
#if defined(__aarch64__)
        case Backend::neon:
            return detail::moment_accumulate_neon(x, n);
#endif
        default:
            return detail::moment_accumulate_scalar(x, n);
    }
}

}  // namespace ariswpc::kernels
