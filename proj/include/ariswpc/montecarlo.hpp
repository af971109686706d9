#pragma once

#include <cstdint>

#include "ariswpc/params.hpp"

namespace ariswpc::montecarlo {

struct McConfig {
    long long trials = 10000;
    std::uint64_t seed = 42;
    int workers = 1;
};

struct OutageEstimate {
    double p_hat = 0.0;
    double std_err = 0.0;
    double ci95_lo = 0.0;
    double ci95_hi = 0.0;
    long long trials = 0;
    std::uint64_t seed = 0;
};

// Fraction of trials in outage over `trials` independent realizations,
// trial i drawn from substream (seed, i). Outages are counted per
// fixed-size chunk and the integer counts combined in chunk order, so
// p_hat is bit-identical for every workers value. The binomial standard
// error and the clipped 95% normal interval accompany the estimate.
OutageEstimate estimate_outage(const params::SystemParams& p,
                               const params::DerivedParams& d,
                               const McConfig& mc);

struct CascadeMoments {
    double mean = 0.0;
    double variance = 0.0;    // unbiased sample variance
    double stderr_mean = 0.0;
};

// Sample mean/variance of the cascade sum Y = sum |h2_m||h3_m| (the
// moment-matching targets m*pi/4 and m*(1-pi^2/16)).
CascadeMoments estimate_cascade_moments(int m, long long trials, std::uint64_t seed);

}  // namespace ariswpc::montecarlo
