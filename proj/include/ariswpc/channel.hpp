#pragma once

#include <cstdint>
#include <vector>

#include "ariswpc/complex.hpp"

namespace ariswpc::channel {

using ariswpc::Complex;

// One draw of all fading coefficients: the direct power link h1 and the
// per-element cascade links h2 (user->surface) and h3 (surface->base).
// Every coefficient is complex Gaussian with E[|h|^2] = 1.
struct ChannelRealization {
    Complex h1;
    std::vector<Complex> h2;
    std::vector<Complex> h3;
};

// Per-element reflection phases, each in (-pi, pi].
struct PhaseVector {
    std::vector<double> theta;
};

// Addressable position in the random-number space: trial i of a run with
// seed s reads only from substream (s, i), so results do not depend on
// execution order or worker count.
struct Substream {
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
};

// Draw h1, h2[0..m), h3[0..m) from the given substream. Deterministic:
// identical (seed, index, m) yields bit-identical coefficients.
ChannelRealization sample_realization(const Substream& stream, int m);

// Same draw, reusing the capacity of an existing realization (hot loops).
void sample_realization_into(const Substream& stream, int m, ChannelRealization& out);

// theta_m = -arg(h2_m * h3_m), normalized into (-pi, pi]. A coefficient
// product that is exactly zero yields theta_m = 0 by convention.
PhaseVector optimal_phases(const std::vector<Complex>& h2, const std::vector<Complex>& h3);

// rho_amp * |sum_m h3_m e^{j theta_m} h2_m|: cascade gain under an
// arbitrary phase configuration.
double cascaded_gain_with_phases(const std::vector<Complex>& h2,
                                 const std::vector<Complex>& h3,
                                 const PhaseVector& theta,
                                 double rho_amp);

// sum_m |h2_m| |h3_m|: cascade gain when phases are chosen optimally
// (the amplification factor is applied by the caller).
double cascaded_gain_aligned(const std::vector<Complex>& h2, const std::vector<Complex>& h3);

}  // namespace ariswpc::channel
