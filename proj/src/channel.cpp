#include "ariswpc/channel.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "ariswpc/kernels.hpp"
#include "ariswpc/philox.hpp"

namespace ariswpc::channel {

namespace {

// Coefficient c of a substream consumes half of generator block c/2:
// words {0,1} for even c, words {2,3} for odd c. Box-Muller with the
// open-closed uniform as the log argument cannot produce inf or NaN.
Complex draw_coefficient(const Substream& stream, std::uint64_t c) {
    const rng::Counter counter{c / 2, 0, 0, 0};
    const rng::Key key{stream.seed, stream.index};
    const auto block = rng::philox4x64_10(counter, key);
    const std::size_t base = (c % 2 == 0) ? 0 : 2;
    const double u1 = rng::uniform_open_closed(block[base]);
    const double u2 = rng::uniform_closed_open(block[base + 1]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    // Unit-variance complex coefficient: real and imaginary parts are
    // independent N(0, 1/2).
    const double scale = radius * M_SQRT1_2;
    return Complex{scale * std::cos(angle), scale * std::sin(angle)};
}

}  // namespace

ChannelRealization sample_realization(const Substream& stream, int m) {
    ChannelRealization real;
    sample_realization_into(stream, m, real);
    return real;
}

void sample_realization_into(const Substream& stream, int m, ChannelRealization& out) {
    if (m < 0) {
        throw std::invalid_argument("sample_realization: m must be >= 0");
    }
    const auto n = static_cast<std::size_t>(m);
    out.h1 = draw_coefficient(stream, 0);
    out.h2.resize(n);
    out.h3.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        out.h2[j] = draw_coefficient(stream, 1 + j);
    }
    for (std::size_t j = 0; j < n; ++j) {
        out.h3[j] = draw_coefficient(stream, 1 + n + j);
    }
}

PhaseVector optimal_phases(const std::vector<Complex>& h2, const std::vector<Complex>& h3) {
    if (h2.size() != h3.size()) {
        throw std::invalid_argument("optimal_phases: length mismatch");
    }
    PhaseVector phases;
    phases.theta.reserve(h2.size());
    for (std::size_t i = 0; i < h2.size(); ++i) {
        const double re = h2[i].re * h3[i].re - h2[i].im * h3[i].im;
        const double im = h2[i].re * h3[i].im + h2[i].im * h3[i].re;
        double theta = 0.0;
        if (re != 0.0 || im != 0.0) {
            theta = -std::atan2(im, re);
            if (theta == -M_PI) {
                theta = M_PI;
            }
        }
        phases.theta.push_back(theta);
    }
    return phases;
}

double cascaded_gain_with_phases(const std::vector<Complex>& h2,
                                 const std::vector<Complex>& h3,
                                 const PhaseVector& theta,
                                 double rho_amp) {
    if (h2.size() != h3.size() || h2.size() != theta.theta.size()) {
        throw std::invalid_argument("cascaded_gain_with_phases: length mismatch");
    }
    if (!(rho_amp > 0.0)) {
        throw std::invalid_argument("cascaded_gain_with_phases: rho_amp must be > 0");
    }
    double sum_re = 0.0;
    double sum_im = 0.0;
    for (std::size_t i = 0; i < h2.size(); ++i) {
        // h3_i * e^{j theta_i} * h2_i
        const double prod_re = h2[i].re * h3[i].re - h2[i].im * h3[i].im;
        const double prod_im = h2[i].re * h3[i].im + h2[i].im * h3[i].re;
        const double c = std::cos(theta.theta[i]);
        const double s = std::sin(theta.theta[i]);
        sum_re += prod_re * c - prod_im * s;
        sum_im += prod_re * s + prod_im * c;
    }
    return rho_amp * std::sqrt(sum_re * sum_re + sum_im * sum_im);
}

double cascaded_gain_aligned(const std::vector<Complex>& h2, const std::vector<Complex>& h3) {
    if (h2.size() != h3.size()) {
        throw std::invalid_argument("cascaded_gain_aligned: length mismatch");
    }
    return kernels::cascaded_magnitude_sum(h2.data(), h3.data(), h2.size());
}

}  // namespace ariswpc::channel
