#include "ariswpc/sysmodel.hpp"

#include <cmath>
#include <stdexcept>

namespace ariswpc::sysmodel {

LinkBudget link_budget(const params::SystemParams& p) {
    return LinkBudget{
        params::dbm_to_mw(p.zeta1_db),
        params::dbm_to_mw(p.zeta2_db),
        params::dbm_to_mw(p.rho_db),
    };
}

double harvested_energy(const params::SystemParams& p, double h1_gain) {
    if (!(h1_gain >= 0.0)) {
        throw std::invalid_argument("harvested_energy: h1_gain must be >= 0");
    }
    const double zeta1 = params::dbm_to_mw(p.zeta1_db);
    return p.eta * p.alpha * p.tau_c * params::dbm_to_mw(p.p_ps_dbm) * h1_gain * zeta1;
}

double transmit_power(const params::SystemParams& p, double h1_gain) {
    return harvested_energy(p, h1_gain) / ((1.0 - p.alpha) * p.tau_c);
}

SnrSample snr(const params::SystemParams& p,
              const params::DerivedParams& d,
              const channel::ChannelRealization& real) {
    if (real.h2.size() != static_cast<std::size_t>(p.m) ||
        real.h3.size() != static_cast<std::size_t>(p.m)) {
        throw std::invalid_argument("snr: realization dimension does not match m");
    }
    const LinkBudget budget = link_budget(p);
    const double h1_gain = real.h1.re * real.h1.re + real.h1.im * real.h1.im;
    const double cascade = channel::cascaded_gain_aligned(real.h2, real.h3);
    SnrSample sample;
    sample.z_u = d.p_e * budget.zeta1 * budget.zeta2 * h1_gain * budget.rho2 * cascade * cascade;
    sample.rate = (1.0 - p.alpha) * std::log2(1.0 + sample.z_u);
    return sample;
}

bool outage_indicator(const SnrSample& sample, double r_rate) {
    return sample.rate < r_rate;
}

}  // namespace ariswpc::sysmodel
