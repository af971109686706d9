#pragma once

#include "ariswpc/channel.hpp"
#include "ariswpc/params.hpp"

namespace ariswpc::sysmodel {

// Linear-unit link gains used by the end-to-end SNR.
struct LinkBudget {
    double zeta1 = 1.0;  // PS->U power gain
    double zeta2 = 1.0;  // U->RIS->BS power gain
    double rho2 = 1.0;   // per-element amplification power gain rho^2
};

LinkBudget link_budget(const params::SystemParams& p);

// SNR and achievable rate for one realization; rate = (1-alpha)*log2(1+z_u).
struct SnrSample {
    double z_u = 0.0;
    double rate = 0.0;
};

// Energy captured during the harvest phase:
// E = eta * alpha * tau_c * P_ps * |h1|^2 * zeta1, in mW*s.
double harvested_energy(const params::SystemParams& p, double h1_gain);

// Power available for the transmit phase: P_u = E / ((1-alpha)*tau_c), mW.
double transmit_power(const params::SystemParams& p, double h1_gain);

// End-to-end SNR with optimally aligned reflection phases:
// z_u = p_e * zeta1 * zeta2 * |h1|^2 * (rho * sum_m |h2_m||h3_m|)^2.
SnrSample snr(const params::SystemParams& p,
              const params::DerivedParams& d,
              const channel::ChannelRealization& real);

// Outage: the achievable rate falls strictly below the codeword rate.
bool outage_indicator(const SnrSample& sample, double r_rate);

}  // namespace ariswpc::sysmodel
