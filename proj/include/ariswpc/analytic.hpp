#pragma once

#include <vector>

#include "ariswpc/params.hpp"

namespace ariswpc::analytic {

// Outage probability of the gamma-approximated model.
//
// The cascade sum Y = sum |h2_m||h3_m| is approximated by Gamma(v, delta)
// via moment matching, and |h1|^2 is unit-mean exponential, so
//
//   P_out = 1 - Integral_0^inf exp(-T/y^2) * y^(v-1) e^(-y/delta)
//                                / (Gamma(v) delta^v) dy,
//
// with T = delta_thr / (p_e zeta1 zeta2 rho^2). Substituting y = tan(mu)
// maps the integral to (0, pi/2); outage_closed_form discretizes it with a
// K-node Chebyshev rule while outage_reference integrates it adaptively to
// a requested tolerance and serves as the internal oracle.

// Nodes of the K-point rule: omega_k = cos((2k-1)pi/K), mu_k =
// pi(omega_k+1)/4, weight_k = sqrt(1-omega_k^2). For odd K the middle node
// lands on omega = -1 (mu = 0); its integrand term is zero and is reported
// via OutageResult::terms_skipped.
struct QuadratureNodes {
    std::vector<double> omega;
    std::vector<double> mu;
    std::vector<double> weights;
    int k_nodes = 0;
};

struct OutageResult {
    double p_out = 0.0;      // clamped to [0,1]
    double p_raw = 0.0;      // unclamped quadrature value, for diagnostics
    int k_used = 0;          // node count evaluated (0 for the m=0 shortcut)
    int terms_skipped = 0;   // nodes whose log-term is -inf
};

QuadratureNodes chebyshev_nodes(int k_nodes);

// ln Gamma(x) for x > 0. Thin wrapper over the C library implementation
// (thread-safe form); relative accuracy comfortably exceeds 1e-12 on
// [0.5, 500].
double log_gamma(double x);

// K-node closed form, evaluated in the log domain: each node contributes
// exp[ln w_k + ln(1+t^2) + (v-1) ln t - ln Gamma(v) - v ln delta - T/t^2
//     - t/delta], t = tan(mu_k), summed max-shifted and scaled by
// pi^2/(4K). m = 0 short-circuits: no cascade path means z_u = 0, so
// p_out = 1 for r_rate > 0 and 0 for r_rate = 0.
OutageResult outage_closed_form(const params::SystemParams& p, const params::DerivedParams& d);

// Adaptive Gauss-Kronrod evaluation of the same integral to absolute
// error <= tol (tol in (0, 1e-2]); requires m >= 1. Throws
// std::runtime_error if the subdivision budget is exhausted before the
// tolerance is met.
double outage_reference(const params::SystemParams& p, const params::DerivedParams& d, double tol);

}  // namespace ariswpc::analytic
