#pragma once

#include <string>
#include <vector>

namespace ariswpc::params {

// User-settable scalars of the system model. Powers are configured in dBm
// and gains in dB; everything downstream works in linear units (mW,
// dimensionless ratios).
struct SystemParams {
    double alpha = 0.5;        // time-switching fraction, in (0,1)
    double tau_c = 1.0;        // coherence interval, seconds, > 0
    double eta = 0.9;          // energy conversion efficiency, in (0,1]
    double p_ps_dbm = 10.0;    // power-station transmit power, dBm
    double zeta1_db = 0.0;     // PS->U path gain, dB (<= 0 means attenuation)
    double zeta2_db = 0.0;     // U->RIS->BS path gain, dB
    double rho_db = 10.0;      // per-element amplification power gain, dB
    int m = 100;               // number of RIS elements, >= 0
    double sigma_b_dbm = 0.0;  // BS noise power, dBm
    double sigma_r_dbm = -80.0;  // RIS noise power, dBm
    double r_rate = 1.4;       // codeword rate, bits/s/Hz, >= 0
    int k_nodes = 200;         // quadrature node count, >= 1
};

// Quantities forced by SystemParams. delta_scale is a universal constant
// (4/pi - pi/4); v_shape is the gamma shape matched to the first two
// moments of the cascade sum, so v_shape*delta_scale = m*pi/4 and
// v_shape*delta_scale^2 = m*(1 - pi^2/16).
struct DerivedParams {
    double p_e_mw = 0.0;       // user transmit power eta*alpha*P_ps/(1-alpha), mW
    double sigma_t2_mw = 0.0;  // total noise sigma_b^2 + rho^2*sigma_R^2, mW
    double p_e = 0.0;          // P_e / sigma_T^2, dimensionless
    double delta_thr = 0.0;    // SNR threshold 2^(r/(1-alpha)) - 1
    double v_shape = 0.0;      // gamma shape of the cascade-sum approximation
    double delta_scale = 0.0;  // gamma scale of the cascade-sum approximation
    double threshold_t = 0.0;  // delta_thr / (p_e*zeta1*zeta2*rho^2)
};

struct ValidationIssue {
    std::string field;
    std::string message;
};

struct ValidationReport {
    bool pass = true;
    std::vector<ValidationIssue> issues;
};

// 10^(x/10): dBm to mW (also dB gain to linear power ratio). Throws
// std::invalid_argument on non-finite input.
double dbm_to_mw(double x);

// 10*log10(x): inverse of dbm_to_mw. Throws on x <= 0 or non-finite.
double mw_to_dbm(double x);

// Check every SystemParams invariant; never throws.
ValidationReport validate(const SystemParams& p);

// Compute all derived quantities. Throws std::invalid_argument if validate
// fails. m = 0 is legal and yields v_shape = 0 (degenerate: no RIS path).
DerivedParams derive(const SystemParams& p);

}  // namespace ariswpc::params
