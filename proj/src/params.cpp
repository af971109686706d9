#include "ariswpc/params.hpp"

#include <cmath>
#include <stdexcept>

namespace ariswpc::params {

double dbm_to_mw(double x) {
    if (!std::isfinite(x)) {
        throw std::invalid_argument("dbm_to_mw: non-finite input");
    }
    return std::pow(10.0, x / 10.0);
}

double mw_to_dbm(double x) {
    if (!std::isfinite(x) || x <= 0.0) {
        throw std::invalid_argument("mw_to_dbm: input must be finite and > 0");
    }
    return 10.0 * std::log10(x);
}

ValidationReport validate(const SystemParams& p) {
    ValidationReport report;
    auto fail = [&report](const char* field, const char* message) {
        report.pass = false;
        report.issues.push_back({field, message});
    };
    if (!(std::isfinite(p.alpha) && p.alpha > 0.0 && p.alpha < 1.0)) {
        fail("alpha", "must be in (0,1): the transmit phase divides by 1-alpha");
    }
    if (!(std::isfinite(p.tau_c) && p.tau_c > 0.0)) {
        fail("tau_c", "must be > 0");
    }
    if (!(std::isfinite(p.eta) && p.eta > 0.0 && p.eta <= 1.0)) {
        fail("eta", "must be in (0,1]");
    }
    if (!std::isfinite(p.p_ps_dbm)) {
        fail("p_ps_dbm", "must be finite");
    }
    if (!std::isfinite(p.zeta1_db)) {
        fail("zeta1_db", "must be finite");
    }
    if (!std::isfinite(p.zeta2_db)) {
        fail("zeta2_db", "must be finite");
    }
    if (!std::isfinite(p.rho_db)) {
        fail("rho_db", "must be finite");
    }
    if (p.m < 0) {
        fail("m", "must be >= 0");
    }
    if (!std::isfinite(p.sigma_b_dbm)) {
        fail("sigma_b_dbm", "must be finite");
    }
    if (!std::isfinite(p.sigma_r_dbm)) {
        fail("sigma_r_dbm", "must be finite");
    }
    if (!(std::isfinite(p.r_rate) && p.r_rate >= 0.0)) {
        fail("r_rate", "must be >= 0");
    }
    if (p.k_nodes < 1) {
        fail("k_nodes", "must be >= 1");
    }
    return report;
}

DerivedParams derive(const SystemParams& p) {
    const ValidationReport report = validate(p);
    if (!report.pass) {
        std::string what = "derive: invalid parameters:";
        for (const auto& issue : report.issues) {
            what += " " + issue.field + " (" + issue.message + ");";
        }
        throw std::invalid_argument(what);
    }

    const double p_ps_mw = dbm_to_mw(p.p_ps_dbm);
    const double zeta1 = dbm_to_mw(p.zeta1_db);
    const double zeta2 = dbm_to_mw(p.zeta2_db);
    const double rho2 = dbm_to_mw(p.rho_db);
    const double sigma_b_mw = dbm_to_mw(p.sigma_b_dbm);
    const double sigma_r_mw = dbm_to_mw(p.sigma_r_dbm);

    DerivedParams d;
    d.p_e_mw = p.eta * p.alpha * p_ps_mw / (1.0 - p.alpha);
    d.sigma_t2_mw = sigma_b_mw + rho2 * sigma_r_mw;
    d.p_e = d.p_e_mw / d.sigma_t2_mw;
    // expm1 keeps delta_thr exact at r_rate = 0 and accurate for small rates.
    d.delta_thr = std::expm1(M_LN2 * p.r_rate / (1.0 - p.alpha));
    d.delta_scale = 4.0 / M_PI - M_PI / 4.0;
    d.v_shape = static_cast<double>(p.m) * (M_PI / 4.0) / d.delta_scale;
    d.threshold_t = d.delta_thr / (d.p_e * zeta1 * zeta2 * rho2);
    return d;
}

}  // namespace ariswpc::params
