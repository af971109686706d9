#include "ariswpc/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ariswpc::analytic {

namespace {

constexpr double kHalfPi = M_PI / 2.0;

}  // namespace

QuadratureNodes chebyshev_nodes(int k_nodes) {
    if (k_nodes < 1) {
        throw std::invalid_argument("chebyshev_nodes: k_nodes must be >= 1");
    }
    QuadratureNodes nodes;
    nodes.k_nodes = k_nodes;
    nodes.omega.reserve(k_nodes);
    nodes.mu.reserve(k_nodes);
    nodes.weights.reserve(k_nodes);
    for (int k = 1; k <= k_nodes; ++k) {
        const double omega = std::cos((2.0 * k - 1.0) * M_PI / k_nodes);
        nodes.omega.push_back(omega);
        nodes.mu.push_back(M_PI * (omega + 1.0) / 4.0);
        nodes.weights.push_back(std::sqrt(std::max(0.0, 1.0 - omega * omega)));
    }
    return nodes;
}

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument("log_gamma: x must be finite and > 0");
    }
#if defined(__GLIBC__)
    int sign = 0;
    return lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

OutageResult outage_closed_form(const params::SystemParams& p, const params::DerivedParams& d) {
    OutageResult result;
    if (p.m == 0) {
        // No cascade path: z_u = 0, so outage is certain for any positive
        // rate and impossible at rate zero.
        result.p_out = result.p_raw = (p.r_rate > 0.0) ? 1.0 : 0.0;
        return result;
    }

    const QuadratureNodes nodes = chebyshev_nodes(p.k_nodes);
    const double v = d.v_shape;
    const double lg_v = log_gamma(v);
    const double ln_delta = std::log(d.delta_scale);
    const double t_thresh = d.threshold_t;

    std::vector<double> log_terms;
    log_terms.reserve(nodes.k_nodes);
    int skipped = 0;
    for (int k = 0; k < nodes.k_nodes; ++k) {
        const double w = nodes.weights[static_cast<std::size_t>(k)];
        const double t = std::tan(nodes.mu[static_cast<std::size_t>(k)]);
        if (!(w > 0.0) || !(t > 0.0)) {
            ++skipped;
            continue;
        }
        const double log_term = std::log(w) + std::log1p(t * t) + (v - 1.0) * std::log(t) -
                                lg_v - v * ln_delta - t_thresh / (t * t) - t / d.delta_scale;
        if (log_term == -std::numeric_limits<double>::infinity()) {
            ++skipped;
            continue;
        }
        log_terms.push_back(log_term);
    }

    double sum = 0.0;
    if (!log_terms.empty()) {
        const double shift = *std::max_element(log_terms.begin(), log_terms.end());
        double acc = 0.0;
        for (const double log_term : log_terms) {
            acc += std::exp(log_term - shift);
        }
        sum = (M_PI * M_PI / (4.0 * nodes.k_nodes)) * std::exp(shift) * acc;
    }

    result.p_raw = 1.0 - sum;
    result.p_out = std::min(1.0, std::max(0.0, result.p_raw));
    result.k_used = nodes.k_nodes;
    result.terms_skipped = skipped;
    return result;
}

namespace {

// Integrand of the substituted outage integral on mu in (0, pi/2),
// evaluated in the log domain so v ~ 160 cannot overflow.
struct TailIntegrand {
    double v = 0.0;
    double lg_v = 0.0;
    double delta = 0.0;
    double ln_delta = 0.0;
    double t_thresh = 0.0;

    double operator()(double mu) const {
        if (!(mu > 0.0) || mu >= kHalfPi) {
            return 0.0;
        }
        const double t = std::tan(mu);
        if (!(t > 0.0) || !std::isfinite(t)) {
            return 0.0;
        }
        const double log_f = std::log1p(t * t) + (v - 1.0) * std::log(t) - lg_v -
                             v * ln_delta - t_thresh / (t * t) - t / delta;
        return std::exp(log_f);
    }
};

// 15-point Gauss-Kronrod rule; err is |kronrod - gauss|.
struct PanelResult {
    double integral = 0.0;
    double err = 0.0;
};

template <typename F>
PanelResult gk15(const F& f, double a, double b) {
    static const double xgk[8] = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.0};
    static const double wgk[8] = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static const double wg[4] = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);
    const double fc = f(centr);
    double resg = fc * wg[3];
    double resk = fc * wgk[7];
    for (int j = 0; j < 3; ++j) {
        const double absc = hlgth * xgk[2 * j + 1];
        const double fsum = f(centr - absc) + f(centr + absc);
        resg += wg[j] * fsum;
        resk += wgk[2 * j + 1] * fsum;
    }
    for (int j = 0; j < 4; ++j) {
        const double absc = hlgth * xgk[2 * j];
        const double fsum = f(centr - absc) + f(centr + absc);
        resk += wgk[2 * j] * fsum;
    }
    PanelResult out;
    out.integral = resk * hlgth;
    out.err = std::abs((resk - resg) * hlgth);
    return out;
}

struct Panel {
    double a = 0.0;
    double b = 0.0;
    PanelResult result;
};

}  // namespace

double outage_reference(const params::SystemParams& p, const params::DerivedParams& d, double tol) {
    if (p.m < 1) {
        throw std::invalid_argument("outage_reference: m must be >= 1");
    }
    if (!(tol > 0.0) || tol > 1e-2) {
        throw std::invalid_argument("outage_reference: tol must be in (0, 1e-2]");
    }

    TailIntegrand f;
    f.v = d.v_shape;
    f.lg_v = log_gamma(f.v);
    f.delta = d.delta_scale;
    f.ln_delta = std::log(d.delta_scale);
    f.t_thresh = d.threshold_t;

    // Breakpoints: a uniform grid plus extra resolution around the gamma
    // density bulk (y* +- 6 sigma) and the exp(-T/y^2) knee near sqrt(T).
    std::vector<double> breaks;
    constexpr int kUniform = 48;
    for (int j = 0; j <= kUniform; ++j) {
        breaks.push_back(kHalfPi * j / kUniform);
    }
    const double y_mode = (f.v > 1.0) ? (f.v - 1.0) * f.delta : f.delta;
    const double y_sigma = std::sqrt(f.v) * f.delta;
    for (int j = -6; j <= 6; ++j) {
        const double y = y_mode + j * y_sigma;
        if (y > 1e-12) {
            breaks.push_back(std::atan(y));
        }
    }
    if (f.t_thresh > 0.0) {
        for (const double s : {0.5, 1.0, 2.0}) {
            breaks.push_back(std::atan(std::sqrt(f.t_thresh) * s));
        }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [](double x, double y) { return y - x < 1e-12; }),
                 breaks.end());

    std::vector<Panel> panels;
    panels.reserve(breaks.size() + 256);
    double err_total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        Panel panel{breaks[i], breaks[i + 1], gk15(f, breaks[i], breaks[i + 1])};
        err_total += panel.result.err;
        panels.push_back(panel);
    }

    const double target = 0.5 * tol;
    constexpr std::size_t kMaxPanels = 5000;
    while (err_total > target) {
        if (panels.size() + 1 > kMaxPanels) {
            throw std::runtime_error(
                "outage_reference: subdivision budget exhausted before reaching tolerance");
        }
        auto worst = std::max_element(panels.begin(), panels.end(),
                                      [](const Panel& x, const Panel& y) {
                                          return x.result.err < y.result.err;
                                      });
        const Panel old = *worst;
        const double mid = 0.5 * (old.a + old.b);
        if (!(mid > old.a && mid < old.b)) {
            throw std::runtime_error("outage_reference: panel too small to split further");
        }
        Panel left{old.a, mid, gk15(f, old.a, mid)};
        Panel right{mid, old.b, gk15(f, mid, old.b)};
        err_total += left.result.err + right.result.err - old.result.err;
        *worst = left;
        panels.push_back(right);
    }

    // Deterministic final summation in interval order.
    std::sort(panels.begin(), panels.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    double integral = 0.0;
    for (const Panel& panel : panels) {
        integral += panel.result.integral;
    }
    return std::min(1.0, std::max(0.0, 1.0 - integral));
}

}  // namespace ariswpc::analytic
