// Acceptance gate: every release-blocking property of the toolkit, one
// verdict line per criterion. Run with the CLI binary path as argv[1];
// criteria 1-8 exercise the library in-process, criterion 9 drives the
// installed command line.
#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "ariswpc/analytic.hpp"
#include "ariswpc/channel.hpp"
#include "ariswpc/montecarlo.hpp"
#include "ariswpc/params.hpp"
#include "ariswpc/sweep.hpp"
#include "ariswpc/sysmodel.hpp"

namespace ap = ariswpc::params;
namespace an = ariswpc::analytic;
namespace mc = ariswpc::montecarlo;
namespace sw = ariswpc::sweep;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& outcome, bool ok, const std::string& what) {
  if (!ok) {
    outcome.pass = false;
    if (!outcome.detail.empty()) {
      outcome.detail += "; ";
    }
    outcome.detail += what;
  }
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

bool rel_close(double got, double want, double tol) {
  return std::fabs(got - want) <= tol * std::fabs(want);
}

// Probabilities observed by criteria 3-5, rescanned for NaN/inf by
// criterion 6.
std::vector<double> g_observed;

void observe(double x) {
  g_observed.push_back(x);
}

ap::SystemParams grid_point(int m, double rho_db) {
  ap::SystemParams p;
  p.m = m;
  p.rho_db = rho_db;
  p.k_nodes = 1000;
  return p;
}

// ---- criterion implementations --------------------------------------

Outcome derived_constants() {
  Outcome outcome;
  ap::SystemParams p;
  const ap::DerivedParams d = ap::derive(p);
  note(outcome, rel_close(d.delta_thr, std::pow(2.0, 2.8) - 1.0, 1e-12),
       "threshold delta mismatch");
  note(outcome, rel_close(d.delta_scale, 4.0 / M_PI - M_PI / 4.0, 1e-12),
       "gamma scale mismatch");
  for (int m : {1, 10, 100}) {
    ap::SystemParams q;
    q.m = m;
    const ap::DerivedParams dm = ap::derive(q);
    note(outcome, rel_close(dm.v_shape * dm.delta_scale, m * M_PI / 4.0, 1e-10),
         fmt("mean identity fails at m=%.0f", m));
    note(outcome,
         rel_close(dm.v_shape * dm.delta_scale * dm.delta_scale,
                   m * (1.0 - M_PI * M_PI / 16.0), 1e-10),
         fmt("variance identity fails at m=%.0f", m));
  }
  return outcome;
}

Outcome moment_matching() {
  Outcome outcome;
  const long long trials = 100000;
  // central fourth moment of one cascade term, for the variance error bar
  const double mu = M_PI / 4.0;
  const double ex3 = std::tgamma(2.5) * std::tgamma(2.5);
  const double mu4_x = 4.0 - 4.0 * mu * ex3 + 6.0 * mu * mu - 3.0 * mu * mu * mu * mu;
  const double var_x = 1.0 - M_PI * M_PI / 16.0;

  for (int m : {1, 4, 16, 64}) {
    const auto moments = mc::estimate_cascade_moments(m, trials, 8000 + m);
    const double mean_err = std::fabs(moments.mean - m * mu);
    note(outcome, mean_err <= 3.0 * moments.stderr_mean,
         fmt("mean off at m=%.0f (err %.2e)", m, mean_err));

    const double target_var = m * var_x;
    const double mu4_y = m * mu4_x + 3.0 * m * (m - 1.0) * var_x * var_x;
    const double se_var =
        std::sqrt((mu4_y - target_var * target_var) / static_cast<double>(trials));
    const double var_err = std::fabs(moments.variance - target_var);
    note(outcome, var_err <= 4.0 * se_var,
         fmt("variance off at m=%.0f (err %.2e, allowed %.2e)", m, var_err, 4.0 * se_var));
  }
  return outcome;
}

Outcome quadrature_correctness() {
  Outcome outcome;
  double worst = 0.0;
  for (double rho_db : {0.0, 10.0}) {
    for (int m : {1, 8, 16, 64, 100}) {
      const ap::SystemParams p = grid_point(m, rho_db);
      const ap::DerivedParams d = ap::derive(p);
      const double ref = an::outage_reference(p, d, 1e-8);
      observe(ref);

      const an::OutageResult fine = an::outage_closed_form(p, d);
      observe(fine.p_out);
      observe(fine.p_raw);
      const double err_fine = std::fabs(fine.p_out - ref);
      worst = std::max(worst, err_fine);
      note(outcome, err_fine <= 1e-4,
           fmt("K=1000 error %.2e at m=%.0f rho=%.0f", err_fine, m, rho_db));

      double prev_err = INFINITY;
      for (int k_nodes : {25, 50, 100, 200, 400, 800}) {
        ap::SystemParams q = p;
        q.k_nodes = k_nodes;
        const an::OutageResult res = an::outage_closed_form(q, ap::derive(q));
        observe(res.p_out);
        observe(res.p_raw);
        const double err = std::fabs(res.p_out - ref);
        note(outcome, err <= prev_err + 1e-12 || err <= 1e-9,
             fmt("error grew at K=%.0f (m=%.0f rho=%.0f)", k_nodes, m, rho_db));
        prev_err = err;
      }
    }
  }
  outcome.detail = fmt("max K=1000 error %.2e", worst) +
                   (outcome.detail.empty() ? "" : "; " + outcome.detail);
  return outcome;
}

Outcome analytic_vs_mc() {
  Outcome outcome;
  ap::SystemParams base;
  base.k_nodes = 1000;
  sw::ValidateOptions opts;
  opts.trials = 100000;
  opts.seed = 42;
  opts.workers = 1;
  const sw::ValidateReport report = sw::validate_command(base, opts);
  double worst = 0.0;
  for (const auto& point : report.points) {
    observe(point.p_analytic);
    observe(point.p_mc);
    worst = std::max(worst, point.abs_diff);
    note(outcome, point.pass,
         fmt("m=%.0f rho=%.0f differs by %.3f", point.m, point.rho_db, point.abs_diff));
  }
  outcome.detail = fmt("max |analytic-mc| %.4f over 10 points", worst) +
                   (outcome.detail.empty() ? "" : "; " + outcome.detail);
  return outcome;
}

Outcome outage_trends() {
  Outcome outcome;
  std::vector<double> curve_rho0;
  std::vector<double> curve_rho10;
  for (double rho_db : {0.0, 10.0}) {
    auto& curve = (rho_db == 0.0) ? curve_rho0 : curve_rho10;
    sw::SweepSpec spec;
    spec.axis = "m";
    for (int m = 1; m <= 100; ++m) {
      spec.values.push_back(m);
    }
    spec.fixed = grid_point(1, rho_db);
    const auto records = sw::run_sweep(spec);
    for (const auto& rec : records) {
      if (!rec.error.empty() || !rec.p_out_analytic) {
        note(outcome, false, "sweep point failed: " + rec.error);
        return outcome;
      }
      curve.push_back(*rec.p_out_analytic);
      observe(*rec.p_out_analytic);
      observe(*rec.p_raw);
    }
    for (std::size_t i = 1; i < curve.size(); ++i) {
      note(outcome, curve[i] <= curve[i - 1] + 1e-12,
           fmt("outage rose from m=%.0f to m=%.0f at rho=%.0f", i, i + 1, rho_db));
    }
  }
  for (std::size_t i = 0; i < curve_rho0.size(); ++i) {
    note(outcome, curve_rho10[i] <= curve_rho0[i] + 1e-12,
         fmt("amplified curve above baseline at m=%.0f", i + 1));
  }
  return outcome;
}

Outcome numerical_stability() {
  Outcome outcome;
  for (double rho_db : {0.0, 10.0}) {
    const ap::SystemParams p = grid_point(100, rho_db);
    const an::OutageResult res = an::outage_closed_form(p, ap::derive(p));
    note(outcome, std::isfinite(res.p_out) && res.p_out >= 0.0 && res.p_out <= 1.0,
         fmt("p_out out of range at rho=%.0f", rho_db));
    note(outcome, res.p_raw >= -1e-6 && res.p_raw <= 1.0 + 1e-6,
         fmt("p_raw drifted to %.3e at rho=%.0f", res.p_raw, rho_db));
  }
  std::size_t bad = 0;
  for (double x : g_observed) {
    if (!std::isfinite(x)) {
      ++bad;
    }
  }
  note(outcome, bad == 0, fmt("%.0f non-finite values across criteria 3-5", double(bad)));
  if (outcome.pass) {
    outcome.detail = fmt("%.0f probabilities scanned, all finite", double(g_observed.size()));
  }
  return outcome;
}

Outcome degenerate_limits() {
  Outcome outcome;

  ap::SystemParams zero_rate = grid_point(16, 10.0);
  zero_rate.r_rate = 0.0;
  const ap::DerivedParams d_zero = ap::derive(zero_rate);
  mc::McConfig cfg;
  cfg.trials = 10000;
  cfg.seed = 42;
  const auto est_zero = mc::estimate_outage(zero_rate, d_zero, cfg);
  note(outcome, est_zero.p_hat == 0.0, "zero rate still produced outages");
  const double p_zero = an::outage_closed_form(zero_rate, d_zero).p_out;
  note(outcome, p_zero <= 1e-3, fmt("analytic zero-rate outage %.2e", p_zero));

  ap::SystemParams no_elements = grid_point(0, 10.0);
  const ap::DerivedParams d_none = ap::derive(no_elements);
  note(outcome, mc::estimate_outage(no_elements, d_none, cfg).p_hat == 1.0,
       "m=0 mc estimate not exactly 1");
  note(outcome, an::outage_closed_form(no_elements, d_none).p_out == 1.0,
       "m=0 analytic outage not exactly 1");

  const ap::SystemParams mid = grid_point(16, 10.0);
  ap::DerivedParams d_hostile = ap::derive(mid);
  d_hostile.threshold_t *= 1e6;
  const double p_hostile = an::outage_closed_form(mid, d_hostile).p_out;
  note(outcome, p_hostile >= 0.999, fmt("hostile threshold outage only %.4f", p_hostile));
  return outcome;
}

Outcome reproducibility() {
  Outcome outcome;
  ap::SystemParams p = grid_point(8, 0.0);
  const ap::DerivedParams d = ap::derive(p);
  mc::McConfig cfg;
  cfg.trials = 10000;
  cfg.seed = 42;
  cfg.workers = 1;
  const auto serial = mc::estimate_outage(p, d, cfg);
  for (int workers : {2, 8}) {
    cfg.workers = workers;
    const auto parallel = mc::estimate_outage(p, d, cfg);
    note(outcome, parallel.p_hat == serial.p_hat,
         fmt("p_hat changed with %.0f workers", workers));
  }

  sw::SweepSpec spec;
  spec.axis = "m";
  spec.values = {2, 4, 8, 16};
  spec.fixed.k_nodes = 300;
  spec.engine_mc = true;
  spec.mc.trials = 2000;
  spec.mc.seed = 7;
  const std::string first = sw::to_csv(sw::run_sweep(spec));
  const std::string second = sw::to_csv(sw::run_sweep(spec));
  note(outcome, first == second, "sweep CSV differs between runs");
  if (outcome.pass) {
    outcome.detail = "bit-identical across workers 1/2/8 and repeated sweeps";
  }
  return outcome;
}

std::string run_cli(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (pipe == nullptr) {
    status = -1;
    return out;
  }
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
    out.append(buf, n);
  }
  const int rc = pclose(pipe);
  status = (rc != -1 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
  return out;
}

Outcome interface_contract(const std::string& cli) {
  Outcome outcome;
  const std::string expected_header =
      "m,rho_db,p_ps_dbm,alpha,eta,tau_c,r_rate,zeta1_db,zeta2_db,"
      "sigma_b_dbm,sigma_r_dbm,k_nodes,p_out_analytic,p_raw,p_out_mc,"
      "mc_stderr,trials,seed";
  note(outcome, std::string(sw::kCsvHeader) == expected_header,
       "library header constant drifted");

  int status = 0;
  const std::string csv =
      run_cli(cli + " sweep --axis m --values 4,8 --engines analytic", status);
  note(outcome, status == 0, fmt("sweep exited %.0f", status));
  note(outcome, csv.compare(0, expected_header.size(), expected_header) == 0 &&
                    csv.size() > expected_header.size() &&
                    csv[expected_header.size()] == '\n',
       "sweep output does not start with the frozen header");

  run_cli(cli + " validate --trials 5000 --seed 1", status);
  note(outcome, status == 0, fmt("honest validate exited %.0f", status));

  run_cli(cli + " validate --trials 2000 --seed 1 --inject-delta-bug", status);
  note(outcome, status != 0, "mutated validate still exited 0");
  if (outcome.pass) {
    outcome.detail = "header frozen, mutation caught";
  }
  return outcome;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-cli>\n");
    return 2;
  }
  const std::string cli = argv[1];

  struct Criterion {
    const char* name;
    double budget_s;  // 0 = untimed
    Outcome (*run)();
  };
  // criterion 9 needs the CLI path, handled after the table
  const Criterion table[] = {
      {"derived constants", 1.0, derived_constants},
      {"moment matching", 30.0, moment_matching},
      {"quadrature vs adaptive reference", 10.0, quadrature_correctness},
      {"analytic vs monte carlo", 300.0, analytic_vs_mc},
      {"outage trends in m and rho", 5.0, outage_trends},
      {"numerical stability", 0.0, numerical_stability},
      {"degenerate limits", 0.0, degenerate_limits},
      {"reproducibility", 0.0, reproducibility},
  };

  int failures = 0;
  int index = 1;
  auto report = [&](const char* name, double budget_s, const Outcome& outcome,
                    double elapsed_s) {
    bool pass = outcome.pass;
    std::string detail = outcome.detail;
    if (budget_s > 0.0 && elapsed_s >= budget_s) {
      pass = false;
      if (!detail.empty()) {
        detail += "; ";
      }
      detail += fmt("over %.0f s budget", budget_s);
    }
    std::printf("%s criterion %d: %s%s%s [%.1f s]\n", pass ? "PASS" : "FAIL", index, name,
                detail.empty() ? "" : " - ", detail.c_str(), elapsed_s);
    std::fflush(stdout);
    failures += pass ? 0 : 1;
    ++index;
  };

  using clock = std::chrono::steady_clock;
  for (const Criterion& criterion : table) {
    const auto start = clock::now();
    const Outcome outcome = criterion.run();
    const double elapsed = std::chrono::duration<double>(clock::now() - start).count();
    report(criterion.name, criterion.budget_s, outcome, elapsed);
  }
  {
    const auto start = clock::now();
    const Outcome outcome = interface_contract(cli);
    const double elapsed = std::chrono::duration<double>(clock::now() - start).count();
    report("interface contract", 0.0, outcome, elapsed);
  }

  if (failures > 0) {
    std::printf("%d of 9 criteria failing\n", failures);
    return 1;
  }
  std::printf("all 9 criteria passing\n");
  return 0;
}
