#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ariswpc/montecarlo.hpp"
#include "ariswpc/params.hpp"

namespace ariswpc::sweep {

// One-dimensional parameter sweep: vary `axis` over `values` with every
// other field held at `fixed`.
struct SweepSpec {
    std::string axis;             // m, rho_db, p_ps_dbm, alpha, r_rate, k_nodes
    std::vector<double> values;
    params::SystemParams fixed;
    bool engine_analytic = true;
    bool engine_mc = false;
    montecarlo::McConfig mc;      // mc.seed is the sweep base seed
};

struct SweepRecord {
    params::SystemParams point;   // parameters after axis substitution
    std::optional<double> p_out_analytic;
    std::optional<double> p_raw;
    std::optional<double> p_out_mc;
    std::optional<double> mc_stderr;
    std::optional<long long> trials;
    std::optional<std::uint64_t> seed;
    std::string error;            // nonempty if this point failed; engine fields absent
};

struct ParsedConfig {
    params::SystemParams base;
    std::optional<SweepSpec> sweep;
    std::optional<montecarlo::McConfig> mc;
};

// Parse a JSON configuration: top-level keys are the SystemParams field
// names plus optional "sweep" and "mc" objects. Unknown keys, malformed
// JSON and invariant violations each throw std::invalid_argument with a
// distinct message naming the offender.
ParsedConfig parse_config(const std::string& json_text);

// Per-point MC seed: a fixed bijective mix of (base seed, point index),
// so sweep points are independent yet reproducible.
std::uint64_t point_seed(std::uint64_t base_seed, std::size_t point_index);

// Evaluate every point, in input order. Per-point failures are captured in
// SweepRecord::error; remaining points still run.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec);

enum class Format { csv, json };

// CSV columns (header is a stable interface):
// m,rho_db,p_ps_dbm,alpha,eta,tau_c,r_rate,zeta1_db,zeta2_db,sigma_b_dbm,
// sigma_r_dbm,k_nodes,p_out_analytic,p_raw,p_out_mc,mc_stderr,trials,seed
// Probabilities carry 10 significant digits; absent optionals are empty
// fields. JSON is the same schema as an array of objects with lossless
// doubles (absent optionals omitted).
extern const char* const kCsvHeader;
std::string to_csv(const std::vector<SweepRecord>& records);
std::string to_json(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> parse_csv(const std::string& text);
std::vector<SweepRecord> parse_json(const std::string& text);

void write_records(const std::vector<SweepRecord>& records, Format format, std::ostream& out);

struct ValidateOptions {
    long long trials = 100000;
    std::uint64_t seed = 42;
    int workers = 1;
    bool include_m1 = false;      // adds m = 1 rows, reported but not gating
    bool inject_delta_bug = false;  // testing hook: corrupt the analytic
                                    // threshold formula to prove the check
                                    // detects model mismatch
};

struct ValidatePoint {
    int m = 0;
    double rho_db = 0.0;
    double p_analytic = 0.0;
    double p_mc = 0.0;
    double mc_stderr = 0.0;
    double abs_diff = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool informational = false;
};

struct ValidateReport {
    bool pass = true;
    std::vector<ValidatePoint> points;
};

// Cross-check the closed form against Monte Carlo on the built-in grid
// m in {8,16,32,64,100} x rho_db in {0,10} at the given base parameters.
// A point passes iff |p_analytic - p_mc| <= max(0.02, 3*stderr). The
// analytic side is evaluated at K = max(1000, base.k_nodes): the check
// targets model consistency, and coarser rules alias the integrand bulk
// at m >= 64.
ValidateReport validate_command(const params::SystemParams& base, const ValidateOptions& opts);

}  // namespace ariswpc::sweep
