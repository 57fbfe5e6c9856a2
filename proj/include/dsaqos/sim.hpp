#pragma once

#include <cstdint>
#include <vector>

#include "dsaqos/arrival.hpp"
#include "dsaqos/ld.hpp"
#include "dsaqos/policy.hpp"

namespace dsaqos {

/// Simulation run parameters. Streams: two mt19937_64 generators, arrivals
/// seeded with `seed` and service with `seed ^ 0x9E3779B97F4A7C15`; each
/// draw maps the top 53 bits to a uniform in [0,1). Arrival stream layout:
/// one draw for the stationary initial state, then one draw per period for
/// the chain step. Service stream: one draw per period.
struct SimConfig {
    std::uint64_t horizon = 0;       // periods simulated
    std::uint64_t seed = 0;
    std::uint64_t warmup = 0;        // batches arriving before this are discarded
    double backlog_guard = 1e9;     // instability trip wire, in work units

    void validate() const;  // horizon > warmup required
};

/// Work-weighted delay census of one run. delay_mass[d] is the work that
/// departed with delay d periods; delay_count[d] the number of batches.
struct SimResult {
    std::vector<double> delay_mass;
    std::vector<std::uint64_t> delay_count;
    double mean_queue = 0.0;     // time average of end-of-period backlog
    std::uint64_t samples = 0;   // batches recorded
    double total_mass = 0.0;

    /// Fraction of recorded work whose delay exceeded d periods; 0 for an
    /// empty census, nonincreasing in d.
    double p_delay_empirical(double d) const;

    /// Number of recorded batches with delay > d.
    std::uint64_t exceedances(double d) const;

    int max_delay() const;
};

/// Discrete-time FIFO queue fed by the arrival chain (started from its
/// stationary distribution) and drained by i.i.d. service drawn from the
/// spectrum. A batch's delay is the period its last unit departs minus its
/// arrival period. Deterministic given the seed. Throws InstabilityError
/// when the backlog passes cfg.backlog_guard.
SimResult simulate(const MarkovArrivalProcess& proc, const ServiceSpectrum& spectrum,
                   const SimConfig& cfg);

struct ValidationRow {
    double d = 0.0;
    double p_empirical = 0.0;
    double p_ld = 0.0;
    std::uint64_t samples = 0;
};

/// Empirical tail vs. the LD approximation, plus the fitted slope of
/// log p_empirical against d over thresholds with p_empirical in
/// [1e-6, 1e-2].
struct ValidationTable {
    std::vector<ValidationRow> rows;
    double theta_star = 0.0;
    double delta = 0.0;
    double slope = 0.0;
    bool slope_valid = false;      // at least two usable thresholds
    bool tail_sufficient = true;   // >= 100 exceedances at the largest usable d
};

/// Simulate the policy's queue and tabulate the empirical delay tail
/// against exp(-theta* delta d) for each threshold in d_range (pass an
/// empty range to use every integer delay up to the observed maximum).
/// Requires a stable instance with finite theta*.
ValidationTable validate_ld(const MarkovArrivalProcess& proc, const SystemParams& params,
                            const PolicyMatrix& policy, const std::vector<double>& d_range,
                            const SimConfig& cfg, double theta_cap = kDefaultThetaCap);

}  // namespace dsaqos
