#include "dsaqos/sim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>
#include <string>

#include "dsaqos/errors.hpp"

namespace dsaqos {

namespace {

constexpr std::uint64_t kServiceStreamSalt = 0x9E3779B97F4A7C15ull;

double next_uniform(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

int pick_index(const std::vector<double>& weights, double u) {
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        cum += weights[i];
        if (u < cum) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
}

struct Batch {
    std::uint64_t arrived = 0;
    double remaining = 0.0;
    double size = 0.0;
};

}  // namespace

void SimConfig::validate() const {
    if (horizon == 0) throw std::invalid_argument("horizon must be positive");
    if (warmup >= horizon)
        throw std::invalid_argument("warmup (" + std::to_string(warmup) +
                                    ") must be smaller than horizon (" +
                                    std::to_string(horizon) + ")");
    if (!(backlog_guard > 0.0)) throw std::invalid_argument("backlog_guard must be positive");
}

double SimResult::p_delay_empirical(double d) const {
    if (total_mass <= 0.0) return 0.0;
    double tail = 0.0;
    for (std::size_t j = 0; j < delay_mass.size(); ++j)
        if (static_cast<double>(j) > d) tail += delay_mass[j];
    return tail / total_mass;
}

std::uint64_t SimResult::exceedances(double d) const {
    std::uint64_t n = 0;
    for (std::size_t j = 0; j < delay_count.size(); ++j)
        if (static_cast<double>(j) > d) n += delay_count[j];
    return n;
}

int SimResult::max_delay() const {
    for (int j = static_cast<int>(delay_count.size()) - 1; j >= 0; --j)
        if (delay_count[j] > 0) return j;
    return -1;
}

SimResult simulate(const MarkovArrivalProcess& proc, const ServiceSpectrum& spectrum,
                   const SimConfig& cfg) {
    cfg.validate();
    std::mt19937_64 arrival_gen(cfg.seed);
    std::mt19937_64 service_gen(cfg.seed ^ kServiceStreamSalt);

    const auto pi = proc.stationary_distribution();
    int state = pick_index(pi, next_uniform(arrival_gen));

    std::vector<double> service_probs;
    service_probs.reserve(spectrum.atoms().size());
    for (const auto& a : spectrum.atoms()) service_probs.push_back(a.prob);

    SimResult res;
    std::deque<Batch> queue;
    double backlog = 0.0;  // sum of remaining work across queued batches
    double lindley = 0.0;  // independent max(0, q + a - r) recursion
    double queue_time_sum = 0.0;

    auto record = [&](const Batch& b, std::uint64_t now) {
        if (b.arrived < cfg.warmup) return;
        const auto d = static_cast<std::size_t>(now - b.arrived);
        if (res.delay_mass.size() <= d) {
            res.delay_mass.resize(d + 1, 0.0);
            res.delay_count.resize(d + 1, 0);
        }
        res.delay_mass[d] += b.size;
        res.delay_count[d] += 1;
        res.total_mass += b.size;
        res.samples += 1;
    };

    for (std::uint64_t t = 0; t < cfg.horizon; ++t) {
        const double a = proc.values()[state];
        const double r = spectrum.atoms()[pick_index(service_probs, next_uniform(service_gen))]
                             .rate;
        if (a > 0.0) {
            queue.push_back({t, a, a});
            backlog += a;
        }
        double cap = r;
        while (cap > 0.0 && !queue.empty()) {
            Batch& b = queue.front();
            if (b.remaining <= cap) {
                cap -= b.remaining;
                backlog -= b.remaining;
                record(b, t);
                queue.pop_front();
            } else {
                b.remaining -= cap;
                backlog -= cap;
                cap = 0.0;
            }
        }
        if (queue.empty()) backlog = 0.0;  // flush ulp residue of the subtractions

        lindley = std::max(0.0, lindley + a - r);
        if (std::abs(backlog - lindley) > 1e-6 * (1.0 + lindley))
            throw NumericalError("backlog tracking diverged from the Lindley recursion at "
                                 "period " + std::to_string(t));
        if (backlog > cfg.backlog_guard)
            throw InstabilityError("backlog " + std::to_string(backlog) +
                                   " exceeded the guard " + std::to_string(cfg.backlog_guard) +
                                   " at period " + std::to_string(t) +
                                   " (mean arrivals at or above mean service?)");
        if (t >= cfg.warmup) queue_time_sum += backlog;

        state = pick_index(proc.transition()[state], next_uniform(arrival_gen));
    }
    res.mean_queue = queue_time_sum / static_cast<double>(cfg.horizon - cfg.warmup);
    return res;
}

ValidationTable validate_ld(const MarkovArrivalProcess& proc, const SystemParams& params,
                            const PolicyMatrix& policy, const std::vector<double>& d_range,
                            const SimConfig& cfg, double theta_cap) {
    const ServiceSpectrum spectrum = enumerate_leaves(policy, params);
    const double theta_star = find_theta_star(proc, spectrum, theta_cap);
    if (theta_star == 0.0)
        throw InstabilityError("policy is unstable under this arrival process; "
                               "no delay exponent to validate");
    if (std::isinf(theta_star))
        throw std::invalid_argument("delay exponent is infinite (violation probability 0); "
                                    "nothing to validate");
    ValidationTable table;
    table.theta_star = theta_star;
    table.delta = proc.log_mgf(theta_star);

    const SimResult res = simulate(proc, spectrum, cfg);
    std::vector<double> thresholds = d_range;
    if (thresholds.empty())
        for (int d = 0; d <= std::max(res.max_delay(), 0); ++d)
            thresholds.push_back(static_cast<double>(d));

    for (double d : thresholds) {
        if (!(d >= 0.0)) throw std::invalid_argument("delay thresholds must be nonnegative");
        ValidationRow row;
        row.d = d;
        row.p_empirical = res.p_delay_empirical(d);
        row.p_ld = std::exp(-theta_star * table.delta * d);
        row.samples = res.samples;
        table.rows.push_back(row);
    }

    // Fit log p_empirical against d by least squares over the usable band.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    double largest_usable = -1.0;
    for (const auto& row : table.rows) {
        if (row.p_empirical < 1e-6 || row.p_empirical > 1e-2) continue;
        const double y = std::log(row.p_empirical);
        sx += row.d;
        sy += y;
        sxx += row.d * row.d;
        sxy += row.d * y;
        ++n;
        largest_usable = std::max(largest_usable, row.d);
    }
    const double denom = n * sxx - sx * sx;
    if (n >= 2 && denom > 0.0) {
        table.slope = (n * sxy - sx * sy) / denom;
        table.slope_valid = true;
    }
    table.tail_sufficient = largest_usable >= 0.0 && res.exceedances(largest_usable) >= 100;
    return table;
}

}  // namespace dsaqos
