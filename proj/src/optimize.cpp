#include "dsaqos/optimize.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dsaqos {

namespace {

struct Candidate {
    PolicyMatrix policy;
    QosResult qos;
    double mean_service = 0.0;
};

Candidate evaluate(const MarkovArrivalProcess& proc, const SystemParams& params,
                   PolicyMatrix policy, double d_max, double theta_cap) {
    const ServiceSpectrum spectrum = enumerate_leaves(policy, params);
    QosResult qos = qos_from_theta(proc, find_theta_star(proc, spectrum, theta_cap), d_max);
    return {std::move(policy), qos, spectrum.mean_rate()};
}

/// Canonical-encoding order: entries compared from (W-1,W-1) down to (1,1),
/// a 0 ranking below a 1. Equivalent to comparing PolicyMatrix::bits() but
/// with no 64-bit ceiling.
int encoding_compare(const PolicyMatrix& a, const PolicyMatrix& b) {
    for (int k = a.dimension() - 1; k >= 1; --k)
        for (int s = k; s >= 1; --s) {
            const int va = a.at(k, s) ? 1 : 0;
            const int vb = b.at(k, s) ? 1 : 0;
            if (va != vb) return va < vb ? -1 : 1;
        }
    return 0;
}

/// Total order used by the enumerating optimizers: theta* descending, then
/// mean service descending, then canonical encoding ascending. Makes the
/// reported maximizer independent of evaluation order.
bool improves(const Candidate& challenger, const Candidate& best) {
    if (challenger.qos.theta_star != best.qos.theta_star)
        return challenger.qos.theta_star > best.qos.theta_star;
    if (challenger.mean_service != best.mean_service)
        return challenger.mean_service > best.mean_service;
    return encoding_compare(challenger.policy, best.policy) < 0;
}

}  // namespace

const char* to_string(Algorithm a) {
    switch (a) {
        case Algorithm::exhaustive: return "exhaustive";
        case Algorithm::staircase: return "staircase";
        case Algorithm::greedy: return "greedy";
        case Algorithm::dp_throughput: return "dp_throughput";
        case Algorithm::dp_theta: return "dp_theta";
    }
    throw std::invalid_argument("unhandled algorithm enum value");
}

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "exhaustive") return Algorithm::exhaustive;
    if (name == "staircase") return Algorithm::staircase;
    if (name == "greedy") return Algorithm::greedy;
    if (name == "dp_throughput") return Algorithm::dp_throughput;
    if (name == "dp_theta") return Algorithm::dp_theta;
    throw std::invalid_argument("unknown algorithm '" + name +
                                "' (expected exhaustive, staircase, greedy, "
                                "dp_throughput, or dp_theta)");
}

OptimizationReport exhaustive_search(const MarkovArrivalProcess& proc,
                                     const SystemParams& params, double d_max,
                                     double theta_cap) {
    params.validate();
    if (params.W > kExhaustiveMaxW)
        throw std::invalid_argument("exhaustive search refused for W=" +
                                    std::to_string(params.W) + " (cap " +
                                    std::to_string(kExhaustiveMaxW) + "; 2^" +
                                    std::to_string(PolicyMatrix::free_entry_count(params.W)) +
                                    " candidates)");
    const std::uint64_t count = std::uint64_t{1}
                                << PolicyMatrix::free_entry_count(params.W);
    Candidate best = evaluate(proc, params, PolicyMatrix::from_bits(params.W, 0), d_max,
                              theta_cap);
    for (std::uint64_t b = 1; b < count; ++b) {
        Candidate cand = evaluate(proc, params, PolicyMatrix::from_bits(params.W, b), d_max,
                                  theta_cap);
        if (improves(cand, best)) best = std::move(cand);
    }
    return {std::move(best.policy), best.qos, count, Algorithm::exhaustive};
}

OptimizationReport algorithm_a(const MarkovArrivalProcess& proc, const SystemParams& params,
                               double d_max, double theta_cap) {
    params.validate();
    const int W = params.W;
    std::size_t evals = 0;
    std::optional<Candidate> best;
    auto consider = [&](PolicyMatrix m) {
        Candidate cand = evaluate(proc, params, std::move(m), d_max, theta_cap);
        ++evals;
        if (!best || improves(cand, *best)) best = std::move(cand);
    };

    // Walk all zero-prefix vectors z: row j may be fully zero (z_j = j+1)
    // only while no earlier row holds a 1; after the first 1 the prefixes
    // are nonincreasing. This reaches every staircase matrix exactly once.
    std::vector<int> z(W - 1);
    std::function<void(int)> walk = [&](int j) {
        if (j == W) {
            consider(PolicyMatrix::from_thresholds(z, W));
            return;
        }
        const bool prev_has_one = j >= 2 && z[j - 2] <= j - 1;
        if (prev_has_one) {
            for (int v = 1; v <= z[j - 2]; ++v) {
                z[j - 1] = v;
                walk(j + 1);
            }
        } else {
            for (int v = 1; v <= j + 1; ++v) {  // v = j+1 keeps the row all zero
                z[j - 1] = v;
                walk(j + 1);
            }
        }
    };
    if (W == 1)
        consider(PolicyMatrix(1));
    else
        walk(1);
    return {std::move(best->policy), best->qos, evals, Algorithm::staircase};
}

OptimizationReport algorithm_b(const MarkovArrivalProcess& proc, const SystemParams& params,
                               double d_max, double theta_cap) {
    params.validate();
    const int W = params.W;
    PolicyMatrix d = PolicyMatrix::all_ones(W);
    Candidate best = evaluate(proc, params, d, d_max, theta_cap);
    std::size_t evals = 1;
    for (int j = 1; j < W; ++j) {
        for (int i = j; i < W; ++i) {
            // A surviving 1 left of column j pins this row and everything
            // below it (column scans stop at the first reverted row).
            bool pinned = false;
            for (int k = 1; k < j && !pinned; ++k) pinned = d.at(i, k);
            if (pinned) break;
            d.set(i, j, false);
            Candidate cand = evaluate(proc, params, d, d_max, theta_cap);
            ++evals;
            if (cand.qos.theta_star > best.qos.theta_star) {
                best = std::move(cand);
            } else {
                d.set(i, j, true);
                break;
            }
        }
    }
    return {std::move(d), best.qos, evals, Algorithm::greedy};
}

PolicyMatrix dp_throughput(const SystemParams& params) {
    params.validate();
    const int W = params.W;
    const double p = params.p_idle;
    PolicyMatrix d(W);
    // v[s] holds the value of state (k+1, s) while filling layer k.
    std::vector<double> v(static_cast<std::size_t>(W) + 1);
    for (int s = 0; s <= W; ++s) v[s] = static_cast<double>(s) * (params.K - W) * params.c;
    for (int k = W - 1; k >= 0; --k) {
        std::vector<double> cur(static_cast<std::size_t>(k) + 1);
        for (int s = 0; s <= k; ++s) {
            const double stop = static_cast<double>(s) * (params.K - k) * params.c;
            const double cont = p * v[s + 1] + (1.0 - p) * v[s];
            if (s >= 1 && stop >= cont) {  // ties stop; column 0 pinned
                d.set(k, s, true);
                cur[s] = stop;
            } else {
                cur[s] = cont;
            }
        }
        v = std::move(cur);
    }
    return d;
}

PolicyMatrix min_laplace_policy(const SystemParams& params, double theta) {
    params.validate();
    if (!(theta >= 0.0) || !std::isfinite(theta))
        throw std::invalid_argument("theta must be finite and nonnegative");
    const int W = params.W;
    const double p = params.p_idle;
    PolicyMatrix d(W);
    std::vector<double> v(static_cast<std::size_t>(W) + 1);
    for (int s = 0; s <= W; ++s)
        v[s] = std::exp(-theta * s * (params.K - W) * params.c);
    for (int k = W - 1; k >= 0; --k) {
        std::vector<double> cur(static_cast<std::size_t>(k) + 1);
        for (int s = 0; s <= k; ++s) {
            const double stop = std::exp(-theta * s * (params.K - k) * params.c);
            const double cont = p * v[s + 1] + (1.0 - p) * v[s];
            if (s >= 1 && stop <= cont) {  // ties stop; column 0 pinned
                d.set(k, s, true);
                cur[s] = stop;
            } else {
                cur[s] = cont;
            }
        }
        v = std::move(cur);
    }
    return d;
}

OptimizationReport dp_theta(const MarkovArrivalProcess& proc, const SystemParams& params,
                            double d_max, int max_rounds, double theta_cap) {
    params.validate();
    if (max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
    std::size_t evals = 0;
    Candidate best = evaluate(proc, params, dp_throughput(params), d_max, theta_cap);
    ++evals;
    double theta = best.qos.theta_star;
    if (theta > 0.0 && std::isfinite(theta)) {
        std::set<std::string> seen{best.policy.to_text()};
        for (int round = 0; round < max_rounds; ++round) {
            PolicyMatrix next = min_laplace_policy(params, theta);
            if (!seen.insert(next.to_text()).second) break;  // fixed point or cycle
            Candidate cand = evaluate(proc, params, std::move(next), d_max, theta_cap);
            ++evals;
            if (improves(cand, best)) best = cand;
            if (cand.qos.theta_star == 0.0 || std::isinf(cand.qos.theta_star)) break;
            theta = cand.qos.theta_star;
        }
    }
    return {std::move(best.policy), best.qos, evals, Algorithm::dp_theta};
}

OptimizationReport optimize(Algorithm algorithm, const MarkovArrivalProcess& proc,
                            const SystemParams& params, double d_max, double theta_cap,
                            int dp_theta_rounds) {
    switch (algorithm) {
        case Algorithm::exhaustive:
            return exhaustive_search(proc, params, d_max, theta_cap);
        case Algorithm::staircase:
            return algorithm_a(proc, params, d_max, theta_cap);
        case Algorithm::greedy:
            return algorithm_b(proc, params, d_max, theta_cap);
        case Algorithm::dp_throughput: {
            Candidate cand = evaluate(proc, params, dp_throughput(params), d_max, theta_cap);
            return {std::move(cand.policy), cand.qos, 1, Algorithm::dp_throughput};
        }
        case Algorithm::dp_theta:
            return dp_theta(proc, params, d_max, dp_theta_rounds, theta_cap);
    }
    throw std::invalid_argument("unhandled algorithm enum value");
}

}  // namespace dsaqos
