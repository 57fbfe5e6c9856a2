#pragma once

#include <cstddef>
#include <string>

#include "dsaqos/ld.hpp"

namespace dsaqos {

enum class Algorithm { exhaustive, staircase, greedy, dp_throughput, dp_theta };

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

/// Outcome of one policy-space search. candidates_evaluated counts full
/// policy evaluations (leaf expansion + root finding) performed.
struct OptimizationReport {
    PolicyMatrix best_policy;
    QosResult best_qos;
    std::size_t candidates_evaluated = 0;
    Algorithm algorithm = Algorithm::exhaustive;
};

/// Enumeration over all 2^(W(W-1)/2) policies is refused above this W.
inline constexpr int kExhaustiveMaxW = 7;

/// Try every lower-triangular binary matrix with zero first column and keep
/// the maximizer. Ties on theta* break toward higher mean service, then
/// toward the smaller canonical bit encoding, so the result does not depend
/// on evaluation order. Throws std::invalid_argument when W > kExhaustiveMaxW.
OptimizationReport exhaustive_search(const MarkovArrivalProcess& proc,
                                     const SystemParams& params, double d_max,
                                     double theta_cap = kDefaultThetaCap);

/// Enumerate every staircase matrix (via nonincreasing zero-prefix vectors,
/// all-zero rows allowed as a leading block) and keep the theta* maximizer
/// under the same total order as exhaustive_search.
OptimizationReport algorithm_a(const MarkovArrivalProcess& proc,
                               const SystemParams& params, double d_max,
                               double theta_cap = kDefaultThetaCap);

/// Greedy column scan: start from the all-ones staircase, walk columns
/// left to right and rows top to bottom, tentatively flip each reachable 1
/// to 0 and keep the flip only when theta* strictly improves; on the first
/// non-improvement revert and move to the next column.
OptimizationReport algorithm_b(const MarkovArrivalProcess& proc,
                               const SystemParams& params, double d_max,
                               double theta_cap = kDefaultThetaCap);

/// Backward-induction policy maximizing mean throughput:
/// V(W,s) = s(K-W)c, V(k,s) = max{s(K-k)c, p V(k+1,s+1) + (1-p) V(k+1,s)},
/// stopping on ties; column 0 forced to 0.
PolicyMatrix dp_throughput(const SystemParams& params);

/// Backward-induction policy minimizing E[exp(-theta S)] for a fixed theta
/// (exact: the objective is linear in leaf probabilities). Ties stop;
/// column 0 forced to 0.
PolicyMatrix min_laplace_policy(const SystemParams& params, double theta);

/// Fixed-point iteration on theta: start from theta* of the throughput
/// policy, repeatedly solve min E[exp(-theta_n S)] and set theta_{n+1} to
/// the solution's theta*, stopping when a policy repeats or max_rounds is
/// hit; returns the best policy seen. Falls back to the throughput policy
/// when that policy already has theta* = 0 (nothing is stable) or +inf.
OptimizationReport dp_theta(const MarkovArrivalProcess& proc, const SystemParams& params,
                            double d_max, int max_rounds = 50,
                            double theta_cap = kDefaultThetaCap);

/// Dispatch by algorithm name; dp_throughput is wrapped in a one-candidate
/// report so every algorithm yields the same report shape.
OptimizationReport optimize(Algorithm algorithm, const MarkovArrivalProcess& proc,
                            const SystemParams& params, double d_max,
                            double theta_cap = kDefaultThetaCap, int dp_theta_rounds = 50);

}  // namespace dsaqos
