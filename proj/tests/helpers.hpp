#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "dsaqos/arrival.hpp"
#include "dsaqos/policy.hpp"

namespace testutil {

/// |a - b| <= tol * max(1, |b|), with two infinities of the same sign
/// counting as equal.
inline bool rel_close(double a, double b, double tol) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

/// Random irreducible row-stochastic matrix: uniform positive rows,
/// normalized. Positivity makes irreducibility automatic.
inline std::vector<std::vector<double>> random_chain(std::mt19937_64& rng, int m) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<std::vector<double>> p(m, std::vector<double>(m));
    for (int i = 0; i < m; ++i) {
        double sum = 0.0;
        for (int j = 0; j < m; ++j) sum += (p[i][j] = u(rng));
        for (int j = 0; j < m; ++j) p[i][j] /= sum;
    }
    return p;
}

/// Arrival process over a random chain whose mean rate is `load` times the
/// ceiling `service_mean`, so stability (or lack of it) is by construction.
inline dsaqos::MarkovArrivalProcess random_arrivals(std::mt19937_64& rng, int m,
                                                    double service_mean, double load) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto transition = random_chain(rng, m);
    std::vector<double> values(m);
    for (int i = 0; i < m; ++i) values[i] = u(rng);
    dsaqos::MarkovArrivalProcess proc(transition, values);
    const double mean = proc.mean_rate();
    if (mean <= 0.0) {
        for (auto& v : values) v += 0.1;
        proc = dsaqos::MarkovArrivalProcess(std::move(transition), values);
    }
    return proc.scaled(load * service_mean / proc.mean_rate());
}

/// Uniformly random policy matrix of dimension W (free entries i.i.d. fair
/// bits). Valid for any W.
inline dsaqos::PolicyMatrix random_policy(std::mt19937_64& rng, int w) {
    dsaqos::PolicyMatrix d(w);
    std::bernoulli_distribution bit(0.5);
    for (int k = 1; k < w; ++k)
        for (int s = 1; s <= k; ++s) d.set(k, s, bit(rng));
    return d;
}

inline dsaqos::SystemParams random_params(std::mt19937_64& rng, int w) {
    std::uniform_int_distribution<int> kk(w, 2 * w);
    std::uniform_real_distribution<double> pp(0.2, 0.8);
    return {w, kk(rng), 1.0, pp(rng)};
}

}  // namespace testutil
