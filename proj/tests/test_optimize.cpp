#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "dsaqos/optimize.hpp"
#include "helpers.hpp"

using dsaqos::Algorithm;
using dsaqos::MarkovArrivalProcess;
using dsaqos::PolicyMatrix;
using dsaqos::ServiceSpectrum;
using dsaqos::SystemParams;

namespace {

/// Brute-force maximum of E[S] over every policy.
double brute_max_mean(const SystemParams& params) {
    double best = -1.0;
    const std::uint64_t total = std::uint64_t{1} << PolicyMatrix::free_entry_count(params.W);
    for (std::uint64_t b = 0; b < total; ++b)
        best = std::max(best,
                        enumerate_leaves(PolicyMatrix::from_bits(params.W, b), params)
                            .mean_rate());
    return best;
}

double laplace_value(const ServiceSpectrum& sp, double theta) {
    double v = 0.0;
    for (const auto& a : sp.atoms()) v += a.prob * std::exp(-theta * a.rate);
    return v;
}

/// Brute-force minimum of E[e^{-theta S}] over every policy.
double brute_min_laplace(const SystemParams& params, double theta) {
    double best = std::numeric_limits<double>::infinity();
    const std::uint64_t total = std::uint64_t{1} << PolicyMatrix::free_entry_count(params.W);
    for (std::uint64_t b = 0; b < total; ++b)
        best = std::min(best, laplace_value(
                                  enumerate_leaves(PolicyMatrix::from_bits(params.W, b), params),
                                  theta));
    return best;
}

}  // namespace

TEST_CASE("algorithm names round trip") {
    for (Algorithm a : {Algorithm::exhaustive, Algorithm::staircase, Algorithm::greedy,
                        Algorithm::dp_throughput, Algorithm::dp_theta})
        CHECK(dsaqos::algorithm_from_string(dsaqos::to_string(a)) == a);
    CHECK_THROWS_AS(dsaqos::algorithm_from_string("simulated_annealing"),
                    std::invalid_argument);
}

TEST_CASE("exhaustive search counts and cap") {
    const MarkovArrivalProcess proc({{1.0}}, {0.4});

    CHECK(dsaqos::exhaustive_search(proc, {1, 2, 1.0, 0.5}, 1.0).candidates_evaluated == 1);
    CHECK(dsaqos::exhaustive_search(proc, {2, 3, 1.0, 0.5}, 1.0).candidates_evaluated == 2);
    CHECK(dsaqos::exhaustive_search(proc, {4, 6, 1.0, 0.5}, 1.0).candidates_evaluated == 64);

    CHECK_THROWS_AS(dsaqos::exhaustive_search(proc, {8, 8, 1.0, 0.5}, 1.0),
                    std::invalid_argument);
}

TEST_CASE("staircase enumeration counts the full family") {
    const MarkovArrivalProcess proc({{1.0}}, {0.4});
    CHECK(dsaqos::algorithm_a(proc, {1, 2, 1.0, 0.5}, 1.0).candidates_evaluated == 1);
    CHECK(dsaqos::algorithm_a(proc, {2, 3, 1.0, 0.5}, 1.0).candidates_evaluated == 2);
    CHECK(dsaqos::algorithm_a(proc, {3, 4, 1.0, 0.5}, 1.0).candidates_evaluated == 4);
    CHECK(dsaqos::algorithm_a(proc, {4, 5, 1.0, 0.5}, 1.0).candidates_evaluated == 8);
    CHECK(dsaqos::algorithm_a(proc, {5, 6, 1.0, 0.5}, 1.0).candidates_evaluated == 16);
    // strictly fewer candidates than exhaustive enumeration from W=3 on
    for (int w = 3; w <= 5; ++w)
        CHECK((std::uint64_t{1} << PolicyMatrix::free_entry_count(w)) >
              dsaqos::algorithm_a(proc, {w, w + 2, 1.0, 0.5}, 1.0).candidates_evaluated);
}

TEST_CASE("staircase and greedy searches match the exhaustive oracle") {
    std::mt19937_64 rng(314);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        const int w = 3 + static_cast<int>(rng() % 3);
        const SystemParams params = testutil::random_params(rng, w);
        const double ceiling =
            enumerate_leaves(dsaqos::dp_throughput(params), params).mean_rate();
        const MarkovArrivalProcess proc =
            testutil::random_arrivals(rng, 1 + static_cast<int>(rng() % 3),
                                      std::max(ceiling, 1e-6), 0.3 + 0.6 * u(rng));

        const auto exh = dsaqos::exhaustive_search(proc, params, 2.0);
        const auto stair = dsaqos::algorithm_a(proc, params, 2.0);
        const auto greedy = dsaqos::algorithm_b(proc, params, 2.0);

        CHECK(testutil::rel_close(stair.best_qos.theta_star, exh.best_qos.theta_star, 1e-9));
        CHECK(testutil::rel_close(greedy.best_qos.theta_star, stair.best_qos.theta_star,
                                  1e-9));

        // the exhaustive optimum is staircase, or tied with one
        CHECK((exh.best_policy.is_staircase() ||
               std::abs(exh.best_qos.theta_star - stair.best_qos.theta_star) <=
                   1e-10 * std::max(1.0, std::abs(exh.best_qos.theta_star))));
        CHECK(stair.best_policy.is_staircase());
        CHECK(greedy.best_policy.is_staircase());

        // greedy stays within its evaluation budget
        CHECK(greedy.candidates_evaluated <=
              static_cast<std::size_t>(PolicyMatrix::free_entry_count(w)) + 1);

        // baselines never beat the staircase optimum
        const auto tp = dsaqos::optimize(Algorithm::dp_throughput, proc, params, 2.0);
        const auto fp = dsaqos::dp_theta(proc, params, 2.0);
        CHECK(stair.best_qos.theta_star >= tp.best_qos.theta_star - 1e-12);
        CHECK(stair.best_qos.theta_star >= fp.best_qos.theta_star - 1e-12);
    }
}

TEST_CASE("greedy on forced and no-improvement instances") {
    const MarkovArrivalProcess proc({{1.0}}, {0.2});

    const auto forced = dsaqos::algorithm_b(proc, {1, 3, 1.0, 0.5}, 1.0);
    CHECK(forced.best_policy == PolicyMatrix(1));
    CHECK(forced.candidates_evaluated == 1);

    // W=2, K=2: the all-zeros alternative transmits nothing, so the flip
    // can never improve and the initialization survives.
    const auto keep = dsaqos::algorithm_b(proc, {2, 2, 1.0, 0.5}, 1.0);
    CHECK(keep.best_policy == PolicyMatrix::all_ones(2));
    CHECK(keep.best_qos.theta_star > 0.0);
}

TEST_CASE("throughput DP") {
    SUBCASE("near-deterministic idle channels stop at the area maximizer") {
        const SystemParams params{10, 10, 1.0, 0.999};
        const PolicyMatrix d = dsaqos::dp_throughput(params);
        CHECK(d.at(5, 5));
        CHECK_FALSE(d.at(4, 4));
        CHECK_FALSE(d.at(3, 3));
        CHECK(enumerate_leaves(d, params).mean_rate() >= 24.5);
    }

    SUBCASE("W=1 is forced") {
        CHECK(dsaqos::dp_throughput({1, 4, 1.0, 0.3}) == PolicyMatrix(1));
    }

    SUBCASE("matches the brute-force maximum of E[S]") {
        std::mt19937_64 rng(1618);
        for (int rep = 0; rep < 10; ++rep) {
            const int w = 2 + static_cast<int>(rng() % 4);
            const SystemParams params = testutil::random_params(rng, w);
            const double dp = enumerate_leaves(dsaqos::dp_throughput(params), params)
                                  .mean_rate();
            const double brute = brute_max_mean(params);
            CHECK(std::abs(dp - brute) <= 1e-12 * std::max(1.0, brute));
        }
    }
}

TEST_CASE("fixed-theta inner DP is exact") {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> theta_dist(0.01, 3.0);
    for (int rep = 0; rep < 10; ++rep) {
        const int w = 2 + static_cast<int>(rng() % 4);
        const SystemParams params = testutil::random_params(rng, w);
        const double theta = theta_dist(rng);
        const double dp =
            laplace_value(enumerate_leaves(dsaqos::min_laplace_policy(params, theta), params),
                          theta);
        const double brute = brute_min_laplace(params, theta);
        CHECK(std::abs(dp - brute) <= 1e-12);
    }
    CHECK_THROWS_AS(dsaqos::min_laplace_policy({2, 3, 1.0, 0.5},
                                               std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
    CHECK_THROWS_AS(dsaqos::min_laplace_policy({2, 3, 1.0, 0.5}, -1.0),
                    std::invalid_argument);
}

TEST_CASE("theta fixed-point baseline") {
    SUBCASE("unstable instances collapse to the throughput policy") {
        const MarkovArrivalProcess heavy({{1.0}}, {100.0});
        const SystemParams params{3, 5, 1.0, 0.5};
        const auto report = dsaqos::dp_theta(heavy, params, 2.0);
        CHECK(report.best_qos.theta_star == 0.0);
        CHECK(report.best_qos.p_delay == 1.0);
        CHECK(report.best_policy == dsaqos::dp_throughput(params));
    }

    SUBCASE("W=1 is forced") {
        const MarkovArrivalProcess proc({{1.0}}, {0.3});
        const auto report = dsaqos::dp_theta(proc, {1, 3, 1.0, 0.5}, 1.0);
        CHECK(report.best_policy == PolicyMatrix(1));
    }

    SUBCASE("there are instances the fixed-theta policy solves strictly suboptimally") {
        // Searched-for instance. A round budget of 1 yields the policy that
        // minimizes E[e^{-theta S}] at the throughput policy's exponent --
        // the classic DP baseline -- and that policy's own exponent falls
        // ~1.4% short of the optimum. (Left to iterate, the exponent
        // sequence is monotone nondecreasing and a repeat certifies global
        // optimality, so the full-budget run recovers the optimum; the
        // quality of the baseline is a function of the round budget.)
        const SystemParams params{5, 5, 1.0, 0.54};
        const MarkovArrivalProcess proc({{1.0}}, {2.64});
        const auto fp = dsaqos::dp_theta(proc, params, 2.0, 1);
        const auto stair = dsaqos::algorithm_a(proc, params, 2.0);
        CHECK(stair.best_qos.theta_star >
              fp.best_qos.theta_star +
                  1e-3 * std::max(1.0, std::abs(stair.best_qos.theta_star)));

        // With the default budget the iteration reaches the optimum here.
        const auto converged = dsaqos::dp_theta(proc, params, 2.0);
        CHECK(converged.best_qos.theta_star ==
              doctest::Approx(stair.best_qos.theta_star).epsilon(1e-12));
    }
}

TEST_CASE("dispatcher matches the direct entry points") {
    std::mt19937_64 rng(555);
    const SystemParams params{4, 7, 1.0, 0.5};
    const MarkovArrivalProcess proc = testutil::random_arrivals(rng, 2, 8.0, 0.6);
    for (Algorithm a : {Algorithm::exhaustive, Algorithm::staircase, Algorithm::greedy,
                        Algorithm::dp_throughput, Algorithm::dp_theta}) {
        const auto via_dispatch = dsaqos::optimize(a, proc, params, 2.0);
        CHECK(via_dispatch.algorithm == a);
        const auto again = dsaqos::optimize(a, proc, params, 2.0);
        CHECK(via_dispatch.best_policy == again.best_policy);
        CHECK(via_dispatch.best_qos.theta_star == again.best_qos.theta_star);
        CHECK(via_dispatch.candidates_evaluated == again.candidates_evaluated);
    }
}
