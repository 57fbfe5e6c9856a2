#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dsaqos/config.hpp"
#include "dsaqos/errors.hpp"
#include "dsaqos/ld.hpp"
#include "dsaqos/optimize.hpp"
#include "dsaqos/policy.hpp"
#include "dsaqos/sim.hpp"

namespace {

// All floating-point output carries 12 significant digits so CSV artifacts
// can be cross-checked against independent computations.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

/// Emit to the --out file when given, otherwise to stdout.
void deliver(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        write_text(out_path, content);
}

struct CommonArgs {
    std::string config_path;
    std::string algorithm;
    std::string policy_path;
    std::string out_path;
    double theta_cap = dsaqos::kDefaultThetaCap;
    std::optional<std::uint64_t> seed;
};

std::string qos_report(const dsaqos::QosResult& qos, double mean_service) {
    std::string s;
    s += "theta_star: " + fmt(qos.theta_star) + "\n";
    s += "delta: " + fmt(qos.delta) + "\n";
    s += "p_delay: " + fmt(qos.p_delay) + "\n";
    s += "mean_service: " + fmt(mean_service) + "\n";
    return s;
}

int run_optimize(const CommonArgs& args) {
    const dsaqos::ExperimentConfig cfg = dsaqos::parse_config(args.config_path);
    const dsaqos::Algorithm alg = dsaqos::algorithm_from_string(args.algorithm);
    const auto t0 = std::chrono::steady_clock::now();
    const dsaqos::OptimizationReport report =
        dsaqos::optimize(alg, cfg.arrivals, cfg.params, cfg.d_max, args.theta_cap);
    const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - t0;

    const std::string out = args.out_path.empty() ? "policy.txt" : args.out_path;
    report.best_policy.save(out);

    const double mean_service =
        dsaqos::enumerate_leaves(report.best_policy, cfg.params).mean_rate();
    std::cout << "algorithm: " << dsaqos::to_string(report.algorithm) << "\n"
              << qos_report(report.best_qos, mean_service)
              << "candidates_evaluated: " << report.candidates_evaluated << "\n"
              << "wall_time_s: " << fmt(wall.count()) << "\n"
              << "policy_file: " << out << "\n";
    return 0;
}

int run_sweep(const CommonArgs& args) {
    const dsaqos::ExperimentConfig cfg = dsaqos::parse_config(args.config_path);
    if (cfg.sweep.empty())
        throw std::invalid_argument("config has no [sweep] section; nothing to sweep");

    std::string csv = "alpha,algorithm,theta_star,delta,p_delay\n";
    for (double alpha : cfg.sweep) {
        const dsaqos::MarkovArrivalProcess scaled = cfg.arrivals.scaled(alpha);
        for (dsaqos::Algorithm alg : cfg.algorithms) {
            const dsaqos::OptimizationReport report =
                dsaqos::optimize(alg, scaled, cfg.params, cfg.d_max, args.theta_cap);
            csv += fmt(alpha);
            csv += ',';
            csv += dsaqos::to_string(alg);
            csv += ',';
            csv += fmt(report.best_qos.theta_star);
            csv += ',';
            csv += fmt(report.best_qos.delta);
            csv += ',';
            csv += fmt(report.best_qos.p_delay);
            csv += '\n';
        }
    }
    deliver(args.out_path, csv);
    return 0;
}

int run_simulate(const CommonArgs& args) {
    const dsaqos::ExperimentConfig cfg = dsaqos::parse_config(args.config_path);
    if (!cfg.sim)
        throw std::invalid_argument("config has no [simulate] section");
    dsaqos::SimConfig sim_cfg = *cfg.sim;
    if (args.seed) sim_cfg.seed = *args.seed;

    const dsaqos::PolicyMatrix policy = dsaqos::PolicyMatrix::load(args.policy_path);
    const dsaqos::ValidationTable table = dsaqos::validate_ld(
        cfg.arrivals, cfg.params, policy, cfg.sim_d_values, sim_cfg, args.theta_cap);

    std::string csv = "d,p_empirical,p_ld,samples\n";
    for (const auto& row : table.rows) {
        csv += fmt(row.d);
        csv += ',';
        csv += fmt(row.p_empirical);
        csv += ',';
        csv += fmt(row.p_ld);
        csv += ',';
        csv += std::to_string(row.samples);
        csv += '\n';
    }
    deliver(args.out_path, csv);
    if (!table.tail_sufficient)
        std::cerr << "WARNING: fewer than 100 exceedances at the largest usable threshold; "
                     "the empirical tail is statistically thin\n";
    return 0;
}

int run_evaluate(const CommonArgs& args) {
    const dsaqos::ExperimentConfig cfg = dsaqos::parse_config(args.config_path);
    const dsaqos::PolicyMatrix policy = dsaqos::PolicyMatrix::load(args.policy_path);
    const dsaqos::ServiceSpectrum spectrum = dsaqos::enumerate_leaves(policy, cfg.params);
    const dsaqos::QosResult qos = dsaqos::qos_from_theta(
        cfg.arrivals, dsaqos::find_theta_star(cfg.arrivals, spectrum, args.theta_cap),
        cfg.d_max);
    const std::string report = qos_report(qos, spectrum.mean_rate());
    std::cout << report;
    if (!args.out_path.empty()) write_text(args.out_path, report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sensing/transmission stopping-policy optimizer with large-deviations "
                 "delay-QoS analysis and queue simulation"};
    app.require_subcommand(1);
    CommonArgs args;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "experiment config file")
            ->required();
        sub->add_option("--theta-cap", args.theta_cap,
                        "root search declares theta* infinite beyond this bound");
    };

    CLI::App* cmd_optimize =
        app.add_subcommand("optimize", "search for the best policy and write it out");
    add_common(cmd_optimize);
    cmd_optimize->add_option("--algorithm", args.algorithm,
                             "exhaustive | staircase | greedy | dp_throughput | dp_theta")
        ->required();
    cmd_optimize->add_option("--out", args.out_path, "policy output path (default policy.txt)");

    CLI::App* cmd_sweep = app.add_subcommand(
        "sweep", "re-optimize across scaled arrival rates, emit CSV");
    add_common(cmd_sweep);
    cmd_sweep->add_option("--out", args.out_path, "CSV output path (default stdout)");

    CLI::App* cmd_simulate = app.add_subcommand(
        "simulate", "validate a policy's delay tail against the LD prediction, emit CSV");
    add_common(cmd_simulate);
    cmd_simulate->add_option("--policy", args.policy_path, "policy matrix file")->required();
    cmd_simulate->add_option("--out", args.out_path, "CSV output path (default stdout)");
    std::uint64_t seed_arg = 0;
    CLI::Option* seed_opt =
        cmd_simulate->add_option("--seed", seed_arg, "override the config's PRNG seed");

    CLI::App* cmd_evaluate = app.add_subcommand(
        "evaluate", "compute theta*, delta and the delay-violation estimate for one policy");
    add_common(cmd_evaluate);
    cmd_evaluate->add_option("--policy", args.policy_path, "policy matrix file")->required();
    cmd_evaluate->add_option("--out", args.out_path, "also write the report to this path");

    CLI11_PARSE(app, argc, argv);
    if (seed_opt->count() > 0) args.seed = seed_arg;

    try {
        if (cmd_optimize->parsed()) return run_optimize(args);
        if (cmd_sweep->parsed()) return run_sweep(args);
        if (cmd_simulate->parsed()) return run_simulate(args);
        return run_evaluate(args);
    } catch (const std::exception& e) {
        std::cerr << "ERROR: " << e.what() << "\n";
        return 1;
    }
}
