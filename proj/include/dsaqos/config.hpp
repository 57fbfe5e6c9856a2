#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dsaqos/arrival.hpp"
#include "dsaqos/optimize.hpp"
#include "dsaqos/policy.hpp"
#include "dsaqos/sim.hpp"

namespace dsaqos {

/// One experiment: system geometry, arrival chain, QoS target, and the
/// optional sweep/simulation blocks. See docs in README for the file grammar.
struct ExperimentConfig {
    SystemParams params;
    MarkovArrivalProcess arrivals;
    double d_max = 1.0;
    std::vector<double> sweep;             // empty = no sweep block
    std::vector<Algorithm> algorithms;     // order preserved from the file
    std::optional<SimConfig> sim;
    std::vector<double> sim_d_values;      // empty = derive from the run
};

/// Parse and validate a config file. Throws ConfigError with line/field
/// context on any violation.
ExperimentConfig parse_config(const std::string& path);

}  // namespace dsaqos
