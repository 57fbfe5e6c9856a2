#pragma once

#include <vector>

namespace dsaqos {

/// Markov-modulated arrival process: an irreducible M-state chain that
/// deposits a fixed, state-dependent amount of work into the queue each
/// period. Immutable after construction; all member functions are pure.
class MarkovArrivalProcess {
public:
    /// `transition` must be square, row-stochastic (rows sum to 1 within
    /// 1e-12, entries in [0,1]) and irreducible; `values` holds the
    /// nonnegative packets-per-period emitted in each state.
    MarkovArrivalProcess(std::vector<std::vector<double>> transition,
                         std::vector<double> values);

    int num_states() const noexcept { return static_cast<int>(values_.size()); }
    const std::vector<std::vector<double>>& transition() const noexcept { return transition_; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Unique stationary distribution pi (pi P = pi, sum 1, residual <= 1e-12).
    std::vector<double> stationary_distribution() const;

    /// Long-run mean packets per period, sum_m pi_m values_m.
    double mean_rate() const;

    /// Limiting log-moment generating function Lambda_A(theta), theta >= 0:
    /// the log of the Perron root of the tilted matrix P_{mn} exp(theta a_n).
    /// The largest value is factored out first so large theta cannot overflow.
    double log_mgf(double theta) const;

    /// Same chain with every per-state rate multiplied by alpha > 0.
    MarkovArrivalProcess scaled(double alpha) const;

private:
    std::vector<std::vector<double>> transition_;
    std::vector<double> values_;
};

}  // namespace dsaqos
