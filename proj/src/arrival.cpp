#include "dsaqos/arrival.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dsaqos/errors.hpp"

namespace dsaqos {

namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kResidualTol = 1e-12;

// Single communicating class <=> the positive-entry digraph is strongly
// connected. Warshall closure; M is small.
bool strongly_connected(const std::vector<std::vector<double>>& p) {
    const int m = static_cast<int>(p.size());
    std::vector<std::vector<char>> reach(m, std::vector<char>(m, 0));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) reach[i][j] = (i == j || p[i][j] > 0.0) ? 1 : 0;
    for (int k = 0; k < m; ++k)
        for (int i = 0; i < m; ++i)
            if (reach[i][k])
                for (int j = 0; j < m; ++j)
                    if (reach[k][j]) reach[i][j] = 1;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (!reach[i][j]) return false;
    return true;
}

}  // namespace

MarkovArrivalProcess::MarkovArrivalProcess(std::vector<std::vector<double>> transition,
                                           std::vector<double> values)
    : transition_(std::move(transition)), values_(std::move(values)) {
    const auto m = transition_.size();
    if (m == 0) throw std::invalid_argument("arrival chain needs at least one state");
    if (values_.size() != m)
        throw std::invalid_argument("values length " + std::to_string(values_.size()) +
                                    " does not match " + std::to_string(m) + " states");
    for (std::size_t i = 0; i < m; ++i) {
        const auto& row = transition_[i];
        if (row.size() != m)
            throw std::invalid_argument("transition row " + std::to_string(i) +
                                        " has " + std::to_string(row.size()) +
                                        " entries, expected " + std::to_string(m));
        double sum = 0.0;
        for (double x : row) {
            if (!(x >= 0.0 && x <= 1.0))
                throw std::invalid_argument("transition row " + std::to_string(i) +
                                            " has an entry outside [0,1]");
            sum += x;
        }
        if (std::abs(sum - 1.0) > kRowSumTol)
            throw std::invalid_argument("transition row " + std::to_string(i) +
                                        " sums to " + std::to_string(sum) + ", not 1");
    }
    for (std::size_t i = 0; i < m; ++i)
        if (!(values_[i] >= 0.0) || !std::isfinite(values_[i]))
            throw std::invalid_argument("arrival value for state " + std::to_string(i) +
                                        " must be finite and nonnegative");
    if (!strongly_connected(transition_))
        throw std::invalid_argument("transition matrix is not irreducible");
}

std::vector<double> MarkovArrivalProcess::stationary_distribution() const {
    const int m = num_states();
    // Solve (P^T - I) pi = 0 with the last equation replaced by sum pi = 1.
    Eigen::MatrixXd a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = transition_[j][i] - (i == j ? 1.0 : 0.0);
    for (int j = 0; j < m; ++j) a(m - 1, j) = 1.0;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    b(m - 1) = 1.0;
    Eigen::VectorXd pi = a.colPivHouseholderQr().solve(b);

    double residual = 0.0;
    for (int j = 0; j < m; ++j) {
        double col = 0.0;
        for (int i = 0; i < m; ++i) col += pi(i) * transition_[i][j];
        residual = std::max(residual, std::abs(col - pi(j)));
    }
    double sum = pi.sum();
    residual = std::max(residual, std::abs(sum - 1.0));
    if (!(residual <= kResidualTol))
        throw NumericalError("stationary distribution residual " + std::to_string(residual) +
                             " exceeds " + std::to_string(kResidualTol));

    std::vector<double> out(m);
    for (int i = 0; i < m; ++i) out[i] = std::max(pi(i), 0.0);
    return out;
}

double MarkovArrivalProcess::mean_rate() const {
    const auto pi = stationary_distribution();
    double mean = 0.0;
    for (int i = 0; i < num_states(); ++i) mean += pi[i] * values_[i];
    return mean;
}

double MarkovArrivalProcess::log_mgf(double theta) const {
    if (!(theta >= 0.0))
        throw std::invalid_argument("log_mgf requires theta >= 0");
    const int m = num_states();
    const double a_max = *std::max_element(values_.begin(), values_.end());
    // Tilt with the largest value factored out: entries stay <= 1 for any theta.
    Eigen::MatrixXd tilted(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            tilted(i, j) = transition_[i][j] * std::exp(theta * (values_[j] - a_max));
    Eigen::EigenSolver<Eigen::MatrixXd> solver(tilted, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success)
        throw NumericalError("eigenvalue solve failed on the tilted arrival matrix");
    const double rho = solver.eigenvalues().cwiseAbs().maxCoeff();
    return theta * a_max + std::log(rho);
}

MarkovArrivalProcess MarkovArrivalProcess::scaled(double alpha) const {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("scale factor must be a positive real");
    std::vector<double> scaled_values(values_);
    for (double& v : scaled_values) v *= alpha;
    return {transition_, std::move(scaled_values)};
}

}  // namespace dsaqos
