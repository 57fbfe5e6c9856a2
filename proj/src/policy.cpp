#include "dsaqos/policy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dsaqos {

namespace {

constexpr double kProbSumTol = 1e-12;

[[noreturn]] void bad_index(int k, int s, int w) {
    throw std::out_of_range("policy entry (" + std::to_string(k) + "," + std::to_string(s) +
                            ") out of range for dimension " + std::to_string(w));
}

std::size_t cell_index(int k, int s) {
    return static_cast<std::size_t>(k) * (k + 1) / 2 + s;
}

}  // namespace

void SystemParams::validate() const {
    if (W < 1) throw std::invalid_argument("W must be at least 1");
    if (K < W)
        throw std::invalid_argument("K must be at least W (got K=" + std::to_string(K) +
                                    ", W=" + std::to_string(W) + ")");
    if (!(c > 0.0) || !std::isfinite(c))
        throw std::invalid_argument("c must be a positive real");
    if (!(p_idle > 0.0 && p_idle < 1.0))
        throw std::invalid_argument("p_idle must lie strictly between 0 and 1");
}

PolicyMatrix::PolicyMatrix(int W) : W_(W) {
    if (W < 1) throw std::invalid_argument("policy dimension must be at least 1");
    cells_.assign(cell_index(W - 1, W - 1) + 1, 0);
}

PolicyMatrix PolicyMatrix::all_ones(int W) {
    PolicyMatrix d(W);
    for (int k = 1; k < W; ++k)
        for (int s = 1; s <= k; ++s) d.cells_[cell_index(k, s)] = 1;
    return d;
}

PolicyMatrix PolicyMatrix::from_thresholds(const std::vector<int>& x, int W) {
    if (static_cast<int>(x.size()) != W - 1)
        throw std::invalid_argument("expected " + std::to_string(W - 1) +
                                    " thresholds, got " + std::to_string(x.size()));
    for (int j = 1; j < W; ++j) {
        const int z = x[j - 1];
        if (z < 1 || z > j + 1)
            throw std::invalid_argument("threshold for row " + std::to_string(j) +
                                        " must lie in [1, " + std::to_string(j + 1) +
                                        "], got " + std::to_string(z));
        // Once a row contains a 1, every later row must repeat it in-column.
        if (j >= 2 && x[j - 2] <= j - 1 && z > x[j - 2])
            throw std::invalid_argument("threshold for row " + std::to_string(j) +
                                        " may not exceed the previous row's " +
                                        std::to_string(x[j - 2]));
    }
    PolicyMatrix d(W);
    for (int j = 1; j < W; ++j)
        for (int s = x[j - 1]; s <= j; ++s) d.cells_[cell_index(j, s)] = 1;
    return d;
}

bool PolicyMatrix::at(int k, int s) const {
    if (k < 0 || k >= W_ || s < 0 || s > k) bad_index(k, s, W_);
    return cells_[cell_index(k, s)] != 0;
}

void PolicyMatrix::set(int k, int s, bool stop) {
    if (k < 0 || k >= W_ || s < 0 || s > k) bad_index(k, s, W_);
    if (s == 0 && stop)
        throw std::invalid_argument("column 0 is pinned to 0: with no idle channel found, "
                                    "sensing always continues");
    cells_[cell_index(k, s)] = stop ? 1 : 0;
}

bool PolicyMatrix::is_staircase() const {
    for (int k = 0; k < W_; ++k)
        for (int s = 0; s <= k; ++s) {
            if (!cells_[cell_index(k, s)]) continue;
            if (s < k && !cells_[cell_index(k, s + 1)]) return false;
            if (k < W_ - 1 && !cells_[cell_index(k + 1, s)]) return false;
        }
    return true;
}

std::vector<int> PolicyMatrix::zero_prefix_lengths() const {
    std::vector<int> x;
    x.reserve(W_ > 0 ? W_ - 1 : 0);
    for (int k = 1; k < W_; ++k) {
        int z = 0;
        while (z <= k && !cells_[cell_index(k, z)]) ++z;
        x.push_back(z);
    }
    return x;
}

std::uint64_t PolicyMatrix::bits() const {
    if (free_entry_count(W_) > 63)
        throw std::invalid_argument("bit encoding overflows 64 bits for W=" +
                                    std::to_string(W_));
    std::uint64_t b = 0;
    int pos = 0;
    for (int k = 1; k < W_; ++k)
        for (int s = 1; s <= k; ++s, ++pos)
            if (cells_[cell_index(k, s)]) b |= std::uint64_t{1} << pos;
    return b;
}

PolicyMatrix PolicyMatrix::from_bits(int W, std::uint64_t bits) {
    if (free_entry_count(W) > 63)
        throw std::invalid_argument("bit encoding overflows 64 bits for W=" +
                                    std::to_string(W));
    if (free_entry_count(W) < 64 && (bits >> free_entry_count(W)) != 0)
        throw std::invalid_argument("bit pattern has bits beyond the " +
                                    std::to_string(free_entry_count(W)) +
                                    " free entries of W=" + std::to_string(W));
    PolicyMatrix d(W);
    int pos = 0;
    for (int k = 1; k < W; ++k)
        for (int s = 1; s <= k; ++s, ++pos)
            d.cells_[cell_index(k, s)] = (bits >> pos) & 1u;
    return d;
}

std::string PolicyMatrix::to_text() const {
    std::string out;
    for (int k = 0; k < W_; ++k) {
        for (int s = 0; s <= k; ++s) {
            if (s > 0) out += ' ';
            out += cells_[cell_index(k, s)] ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

PolicyMatrix PolicyMatrix::from_text(const std::string& text) {
    std::vector<std::vector<int>> rows;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream toks(line);
        std::vector<int> row;
        std::string tok;
        while (toks >> tok) {
            if (tok == "0")
                row.push_back(0);
            else if (tok == "1")
                row.push_back(1);
            else
                throw std::invalid_argument("policy line " + std::to_string(lineno) +
                                            ": token '" + tok + "' is not 0 or 1");
        }
        const int k = static_cast<int>(rows.size());
        if (static_cast<int>(row.size()) != k + 1)
            throw std::invalid_argument("policy line " + std::to_string(lineno) + ": row " +
                                        std::to_string(k) + " needs " + std::to_string(k + 1) +
                                        " entries, got " + std::to_string(row.size()));
        if (row[0] != 0)
            throw std::invalid_argument("policy line " + std::to_string(lineno) +
                                        ": column 0 must be 0");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("policy text contains no rows");
    PolicyMatrix d(static_cast<int>(rows.size()));
    for (int k = 0; k < d.W_; ++k)
        for (int s = 0; s <= k; ++s) d.cells_[cell_index(k, s)] = rows[k][s];
    return d;
}

PolicyMatrix PolicyMatrix::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open policy file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return from_text(buf.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

void PolicyMatrix::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << to_text();
    if (!out) throw std::runtime_error("failed writing policy file '" + path + "'");
}

ServiceSpectrum::ServiceSpectrum(std::vector<RateAtom> atoms) {
    if (atoms.empty()) throw std::invalid_argument("service spectrum needs at least one atom");
    for (const auto& a : atoms) {
        if (!(a.rate >= 0.0) || !std::isfinite(a.rate))
            throw std::invalid_argument("spectrum rate must be finite and nonnegative");
        if (!(a.prob >= 0.0) || !std::isfinite(a.prob))
            throw std::invalid_argument("spectrum probability must be finite and nonnegative");
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const RateAtom& a, const RateAtom& b) { return a.rate < b.rate; });
    double total = 0.0;
    for (const auto& a : atoms) {
        if (a.prob == 0.0) continue;
        if (!atoms_.empty() && atoms_.back().rate == a.rate)
            atoms_.back().prob += a.prob;
        else
            atoms_.push_back(a);
        total += a.prob;
    }
    if (atoms_.empty()) throw std::invalid_argument("service spectrum has zero total mass");
    if (std::abs(total - 1.0) > kProbSumTol)
        throw std::invalid_argument("spectrum probabilities sum to " + std::to_string(total) +
                                    ", not 1");
}

double ServiceSpectrum::mean_rate() const {
    double mean = 0.0;
    for (const auto& a : atoms_) mean += a.prob * a.rate;
    return mean;
}

double ServiceSpectrum::log_mgf_neg(double theta) const {
    if (!(theta >= 0.0)) throw std::invalid_argument("log_mgf_neg requires theta >= 0");
    // log sum p_i exp(-theta r_i), max term factored out. The max term is the
    // smallest rate (atoms are sorted), so every exponent is <= 0.
    const double peak = -theta * atoms_.front().rate;
    double sum = 0.0;
    for (const auto& a : atoms_) sum += a.prob * std::exp(-theta * a.rate - peak);
    return peak + std::log(sum);
}

ServiceSpectrum enumerate_leaves(const PolicyMatrix& policy, const SystemParams& params) {
    params.validate();
    if (policy.dimension() != params.W)
        throw std::invalid_argument("policy dimension " + std::to_string(policy.dimension()) +
                                    " does not match W=" + std::to_string(params.W));
    const int W = params.W;
    const double p = params.p_idle;

    // Layer-by-layer walk over graph states (k, s). Leaf rates s*(K-k)*c are
    // merged on the integer key s*(K-k) so equal rates collapse exactly.
    std::map<long long, double> mass;
    std::vector<double> reach(static_cast<std::size_t>(W) + 1, 0.0);
    reach[0] = 1.0;  // state (0, 0)
    for (int k = 0; k < W; ++k) {
        std::vector<double> next(static_cast<std::size_t>(W) + 1, 0.0);
        for (int s = 0; s <= k; ++s) {
            const double q = reach[s];
            if (q == 0.0) continue;
            if (policy.at(k, s)) {
                mass[static_cast<long long>(s) * (params.K - k)] += q;
            } else {
                next[s + 1] += q * p;
                next[s] += q * (1.0 - p);
            }
        }
        reach.swap(next);
    }
    for (int s = 0; s <= W; ++s)
        if (reach[s] != 0.0) mass[static_cast<long long>(s) * (params.K - W)] += reach[s];

    std::vector<RateAtom> atoms;
    atoms.reserve(mass.size());
    for (const auto& [key, prob] : mass) atoms.push_back({params.c * key, prob});
    return ServiceSpectrum(std::move(atoms));
}

}  // namespace dsaqos
