#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace dsaqos {

/// Physical sensing/transmission configuration: W channels sensed one per
/// slot, K slots in a period, c packets per channel per slot, and the
/// probability that a sensed channel is idle.
struct SystemParams {
    int W = 1;
    int K = 1;
    double c = 1.0;
    double p_idle = 0.5;

    /// Throws std::invalid_argument unless K >= W >= 1, c > 0, 0 < p_idle < 1.
    void validate() const;
};

/// Lower-triangular binary stop/continue matrix. Entry (k, s), defined for
/// 0 <= s <= k <= W-1, is the decision after sensing k channels and finding
/// s of them idle: 1 = stop sensing and transmit, 0 = keep sensing.
/// Column 0 is pinned to 0 (with nothing discovered, sensing continues).
class PolicyMatrix {
public:
    /// All-zeros policy of dimension W (never stop before the last slot).
    explicit PolicyMatrix(int W);

    /// Column 0 zero, every other defined entry 1 (stop as soon as
    /// anything idle has been found).
    static PolicyMatrix all_ones(int W);

    /// Staircase matrix from zero-prefix lengths: row j (j = 1..W-1) gets
    /// its first x[j-1] entries zeroed and the rest set to 1. Requires
    /// 1 <= x[j-1] <= j+1, and once a row holds a 1 (x[j-1] <= j) the
    /// prefixes must be nonincreasing from there on.
    static PolicyMatrix from_thresholds(const std::vector<int>& x, int W);

    int dimension() const noexcept { return W_; }
    bool at(int k, int s) const;
    void set(int k, int s, bool stop);

    /// True iff every 1 forces 1s to its right in the row (up to the
    /// diagonal) and below it in the column.
    bool is_staircase() const;

    /// Leading-zero count of each row 1..W-1.
    std::vector<int> zero_prefix_lengths() const;

    /// Canonical encoding of the free entries (1 <= s <= k), row-major,
    /// bit 0 = entry (1,1). Only valid while W*(W-1)/2 <= 63.
    std::uint64_t bits() const;
    static PolicyMatrix from_bits(int W, std::uint64_t bits);
    static int free_entry_count(int W) noexcept { return W * (W - 1) / 2; }

    /// Text format: W lines, line k holds k+1 space-separated 0/1 tokens;
    /// lines starting with '#' and blank lines are ignored on input.
    std::string to_text() const;
    static PolicyMatrix from_text(const std::string& text);
    static PolicyMatrix load(const std::string& path);
    void save(const std::string& path) const;

    friend bool operator==(const PolicyMatrix&, const PolicyMatrix&) = default;

private:
    int W_ = 0;
    std::vector<std::uint8_t> cells_;  // index k*(k+1)/2 + s
};

/// One atom of the per-period service distribution.
struct RateAtom {
    double rate = 0.0;  // packets per period
    double prob = 0.0;
};

/// Discrete distribution of per-period transmission rates induced by a
/// policy. Atoms are kept sorted by rate with duplicates merged;
/// probabilities are positive and sum to 1 within 1e-12.
class ServiceSpectrum {
public:
    explicit ServiceSpectrum(std::vector<RateAtom> atoms);

    const std::vector<RateAtom>& atoms() const noexcept { return atoms_; }
    double mean_rate() const;
    double min_rate() const { return atoms_.front().rate; }
    double max_rate() const { return atoms_.back().rate; }

    /// log sum_i p_i exp(-theta r_i) for theta >= 0, in log-sum-exp form.
    /// Nonpositive everywhere, zero at theta = 0.
    double log_mgf_neg(double theta) const;

private:
    std::vector<RateAtom> atoms_;
};

/// Expand a policy into its service spectrum by walking the decision graph
/// over states (k, s) with accumulated path probabilities: from a
/// non-terminal state the walk branches to (k+1, s+1) with probability
/// p_idle and to (k+1, s) otherwise; a state with entry 1, or any state at
/// k = W, is a leaf with rate s*(K-k)*c.
ServiceSpectrum enumerate_leaves(const PolicyMatrix& policy, const SystemParams& params);

}  // namespace dsaqos
