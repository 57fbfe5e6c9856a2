#include "dsaqos/ld.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dsaqos {

namespace {
constexpr double kRelTol = 1e-10;
constexpr int kMaxBisect = 200;
}  // namespace

double qos_gap(const MarkovArrivalProcess& proc, const ServiceSpectrum& spectrum,
               double theta) {
    if (!(theta >= 0.0)) throw std::invalid_argument("qos_gap requires theta >= 0");
    if (theta == 0.0) return 0.0;
    return proc.log_mgf(theta) + spectrum.log_mgf_neg(theta);
}

double find_theta_star(const MarkovArrivalProcess& proc, const ServiceSpectrum& spectrum,
                       double theta_cap) {
    if (!(theta_cap > 0.0)) throw std::invalid_argument("theta_cap must be positive");
    if (proc.mean_rate() >= spectrum.mean_rate()) return 0.0;

    // h is convex with h(0) = 0 and negative slope at the origin, so it is
    // negative up to the root (if any) and positive beyond. Double the upper
    // end until it turns positive, then bisect.
    double lo = 0.0;
    double hi = 1.0;
    while (qos_gap(proc, spectrum, hi) <= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > theta_cap) return std::numeric_limits<double>::infinity();
    }
    for (int i = 0; i < kMaxBisect && (hi - lo) > kRelTol * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (qos_gap(proc, spectrum, mid) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

QosResult qos_from_theta(const MarkovArrivalProcess& proc, double theta_star, double d_max) {
    if (!(d_max > 0.0)) throw std::invalid_argument("d_max must be positive");
    QosResult r;
    r.theta_star = theta_star;
    if (theta_star == 0.0) {
        r.delta = 0.0;
        r.p_delay = 1.0;
    } else if (std::isinf(theta_star)) {
        r.delta = std::numeric_limits<double>::infinity();
        r.p_delay = 0.0;
    } else {
        r.delta = proc.log_mgf(theta_star);
        r.p_delay = std::exp(-theta_star * r.delta * d_max);
    }
    return r;
}

QosResult evaluate_policy(const MarkovArrivalProcess& proc, const SystemParams& params,
                          const PolicyMatrix& policy, double d_max, double theta_cap) {
    const ServiceSpectrum spectrum = enumerate_leaves(policy, params);
    return qos_from_theta(proc, find_theta_star(proc, spectrum, theta_cap), d_max);
}

}  // namespace dsaqos
