#pragma once

#include "dsaqos/arrival.hpp"
#include "dsaqos/policy.hpp"

namespace dsaqos {

/// Bracketing bound beyond which the root search declares theta* = +inf.
inline constexpr double kDefaultThetaCap = 1e6;

/// Large-deviations figures of merit for one (arrivals, policy) pair.
/// theta_star == 0 marks an unstable instance (p_delay == 1);
/// theta_star == +inf means the violation probability vanishes.
struct QosResult {
    double theta_star = 0.0;
    double delta = 0.0;    // Lambda_A(theta_star)
    double p_delay = 1.0;  // exp(-theta_star * delta * d_max)
};

/// h(theta) = Lambda_A(theta) + log sum_i p_i exp(-theta r_i).
/// Convex, h(0) = 0, slope at the origin = mean arrivals - mean service.
double qos_gap(const MarkovArrivalProcess& proc, const ServiceSpectrum& spectrum,
               double theta);

/// Positive root of h, found by doubling the upper bracket from 1 and
/// bisecting to 1e-10 relative width. Returns 0 when the instance is
/// unstable (mean arrivals >= mean service) and +inf when no bracket is
/// found below theta_cap.
double find_theta_star(const MarkovArrivalProcess& proc, const ServiceSpectrum& spectrum,
                       double theta_cap = kDefaultThetaCap);

/// QosResult for a known root; evaluates delta only for finite positive roots.
QosResult qos_from_theta(const MarkovArrivalProcess& proc, double theta_star,
                         double d_max);

/// enumerate_leaves + find_theta_star + the delay-violation approximation
/// exp(-theta* delta d_max), with d_max counted in periods.
QosResult evaluate_policy(const MarkovArrivalProcess& proc, const SystemParams& params,
                          const PolicyMatrix& policy, double d_max,
                          double theta_cap = kDefaultThetaCap);

}  // namespace dsaqos
