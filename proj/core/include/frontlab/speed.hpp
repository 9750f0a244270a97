#pragma once

#include <vector>

#include "frontlab/simulate.hpp"

namespace frontlab::speed {

/// Level-set front positions x_k = sup{x : u(t_k, x) >= level} with the
/// co-moving frame shift folded in.
struct FrontTrack {
    std::vector<double> t;
    std::vector<double> x;
    double level = 0.5;
};

FrontTrack track_front(const std::vector<sim::SampleRow>& series, double level);

enum class SpeedMethod { ratio_tail, slope_fit };

struct SpeedEstimate {
    double c_hat = 0.0;        // the slope fit (less biased by the x-intercept)
    double ci_half_width = 0.0;
    double slope_fit = 0.0;
    double ratio_tail = 0.0;
    double t_lo = 0.0, t_hi = 0.0;
    int samples = 0;
};

/// Least-squares slope of x(t) over the late window [t_lo_fraction * t_max,
/// t_max], with a 2-sigma band inflated for residual autocorrelation, plus
/// the mean of x/t over the same window. Requires >= 20 samples in window.
SpeedEstimate estimate_speed(const FrontTrack& track, double t_lo_fraction = 0.5);

struct SpeedExcess {
    double value = 0.0;
    double ci_half_width = 0.0;
};

/// c_hat - linear_speed; positive beyond the CI signals nonlinear selection.
SpeedExcess speed_excess(const SpeedEstimate& estimate, double linear_speed);

}  // namespace frontlab::speed
