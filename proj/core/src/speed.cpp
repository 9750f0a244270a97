#include "frontlab/speed.hpp"

#include <algorithm>
#include <cmath>

#include "frontlab/errors.hpp"

namespace frontlab::speed {

FrontTrack track_front(const std::vector<sim::SampleRow>& series, double level) {
    FrontTrack track;
    track.level = level;
    if (!(level > 0.0 && level < 1.0)) {
        throw contract_error("track_front: level must lie in (0,1)");
    }
    for (const auto& row : series) {
        if (!row.front_found) continue;
        if (!track.t.empty() && !(row.t > track.t.back())) {
            throw contract_error("track_front: sample times must be strictly increasing");
        }
        track.t.push_back(row.t);
        track.x.push_back(row.front_position);
    }
    if (track.t.empty()) {
        throw numeric_error("track_front: empty track, level never attained");
    }
    return track;
}

namespace {

struct WindowFit {
    double slope = 0.0;
    double sigma_slope = 0.0;  // AR(1)-inflated
    double ratio = 0.0;
    double t_lo = 0.0, t_hi = 0.0;
    int samples = 0;
};

WindowFit fit_window(const FrontTrack& track, double t_lo_fraction) {
    const double t_max = track.t.back();
    const double t_lo = t_lo_fraction * t_max;
    std::vector<double> t, x;
    for (size_t i = 0; i < track.t.size(); ++i) {
        if (track.t[i] >= t_lo) {
            t.push_back(track.t[i]);
            x.push_back(track.x[i]);
        }
    }
    const int m = static_cast<int>(t.size());
    WindowFit fit;
    fit.samples = m;
    if (m < 3) return fit;

    double tbar = 0.0, xbar = 0.0;
    for (int i = 0; i < m; ++i) {
        tbar += t[i];
        xbar += x[i];
    }
    tbar /= m;
    xbar /= m;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < m; ++i) {
        sxx += (t[i] - tbar) * (t[i] - tbar);
        sxy += (t[i] - tbar) * (x[i] - xbar);
    }
    fit.slope = sxy / sxx;
    const double intercept = xbar - fit.slope * tbar;

    double sse = 0.0;
    std::vector<double> resid(m);
    for (int i = 0; i < m; ++i) {
        resid[i] = x[i] - (intercept + fit.slope * t[i]);
        sse += resid[i] * resid[i];
    }
    const double sigma2 = m > 2 ? sse / (m - 2) : 0.0;

    // Front-track residuals are strongly serially correlated (grid wobble
    // plus slow transients); inflate the naive slope variance by the AR(1)
    // effective-sample-size factor.
    double rho = 0.0;
    if (sse > 0.0) {
        double num = 0.0;
        for (int i = 1; i < m; ++i) num += resid[i] * resid[i - 1];
        rho = std::clamp(num / sse, 0.0, 0.98);
    }
    fit.sigma_slope = std::sqrt((1.0 + rho) / (1.0 - rho)) * std::sqrt(sigma2 / sxx);

    double ratio = 0.0;
    int count = 0;
    for (int i = 0; i < m; ++i) {
        if (t[i] > 0.0) {
            ratio += x[i] / t[i];
            ++count;
        }
    }
    fit.ratio = count > 0 ? ratio / count : 0.0;
    fit.t_lo = t.front();
    fit.t_hi = t.back();
    return fit;
}

}  // namespace

SpeedEstimate estimate_speed(const FrontTrack& track, double t_lo_fraction) {
    if (track.t.empty()) throw numeric_error("estimate_speed: empty track");
    const WindowFit fit = fit_window(track, t_lo_fraction);
    if (fit.samples < 20) {
        throw numeric_error("estimate_speed: fewer than 20 samples past the window start");
    }
    // The half width is the 2-sigma band of the fit or, when the slow
    // front-relaxation drift dominates the statistics, the shift seen when
    // the window start is moved halfway toward the end.
    const WindowFit late = fit_window(track, 0.5 * (1.0 + t_lo_fraction));
    double window_shift = 0.0;
    if (late.samples >= 10) {
        window_shift = std::abs(late.slope - fit.slope);
    }

    SpeedEstimate est;
    est.slope_fit = fit.slope;
    est.c_hat = fit.slope;
    est.ci_half_width = std::max(2.0 * fit.sigma_slope, window_shift);
    est.ratio_tail = fit.ratio;
    est.t_lo = fit.t_lo;
    est.t_hi = fit.t_hi;
    est.samples = fit.samples;
    return est;
}

SpeedExcess speed_excess(const SpeedEstimate& estimate, double linear_speed) {
    return {estimate.c_hat - linear_speed, estimate.ci_half_width};
}

}  // namespace frontlab::speed
