#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "frontlab/errors.hpp"

namespace frontlab::ode {

/// Adaptive Dormand-Prince 4(5) for small fixed-size systems.
/// The step callback sees every accepted step and may stop the integration.
template <size_t N>
struct Rk45Controls {
    double rtol = 1e-10;
    double atol = 1e-14;
    double max_step = 0.25;
    double initial_step = 1e-3;
    double max_span = 1e4;  // guard against runaway integrations
};

enum class StepVerdict { go_on, stop };

template <size_t N, typename Rhs, typename OnStep>
void integrate_rk45(Rhs&& rhs, double x0, std::array<double, N> y,
                    const Rk45Controls<N>& ctl, OnStep&& on_step) {
    using State = std::array<double, N>;
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    double x = x0;
    double h = ctl.initial_step;
    State k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
    rhs(x, y, k1);
    int rejected_in_a_row = 0;
    while (x - x0 < ctl.max_span) {
        h = std::min(h, ctl.max_step);
        for (size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(x + c2 * h, ytmp, k2);
        for (size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(x + c3 * h, ytmp, k3);
        for (size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(x + c4 * h, ytmp, k4);
        for (size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(x + c5 * h, ytmp, k5);
        for (size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        rhs(x + h, ytmp, k6);
        for (size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        rhs(x + h, ynew, k7);

        double err = 0.0;
        for (size_t i = 0; i < N; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                  e6 * k6[i] + e7 * k7[i]);
            const double sc = ctl.atol + ctl.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err = std::max(err, std::abs(e) / sc);
        }
        if (err <= 1.0) {
            x += h;
            y = ynew;
            k1 = k7;  // FSAL
            rejected_in_a_row = 0;
            if (on_step(x, y) == StepVerdict::stop) return;
        } else if (++rejected_in_a_row > 60) {
            throw numeric_error("rk45: step control failed (blow-up?)");
        }
        const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(fac, 0.2, 5.0);
        if (!(h > 1e-14)) {
            throw numeric_error("rk45: step size underflow");
        }
    }
}

}  // namespace frontlab::ode
