#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "frontlab/errors.hpp"

namespace frontlab::rootfind {

/// Bracketing bisection to absolute tolerance xtol. Requires a sign change
/// over [lo, hi]; endpoints with zero value are returned directly.
template <typename F>
double bisect(F&& f, double lo, double hi, double xtol = 1e-12, int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi)) {
        throw bracket_error("bisect: no sign change over [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]");
    }
    for (int it = 0; it < max_iter && hi - lo > xtol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Scan [lo, hi] on n equal intervals for the first sign change of f.
template <typename F>
std::optional<std::pair<double, double>> scan_sign_change(F&& f, double lo, double hi, int n) {
    double x0 = lo;
    double f0 = f(x0);
    for (int i = 1; i <= n; ++i) {
        const double x1 = lo + (hi - lo) * i / n;
        const double f1 = f(x1);
        if (f0 == 0.0) return std::make_pair(x0, x0);
        if (std::signbit(f0) != std::signbit(f1)) return std::make_pair(x0, x1);
        x0 = x1;
        f0 = f1;
    }
    return std::nullopt;
}

/// Golden-section minimization of a unimodal f on [lo, hi] to xtol.
template <typename F>
double golden_min(F&& f, double lo, double hi, double xtol = 1e-10) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > xtol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace frontlab::rootfind
