#include "frontlab/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "frontlab/errors.hpp"
#include "frontlab/rootfind.hpp"

namespace frontlab::dispersion {

namespace {
constexpr double kDegenerateTol = 1e-12;
constexpr double kBisectTol = 1e-12;
}  // namespace

double scalar_linear_speed(double f_prime_0) {
    if (!(f_prime_0 > 0.0)) {
        throw contract_error("scalar_linear_speed: requires f'(0) > 0");
    }
    return 2.0 * std::sqrt(f_prime_0);
}

double hadeler_rothe_speed(double s) {
    if (!(s >= 0.0)) {
        throw contract_error("hadeler_rothe_speed: requires s >= 0");
    }
    if (s <= 2.0) return 2.0;
    return std::sqrt(2.0 / s) + std::sqrt(s / 2.0);
}

double scalar_fast_rate(double c_star, double gamma0) {
    const double disc = c_star * c_star - 4.0 * gamma0;
    if (disc < -kDegenerateTol) {
        throw contract_error("scalar_fast_rate: c below the linear speed");
    }
    return 0.5 * (c_star + std::sqrt(std::max(0.0, disc)));
}

CharacteristicRoots lv_roots_plus_infinity(const model::LVParams& params, double c) {
    if (!(params.a > 0.0 && params.a < 1.0)) {
        throw contract_error("lv_roots_plus_infinity: requires 0 < a < 1");
    }
    const double disc = c * c - 4.0 * (1.0 - params.a);
    if (disc < -kDegenerateTol) {
        throw numeric_error("subcritical speed: oscillatory roots (c < 2 sqrt(1-a))");
    }
    CharacteristicRoots roots;
    roots.degenerate_double = std::abs(disc) <= kDegenerateTol;
    const double sq = roots.degenerate_double ? 0.0 : std::sqrt(disc);
    roots.lambda_u_plus = 0.5 * (c + sq);
    roots.lambda_u_minus = 0.5 * (c - sq);
    const double sv = std::sqrt(c * c + 4.0 * params.r * params.d);
    roots.lambda_v_plus = (c + sv) / (2.0 * params.d);
    roots.lambda_v_minus = (c - sv) / (2.0 * params.d);
    return roots;
}

double lv_quartic(const model::LVParams& params, double c, double lambda) {
    const auto [us, vs] = params.equilibrium();
    const double gu = lambda * lambda + c * lambda - us;
    const double gv = params.d * lambda * lambda + c * lambda - params.r * vs;
    return gu * gv - params.r * params.a * params.b * us * vs;
}

CharacteristicRoots lv_roots_minus_infinity(const model::LVParams& params, double c) {
    if (!(c > 0.0)) {
        throw contract_error("lv_roots_minus_infinity: requires c > 0");
    }
    CharacteristicRoots roots;
    const double su = std::sqrt(c * c + 4.0);
    roots.mu_u_plus = 0.5 * (-c + su);
    roots.mu_u_minus = 0.5 * (-c - su);

    if (params.b > 1.0) {
        const double sv = std::sqrt(c * c + 4.0 * params.r * params.d * (params.b - 1.0));
        roots.mu_v_plus = (-c + sv) / (2.0 * params.d);
        roots.mu_v_minus = (-c - sv) / (2.0 * params.d);
        return roots;
    }
    if (std::abs(params.b - 1.0) <= kDegenerateTol) {
        roots.algebraic_minus_infinity = true;  // 1/|xi| tails
        return roots;
    }

    // b < 1: nu is the smallest positive zero of the quartic; the root
    // ordering gives rho > 0 at 0 and rho < 0 at the smaller factor root.
    const auto [us, vs] = params.equilibrium();
    const double mu_u = 0.5 * (-c + std::sqrt(c * c + 4.0 * us));
    const double mu_v = (-c + std::sqrt(c * c + 4.0 * params.d * params.r * vs)) / (2.0 * params.d);
    const double hi = std::min(mu_u, mu_v);
    const double rho0 = lv_quartic(params, c, 0.0);
    const double rho_hi = lv_quartic(params, c, hi);
    if (!(rho0 > 0.0) || !(rho_hi < 0.0)) {
        throw numeric_error("lv_roots_minus_infinity: quartic bracketing failed, rho(0)=" +
                            std::to_string(rho0) + " rho(" + std::to_string(hi) + ")=" +
                            std::to_string(rho_hi));
    }
    roots.nu = rootfind::bisect([&](double l) { return lv_quartic(params, c, l); }, 0.0, hi,
                                kBisectTol);
    return roots;
}

NonlocalDispersion::NonlocalDispersion(model::KernelSpec kernel, double f_prime_0,
                                       double c0_star, double lambda0, double lambda_max)
    : kernel_(std::move(kernel)),
      f_prime_0_(f_prime_0),
      c0_star_(c0_star),
      lambda0_(lambda0),
      lambda_max_(lambda_max) {}

double NonlocalDispersion::h(double lambda) const {
    return model::kernel_moment(kernel_, lambda) - 1.0 + f_prime_0_;
}

double NonlocalDispersion::lambda_minus(double c) const {
    if (!(c > c0_star_)) {
        throw contract_error("lambda_minus: requires c > c0*");
    }
    auto phi = [&](double l) { return h(l) - c * l; };
    // phi(0+) = f'(0) > 0, phi(lambda0) < 0.
    return rootfind::bisect(phi, 1e-12, lambda0_, kBisectTol);
}

double NonlocalDispersion::lambda_plus(double c) const {
    if (!(c > c0_star_)) {
        throw contract_error("lambda_plus: requires c > c0*");
    }
    auto phi = [&](double l) { return h(l) - c * l; };
    auto bracket = rootfind::scan_sign_change(phi, lambda0_, lambda_max_, 4000);
    if (!bracket) {
        throw numeric_error("lambda_plus: no root below lambda_max");
    }
    return rootfind::bisect(phi, bracket->first, bracket->second, kBisectTol);
}

NonlocalDispersion nonlocal_linear_speed(const model::KernelSpec& kernel, double f_prime_0,
                                         double lambda_max) {
    if (!(f_prime_0 > 0.0)) {
        throw contract_error("nonlocal_linear_speed: requires f'(0) > 0");
    }
    auto g = [&](double l) { return (model::kernel_moment(kernel, l) - 1.0 + f_prime_0) / l; };

    // Coarse scan for an interior minimum bracket, then golden section.
    const int n = 5000;
    int best = -1;
    double best_val = std::numeric_limits<double>::infinity();
    std::vector<double> vals(n + 1);
    for (int i = 1; i <= n; ++i) {
        const double l = lambda_max * i / n;
        vals[i] = g(l);
        if (vals[i] < best_val) {
            best_val = vals[i];
            best = i;
        }
    }
    if (best <= 0 || best >= n) {
        throw numeric_error("nonlocal_linear_speed: no interior minimum up to lambda_max (kernel too heavy-tailed for grid)");
    }
    const double lo = lambda_max * (best - 1) / n;
    const double hi = lambda_max * (best + 1) / n;
    const double lambda0 = rootfind::golden_min(g, lo, hi, 1e-12);
    return NonlocalDispersion(kernel, f_prime_0, g(lambda0), lambda0, lambda_max);
}

double nonlocal_minus_infinity_rate(const model::KernelSpec& kernel, double f_prime_1,
                                    double c, double lambda_max) {
    if (!(f_prime_1 < 0.0)) {
        throw contract_error("nonlocal_minus_infinity_rate: requires f'(1) < 0");
    }
    if (!(c > 0.0)) {
        throw contract_error("nonlocal_minus_infinity_rate: requires c > 0");
    }
    auto psi = [&](double l) {
        return model::kernel_moment(kernel, l) + f_prime_1 - 1.0 - c * l;
    };
    auto bracket = rootfind::scan_sign_change(psi, 0.0, lambda_max, 50000);
    if (!bracket) {
        throw numeric_error("nonlocal_minus_infinity_rate: no sign change up to lambda_max");
    }
    return rootfind::bisect(psi, bracket->first, bracket->second, kBisectTol);
}

GlueCubic glue_beta_star(const model::LVParams& params) {
    const double a = params.a, b = params.b, r = params.r;
    if (!(a > 0.0 && a < 1.0 && b > 0.0 && b < 1.0 && a * b < 1.0)) {
        throw contract_error("glue_beta_star: requires 0 < a, b < 1 with ab < 1");
    }
    GlueCubic cubic;
    const auto [us, vs] = params.equilibrium();
    (void)us;
    cubic.v_star = vs;
    cubic.coeff[3] = r * a * b / 3.0;
    cubic.coeff[2] = -r * b / 2.0;
    cubic.coeff[1] = 0.0;
    cubic.coeff[0] =
        r * (-(1.0 - b) * vs * vs / 2.0 + (1.0 - a * b) * vs * vs * vs / 3.0 + 1.0 / 6.0);

    const double lhs = 1.0 / 6.0 - b / 2.0 + a * b / 3.0;
    const double rhs = (1.0 - b) * vs * vs / 2.0 - (1.0 - a * b) * vs * vs * vs / 3.0;
    cubic.condition_holds = lhs < rhs;
    if (cubic.condition_holds) {
        const double bs =
            rootfind::bisect([&](double beta) { return cubic(beta); }, vs, 1.0, kBisectTol);
        cubic.beta_star = bs;
        cubic.predicted_speed = 2.0 * std::sqrt(1.0 - a * bs);
    }
    return cubic;
}

SufficientConditionReport sufficient_condition_report(const model::LVParams& params) {
    const double a = params.a, b = params.b, d = params.d, r = params.r;
    if (!(a > 0.0 && a < 1.0)) {
        throw contract_error("sufficient_condition_report: requires 0 < a < 1");
    }
    SufficientConditionReport rep;
    rep.llw_lhs = r * (a * b - 1.0);
    rep.llw_rhs = (2.0 - d) * (1.0 - a);
    rep.llw_applicable = d > 0.0 && d < 2.0;
    rep.llw = (rep.llw_applicable && rep.llw_lhs <= rep.llw_rhs)
                  ? SelectionGuarantee::guaranteed_linear
                  : SelectionGuarantee::unknown;

    rep.huang_lhs = ((2.0 - d) * (1.0 - a) + r) / (r * b);
    const double second = (d == 1.0) ? -std::numeric_limits<double>::infinity()
                                     : (d - 2.0) / (2.0 * std::abs(d - 1.0));
    rep.huang_rhs = std::max(a, second);
    rep.huang = (rep.huang_lhs >= rep.huang_rhs) ? SelectionGuarantee::guaranteed_linear
                                                 : SelectionGuarantee::unknown;
    return rep;
}

}  // namespace frontlab::dispersion
