#pragma once

#include <array>
#include <limits>
#include <optional>

#include "frontlab/model.hpp"

namespace frontlab::dispersion {

/// Decay exponents of LV traveling waves. Plus-infinity roots use the
/// decay-rate convention: U ~ e^{-lambda xi} with lambda > 0 solving
/// lambda^2 - c lambda + (1-a) = 0, and 1-V ~ e^{-lambda_v^+ xi} with
/// d lambda^2 - c lambda - r = 0. Minus-infinity exponents mu, nu are the
/// positive rates of e^{mu xi} convergence as xi -> -infinity.
struct CharacteristicRoots {
    static constexpr double unset = std::numeric_limits<double>::quiet_NaN();

    double lambda_u_plus = unset;
    double lambda_u_minus = unset;
    double lambda_v_plus = unset;
    double lambda_v_minus = unset;

    double mu_u_plus = unset;
    double mu_u_minus = unset;
    double mu_v_plus = unset;
    double mu_v_minus = unset;
    double nu = unset;  // smallest positive quartic root, b < 1

    double Lambda = unset;  // selected U decay rate; profile-dependent
    bool degenerate_double = false;
    bool algebraic_minus_infinity = false;  // b == 1, order 1/|xi|
};

/// 2 sqrt(f'(0)).
double scalar_linear_speed(double f_prime_0);

/// Exact minimal speed of w_t = w_xx + w(1-w)(1+sw):
/// 2 for s <= 2, sqrt(2/s) + sqrt(s/2) for s > 2.
double hadeler_rothe_speed(double s);

/// lambda_s^+ = (c + sqrt(c^2 - 4 gamma0)) / 2, the fast decay rate of the
/// scalar pushed front (gamma0 = f'(0), default 1).
double scalar_fast_rate(double c_star, double gamma0 = 1.0);

/// lambda_u^pm, lambda_v^pm at +infinity. Requires 0<a<1 and c >= 2 sqrt(1-a).
CharacteristicRoots lv_roots_plus_infinity(const model::LVParams& params, double c);

/// mu roots (b>1), quartic root nu (b<1), or the algebraic 1/|xi| marker (b=1).
CharacteristicRoots lv_roots_minus_infinity(const model::LVParams& params, double c);

/// rho(lambda) = (lambda^2 + c lambda - u*)(d lambda^2 + c lambda - r v*) - r a b u* v*.
double lv_quartic(const model::LVParams& params, double c, double lambda);

/// Nonlocal dispersal: h(lambda) = int J e^{lambda z} dz - 1 + f'(0),
/// c0* = min_{lambda>0} h(lambda)/lambda at argmin lambda0, plus the two
/// roots of h(lambda) = c lambda either side of lambda0 for c > c0*.
class NonlocalDispersion {
public:
    NonlocalDispersion(model::KernelSpec kernel, double f_prime_0, double c0_star,
                       double lambda0, double lambda_max);

    double c0_star() const { return c0_star_; }
    double lambda0() const { return lambda0_; }
    double h(double lambda) const;
    double lambda_minus(double c) const;
    double lambda_plus(double c) const;

private:
    model::KernelSpec kernel_;
    double f_prime_0_;
    double c0_star_;
    double lambda0_;
    double lambda_max_;
};

NonlocalDispersion nonlocal_linear_speed(const model::KernelSpec& kernel, double f_prime_0,
                                         double lambda_max = 50.0);

/// Unique positive root of c lambda = int J e^{lambda y} dy + f'(1) - 1,
/// the decay rate of 1 - W at -infinity. Requires f'(1) < 0, c > 0.
double nonlocal_minus_infinity_rate(const model::KernelSpec& kernel, double f_prime_1,
                                    double c, double lambda_max = 50.0);

/// Glue cubic of the large-d singular perturbation limit:
/// G(beta) = r[(1-b)/2 (beta^2 - v*^2) - (1-ab)/3 (beta^3 - v*^3)
///           + 1/6 - beta^2/2 + beta^3/3],
/// with unique zero beta* in (v*,1) when the large-d condition holds; the
/// predicted pushed speed is then 2 sqrt(1 - a beta*).
struct GlueCubic {
    double v_star = 0.0;
    std::array<double, 4> coeff{};  // G(b) = coeff[0] + coeff[1] b + coeff[2] b^2 + coeff[3] b^3
    bool condition_holds = false;
    std::optional<double> beta_star;
    std::optional<double> predicted_speed;

    double operator()(double beta) const {
        return coeff[0] + beta * (coeff[1] + beta * (coeff[2] + beta * coeff[3]));
    }
    double derivative(double beta) const {
        return coeff[1] + beta * (2.0 * coeff[2] + beta * 3.0 * coeff[3]);
    }
};

GlueCubic glue_beta_star(const model::LVParams& params);

enum class SelectionGuarantee { guaranteed_linear, unknown };

/// Published sufficient conditions for linear selection of the LV system.
struct SufficientConditionReport {
    bool llw_applicable = false;  // needs 0 < d < 2
    SelectionGuarantee llw = SelectionGuarantee::unknown;
    double llw_lhs = 0.0;  // r(ab-1)
    double llw_rhs = 0.0;  // (2-d)(1-a)

    SelectionGuarantee huang = SelectionGuarantee::unknown;
    double huang_lhs = 0.0;  // ((2-d)(1-a)+r)/(rb)
    double huang_rhs = 0.0;  // max{a, (d-2)/(2|d-1|)}
};

SufficientConditionReport sufficient_condition_report(const model::LVParams& params);

}  // namespace frontlab::dispersion
