#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frontlab/dispersion.hpp"
#include "frontlab/model.hpp"
#include "frontlab/simulate.hpp"

namespace frontlab::waves {

/// Discretized traveling-wave profile (or settled co-moving snapshot).
struct WaveProfile {
    std::vector<double> xi;
    std::vector<std::vector<double>> comps;  // W or (U,V)
    std::vector<double> left_limit;          // per component, xi -> -inf
    std::vector<double> right_limit;         // per component, xi -> +inf
    double c = 0.0;
    double residual_sup = 0.0;
    bool monotone = true;
};

enum class ShootOutcome { connected, undershoot, turned };

struct ShootResult {
    ShootOutcome outcome = ShootOutcome::undershoot;
    WaveProfile profile;  // populated when connected
};

struct ShootOptions {
    double tol = 1e-12;        // undershoot / turning detection threshold
    double reach = 1e-12;      // declare connection once W drops below this
    double epsilon0 = 1e-8;    // launch distance from the W=1 saddle
    double max_step = 0.25;
};

/// Phase-plane shooting for W'' + cW' + f(W) = 0 from the unstable manifold
/// of (W, W') = (1, 0). Classifies the orbit as a monotone connection,
/// an undershoot through W = 0, or a turn (W' >= 0 while W in (0,1)).
ShootResult scalar_wave_shoot(const model::NonlinearityFamily& family, double c,
                              const ShootOptions& options = {});

bool scalar_wave_exists(const model::NonlinearityFamily& family, double c);

/// Bisection on c over [2 sqrt(f'(0)) - tol, c_hi] with the shooting
/// existence predicate; returns c* to absolute tolerance tol.
double scalar_min_speed(const model::NonlinearityFamily& family, double tol = 1e-4,
                        double c_hi = 6.0);

struct LVBvpOptions {
    int max_newton = 80;
    double newton_tol = 1e-10;
    int max_backtracks = 12;
    bool require_monotone = false;  // reject converged non-monotone profiles
    bool c_continuation = true;     // retry from a supercritical speed guess
    /// Accepted gap between the requested speed and the finite-interval wave
    /// speed in lv_wave_bvp.
    double speed_slack = 0.02;
};

/// Finite-interval minimal traveling wave: damped Newton on the centered
/// discretization with Dirichlet limit states, the wave speed as an extra
/// unknown and the phase anchor U(0) = u*/2 closing the system. The speed of
/// the returned profile converges to c*(b) as the domain grows.
WaveProfile lv_wave_minimal(const model::LVParams& params, const sim::Grid1D& grid,
                            const WaveProfile* initial_guess = nullptr,
                            const LVBvpOptions& options = {});

/// Minimal wave constrained to a requested speed: solves the free-speed
/// problem and verifies the selected speed lies within speed_slack of c.
WaveProfile lv_wave_bvp(const model::LVParams& params, double c, const sim::Grid1D& grid,
                        const WaveProfile* initial_guess = nullptr,
                        const LVBvpOptions& options = {});

/// Grid with span tied to the slowest decay rates of the wave at speed c.
sim::Grid1D recommended_lv_grid(const model::LVParams& params, double c, double h = 0.05);

struct LVSpeedComparison {
    double c_query = 0.0;      // finite-interval wave speed at params.b
    double c_reference = 0.0;  // same, at the reference b
    double excess = 0.0;       // c_query - c_reference
};

/// Branch-consistent finite-interval speed comparison between params.b and a
/// reference b in the linearly selected range: the common finite-domain
/// deficit cancels, so a positive excess marks nonlinear selection.
LVSpeedComparison lv_wave_speed_comparison(const model::LVParams& params,
                                           double b_reference = 0.25);

/// True when a traveling wave at the linear speed 2 sqrt(1-a) exists, i.e.
/// c*(b) is linearly selected.
bool lv_wave_exists_at_linear_speed(const model::LVParams& params, double b_reference = 0.25,
                                    double margin = 3e-4);

struct ExtractOptions {
    double xi_min = -120.0;
    double xi_max = 80.0;
    double h = 0.05;
    double t_max = 4000.0;
    double settle_tol = 1e-8;
    double check_every = 5.0;
    bool newton_polish = true;
};

/// Long-time co-moving relaxation of the nonlocal equation starting at frame
/// speed c_hat (upwind advection). Residual front drift in the frame is
/// measured and folded into the settled wave speed, and a Newton polish of
/// the discrete traveling-wave equation with centered advection finishes the
/// profile; the polished speed is reported in the result.
WaveProfile nonlocal_wave_extract(const model::NonlinearityFamily& family,
                                  const model::KernelSpec& kernel, double c_hat,
                                  const ExtractOptions& options = {});

/// Minimal spreading speed of the upwind co-moving discretization, the
/// lattice analogue of c0*.
double nonlocal_discrete_upwind_linear_speed(const model::KernelSpec& kernel,
                                             double f_prime_0, double h);

/// Dispersion of the centered-advection discrete traveling-wave equation
/// that the extraction polish solves: an e^{-lambda j h} tail is steady when
/// moment(lambda) - 1 + f'(0) = c sinh(lambda h)/h.
class NonlocalDiscreteDispersion {
public:
    NonlocalDiscreteDispersion(model::KernelSpec kernel, double f_prime_0, double h,
                               double c0_star, double lambda0);
    double c0_star() const { return c0_star_; }
    double lambda0() const { return lambda0_; }
    /// Fast root above lambda0 for c > c0*.
    double lambda_plus(double c) const;

private:
    model::KernelSpec kernel_;
    double f_prime_0_;
    double h_;
    double c0_star_;
    double lambda0_;
};

NonlocalDiscreteDispersion nonlocal_centered_dispersion(const model::KernelSpec& kernel,
                                                        double f_prime_0, double h);

enum class TailSide { plus_inf, minus_inf };
enum class TailClass { pulled, transition, pushed, algebraic };

std::string tail_class_name(TailClass cls);

struct ReferenceRates {
    double lambda_double = 0.0;               // rate of the degenerate double root
    std::optional<double> lambda_fast;        // lambda_u^+ / lambda_q^+ when known
};

struct TailFit {
    double lambda_hat = 0.0;
    double p_hat = 0.0;         // free log-fit exponent, diagnostic
    TailClass cls = TailClass::pulled;
    bool ambiguous = false;
    double xi_a = 0.0, xi_b = 0.0;
    double residual = 0.0;      // RMS of the log-linear fit
    double loglog_slope = 0.0;  // slope of log g vs log |xi| (algebraic check)
    double a_hat = 0.0;         // (A zeta + B) e^{-lambda_d zeta} amplitude fit
    double b_hat = 0.0;
    double a_term_span = 0.0;   // relative growth the A-term contributes over the window
    int samples = 0;
};

/// Fit log g = -lambda xi + p log|xi| + const over the window where the
/// limit gap lies in [1e-8, 1e-3] of the full gap, and the amplitudes
/// (A, B) of g = (A zeta + B) e^{-lambda_double zeta} with the rate pinned.
/// Classify: fast free rate -> pushed; otherwise the A-term span across the
/// window separates pulled (dominant) from transition (absent); an inverse
/// law in the log-log slope marks the algebraic case.
TailFit fit_tail(const WaveProfile& profile, int component, TailSide side,
                 const ReferenceRates& rates);

struct PushedCriterion {
    double integral = 0.0;
    double lambda_u = 0.0;
    double error_bound = 0.0;  // tail closure + trapezoid curvature estimate
};

/// I = int e^{lambda_u xi} U (a(1-V) - U) dxi on an LV wave at the linear
/// speed c = 2 sqrt(1-a); zero exactly at the selection threshold.
PushedCriterion pushed_integral(const WaveProfile& profile, const model::LVParams& params);

}  // namespace frontlab::waves
