#pragma once

#include <array>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace frontlab::model {

enum class NonlinearityKind { fisher_kpp, hadeler_rothe, custom_cubic };

/// One-parameter monostable reaction term f(w;s) on w in [0,1] with
/// f(0)=f(1)=0, f'(0)>0>f'(1) and f>0 on (0,1). Built-in kinds evaluate the
/// factored polynomial so the roots at w=0 and w=1 are exact.
class NonlinearityFamily {
public:
    static NonlinearityFamily fisher_kpp();
    static NonlinearityFamily hadeler_rothe(double s);
    /// Cubic reaction c1*w + c2*w^2 + c3*w^3; monostable invariants are
    /// checked at construction.
    static NonlinearityFamily custom_cubic(const std::array<double, 3>& coeffs);

    double f(double w) const;
    double fp(double w) const;   // df/dw
    double fpp(double w) const;  // d2f/dw2

    double fp0() const { return fp(0.0); }
    double fp1() const { return fp(1.0); }
    /// max of f' over [0,1], sampled at 1e-3; used for reaction CFL bounds.
    double sup_fp() const;
    /// f'(0) w >= f(w) sampled on [0,1] at resolution 1e-3.
    bool kpp_condition() const;

    NonlinearityKind kind() const { return kind_; }
    double s() const { return s_; }
    std::string kind_name() const;

private:
    NonlinearityFamily(NonlinearityKind kind, double s, std::array<double, 3> coeffs);
    void validate() const;

    NonlinearityKind kind_;
    double s_ = 0.0;
    std::array<double, 3> coeffs_{};  // f = c1 w + c2 w^2 + c3 w^3
};

/// Lotka-Volterra competition parameters for
///   u_t = u_xx + u(1-u-av),  v_t = d v_xx + r v(1-v-bu).
struct LVParams {
    double a = 0.5;
    double b = 0.5;
    double d = 1.0;
    double r = 1.0;

    LVParams() = default;
    LVParams(double a_, double b_, double d_, double r_);

    /// (u*,v*) = ((1-a)/(1-ab),(1-b)/(1-ab)) for b<1, (1,0) for b>=1.
    std::pair<double, double> equilibrium() const;
    bool weak_competition() const { return b < 1.0; }
};

enum class KernelShape { uniform, parabolic_bump, custom_samples };

/// Compactly supported, symmetric, unit-mass dispersal kernel sampled on a
/// grid of spacing h covering [-L, L]. Normalization (trapezoid mass == 1)
/// is enforced at construction so convolution conserves mass bit-stably.
class KernelSpec {
public:
    static KernelSpec uniform(double half_width, double h);
    static KernelSpec parabolic_bump(double half_width, double h);
    static KernelSpec custom(double half_width, double h, std::vector<double> samples);

    double half_width() const { return half_width_; }
    double spacing() const { return h_; }
    int half_points() const { return half_points_; }  // K with L = K h
    KernelShape shape() const { return shape_; }

    /// Normalized samples J_j at offsets j*h, j = -K..K.
    const std::vector<double>& samples() const { return samples_; }
    /// Trapezoid quadrature weights w_j = theta_j * J_j * h with sum == 1.
    const std::vector<double>& weights() const { return weights_; }
    /// Trapezoid mass of the normalized samples (1 up to rounding).
    double mass() const;

private:
    KernelSpec(KernelShape shape, double half_width, double h, std::vector<double> samples);
    void normalize_and_validate();

    KernelShape shape_;
    double half_width_;
    double h_;
    int half_points_;
    std::vector<double> samples_;
    std::vector<double> weights_;
};

struct ScalarLocal {
    NonlinearityFamily family;
};

struct LVSystem {
    LVParams params;
};

struct ScalarNonlocal {
    NonlinearityFamily family;
    KernelSpec kernel;
};

/// Exactly one of the three model variants.
struct ModelSpec {
    std::variant<ScalarLocal, LVSystem, ScalarNonlocal> variant;

    bool is_scalar_local() const { return std::holds_alternative<ScalarLocal>(variant); }
    bool is_lv() const { return std::holds_alternative<LVSystem>(variant); }
    bool is_nonlocal() const { return std::holds_alternative<ScalarNonlocal>(variant); }
    int components() const { return is_lv() ? 2 : 1; }
};

/// f(w;s). Total on w in [-0.1, 1.1]; overshoot beyond that asserts in debug.
double eval_reaction(const NonlinearityFamily& family, double w);

/// (u(1-u-av), r v(1-v-bu)).
std::pair<double, double> lv_reaction(const LVParams& params, double u, double v);

/// Trapezoid quadrature of int J(y) e^{lambda y} dy over [-L, L].
double kernel_moment(const KernelSpec& kernel, double lambda);

}  // namespace frontlab::model
