#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "frontlab/model.hpp"

namespace frontlab::sim {

struct Grid1D {
    double x_min = 0.0;
    double x_max = 1.0;
    int n = 3;

    Grid1D() = default;
    Grid1D(double x_min_, double x_max_, int n_);

    double h() const { return (x_max - x_min) / (n - 1); }
    double x(int i) const { return x_min + i * h(); }
};

struct FieldState {
    double t = 0.0;
    std::vector<std::vector<double>> components;  // 1 (scalar) or 2 (u,v) arrays
    double frame_shift = 0.0;                     // cumulative co-moving translation
};

enum class Scheme { explicit_euler, imex_diffusion };

struct StepperConfig {
    double dt = 0.0;
    Scheme scheme = Scheme::explicit_euler;
    double cfl_safety = 0.4;  // in (0,1]
    // Boundary handling is always clamping to the exact limit states.
};

/// Largest stable explicit dt: cfl * h^2 / (2 max(1,d)) for diffusive models,
/// cfl / (1 + sup f') for the nonlocal model.
double cfl_dt_limit(const model::ModelSpec& spec, const Grid1D& grid, double cfl_safety);

/// Scheme and dt defaults: imex for LV with d > 2, explicit otherwise.
StepperConfig default_stepper(const model::ModelSpec& spec, const Grid1D& grid,
                              double cfl_safety = 0.4);

enum class InitialProfile { step, tanh_front, compact_bump };

struct InitSpec {
    InitialProfile profile = InitialProfile::step;
    double x0 = 0.0;
    double x1 = 0.0;      // compact_bump only
    double width = 1.0;   // tanh only
    double v_background = 1.0;  // LV only
};

/// Limit states clamped at the domain ends: (left, right) per component.
struct LimitStates {
    std::vector<double> left;
    std::vector<double> right;
};
LimitStates limit_states(const model::ModelSpec& spec);

FieldState init_front(const Grid1D& grid, const model::ModelSpec& spec, const InitSpec& init);

/// J*w - w with out-of-domain values clamped to the given limits.
void nonlocal_operator(const model::KernelSpec& kernel, const std::vector<double>& w,
                       double left_limit, double right_limit, std::vector<double>& out);

/// One time step. Diffusion is explicit central or implicit tridiagonal
/// (imex); the nonlocal term is a direct compact-support convolution;
/// reaction is always explicit. Boundary cells are clamped to limit states.
/// Throws numeric_error on NaN/overflow.
void step(FieldState& state, const model::ModelSpec& spec, const Grid1D& grid,
          const StepperConfig& config);

struct SampleRow {
    double t = 0.0;
    double front_position = std::numeric_limits<double>::quiet_NaN();  // frame_shift folded in
    bool front_found = false;
    double u_min = 0.0, u_max = 0.0;
    double v_min = 0.0, v_max = 0.0;
    double mass = 0.0;  // sum of component 0 times h
    double frame_shift = 0.0;
};

struct RunOptions {
    double t_end = 0.0;
    double sample_dt = 0.5;
    double level = 0.5;     // tracked level on component 0
    bool comoving = false;  // reframe when the front passes 70% of the domain
};

using SampleCallback = std::function<void(const FieldState&, const SampleRow&)>;

struct RunResult {
    FieldState state;
    std::vector<SampleRow> series;
};

/// Rightmost level crossing of component 0, linearly interpolated (local
/// frame, no shift folded in). nullopt when the level is never attained.
std::optional<double> front_position(const Grid1D& grid, const std::vector<double>& u,
                                     double level);

RunResult run_until(FieldState state, const model::ModelSpec& spec, const Grid1D& grid,
                    const StepperConfig& config, const RunOptions& options,
                    const SampleCallback& callback = nullptr);

}  // namespace frontlab::sim
