#include "frontlab/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "frontlab/errors.hpp"

namespace frontlab::sim {

namespace {

/// Thomas solve of (I - mu * Lap_h) x = rhs with Dirichlet rows at both ends
/// (x[0] = rhs[0], x[n-1] = rhs[n-1]). Diagonals are constant.
void implicit_diffusion_solve(double mu, std::vector<double>& rhs, std::vector<double>& cprime,
                              std::vector<double>& x) {
    const int n = static_cast<int>(rhs.size());
    const double diag = 1.0 + 2.0 * mu;
    const double off = -mu;
    cprime.resize(n);
    x.resize(n);
    // Row 0 and n-1 are identity (clamped boundary).
    cprime[0] = 0.0;
    x[0] = rhs[0];
    for (int i = 1; i < n - 1; ++i) {
        const double m = diag - off * cprime[i - 1];
        cprime[i] = off / m;
        x[i] = (rhs[i] - off * x[i - 1]) / m;
    }
    x[n - 1] = rhs[n - 1];
    for (int i = n - 2; i >= 1; --i) {
        x[i] -= cprime[i] * x[i + 1];
    }
}

void check_finite(const FieldState& state) {
    for (const auto& comp : state.components) {
        for (double v : comp) {
            if (!std::isfinite(v) || std::abs(v) > 1e6) {
                throw numeric_error("step: NaN/overflow detected at t=" + std::to_string(state.t));
            }
        }
    }
}

}  // namespace

Grid1D::Grid1D(double x_min_, double x_max_, int n_) : x_min(x_min_), x_max(x_max_), n(n_) {
    if (n < 3 || !(x_max > x_min)) {
        throw contract_error("Grid1D: requires n >= 3 and x_max > x_min");
    }
}

double cfl_dt_limit(const model::ModelSpec& spec, const Grid1D& grid, double cfl_safety) {
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) {
        throw contract_error("cfl_safety must lie in (0, 1]");
    }
    const double h = grid.h();
    if (spec.is_nonlocal()) {
        // Stability alone allows dt ~ cfl/(1+sup f'), but the forward-Euler
        // dispersion slows pulled fronts by ~dt h(lambda0)/2, so the default
        // is capped well below the stability bound.
        const auto& m = std::get<model::ScalarNonlocal>(spec.variant);
        return std::min(cfl_safety / (1.0 + std::max(0.0, m.family.sup_fp())), 0.015);
    }
    double dmax = 1.0;
    if (spec.is_lv()) {
        dmax = std::max(1.0, std::get<model::LVSystem>(spec.variant).params.d);
    }
    return cfl_safety * h * h / (2.0 * dmax);
}

StepperConfig default_stepper(const model::ModelSpec& spec, const Grid1D& grid,
                              double cfl_safety) {
    StepperConfig config;
    config.cfl_safety = cfl_safety;
    config.scheme = Scheme::explicit_euler;
    if (spec.is_lv() && std::get<model::LVSystem>(spec.variant).params.d > 2.0) {
        config.scheme = Scheme::imex_diffusion;
    }
    if (config.scheme == Scheme::imex_diffusion) {
        // Diffusion is unconditionally stable; dt is set by the explicit
        // reaction and by front-resolution accuracy.
        const auto& params = std::get<model::LVSystem>(spec.variant).params;
        const double react = 1.0 + std::max(1.0, params.r);
        config.dt = std::min(cfl_safety / react, 0.02);
    } else {
        config.dt = cfl_dt_limit(spec, grid, cfl_safety);
    }
    return config;
}

LimitStates limit_states(const model::ModelSpec& spec) {
    LimitStates ls;
    if (spec.is_lv()) {
        const auto& params = std::get<model::LVSystem>(spec.variant).params;
        const auto [us, vs] = params.equilibrium();
        ls.left = {us, vs};
        ls.right = {0.0, 1.0};
    } else {
        ls.left = {1.0};
        ls.right = {0.0};
    }
    return ls;
}

FieldState init_front(const Grid1D& grid, const model::ModelSpec& spec, const InitSpec& init) {
    auto inside = [&](double x) { return x >= grid.x_min && x <= grid.x_max; };
    if (!inside(init.x0) ||
        (init.profile == InitialProfile::compact_bump && !inside(init.x1))) {
        throw config_error("init_front: profile anchor outside the grid");
    }
    FieldState state;
    state.t = 0.0;
    const int n = grid.n;
    std::vector<double> u(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const double x = grid.x(i);
        switch (init.profile) {
            case InitialProfile::step:
                u[i] = x <= init.x0 ? 1.0 : 0.0;
                break;
            case InitialProfile::tanh_front:
                u[i] = 0.5 * (1.0 - std::tanh((x - init.x0) / init.width));
                break;
            case InitialProfile::compact_bump: {
                if (x > init.x0 && x < init.x1) {
                    const double z = (x - init.x0) / (init.x1 - init.x0);
                    const double sz = std::sin(M_PI * z);
                    u[i] = sz * sz;
                } else {
                    u[i] = 0.0;
                }
                break;
            }
        }
    }
    state.components.push_back(std::move(u));
    if (spec.is_lv()) {
        state.components.emplace_back(n, init.v_background);
    }
    return state;
}

void nonlocal_operator(const model::KernelSpec& kernel, const std::vector<double>& w,
                       double left_limit, double right_limit, std::vector<double>& out) {
    const int n = static_cast<int>(w.size());
    const int k = kernel.half_points();
    const auto& wt = kernel.weights();
    out.resize(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = -k; j <= k; ++j) {
            const int idx = i + j;
            const double val = idx < 0 ? left_limit : (idx >= n ? right_limit : w[idx]);
            acc += wt[j + k] * val;
        }
        out[i] = acc - w[i];
    }
}

void step(FieldState& state, const model::ModelSpec& spec, const Grid1D& grid,
          const StepperConfig& config) {
    const int n = grid.n;
    const double h = grid.h();
    const double dt = config.dt;
    if (!(dt > 0.0)) throw contract_error("step: dt must be positive");
    const LimitStates ls = limit_states(spec);

    if (spec.is_nonlocal()) {
        if (config.scheme == Scheme::imex_diffusion) {
            throw config_error("imex_diffusion is not available for the nonlocal model");
        }
        const auto& m = std::get<model::ScalarNonlocal>(spec.variant);
        auto& w = state.components[0];
        static thread_local std::vector<double> lw;
        nonlocal_operator(m.kernel, w, ls.left[0], ls.right[0], lw);
        for (int i = 1; i < n - 1; ++i) {
            w[i] += dt * (lw[i] + m.family.f(w[i]));
        }
        w[0] = ls.left[0];
        w[n - 1] = ls.right[0];
    } else if (spec.is_scalar_local()) {
        const auto& m = std::get<model::ScalarLocal>(spec.variant);
        auto& w = state.components[0];
        const double mu = dt / (h * h);
        static thread_local std::vector<double> next, cprime;
        if (config.scheme == Scheme::explicit_euler) {
            next.resize(n);
            for (int i = 1; i < n - 1; ++i) {
                next[i] = w[i] + mu * (w[i - 1] - 2.0 * w[i] + w[i + 1]) + dt * m.family.f(w[i]);
            }
            for (int i = 1; i < n - 1; ++i) w[i] = next[i];
        } else {
            static thread_local std::vector<double> rhs;
            rhs.resize(n);
            for (int i = 1; i < n - 1; ++i) rhs[i] = w[i] + dt * m.family.f(w[i]);
            rhs[0] = ls.left[0];
            rhs[n - 1] = ls.right[0];
            implicit_diffusion_solve(mu, rhs, cprime, next);
            w.swap(next);
        }
        w[0] = ls.left[0];
        w[n - 1] = ls.right[0];
    } else {
        const auto& params = std::get<model::LVSystem>(spec.variant).params;
        auto& u = state.components[0];
        auto& v = state.components[1];
        const double mu_u = dt / (h * h);
        const double mu_v = params.d * dt / (h * h);
        static thread_local std::vector<double> un, vn, cprime, rhs_u, rhs_v;
        if (config.scheme == Scheme::explicit_euler) {
            un.resize(n);
            vn.resize(n);
            for (int i = 1; i < n - 1; ++i) {
                const auto [fu, fv] = model::lv_reaction(params, u[i], v[i]);
                un[i] = u[i] + mu_u * (u[i - 1] - 2.0 * u[i] + u[i + 1]) + dt * fu;
                vn[i] = v[i] + mu_v * (v[i - 1] - 2.0 * v[i] + v[i + 1]) + dt * fv;
            }
            for (int i = 1; i < n - 1; ++i) {
                u[i] = un[i];
                v[i] = vn[i];
            }
        } else {
            rhs_u.resize(n);
            rhs_v.resize(n);
            for (int i = 1; i < n - 1; ++i) {
                const auto [fu, fv] = model::lv_reaction(params, u[i], v[i]);
                rhs_u[i] = u[i] + dt * fu;
                rhs_v[i] = v[i] + dt * fv;
            }
            rhs_u[0] = ls.left[0];
            rhs_u[n - 1] = ls.right[0];
            rhs_v[0] = ls.left[1];
            rhs_v[n - 1] = ls.right[1];
            implicit_diffusion_solve(mu_u, rhs_u, cprime, un);
            implicit_diffusion_solve(mu_v, rhs_v, cprime, vn);
            u.swap(un);
            v.swap(vn);
        }
        u[0] = ls.left[0];
        u[n - 1] = ls.right[0];
        v[0] = ls.left[1];
        v[n - 1] = ls.right[1];
    }
    state.t += dt;
    check_finite(state);
}

std::optional<double> front_position(const Grid1D& grid, const std::vector<double>& u,
                                     double level) {
    const int n = static_cast<int>(u.size());
    for (int i = n - 1; i >= 0; --i) {
        if (u[i] >= level) {
            if (i == n - 1) return grid.x(i);
            // Interpolate on [x_i, x_{i+1}] with u[i] >= level > u[i+1].
            const double denom = u[i] - u[i + 1];
            const double frac = denom > 0.0 ? (u[i] - level) / denom : 0.0;
            return grid.x(i) + frac * grid.h();
        }
    }
    return std::nullopt;
}

namespace {

SampleRow make_sample(const FieldState& state, const model::ModelSpec& spec, const Grid1D& grid,
                      double level) {
    SampleRow row;
    row.t = state.t;
    row.frame_shift = state.frame_shift;
    const auto& u = state.components[0];
    auto [umin_it, umax_it] = std::minmax_element(u.begin(), u.end());
    row.u_min = *umin_it;
    row.u_max = *umax_it;
    double mass = 0.0;
    for (double x : u) mass += x;
    row.mass = mass * grid.h();
    if (spec.is_lv()) {
        const auto& v = state.components[1];
        auto [vmin_it, vmax_it] = std::minmax_element(v.begin(), v.end());
        row.v_min = *vmin_it;
        row.v_max = *vmax_it;
    }
    if (auto pos = front_position(grid, u, level)) {
        row.front_found = true;
        row.front_position = *pos + state.frame_shift;
    }
    return row;
}

/// Shift the window right by `cells`, filling inflow with the right limit.
void reframe(FieldState& state, const LimitStates& ls, int cells) {
    for (size_t comp = 0; comp < state.components.size(); ++comp) {
        auto& a = state.components[comp];
        const int n = static_cast<int>(a.size());
        const int k = std::min(cells, n);
        std::move(a.begin() + k, a.end(), a.begin());
        std::fill(a.end() - k, a.end(), ls.right[comp]);
        a[0] = ls.left[comp];
    }
}

}  // namespace

RunResult run_until(FieldState state, const model::ModelSpec& spec, const Grid1D& grid,
                    const StepperConfig& config, const RunOptions& options,
                    const SampleCallback& callback) {
    if (!(options.t_end >= state.t)) {
        throw contract_error("run_until: t_end must be >= current time");
    }
    RunResult result;
    const LimitStates ls = limit_states(spec);
    const long long total_steps = llround((options.t_end - state.t) / config.dt);
    const long long sample_every =
        std::max(1LL, llround(options.sample_dt / config.dt));

    auto emit = [&](const FieldState& s) {
        SampleRow row = make_sample(s, spec, grid, options.level);
        result.series.push_back(row);
        if (callback) callback(s, row);
    };

    emit(state);
    const double reframe_threshold = grid.x_min + 0.7 * (grid.x_max - grid.x_min);
    const double reframe_target = grid.x_min + 0.5 * (grid.x_max - grid.x_min);
    for (long long k = 1; k <= total_steps; ++k) {
        step(state, spec, grid, config);
        if (k % sample_every == 0 || k == total_steps) {
            if (options.comoving) {
                if (auto pos = front_position(grid, state.components[0], options.level)) {
                    if (*pos > reframe_threshold) {
                        const int cells =
                            static_cast<int>(std::floor((*pos - reframe_target) / grid.h()));
                        if (cells > 0) {
                            reframe(state, ls, cells);
                            state.frame_shift += cells * grid.h();
                        }
                    }
                }
            }
            emit(state);
        }
    }
    result.state = std::move(state);
    return result;
}

}  // namespace frontlab::sim
