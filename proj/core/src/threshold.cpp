#include "frontlab/threshold.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "frontlab/dispersion.hpp"
#include "frontlab/errors.hpp"
#include "frontlab/waves.hpp"

namespace frontlab::threshold {

std::string verdict_name(Verdict v) {
    return v == Verdict::linear ? "linear" : "nonlinear";
}

std::string method_name(Method m) {
    return m == Method::tw_bisection ? "tw_bisection" : "cauchy_speed";
}

double linear_speed_of(const model::ModelSpec& spec) {
    if (spec.is_scalar_local()) {
        return dispersion::scalar_linear_speed(
            std::get<model::ScalarLocal>(spec.variant).family.fp0());
    }
    if (spec.is_lv()) {
        const auto& p = std::get<model::LVSystem>(spec.variant).params;
        if (!(p.a > 0.0 && p.a < 1.0)) {
            throw contract_error("linear_speed_of: LV linear speed needs 0 < a < 1");
        }
        return 2.0 * std::sqrt(1.0 - p.a);
    }
    const auto& m = std::get<model::ScalarNonlocal>(spec.variant);
    return dispersion::nonlocal_linear_speed(m.kernel, m.family.fp0()).c0_star();
}

namespace {

speed::SpeedEstimate run_cauchy_estimate(const model::ModelSpec& spec,
                                         const CauchyRunSpec& run) {
    sim::FieldState state = sim::init_front(run.grid, spec, run.init);
    sim::StepperConfig stepper = sim::default_stepper(spec, run.grid, run.cfl_safety);
    sim::RunOptions options;
    options.t_end = run.t_end;
    options.sample_dt = run.sample_dt;
    options.level = run.level;
    options.comoving = run.comoving;
    auto result = sim::run_until(std::move(state), spec, run.grid, stepper, options);
    auto track = speed::track_front(result.series, run.level);
    return speed::estimate_speed(track, run.t_lo_fraction);
}

/// Drift-based wave test for the nonlocal model: relax in the frame moving
/// at c0* and measure the residual drift of the level set. A settled front
/// means a wave at the linear speed exists.
bool nonlocal_wave_at_linear_speed(const model::ScalarNonlocal& m, double c0) {
    waves::ExtractOptions options;
    options.xi_min = -80.0;
    options.xi_max = 60.0;
    options.h = m.kernel.spacing();
    options.t_max = 600.0;
    options.settle_tol = 1e-7;
    options.newton_polish = false;
    try {
        waves::nonlocal_wave_extract(m.family, m.kernel, c0, options);
        return true;
    } catch (const numeric_error&) {
        return false;
    }
}

}  // namespace

VerdictRecord selection_verdict(const model::ModelSpec& spec, Method method,
                                const VerdictOptions& options) {
    VerdictRecord rec;
    rec.linear_speed = linear_speed_of(spec);

    if (method == Method::cauchy_speed) {
        const auto est = run_cauchy_estimate(spec, options.run);
        rec.c_hat = est.c_hat;
        rec.ci = est.ci_half_width;
        const double margin =
            options.margin > 0.0 ? options.margin : std::max(3.0 * est.ci_half_width, 1e-2);
        rec.verdict =
            (est.c_hat - rec.linear_speed > margin) ? Verdict::nonlinear : Verdict::linear;
        return rec;
    }

    if (spec.is_scalar_local()) {
        // Shoot at the linear speed. An undershoot or turn is a clear
        // nonlinear verdict; otherwise the orbit decays like
        // (A xi + B) e^{-lambda xi}, and A < 0 flags an orbit that must
        // eventually cross zero, i.e. the minimal speed exceeds the linear
        // one. A changes sign exactly at the selection threshold, which
        // makes this comparison sharp where the speed excess itself rises
        // only quadratically.
        const auto& family = std::get<model::ScalarLocal>(spec.variant).family;
        const auto shot = waves::scalar_wave_shoot(family, rec.linear_speed);
        if (shot.outcome != waves::ShootOutcome::connected) {
            rec.verdict = Verdict::nonlinear;
            rec.c_hat = waves::scalar_min_speed(family);
            return rec;
        }
        const double lambda_d = 0.5 * rec.linear_speed;
        const auto fit = waves::fit_tail(shot.profile, 0, waves::TailSide::plus_inf,
                                         {lambda_d, {}});
        const double eps = 1e-3 * std::max(std::abs(fit.b_hat), 1e-12);
        rec.verdict = fit.a_hat < -eps ? Verdict::nonlinear : Verdict::linear;
        rec.c_hat = rec.linear_speed;
        return rec;
    }
    if (spec.is_lv()) {
        const auto& params = std::get<model::LVSystem>(spec.variant).params;
        const double margin = options.margin > 0.0 ? options.margin : 3e-4;
        const auto cmp = waves::lv_wave_speed_comparison(params, options.lv_reference_b);
        rec.c_hat = cmp.c_query;
        rec.verdict = cmp.excess <= margin ? Verdict::linear : Verdict::nonlinear;
        return rec;
    }
    const auto& m = std::get<model::ScalarNonlocal>(spec.variant);
    const bool exists = nonlocal_wave_at_linear_speed(m, rec.linear_speed);
    rec.verdict = exists ? Verdict::linear : Verdict::nonlinear;
    rec.c_hat = rec.linear_speed;
    return rec;
}

ThresholdResult find_threshold(const ParameterFamily& family, double lo, double hi, double tol,
                               Method method, const VerdictOptions& options) {
    if (!(hi > lo) || !(tol > 0.0)) {
        throw contract_error("find_threshold: requires lo < hi and tol > 0");
    }
    ThresholdResult result;
    result.parameter_name = family.name;
    result.tolerance = tol;

    auto eval = [&](double p) {
        VerdictRecord rec = selection_verdict(family.at(p), method, options);
        rec.parameter = p;
        result.log.push_back(rec);
        return rec.verdict;
    };

    const Verdict v_lo = eval(lo);
    const Verdict v_hi = eval(hi);
    if (v_lo == v_hi) {
        throw bracket_error("find_threshold: equal verdicts (" + verdict_name(v_lo) +
                            ") at both bracket ends");
    }
    if (v_lo != Verdict::linear) {
        throw bracket_error("find_threshold: expected linear verdict at the lower end");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (eval(mid) == Verdict::linear) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    result.p_lo = lo;
    result.p_hi = hi;
    result.p_star = 0.5 * (lo + hi);

    // The bisection would be falsified by any non-monotone verdict pattern.
    std::vector<VerdictRecord> sorted = result.log;
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& x, const auto& y) { return x.parameter < y.parameter; });
    double last_linear = -std::numeric_limits<double>::infinity();
    double first_nonlinear = std::numeric_limits<double>::infinity();
    for (const auto& rec : sorted) {
        if (rec.verdict == Verdict::linear) last_linear = std::max(last_linear, rec.parameter);
        if (rec.verdict == Verdict::nonlinear) {
            first_nonlinear = std::min(first_nonlinear, rec.parameter);
        }
    }
    if (last_linear > first_nonlinear) {
        throw bracket_error("find_threshold: verdict log is not monotone in the parameter");
    }
    return result;
}

std::vector<SweepPoint> sweep(const ParameterFamily& family, const std::vector<double>& grid,
                              const std::vector<std::string>& measurements,
                              const SweepOptions& options) {
    if (grid.empty()) throw contract_error("sweep: empty parameter grid");
    std::vector<SweepPoint> points(grid.size());

    auto wants = [&](const std::string& key) {
        return std::find(measurements.begin(), measurements.end(), key) != measurements.end();
    };

    auto eval_point = [&](size_t idx) {
        SweepPoint& pt = points[idx];
        pt.parameter = grid[idx];
        try {
            const model::ModelSpec spec = family.at(pt.parameter);
            const double c_lin = linear_speed_of(spec);
            if (wants("linear_speed")) pt.values["linear_speed"] = c_lin;
            if (wants("c_hat") || wants("ci") || wants("excess")) {
                const auto est = run_cauchy_estimate(spec, options.verdict.run);
                if (wants("c_hat")) pt.values["c_hat"] = est.c_hat;
                if (wants("ci")) pt.values["ci"] = est.ci_half_width;
                if (wants("excess")) pt.values["excess"] = est.c_hat - c_lin;
            }
            if (wants("tail_class") || wants("pushed_integral")) {
                if (!spec.is_lv()) {
                    throw contract_error("sweep: wave measurements implemented for LV only");
                }
                const auto& params = std::get<model::LVSystem>(spec.variant).params;
                const auto lv_grid = waves::recommended_lv_grid(params, c_lin);
                const auto profile = waves::lv_wave_minimal(params, lv_grid);
                const auto roots = dispersion::lv_roots_plus_infinity(
                    params, std::max(profile.c, c_lin));
                waves::ReferenceRates rates{std::sqrt(1.0 - params.a),
                                            roots.lambda_u_plus};
                if (wants("c_wave")) pt.values["c_wave"] = profile.c;
                if (wants("tail_class")) {
                    const auto fit =
                        waves::fit_tail(profile, 0, waves::TailSide::plus_inf, rates);
                    pt.labels["tail_class"] = waves::tail_class_name(fit.cls);
                    pt.values["lambda_hat"] = fit.lambda_hat;
                    pt.values["p_hat"] = fit.p_hat;
                }
                if (wants("pushed_integral")) {
                    const auto crit = waves::pushed_integral(profile, params);
                    pt.values["pushed_integral"] = crit.integral;
                    pt.values["error_bound"] = crit.error_bound;
                }
            }
        } catch (const std::exception& e) {
            pt.failed = true;
            pt.error = e.what();
        }
    };

    const int workers = std::max(1, options.workers);
    if (workers == 1 || grid.size() == 1) {
        for (size_t i = 0; i < grid.size(); ++i) eval_point(i);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1)) {
                    eval_point(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return points;
}

}  // namespace frontlab::threshold
