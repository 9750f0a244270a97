#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "common.hpp"
#include "frontlab/csv.hpp"
#include "frontlab/dispersion.hpp"
#include "frontlab/errors.hpp"
#include "frontlab/svg.hpp"
#include "frontlab/version.hpp"
#include "frontlab/waves.hpp"
#include "presets.hpp"

namespace fl = frontlab;
namespace tools = frontlab::tools;
using nlohmann::json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    int workers = 1;
    bool svg = false;
};

json load_and_validate(const CommonArgs& args) {
    json cfg = fl::config::load_config_file(args.config_path);
    fl::config::validate_keys(cfg, fl::config::run_config_schema());
    return cfg;
}

std::optional<std::filesystem::path> ensure_out(const CommonArgs& args) {
    if (args.out_dir.empty()) return std::nullopt;
    std::filesystem::path dir(args.out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

json dispersion_report(const json& cfg) {
    const auto spec = tools::model_from_config(cfg);
    const json dcfg = cfg.contains("dispersion") ? cfg["dispersion"] : json::object();
    json report;
    report["schema_version"] = fl::kJsonSchemaVersion;

    if (spec.is_scalar_local()) {
        const auto& family = std::get<fl::model::ScalarLocal>(spec.variant).family;
        report["variant"] = "scalar_local";
        report["f_prime_0"] = family.fp0();
        report["f_prime_1"] = family.fp1();
        report["kpp_condition"] = family.kpp_condition();
        report["linear_speed"] = fl::dispersion::scalar_linear_speed(family.fp0());
        if (family.kind() == fl::model::NonlinearityKind::hadeler_rothe) {
            const double cs = fl::dispersion::hadeler_rothe_speed(family.s());
            report["hadeler_rothe_speed"] = cs;
            report["lambda_s_plus"] = fl::dispersion::scalar_fast_rate(cs, family.fp0());
        }
        return report;
    }
    if (spec.is_lv()) {
        const auto& params = std::get<fl::model::LVSystem>(spec.variant).params;
        report["variant"] = "lv_system";
        const auto [us, vs] = params.equilibrium();
        report["equilibrium"] = {{"u_star", us}, {"v_star", vs}};
        const double c_lin = 2.0 * std::sqrt(1.0 - params.a);
        report["linear_speed"] = c_lin;
        const double c = tools::json_number(dcfg, "c", c_lin);
        report["c"] = c;

        const auto plus = fl::dispersion::lv_roots_plus_infinity(params, c);
        report["plus_infinity"] = {{"lambda_u_plus", plus.lambda_u_plus},
                                   {"lambda_u_minus", plus.lambda_u_minus},
                                   {"lambda_v_plus", plus.lambda_v_plus},
                                   {"lambda_v_minus", plus.lambda_v_minus},
                                   {"degenerate_double", plus.degenerate_double}};
        const auto minus = fl::dispersion::lv_roots_minus_infinity(params, c);
        json mi;
        mi["mu_u_plus"] = minus.mu_u_plus;
        mi["mu_u_minus"] = minus.mu_u_minus;
        if (params.b > 1.0) {
            mi["mu_v_plus"] = minus.mu_v_plus;
            mi["mu_v_minus"] = minus.mu_v_minus;
        } else if (minus.algebraic_minus_infinity) {
            mi["algebraic_order"] = -1;  // 1/|xi| tails at b = 1
        } else {
            mi["nu"] = minus.nu;
        }
        report["minus_infinity"] = mi;

        const auto cond = fl::dispersion::sufficient_condition_report(params);
        report["sufficient_conditions"] = {
            {"llw_applicable", cond.llw_applicable},
            {"llw", cond.llw == fl::dispersion::SelectionGuarantee::guaranteed_linear
                        ? "guaranteed-linear"
                        : "unknown"},
            {"llw_lhs", cond.llw_lhs},
            {"llw_rhs", cond.llw_rhs},
            {"huang", cond.huang == fl::dispersion::SelectionGuarantee::guaranteed_linear
                          ? "guaranteed-linear"
                          : "unknown"},
            {"huang_lhs", cond.huang_lhs},
            {"huang_rhs", cond.huang_rhs}};

        if (params.a < 1.0 && params.b < 1.0 && params.a * params.b < 1.0) {
            const auto cubic = fl::dispersion::glue_beta_star(params);
            json glue;
            glue["condition_holds"] = cubic.condition_holds;
            glue["coefficients"] = cubic.coeff;
            glue["v_star"] = cubic.v_star;
            if (cubic.beta_star) {
                glue["beta_star"] = *cubic.beta_star;
                glue["predicted_speed"] = *cubic.predicted_speed;
            } else {
                glue["no_threshold_prediction"] = true;
            }
            report["glue_cubic"] = glue;
        }
        return report;
    }
    const auto& m = std::get<fl::model::ScalarNonlocal>(spec.variant);
    report["variant"] = "scalar_nonlocal";
    const double lambda_max = tools::json_number(dcfg, "lambda_max", 50.0);
    const auto nl = fl::dispersion::nonlocal_linear_speed(m.kernel, m.family.fp0(), lambda_max);
    report["c0_star"] = nl.c0_star();
    report["lambda0"] = nl.lambda0();
    const double c = tools::json_number(dcfg, "c", 0.0);
    if (c > nl.c0_star()) {
        report["c"] = c;
        report["lambda_minus"] = nl.lambda_minus(c);
        report["lambda_plus"] = nl.lambda_plus(c);
        report["lambda_tilde"] =
            fl::dispersion::nonlocal_minus_infinity_rate(m.kernel, m.family.fp1(), c,
                                                         lambda_max);
    }
    return report;
}

int cmd_dispersion(const CommonArgs& args) {
    json cfg = load_and_validate(args);
    tools::RunRecord record("dispersion", cfg);
    json report = dispersion_report(cfg);
    std::cout << report.dump(2) << "\n";
    if (auto out = ensure_out(args)) {
        tools::write_json(*out / "dispersion.json", report);
        record.add(*out / "dispersion.json");
        record.write(*out);
    }
    return 0;
}

int cmd_speed(const CommonArgs& args) {
    json cfg = load_and_validate(args);
    tools::RunRecord record("speed", cfg);
    const auto spec = tools::model_from_config(cfg);
    const auto grid = tools::grid_from_config(cfg);
    const auto stepper = tools::stepper_from_config(cfg, spec, grid);
    const auto init = tools::init_from_config(cfg);
    const auto options = tools::run_options_from_config(cfg);
    const double t_lo_fraction =
        tools::json_number(cfg.contains("run") ? cfg["run"] : json::object(),
                           "t_lo_fraction", 0.5);

    auto out = ensure_out(args);
    std::optional<fl::csv::Writer> series;
    if (out) {
        std::vector<std::string> header{"t", "front_position", "u_min", "u_max", "mass"};
        if (spec.is_lv()) {
            header.push_back("v_min");
            header.push_back("v_max");
        }
        series.emplace(*out / "series.csv", header);
    }

    auto state = fl::sim::init_front(grid, spec, init);
    auto run = fl::sim::run_until(
        std::move(state), spec, grid, stepper, options,
        [&](const fl::sim::FieldState&, const fl::sim::SampleRow& row) {
            if (!series) return;
            std::vector<double> vals{row.t, row.front_position, row.u_min, row.u_max,
                                     row.mass};
            if (spec.is_lv()) {
                vals.push_back(row.v_min);
                vals.push_back(row.v_max);
            }
            series->row(vals);
        });
    tools::SpreadResult result{fl::speed::track_front(run.series, options.level), {}};
    result.estimate = fl::speed::estimate_speed(result.track, t_lo_fraction);
    const double linear = fl::threshold::linear_speed_of(spec);
    const auto excess = fl::speed::speed_excess(result.estimate, linear);

    json summary;
    summary["schema_version"] = fl::kJsonSchemaVersion;
    summary["c_hat"] = result.estimate.c_hat;
    summary["ci_half_width"] = result.estimate.ci_half_width;
    summary["slope_fit"] = result.estimate.slope_fit;
    summary["ratio_tail"] = result.estimate.ratio_tail;
    summary["window"] = {{"t_lo", result.estimate.t_lo}, {"t_hi", result.estimate.t_hi}};
    summary["samples"] = result.estimate.samples;
    summary["linear_speed"] = linear;
    summary["excess"] = excess.value;
    summary["dt"] = stepper.dt;
    std::cout << summary.dump(2) << "\n";

    if (out) {
        record.add(*out / "series.csv");
        tools::write_track_csv(*out / "track.csv", result.track);
        record.add(*out / "track.csv");
        tools::write_json(*out / "speed.json", summary);
        record.add(*out / "speed.json");
        // Final snapshot (x, u[, v]) in the current window.
        {
            const bool two = spec.is_lv();
            fl::csv::Writer snap(*out / "snapshot.csv",
                                 two ? std::vector<std::string>{"x", "u", "v"}
                                     : std::vector<std::string>{"x", "u"});
            for (int i = 0; i < grid.n; ++i) {
                const double x = grid.x(i) + run.state.frame_shift;
                if (two) {
                    snap.row({x, run.state.components[0][i], run.state.components[1][i]});
                } else {
                    snap.row({x, run.state.components[0][i]});
                }
            }
            record.add(*out / "snapshot.csv");
        }
        if (args.svg) {
            fl::svg::LinePlot plot;
            plot.title = "front position over time";
            plot.x_label = "t";
            plot.y_label = "x(t)/t";
            plot.h_lines = {linear};
            fl::svg::Series xt_series;
            for (size_t i = 0; i < result.track.t.size(); ++i) {
                if (result.track.t[i] <= 1.0) continue;
                xt_series.x.push_back(result.track.t[i]);
                xt_series.y.push_back(result.track.x[i] / result.track.t[i]);
            }
            plot.series.push_back(std::move(xt_series));
            plot.write(*out / "speed.svg");
            record.add(*out / "speed.svg");
        }
        record.write(*out);
    }
    return 0;
}

struct WaveOutput {
    fl::waves::WaveProfile profile;
    json meta;
};

WaveOutput compute_wave(const json& cfg) {
    const auto spec = tools::model_from_config(cfg);
    const json wcfg = cfg.contains("wave") ? cfg["wave"] : json::object();
    WaveOutput out;
    out.meta["schema_version"] = fl::kJsonSchemaVersion;

    if (spec.is_scalar_local()) {
        const auto& family = std::get<fl::model::ScalarLocal>(spec.variant).family;
        double c = tools::json_number(wcfg, "c", 0.0);
        if (c <= 0.0) c = fl::waves::scalar_min_speed(family, 1e-7) + 1e-7;
        auto shot = fl::waves::scalar_wave_shoot(family, c);
        if (shot.outcome != fl::waves::ShootOutcome::connected) {
            throw fl::numeric_error("no monotone wave at c = " + std::to_string(c));
        }
        out.profile = std::move(shot.profile);
        out.meta["variant"] = "scalar_local";
    } else if (spec.is_lv()) {
        const auto& params = std::get<fl::model::LVSystem>(spec.variant).params;
        const double c_lin = 2.0 * std::sqrt(1.0 - params.a);
        fl::sim::Grid1D grid = fl::waves::recommended_lv_grid(params, c_lin);
        if (wcfg.contains("xi_min") && wcfg.contains("xi_max")) {
            const double h = tools::json_number(wcfg, "h", 0.05);
            const double lo = tools::json_number(wcfg, "xi_min", -100.0);
            const double hi = tools::json_number(wcfg, "xi_max", 100.0);
            const int n = static_cast<int>(std::llround((hi - lo) / h)) + 1;
            grid = fl::sim::Grid1D(lo, lo + (n - 1) * h, n);
        }
        const double c_req = tools::json_number(wcfg, "c", 0.0);
        out.profile = c_req > 0.0 ? fl::waves::lv_wave_bvp(params, c_req, grid)
                                  : fl::waves::lv_wave_minimal(params, grid);
        out.meta["variant"] = "lv_system";
    } else {
        const auto& m = std::get<fl::model::ScalarNonlocal>(spec.variant);
        fl::waves::ExtractOptions options;
        options.h = m.kernel.spacing();
        options.xi_min = tools::json_number(wcfg, "xi_min", -120.0);
        options.xi_max = tools::json_number(wcfg, "xi_max", 80.0);
        options.t_max = tools::json_number(wcfg, "t_max", 4000.0);
        double c = tools::json_number(wcfg, "c", 0.0);
        if (c <= 0.0) {
            c = fl::dispersion::nonlocal_linear_speed(m.kernel, m.family.fp0()).c0_star();
        }
        out.profile = fl::waves::nonlocal_wave_extract(m.family, m.kernel, c, options);
        out.meta["variant"] = "scalar_nonlocal";
    }
    out.meta["c"] = out.profile.c;
    out.meta["residual_sup"] = out.profile.residual_sup;
    out.meta["monotone"] = out.profile.monotone;
    return out;
}

void write_profile_csv(const std::filesystem::path& path,
                       const fl::waves::WaveProfile& profile) {
    const bool two = profile.comps.size() == 2;
    fl::csv::Writer writer(path, two ? std::vector<std::string>{"xi", "U", "V"}
                                     : std::vector<std::string>{"xi", "W"});
    for (size_t i = 0; i < profile.xi.size(); ++i) {
        if (two) {
            writer.row({profile.xi[i], profile.comps[0][i], profile.comps[1][i]});
        } else {
            writer.row({profile.xi[i], profile.comps[0][i]});
        }
    }
}

int cmd_wave(const CommonArgs& args) {
    json cfg = load_and_validate(args);
    tools::RunRecord record("wave", cfg);
    auto wave = compute_wave(cfg);
    std::cout << wave.meta.dump(2) << "\n";
    if (auto out = ensure_out(args)) {
        write_profile_csv(*out / "profile.csv", wave.profile);
        record.add(*out / "profile.csv");
        tools::write_json(*out / "wave.json", wave.meta);
        record.add(*out / "wave.json");
        record.write(*out);
    }
    return 0;
}

int cmd_classify(const CommonArgs& args) {
    json cfg = load_and_validate(args);
    tools::RunRecord record("classify", cfg);
    const auto spec = tools::model_from_config(cfg);
    auto wave = compute_wave(cfg);
    json report = wave.meta;

    fl::waves::ReferenceRates rates{0.0, {}};
    if (spec.is_scalar_local()) {
        const auto& family = std::get<fl::model::ScalarLocal>(spec.variant).family;
        rates.lambda_double = std::sqrt(family.fp0());
        if (wave.profile.c > 2.0 * rates.lambda_double + 1e-9) {
            rates.lambda_fast =
                fl::dispersion::scalar_fast_rate(wave.profile.c, family.fp0());
        }
    } else if (spec.is_lv()) {
        const auto& params = std::get<fl::model::LVSystem>(spec.variant).params;
        rates.lambda_double = std::sqrt(1.0 - params.a);
        const double c_eval = std::max(wave.profile.c, 2.0 * rates.lambda_double);
        rates.lambda_fast =
            fl::dispersion::lv_roots_plus_infinity(params, c_eval).lambda_u_plus;
    } else {
        // Rates of the centered-discrete system the polished profile solves.
        const auto& m = std::get<fl::model::ScalarNonlocal>(spec.variant);
        const auto nl = fl::waves::nonlocal_centered_dispersion(m.kernel, m.family.fp0(),
                                                                m.kernel.spacing());
        rates.lambda_double = nl.lambda0();
        if (wave.profile.c > nl.c0_star() * (1.0 + 1e-6)) {
            rates.lambda_fast = nl.lambda_plus(wave.profile.c);
        }
    }

    const auto fit =
        fl::waves::fit_tail(wave.profile, 0, fl::waves::TailSide::plus_inf, rates);
    report["tail"] = {{"lambda_hat", fit.lambda_hat},
                      {"p_hat", fit.p_hat},
                      {"class", fl::waves::tail_class_name(fit.cls)},
                      {"ambiguous", fit.ambiguous},
                      {"a_hat", fit.a_hat},
                      {"b_hat", fit.b_hat},
                      {"window", {fit.xi_a, fit.xi_b}},
                      {"lambda_double", rates.lambda_double}};
    if (rates.lambda_fast) report["tail"]["lambda_fast"] = *rates.lambda_fast;

    if (spec.is_lv()) {
        const auto& params = std::get<fl::model::LVSystem>(spec.variant).params;
        const double c_lin = 2.0 * std::sqrt(1.0 - params.a);
        if (std::abs(wave.profile.c - c_lin) <= 0.02 * c_lin) {
            const auto crit = fl::waves::pushed_integral(wave.profile, params);
            report["pushed_integral"] = {{"integral", crit.integral},
                                         {"lambda_u", crit.lambda_u},
                                         {"error_bound", crit.error_bound}};
        }
    }
    std::cout << report.dump(2) << "\n";
    if (auto out = ensure_out(args)) {
        write_profile_csv(*out / "profile.csv", wave.profile);
        record.add(*out / "profile.csv");
        tools::write_json(*out / "classification.json", report);
        record.add(*out / "classification.json");
        record.write(*out);
    }
    return 0;
}

fl::threshold::ParameterFamily family_from_cfg(const json& cfg, const std::string& parameter) {
    json base = cfg;
    if (base.contains("__lines")) base.erase("__lines");
    return {parameter, [base, parameter](double p) {
                json patched = base;
                if (parameter == "s" || parameter == "q") {
                    patched["model"]["nonlinearity"]["kind"] = "hadeler_rothe";
                    patched["model"]["nonlinearity"]["s"] = p;
                } else if (parameter == "a" || parameter == "b" || parameter == "d" ||
                           parameter == "r") {
                    patched["model"]["lv"][parameter] = p;
                } else {
                    throw fl::config_error("unsupported sweep/threshold parameter '" +
                                           parameter + "'");
                }
                return tools::model_from_config(patched);
            }};
}

int cmd_threshold(const CommonArgs& args) {
    json cfg = load_and_validate(args);
    tools::RunRecord record("threshold", cfg);
    if (!cfg.contains("threshold")) throw fl::config_error("missing [threshold] table");
    const json& tcfg = cfg["threshold"];
    const std::string parameter = tools::json_string(tcfg, "parameter", "");
    if (parameter.empty()) throw fl::config_error("threshold.parameter is required");
    const double lo = tools::json_number(tcfg, "lo", 0.0);
    const double hi = tools::json_number(tcfg, "hi", 0.0);
    const double tol = tools::json_number(tcfg, "tol", 1e-2);
    const std::string method_name = tools::json_string(tcfg, "method", "tw_bisection");
    const auto method = method_name == "cauchy_speed" ? fl::threshold::Method::cauchy_speed
                                                      : fl::threshold::Method::tw_bisection;

    fl::threshold::VerdictOptions options;
    options.margin = tools::json_number(tcfg, "margin", 0.0);
    options.run.grid = tools::grid_from_config(cfg);
    options.run.init = tools::init_from_config(cfg);
    const auto run_options = tools::run_options_from_config(cfg);
    options.run.t_end = run_options.t_end;
    options.run.sample_dt = run_options.sample_dt;
    options.run.level = run_options.level;
    options.run.comoving = run_options.comoving;

    auto result =
        fl::threshold::find_threshold(family_from_cfg(cfg, parameter), lo, hi, tol, method, options);

    json report;
    report["schema_version"] = fl::kJsonSchemaVersion;
    report["parameter"] = result.parameter_name;
    report["p_star"] = result.p_star;
    report["bracket"] = {result.p_lo, result.p_hi};
    report["tolerance"] = result.tolerance;
    report["method"] = method_name;
    json log = json::array();
    for (const auto& rec : result.log) {
        log.push_back({{"parameter", rec.parameter},
                       {"c_hat", rec.c_hat},
                       {"ci", rec.ci},
                       {"linear_speed", rec.linear_speed},
                       {"verdict", fl::threshold::verdict_name(rec.verdict)}});
    }
    report["log"] = log;
    std::cout << report.dump(2) << "\n";
    if (auto out = ensure_out(args)) {
        tools::write_json(*out / "threshold.json", report);
        record.add(*out / "threshold.json");
        record.write(*out);
    }
    return 0;
}

int cmd_sweep(const CommonArgs& args) {
    json cfg = load_and_validate(args);
    tools::RunRecord record("sweep", cfg);
    if (!cfg.contains("sweep")) throw fl::config_error("missing [sweep] table");
    const json& scfg = cfg["sweep"];
    const std::string parameter = tools::json_string(scfg, "parameter", "");
    if (parameter.empty() || !scfg.contains("values")) {
        throw fl::config_error("sweep.parameter and sweep.values are required");
    }
    std::vector<double> values;
    for (const auto& v : scfg["values"]) values.push_back(v.get<double>());
    std::vector<std::string> measurements;
    if (scfg.contains("measurements")) {
        for (const auto& v : scfg["measurements"]) measurements.push_back(v.get<std::string>());
    }

    fl::threshold::SweepOptions options;
    options.workers = args.workers;
    options.verdict.run.grid = tools::grid_from_config(cfg);
    options.verdict.run.init = tools::init_from_config(cfg);
    const auto run_options = tools::run_options_from_config(cfg);
    options.verdict.run.t_end = run_options.t_end;
    options.verdict.run.sample_dt = run_options.sample_dt;
    options.verdict.run.level = run_options.level;
    options.verdict.run.comoving = run_options.comoving;

    auto points =
        fl::threshold::sweep(family_from_cfg(cfg, parameter), values, measurements, options);

    std::vector<std::string> header{parameter, "failed", "error"};
    std::vector<std::string> value_keys;
    std::vector<std::string> label_keys;
    for (const auto& pt : points) {
        for (const auto& [k, v] : pt.values) {
            if (std::find(value_keys.begin(), value_keys.end(), k) == value_keys.end()) {
                value_keys.push_back(k);
            }
        }
        for (const auto& [k, v] : pt.labels) {
            if (std::find(label_keys.begin(), label_keys.end(), k) == label_keys.end()) {
                label_keys.push_back(k);
            }
        }
    }
    for (const auto& k : value_keys) header.push_back(k);
    for (const auto& k : label_keys) header.push_back(k);

    auto row_of = [&](const fl::threshold::SweepPoint& pt) {
        std::vector<std::string> row{fl::csv::format_number(pt.parameter),
                                     pt.failed ? "1" : "0", pt.error};
        for (const auto& k : value_keys) {
            row.push_back(pt.values.count(k) ? fl::csv::format_number(pt.values.at(k)) : "");
        }
        for (const auto& k : label_keys) {
            row.push_back(pt.labels.count(k) ? pt.labels.at(k) : "");
        }
        return row;
    };

    for (const auto& pt : points) {
        json entry{{"parameter", pt.parameter}, {"failed", pt.failed}};
        for (const auto& [k, v] : pt.values) entry[k] = v;
        for (const auto& [k, v] : pt.labels) entry[k] = v;
        if (pt.failed) entry["error"] = pt.error;
        std::cout << entry.dump() << "\n";
    }
    if (auto out = ensure_out(args)) {
        fl::csv::Writer writer(*out / "sweep.csv", header);
        for (const auto& pt : points) writer.row_text(row_of(pt));
        record.add(*out / "sweep.csv");
        record.write(*out);
    }
    return 0;
}

int cmd_preset(const std::string& name, const CommonArgs& args) {
    tools::PresetOptions options;
    options.svg = args.svg;
    options.workers = args.workers;
    json cfg{{"preset", name}};
    tools::RunRecord record("preset " + name, cfg);
    if (auto out = ensure_out(args)) options.out = *out;
    json report = tools::run_preset(name, options);
    std::cout << report.dump(2) << "\n";
    if (options.out) {
        const auto path = *options.out / (name + ".json");
        tools::write_json(path, report);
        record.add(path);
        record.write(*options.out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"frontlab: spreading speeds, traveling waves and speed-selection thresholds"};
    app.set_version_flag("--version", fl::kVersion);
    app.require_subcommand(1);

    CommonArgs args;
    std::string preset_name;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        if (needs_config) {
            sub->add_option("--config", args.config_path, "config file (structured text or JSON)")
                ->required();
        }
        sub->add_option("--out", args.out_dir, "output directory");
        sub->add_option("--workers", args.workers, "worker pool size");
        sub->add_flag("--svg", args.svg, "emit SVG line plots");
    };

    auto* dispersion = app.add_subcommand("dispersion", "roots, speeds and predictors");
    add_common(dispersion, true);
    auto* speed = app.add_subcommand("speed", "spreading-speed measurement from a Cauchy run");
    add_common(speed, true);
    auto* wave = app.add_subcommand("wave", "traveling-wave profile");
    add_common(wave, true);
    auto* classify = app.add_subcommand("classify", "wave profile plus tail classification");
    add_common(classify, true);
    auto* threshold = app.add_subcommand("threshold", "bisection for the selection threshold");
    add_common(threshold, true);
    auto* sweep = app.add_subcommand("sweep", "parameter sweep with measurements");
    add_common(sweep, true);
    auto* preset = app.add_subcommand("preset", "named experiment with pinned settings");
    preset->add_option("name", preset_name, "one of: figure1, figure2, hadeler_rothe_table, beta_star_check, nonlocal_kpp")
        ->required();
    add_common(preset, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (dispersion->parsed()) return cmd_dispersion(args);
        if (speed->parsed()) return cmd_speed(args);
        if (wave->parsed()) return cmd_wave(args);
        if (classify->parsed()) return cmd_classify(args);
        if (threshold->parsed()) return cmd_threshold(args);
        if (sweep->parsed()) return cmd_sweep(args);
        if (preset->parsed()) return cmd_preset(preset_name, args);
    } catch (const fl::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const fl::bracket_error& e) {
        std::cerr << "bracket error: " << e.what() << "\n";
        return 4;
    } catch (const fl::contract_error& e) {
        std::cerr << "contract error: " << e.what() << "\n";
        return 4;
    } catch (const fl::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
