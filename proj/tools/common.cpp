#include "common.hpp"

#include <chrono>

#include "frontlab/csv.hpp"
#include "frontlab/errors.hpp"
#include "frontlab/version.hpp"

namespace frontlab::tools {

double json_number(const nlohmann::json& node, const std::string& key, double fallback) {
    if (!node.contains(key)) return fallback;
    if (!node[key].is_number()) {
        throw config_error("config key '" + key + "' must be a number");
    }
    return node[key].get<double>();
}

int json_int(const nlohmann::json& node, const std::string& key, int fallback) {
    if (!node.contains(key)) return fallback;
    if (!node[key].is_number_integer()) {
        throw config_error("config key '" + key + "' must be an integer");
    }
    return node[key].get<int>();
}

bool json_bool(const nlohmann::json& node, const std::string& key, bool fallback) {
    if (!node.contains(key)) return fallback;
    if (!node[key].is_boolean()) {
        throw config_error("config key '" + key + "' must be a boolean");
    }
    return node[key].get<bool>();
}

std::string json_string(const nlohmann::json& node, const std::string& key,
                        const std::string& fallback) {
    if (!node.contains(key)) return fallback;
    if (!node[key].is_string()) {
        throw config_error("config key '" + key + "' must be a string");
    }
    return node[key].get<std::string>();
}

namespace {

model::NonlinearityFamily family_from_config(const nlohmann::json& cfg) {
    if (!cfg.contains("model") || !cfg["model"].contains("nonlinearity")) {
        throw config_error("missing [model.nonlinearity] table");
    }
    const auto& nl = cfg["model"]["nonlinearity"];
    const std::string kind = json_string(nl, "kind", "fisher_kpp");
    if (kind == "fisher_kpp") return model::NonlinearityFamily::fisher_kpp();
    if (kind == "hadeler_rothe") {
        return model::NonlinearityFamily::hadeler_rothe(json_number(nl, "s", 0.0));
    }
    if (kind == "custom_cubic") {
        if (!nl.contains("coeffs") || !nl["coeffs"].is_array() || nl["coeffs"].size() != 3) {
            throw config_error("custom_cubic requires coeffs = [c1, c2, c3]");
        }
        return model::NonlinearityFamily::custom_cubic(
            {nl["coeffs"][0].get<double>(), nl["coeffs"][1].get<double>(),
             nl["coeffs"][2].get<double>()});
    }
    throw config_error("unknown nonlinearity kind '" + kind + "'");
}

model::KernelSpec kernel_from_config(const nlohmann::json& cfg, double h) {
    if (!cfg.contains("model") || !cfg["model"].contains("kernel")) {
        throw config_error("missing [model.kernel] table");
    }
    const auto& k = cfg["model"]["kernel"];
    const std::string shape = json_string(k, "shape", "uniform");
    const double half_width = json_number(k, "half_width", 1.0);
    if (shape == "uniform") return model::KernelSpec::uniform(half_width, h);
    if (shape == "parabolic_bump") return model::KernelSpec::parabolic_bump(half_width, h);
    if (shape == "custom_samples") {
        if (!k.contains("samples") || !k["samples"].is_array()) {
            throw config_error("custom_samples kernel requires a samples array");
        }
        std::vector<double> samples;
        for (const auto& v : k["samples"]) samples.push_back(v.get<double>());
        return model::KernelSpec::custom(half_width, h, std::move(samples));
    }
    throw config_error("unknown kernel shape '" + shape + "'");
}

}  // namespace

model::ModelSpec model_from_config(const nlohmann::json& cfg) {
    if (!cfg.contains("model")) throw config_error("missing [model] table");
    const std::string variant = json_string(cfg["model"], "variant", "");
    if (variant == "scalar_local") {
        return {model::ScalarLocal{family_from_config(cfg)}};
    }
    if (variant == "lv_system") {
        if (!cfg["model"].contains("lv")) throw config_error("missing [model.lv] table");
        const auto& lv = cfg["model"]["lv"];
        return {model::LVSystem{model::LVParams(
            json_number(lv, "a", 0.5), json_number(lv, "b", 0.5), json_number(lv, "d", 1.0),
            json_number(lv, "r", 1.0))}};
    }
    if (variant == "scalar_nonlocal") {
        const sim::Grid1D grid = grid_from_config(cfg);
        return {model::ScalarNonlocal{family_from_config(cfg),
                                      kernel_from_config(cfg, grid.h())}};
    }
    throw config_error("model.variant must be scalar_local, lv_system or scalar_nonlocal");
}

sim::Grid1D grid_from_config(const nlohmann::json& cfg) {
    const nlohmann::json grid = cfg.contains("grid") ? cfg["grid"] : nlohmann::json::object();
    return sim::Grid1D(json_number(grid, "x_min", 0.0), json_number(grid, "x_max", 400.0),
                       json_int(grid, "n", 4001));
}

sim::StepperConfig stepper_from_config(const nlohmann::json& cfg, const model::ModelSpec& spec,
                                       const sim::Grid1D& grid) {
    const nlohmann::json st =
        cfg.contains("stepper") ? cfg["stepper"] : nlohmann::json::object();
    const double cfl = json_number(st, "cfl_safety", 0.4);
    sim::StepperConfig config = sim::default_stepper(spec, grid, cfl);
    const std::string scheme = json_string(st, "scheme", "auto");
    if (scheme == "explicit_euler") {
        config.scheme = sim::Scheme::explicit_euler;
        config.dt = sim::cfl_dt_limit(spec, grid, cfl);
    } else if (scheme == "imex_diffusion") {
        config.scheme = sim::Scheme::imex_diffusion;
    } else if (scheme != "auto") {
        throw config_error("stepper.scheme must be auto, explicit_euler or imex_diffusion");
    }
    const double dt = json_number(st, "dt", 0.0);
    if (dt > 0.0) config.dt = dt;
    return config;
}

sim::InitSpec init_from_config(const nlohmann::json& cfg) {
    const nlohmann::json run = cfg.contains("run") ? cfg["run"] : nlohmann::json::object();
    sim::InitSpec init;
    const std::string profile = json_string(run, "profile", "step");
    if (profile == "step") {
        init.profile = sim::InitialProfile::step;
    } else if (profile == "tanh") {
        init.profile = sim::InitialProfile::tanh_front;
    } else if (profile == "compact_bump") {
        init.profile = sim::InitialProfile::compact_bump;
    } else {
        throw config_error("run.profile must be step, tanh or compact_bump");
    }
    init.x0 = json_number(run, "x0", 10.0);
    init.x1 = json_number(run, "x1", init.x0 + 10.0);
    init.width = json_number(run, "width", 1.0);
    init.v_background = json_number(run, "v_background", 1.0);
    return init;
}

sim::RunOptions run_options_from_config(const nlohmann::json& cfg) {
    const nlohmann::json run = cfg.contains("run") ? cfg["run"] : nlohmann::json::object();
    sim::RunOptions options;
    options.t_end = json_number(run, "t_end", 100.0);
    options.sample_dt = json_number(run, "sample_dt", 0.5);
    options.level = json_number(run, "level", 0.5);
    options.comoving = json_bool(run, "comoving", false);
    return options;
}

SpreadResult run_spreading(const model::ModelSpec& spec, const sim::Grid1D& grid,
                           const sim::StepperConfig& stepper, const sim::InitSpec& init,
                           const sim::RunOptions& options, double t_lo_fraction) {
    auto state = sim::init_front(grid, spec, init);
    auto result = sim::run_until(std::move(state), spec, grid, stepper, options);
    SpreadResult out{speed::track_front(result.series, options.level), {}};
    out.estimate = speed::estimate_speed(out.track, t_lo_fraction);
    return out;
}

RunRecord::RunRecord(std::string command, const nlohmann::json& cfg)
    : command_(std::move(command)),
      config_hash_(config::config_hash(cfg)),
      start_(std::chrono::steady_clock::now()) {}

void RunRecord::add(const std::filesystem::path& path) {
    outputs_.push_back(path.string());
}

void RunRecord::write(const std::filesystem::path& dir) const {
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start_)
                             .count();
    nlohmann::json rec;
    rec["schema_version"] = kJsonSchemaVersion;
    rec["artifact_version"] = kVersion;
    rec["command"] = command_;
    rec["config_hash"] = config_hash_;
    rec["wall_ms"] = elapsed;
    rec["outputs"] = outputs_;
    write_json(dir / "run_record.json", rec);
}

void write_json(const std::filesystem::path& path, const nlohmann::json& payload) {
    std::ofstream out(path);
    if (!out.is_open()) {
        throw config_error("cannot open output file: " + path.string());
    }
    out << payload.dump(2) << "\n";
}

void write_track_csv(const std::filesystem::path& path, const speed::FrontTrack& track) {
    csv::Writer writer(path, {"t", "x", "x_over_t"});
    for (size_t i = 0; i < track.t.size(); ++i) {
        const double t = track.t[i];
        writer.row({t, track.x[i], t > 0.0 ? track.x[i] / t : 0.0});
    }
}

}  // namespace frontlab::tools
