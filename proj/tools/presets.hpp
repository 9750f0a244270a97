#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace frontlab::tools {

/// Named experiments with pinned grids and durations. Output files land in
/// `out` when set; the returned JSON carries every number a caller needs.
struct PresetOptions {
    std::optional<std::filesystem::path> out;
    bool svg = false;
    int workers = 1;
};

nlohmann::json preset_hadeler_rothe_table(const PresetOptions& options);
nlohmann::json preset_figure1(const PresetOptions& options);
nlohmann::json preset_figure2(const PresetOptions& options);
nlohmann::json preset_beta_star_check(const PresetOptions& options);
nlohmann::json preset_nonlocal_kpp(const PresetOptions& options);

std::vector<std::string> preset_names();
nlohmann::json run_preset(const std::string& name, const PresetOptions& options);

}  // namespace frontlab::tools
