#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "frontlab/config.hpp"
#include "frontlab/model.hpp"
#include "frontlab/simulate.hpp"
#include "frontlab/speed.hpp"
#include "frontlab/threshold.hpp"

namespace frontlab::tools {

/// Model construction and run settings decoded from a validated config.
model::ModelSpec model_from_config(const nlohmann::json& cfg);
sim::Grid1D grid_from_config(const nlohmann::json& cfg);
sim::StepperConfig stepper_from_config(const nlohmann::json& cfg, const model::ModelSpec& spec,
                                       const sim::Grid1D& grid);
sim::InitSpec init_from_config(const nlohmann::json& cfg);
sim::RunOptions run_options_from_config(const nlohmann::json& cfg);

double json_number(const nlohmann::json& node, const std::string& key, double fallback);
int json_int(const nlohmann::json& node, const std::string& key, int fallback);
bool json_bool(const nlohmann::json& node, const std::string& key, bool fallback);
std::string json_string(const nlohmann::json& node, const std::string& key,
                        const std::string& fallback);

/// Spreading-speed measurement pipeline shared by the CLI and the presets.
struct SpreadResult {
    speed::FrontTrack track;
    speed::SpeedEstimate estimate;
};
SpreadResult run_spreading(const model::ModelSpec& spec, const sim::Grid1D& grid,
                           const sim::StepperConfig& stepper, const sim::InitSpec& init,
                           const sim::RunOptions& options, double t_lo_fraction = 0.5);

/// Output manifest collected by a command, written as run_record.json.
class RunRecord {
public:
    RunRecord(std::string command, const nlohmann::json& cfg);
    void add(const std::filesystem::path& path);
    void write(const std::filesystem::path& dir) const;

private:
    std::string command_;
    std::string config_hash_;
    std::chrono::steady_clock::time_point start_;
    std::vector<std::string> outputs_;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& payload);
void write_track_csv(const std::filesystem::path& path, const speed::FrontTrack& track);

}  // namespace frontlab::tools
