#pragma once

#include "riswpt/sweep.hpp"

#include <nlohmann/json.hpp>

namespace riswpt {

// JSON round-trip for the configuration types. Schemas are documented in
// the README; unknown keys are rejected to catch typos early.

nlohmann::json to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SolverConfig& cfg);
SolverConfig solver_from_json(const nlohmann::json& j);

nlohmann::json to_json(const SweepSpec& spec);
SweepSpec sweep_from_json(const nlohmann::json& j);

ScenarioConfig load_scenario(const std::string& path);
SweepSpec load_sweep(const std::string& path);
void save_json(const nlohmann::json& j, const std::string& path);

} // namespace riswpt
