#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mgs/carbon.hpp"
#include "mgs/generation.hpp"
#include "mgs/search_config.hpp"
#include "mgs/storage.hpp"

namespace mgs {

// Everything a run needs, loaded from one TOML file. Trace paths are kept as
// written; resolve them against base_dir (the config file's directory).
struct ScenarioConfig {
    std::string site_name = "scenario";
    std::filesystem::path base_dir;

    std::string load_trace;
    std::string weather_trace;
    std::string carbon_trace;
    std::int64_t step_seconds = 3600;
    double wind_ref_height_m = 10.0;
    std::string window_start; // ISO-8601, empty = start of trace overlap
    std::string window_end;

    // per solar unit (one 4 MW DC increment)
    double solar_unit_dc_kw = 4000.0;
    double system_loss_fraction = 0.14;
    double inverter_efficiency = 0.96;
    double temp_coefficient_per_c = -0.0047;
    double noct_c = 45.0;

    double turbine_rated_kw = 3000.0;
    double cut_in_ms = 3.0;
    double rated_speed_ms = 12.0;
    double cut_out_ms = 25.0;
    double hub_height_m = 100.0;
    double shear_exponent = 0.14;

    // per battery unit (one 7.5 MWh increment)
    double battery_unit_kwh = 7500.0;
    double min_soc = 0.1;
    double max_soc = 0.9;
    double charge_efficiency = 0.95;
    double discharge_efficiency = 0.95;
    double battery_c_rate = 0.5;
    double initial_soc = 0.1;
    std::optional<double> charge_taper_knee_soc;

    EmbodiedFactors embodied;
    bool allow_grid_charging = false;

    Composition composition; // default build for simulate/project
    SpaceBounds space;
    SearchConfig search;

    std::int64_t projection_horizon_days = 7300;
    std::vector<double> candidate_budgets_tco2 = {5000.0, 10000.0, 15000.0};

    std::filesystem::path resolve(const std::string& trace) const;
    SolarPlant solar_plant(int units) const;
    WindFarm wind_farm(int turbines) const;
    BatteryParams battery_params(int units) const;
    void check() const;
};

ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig load_config_from_string(std::string_view text, std::string_view origin,
                                       const std::filesystem::path& base_dir);

// Canonical TOML text; load(dump(c)) reproduces c and dump is a fixed point.
std::string dump_config(const ScenarioConfig& config);

} // namespace mgs
