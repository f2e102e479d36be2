#pragma once

#include <optional>
#include <vector>

#include "mgs/composition.hpp"
#include "mgs/config.hpp"
#include "mgs/storage.hpp"
#include "mgs/timeseries.hpp"

namespace mgs {

struct StepResult {
    double generation_kw = 0.0;
    double load_kw = 0.0;
    double battery_flow_kw = 0.0; // signed, + = charging (external terminal power)
    double grid_import_kw = 0.0;
    double grid_export_kw = 0.0;
};

struct DispatchOutcome {
    StepResult step;
    BatteryState state;
};

// Greedy priority dispatch for one step: generation serves load first, surplus
// charges the battery then exports, deficit discharges then imports. With
// allow_grid_charging the battery charges at full rate on surplus steps and
// the grid tops up whatever the surplus cannot supply.
DispatchOutcome dispatch_step(double gen_kw, double load_kw, const BatteryParams& params,
                              const BatteryState& state, double dt_seconds,
                              bool allow_grid_charging = false);

struct SimulationMetrics {
    double operational_tco2_per_day = 0.0;
    double embodied_tco2 = 0.0;
    double coverage_percent = 0.0; // 100 * (1 - import/load)
    std::optional<double> battery_cycles;
    double import_kwh = 0.0;
    double export_kwh = 0.0;
    double load_kwh = 0.0;
    double onsite_generation_kwh = 0.0;
};

// A scenario ready to simulate: traces aligned to one grid plus generation
// profiles precomputed per unit, so the optimizer can run many compositions
// against it cheaply.
struct Scenario {
    ScenarioConfig config;
    TimeSeries load;             // kW
    TimeSeries poa;              // W/m2
    TimeSeries ambient;          // degC
    TimeSeries wind_ref;         // m/s at wind_ref_height_m
    TimeSeries carbon_intensity; // gCO2/kWh

    std::vector<double> hub_speed_ms;                     // per step
    std::vector<double> turbine_kw;                       // per step, one turbine
    std::vector<std::vector<double>> solar_unit_profiles; // [units 0..max][step], AC kW

    std::size_t steps() const { return load.size(); }
    double dt_seconds() const { return static_cast<double>(load.step); }
    double duration_days() const { return static_cast<double>(load.duration_seconds()) / 86400.0; }

    static Scenario load_traces(const ScenarioConfig& config);
    static Scenario from_series(ScenarioConfig config, const TimeSeries& load_kw,
                                const WeatherFrame& weather, const TimeSeries& carbon_intensity);
};

struct StepTrace {
    StepResult step;
    double stored_kwh = 0.0;
};

SimulationMetrics run_simulation(const Scenario& scenario, const Composition& composition,
                                 std::vector<StepTrace>* trace = nullptr);

} // namespace mgs
