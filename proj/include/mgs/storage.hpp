#pragma once

#include <optional>

namespace mgs {

// Capacity/efficiency/rate-limited linear battery. One configured unit is
// scaled by the composition's unit count before simulation.
struct BatteryParams {
    double capacity_kwh = 0.0;
    double min_soc = 0.1;              // [0, 1)
    double max_soc = 0.9;              // (min_soc, 1]
    double charge_efficiency = 0.95;   // (0, 1]
    double discharge_efficiency = 0.95;
    double max_charge_kw = 0.0;
    double max_discharge_kw = 0.0;
    double initial_soc = 0.1;          // [min_soc, max_soc]
    // When set, the admissible charge power ramps linearly from max_charge_kw
    // at this SoC down to zero at max_soc. Disabled by default.
    std::optional<double> charge_taper_knee_soc;

    void check() const;

    double usable_capacity_kwh() const { return capacity_kwh * (max_soc - min_soc); }
    double floor_kwh() const { return capacity_kwh * min_soc; }
    double ceiling_kwh() const { return capacity_kwh * max_soc; }
};

// Stored energy plus lifetime counters of external energy moved through the
// terminals. Counters feed the equivalent-cycle metric.
struct BatteryState {
    double stored_kwh = 0.0;
    double cumulative_discharge_kwh = 0.0; // delivered externally
    double cumulative_charge_kwh = 0.0;    // absorbed externally
};

BatteryState initial_battery_state(const BatteryParams& params);

struct BatteryStepResult {
    BatteryState state;
    double actual_kw = 0.0; // signed, + = charging, external terminal power
};

// One transition. Requests are clamped to rate limits and SoC bounds, never
// rejected: |actual| <= |requested|. Charging stores actual*dt*eta_c;
// discharging removes |actual|*dt/eta_d from storage.
BatteryStepResult battery_step(const BatteryParams& params, const BatteryState& state,
                               double requested_kw, double dt_seconds);

// Cumulative discharged energy over usable capacity. Empty for a zero-capacity
// battery (rendered "--" in reports).
std::optional<double> equivalent_cycles(const BatteryParams& params, const BatteryState& state);

} // namespace mgs
