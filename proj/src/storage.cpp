#include "mgs/storage.hpp"

#include <algorithm>

#include "mgs/error.hpp"

namespace mgs {

void BatteryParams::check() const {
    if (capacity_kwh < 0.0)
        throw Error("battery capacity must be >= 0");
    if (min_soc < 0.0 || min_soc >= 1.0)
        throw Error("battery min SoC must be in [0, 1)");
    if (max_soc <= min_soc || max_soc > 1.0)
        throw Error("battery max SoC must be in (min_soc, 1]");
    if (charge_efficiency <= 0.0 || charge_efficiency > 1.0)
        throw Error("charge efficiency must be in (0, 1]");
    if (discharge_efficiency <= 0.0 || discharge_efficiency > 1.0)
        throw Error("discharge efficiency must be in (0, 1]");
    if (max_charge_kw < 0.0 || max_discharge_kw < 0.0)
        throw Error("battery rate limits must be >= 0");
    if (initial_soc < min_soc || initial_soc > max_soc)
        throw Error("initial SoC must be within [min_soc, max_soc]");
    if (charge_taper_knee_soc &&
        (*charge_taper_knee_soc < min_soc || *charge_taper_knee_soc >= max_soc))
        throw Error("charge taper knee must be in [min_soc, max_soc)");
}

BatteryState initial_battery_state(const BatteryParams& params) {
    params.check();
    BatteryState s;
    s.stored_kwh = params.capacity_kwh * params.initial_soc;
    return s;
}

BatteryStepResult battery_step(const BatteryParams& params, const BatteryState& state,
                               double requested_kw, double dt_seconds) {
    if (dt_seconds <= 0.0)
        throw Error("battery step duration must be > 0");
    const double dt_h = dt_seconds / 3600.0;
    BatteryStepResult res;
    res.state = state;

    if (requested_kw > 0.0) {
        double rate_kw = params.max_charge_kw;
        if (params.charge_taper_knee_soc && params.capacity_kwh > 0.0) {
            const double soc = state.stored_kwh / params.capacity_kwh;
            const double knee = *params.charge_taper_knee_soc;
            if (soc > knee)
                rate_kw *= std::max(0.0, (params.max_soc - soc) / (params.max_soc - knee));
        }
        const double headroom_kwh = params.ceiling_kwh() - state.stored_kwh;
        const double fill_kw = headroom_kwh / (dt_h * params.charge_efficiency);
        const double p = std::max(0.0, std::min({requested_kw, rate_kw, fill_kw}));
        res.state.stored_kwh =
            std::min(state.stored_kwh + p * dt_h * params.charge_efficiency, params.ceiling_kwh());
        res.state.cumulative_charge_kwh += p * dt_h;
        res.actual_kw = p;
    } else if (requested_kw < 0.0) {
        const double available_kwh = state.stored_kwh - params.floor_kwh();
        const double drain_kw = available_kwh * params.discharge_efficiency / dt_h;
        const double p = std::max(0.0, std::min({-requested_kw, params.max_discharge_kw, drain_kw}));
        res.state.stored_kwh =
            std::max(state.stored_kwh - p * dt_h / params.discharge_efficiency, params.floor_kwh());
        res.state.cumulative_discharge_kwh += p * dt_h;
        res.actual_kw = -p;
    }
    return res;
}

std::optional<double> equivalent_cycles(const BatteryParams& params, const BatteryState& state) {
    const double usable = params.usable_capacity_kwh();
    if (usable <= 0.0)
        return std::nullopt;
    return state.cumulative_discharge_kwh / usable;
}

} // namespace mgs
