#pragma once

#include <optional>
#include <vector>

#include "mgs/composition.hpp"
#include "mgs/timeseries.hpp"

namespace mgs {

// Cradle-to-gate footprint of one increment of each resource, in tCO2.
// Defaults: 630 kg/kW * 4 MW solar, 1046 t per 3 MW turbine, 62 kg/kWh *
// 7.5 MWh battery unit.
struct EmbodiedFactors {
    double solar_tco2_per_unit = 2520.0;
    double wind_tco2_per_turbine = 1046.0;
    double battery_tco2_per_unit = 465.0;

    void check() const;
};

// One-time embodied investment plus a constant operational emission rate.
struct EmissionProfile {
    double embodied_tco2 = 0.0;
    double operational_rate_tco2_per_day = 0.0;
};

// Linear sum over the composition; zero for the empty build.
double embodied_tco2(const Composition& composition, const EmbodiedFactors& factors);

// Scope-2 emissions of the imported energy, normalized to tCO2 per day.
// Both series must share start, step and length; days may be fractional.
double operational_tco2_per_day(const TimeSeries& import_kw, const TimeSeries& carbon_intensity);

// Cumulative emissions per day index: out[t] = embodied + rate * t for
// t = 0..horizon_days inclusive.
std::vector<double> project_cumulative(const EmissionProfile& profile, int horizon_days);

// Day at which the cumulative lines of a and b intersect:
// (embodied_b - embodied_a) / (rate_a - rate_b). Empty when the rates are
// equal or the intersection lies in the past.
std::optional<double> crossover_time_days(const EmissionProfile& a, const EmissionProfile& b);

} // namespace mgs
