#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mgs/composition.hpp"

namespace mgs {

// Inclusive per-axis bounds of the composition grid.
struct SpaceBounds {
    int max_wind_turbines = 10;
    int max_solar_units = 10;
    int max_battery_units = 8;

    void check() const;

    std::int64_t count() const {
        return static_cast<std::int64_t>(max_wind_turbines + 1) * (max_solar_units + 1) *
               (max_battery_units + 1);
    }

    bool contains(const Composition& c) const {
        return c.wind_turbines >= 0 && c.wind_turbines <= max_wind_turbines && c.solar_units >= 0 &&
               c.solar_units <= max_solar_units && c.battery_units >= 0 &&
               c.battery_units <= max_battery_units;
    }
};

struct SearchConfig {
    int population_size = 50;
    int max_evaluations = 350;
    double crossover_probability = 0.9;
    double mutation_probability = 1.0 / 3.0; // per gene
    std::uint64_t seed = 42;
    std::vector<std::string> objectives = {"embodied_tco2", "operational_tco2_per_day"};

    void check() const;
};

} // namespace mgs
