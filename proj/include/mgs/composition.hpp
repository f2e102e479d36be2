#pragma once

#include <compare>
#include <string>

namespace mgs {

// A point in the design space: how many of each resource increment to build.
// Default unit sizes: one turbine = 3 MW, one solar unit = 4 MW DC, one
// battery unit = 7.5 MWh.
struct Composition {
    int wind_turbines = 0;
    int solar_units = 0;
    int battery_units = 0;

    auto operator<=>(const Composition&) const = default;
};

inline std::string composition_label(const Composition& c) {
    return "w" + std::to_string(c.wind_turbines) + "_s" + std::to_string(c.solar_units) + "_b" +
           std::to_string(c.battery_units);
}

} // namespace mgs
