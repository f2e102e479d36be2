#pragma once

#include <cstdint>
#include <filesystem>

#include "mgs/timeseries.hpp"

namespace mgs {

// Deterministic synthetic year for demos and self-contained runs: a flat-ish
// data-center load, clear-sky solar with a cloud random walk, an AR(1) wind
// process and a diurnal grid carbon-intensity curve. Same options, same bytes.
struct SyntheticOptions {
    std::int64_t start = 1672531200; // 2023-01-01T00:00:00Z
    int days = 365;
    std::int64_t step_seconds = 3600;
    std::uint64_t seed = 90;
    double load_mean_kw = 1620.0;
    double latitude_deg = 29.8;
};

struct SyntheticScenario {
    TimeSeries load;
    WeatherFrame weather;
    TimeSeries carbon_intensity;
};

SyntheticScenario make_synthetic(const SyntheticOptions& options);

// Writes load.csv, weather.csv, carbon_intensity.csv and scenario.toml into
// dir; returns the path of scenario.toml.
std::filesystem::path write_synthetic_scenario(const std::filesystem::path& dir,
                                               const SyntheticOptions& options);

} // namespace mgs
