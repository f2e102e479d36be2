#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mgs {

// Physical units carried by trace values. None of these admits negative
// values, which trace validation enforces.
enum class Unit {
    kilowatt,
    watt_per_m2,
    celsius,
    meter_per_second,
    gco2_per_kwh,
};

std::string_view unit_name(Unit u);

// Uniformly sampled sequence of finite values. The value at index i is the
// average over [start + i*step, start + (i+1)*step), so energy = value * step
// is exact and resampling is well defined. Timestamps are UTC epoch seconds;
// all arithmetic stays in UTC. Immutable by convention once built.
struct TimeSeries {
    std::int64_t start = 0; // UTC epoch seconds of the first interval
    std::int64_t step = 0;  // seconds, > 0
    std::vector<double> values;
    Unit unit = Unit::kilowatt;

    std::size_t size() const { return values.size(); }
    std::int64_t end() const { return start + step * static_cast<std::int64_t>(values.size()); }
    std::int64_t duration_seconds() const { return end() - start; }

    // Throws Error on any invariant violation (step <= 0, empty, non-finite
    // or negative values).
    void check() const;
};

// The three weather inputs on one shared grid plus the anemometer height the
// wind speeds were measured at.
struct WeatherFrame {
    TimeSeries poa_irradiance; // W/m^2, plane of array
    TimeSeries ambient_temp;   // degC
    TimeSeries wind_speed_ref; // m/s at ref_height
    double ref_height_m = 10.0;

    void check() const;
};

// --- timestamp handling -----------------------------------------------------

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(int year, int month, int day);
void civil_from_days(std::int64_t days, int& year, int& month, int& day);

// Strict ISO-8601 with explicit offset: "YYYY-MM-DDTHH:MM:SS" followed by
// "Z" or "+HH:MM"/"-HH:MM". Returns UTC epoch seconds.
std::int64_t parse_iso8601(std::string_view text);

// Canonical UTC form "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601_utc(std::int64_t epoch_seconds);

// --- CSV ingestion ----------------------------------------------------------

// Reads the named columns from a trace file. Layout: header row with a leading
// `timestamp` column, comma separated, `#` lines ignored. Timestamps must be
// strictly increasing and uniformly spaced; start/step are inferred from the
// first two rows. Errors carry the offending 1-based data row.
std::map<std::string, TimeSeries>
load_csv(const std::filesystem::path& path, const std::map<std::string, Unit>& column_spec);

// Writes series sharing one grid as a trace file in the same layout load_csv
// reads. Values use shortest round-trip formatting, so a load/write/load cycle
// is exact.
void write_csv(const std::filesystem::path& path,
               std::span<const std::pair<std::string, const TimeSeries*>> columns);

// --- resampling and alignment -----------------------------------------------

enum class Resample {
    mean_downsample, // new_step must be an integer multiple of ts.step
    hold_upsample,   // ts.step must be an integer multiple of new_step
};

TimeSeries resample(const TimeSeries& ts, std::int64_t new_step, Resample method);

// Half-open UTC window [start, end).
struct Window {
    std::int64_t start = 0;
    std::int64_t end = 0;
};

// Restricts one series to the window at the target step, resampling as
// needed. The window must sit on the series' grid and its duration must be a
// multiple of target_step.
TimeSeries clip_to_window(const TimeSeries& ts, Window window, std::int64_t target_step);

// clip_to_window over a set; afterwards every output shares start, step and
// length. Errors name the offending series by its 1-based position.
std::vector<TimeSeries>
align(std::span<const TimeSeries> series_set, Window window, std::int64_t target_step);

} // namespace mgs
