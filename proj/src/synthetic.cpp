#include "mgs/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "mgs/config.hpp"
#include "mgs/error.hpp"
#include "mgs/rng.hpp"

namespace mgs {

namespace {

constexpr double kPi = std::numbers::pi;

double clear_sky_poa(double latitude_deg, int day_of_year, double hour) {
    const double phi = latitude_deg * kPi / 180.0;
    const double decl = -23.44 * kPi / 180.0 * std::cos(2.0 * kPi * (day_of_year + 10) / 365.0);
    const double hour_angle = kPi / 12.0 * (hour - 12.0);
    const double sin_elev = std::sin(phi) * std::sin(decl) +
                            std::cos(phi) * std::cos(decl) * std::cos(hour_angle);
    return std::max(0.0, sin_elev) * 1000.0;
}

} // namespace

SyntheticScenario make_synthetic(const SyntheticOptions& opt) {
    if (opt.days < 1)
        throw Error("synthetic scenario needs at least one day");
    if (opt.step_seconds <= 0 || 86400 % opt.step_seconds != 0)
        throw Error("synthetic step must divide one day");
    if (!(opt.load_mean_kw > 0.0))
        throw Error("synthetic load mean must be > 0");

    const std::size_t per_day = static_cast<std::size_t>(86400 / opt.step_seconds);
    const std::size_t n = per_day * static_cast<std::size_t>(opt.days);
    const double step_hours = static_cast<double>(opt.step_seconds) / 3600.0;

    Rng rng(opt.seed);

    SyntheticScenario out;
    auto init = [&](TimeSeries& ts, Unit unit) {
        ts.start = opt.start;
        ts.step = opt.step_seconds;
        ts.unit = unit;
        ts.values.resize(n);
    };
    init(out.load, Unit::kilowatt);
    init(out.weather.poa_irradiance, Unit::watt_per_m2);
    init(out.weather.ambient_temp, Unit::celsius);
    init(out.weather.wind_speed_ref, Unit::meter_per_second);
    init(out.carbon_intensity, Unit::gco2_per_kwh);
    out.weather.ref_height_m = 10.0;

    double cloud = 0.75;
    double wind = 6.5;
    for (std::size_t i = 0; i < n; ++i) {
        const int day = static_cast<int>(i / per_day);
        const double hour = static_cast<double>(i % per_day) * step_hours;
        const double season = std::cos(2.0 * kPi * day / 365.0); // +1 mid-winter

        if (i % per_day == 0)
            cloud = std::clamp(cloud + rng.next_noise(0.16), 0.25, 1.0);

        const double load =
            opt.load_mean_kw * (1.0 + 0.06 * std::sin(2.0 * kPi * (hour - 14.0) / 24.0)) +
            rng.next_noise(opt.load_mean_kw * 0.02);
        out.load.values[i] = std::max(load, opt.load_mean_kw * 0.2);

        const double sky = std::clamp(cloud + rng.next_noise(0.05), 0.2, 1.0);
        out.weather.poa_irradiance.values[i] =
            clear_sky_poa(opt.latitude_deg, day, hour) * sky;

        out.weather.ambient_temp.values[i] = 20.0 - 8.0 * season +
                                             5.0 * std::sin(2.0 * kPi * (hour - 15.0) / 24.0) +
                                             rng.next_noise(1.5);

        const double wind_mean = 6.5 + 1.5 * season;
        wind = std::clamp(wind + 0.15 * (wind_mean - wind) + rng.next_noise(0.9), 0.3, 22.0);
        out.weather.wind_speed_ref.values[i] = wind;

        const double ci = 380.0 + 70.0 * std::cos(2.0 * kPi * (hour - 16.0) / 24.0) +
                          25.0 * season + rng.next_noise(15.0);
        out.carbon_intensity.values[i] = std::clamp(ci, 120.0, 650.0);
    }
    return out;
}

std::filesystem::path write_synthetic_scenario(const std::filesystem::path& dir,
                                               const SyntheticOptions& opt) {
    const SyntheticScenario sc = make_synthetic(opt);
    std::filesystem::create_directories(dir);

    {
        const std::pair<std::string, const TimeSeries*> cols[] = {{"load_kw", &sc.load}};
        write_csv(dir / "load.csv", cols);
    }
    {
        const std::pair<std::string, const TimeSeries*> cols[] = {
            {"poa_w_m2", &sc.weather.poa_irradiance},
            {"temp_c", &sc.weather.ambient_temp},
            {"wind_ms", &sc.weather.wind_speed_ref},
        };
        write_csv(dir / "weather.csv", cols);
    }
    {
        const std::pair<std::string, const TimeSeries*> cols[] = {
            {"gco2_per_kwh", &sc.carbon_intensity}};
        write_csv(dir / "carbon_intensity.csv", cols);
    }

    ScenarioConfig config;
    config.site_name = "synthetic";
    config.base_dir = dir;
    config.load_trace = "load.csv";
    config.weather_trace = "weather.csv";
    config.carbon_trace = "carbon_intensity.csv";
    config.step_seconds = opt.step_seconds;
    config.wind_ref_height_m = sc.weather.ref_height_m;
    config.check();

    const std::filesystem::path config_path = dir / "scenario.toml";
    const std::string text = dump_config(config);
    std::ofstream outfile(config_path);
    if (!outfile)
        throw Error("cannot open output file: " + config_path.string());
    outfile << text;
    if (!outfile)
        throw Error("failed writing " + config_path.string());
    return config_path;
}

} // namespace mgs
