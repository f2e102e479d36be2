#include "mgs/carbon.hpp"

#include "mgs/error.hpp"

namespace mgs {

void EmbodiedFactors::check() const {
    if (solar_tco2_per_unit < 0.0 || wind_tco2_per_turbine < 0.0 || battery_tco2_per_unit < 0.0)
        throw Error("embodied factors must be >= 0");
}

double embodied_tco2(const Composition& c, const EmbodiedFactors& f) {
    return static_cast<double>(c.wind_turbines) * f.wind_tco2_per_turbine +
           static_cast<double>(c.solar_units) * f.solar_tco2_per_unit +
           static_cast<double>(c.battery_units) * f.battery_tco2_per_unit;
}

double operational_tco2_per_day(const TimeSeries& import_kw, const TimeSeries& ci) {
    import_kw.check();
    ci.check();
    if (import_kw.start != ci.start || import_kw.step != ci.step || import_kw.size() != ci.size())
        throw Error("import and carbon-intensity series are not aligned");
    const double step_h = static_cast<double>(import_kw.step) / 3600.0;
    double grams = 0.0;
    for (std::size_t i = 0; i < import_kw.size(); ++i)
        grams += import_kw.values[i] * step_h * ci.values[i];
    const double days = static_cast<double>(import_kw.duration_seconds()) / 86400.0;
    return grams / 1e6 / days;
}

std::vector<double> project_cumulative(const EmissionProfile& profile, int horizon_days) {
    if (horizon_days < 0)
        throw Error("projection horizon must be >= 0 days");
    std::vector<double> out(static_cast<std::size_t>(horizon_days) + 1);
    for (int t = 0; t <= horizon_days; ++t)
        out[static_cast<std::size_t>(t)] =
            profile.embodied_tco2 + profile.operational_rate_tco2_per_day * static_cast<double>(t);
    return out;
}

std::optional<double> crossover_time_days(const EmissionProfile& a, const EmissionProfile& b) {
    const double rate_gap = a.operational_rate_tco2_per_day - b.operational_rate_tco2_per_day;
    if (rate_gap == 0.0)
        return std::nullopt;
    const double t = (b.embodied_tco2 - a.embodied_tco2) / rate_gap;
    if (t < 0.0)
        return std::nullopt;
    return t;
}

} // namespace mgs
