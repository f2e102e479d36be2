#include "mgs/config.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mgs/error.hpp"
#include "mgs/format.hpp"
#include "mgs/toml.hpp"

namespace mgs {

void SpaceBounds::check() const {
    if (max_wind_turbines < 0 || max_solar_units < 0 || max_battery_units < 0)
        throw Error("space bounds must be >= 0");
}

void SearchConfig::check() const {
    if (population_size < 2 || population_size % 2 != 0)
        throw Error("search.population_size must be even and >= 2");
    if (max_evaluations < population_size)
        throw Error("search.max_evaluations must be >= population_size");
    if (!(crossover_probability >= 0.0 && crossover_probability <= 1.0))
        throw Error("search.crossover_probability must be in [0, 1]");
    if (!(mutation_probability >= 0.0 && mutation_probability <= 1.0))
        throw Error("search.mutation_probability must be in [0, 1]");
    if (objectives.size() < 2)
        throw Error("search.objectives needs at least two entries");
}

std::filesystem::path ScenarioConfig::resolve(const std::string& trace) const {
    std::filesystem::path p(trace);
    return p.is_absolute() ? p : base_dir / p;
}

SolarPlant ScenarioConfig::solar_plant(int units) const {
    SolarPlant p;
    p.rated_dc_kw = solar_unit_dc_kw * units;
    p.system_loss_fraction = system_loss_fraction;
    p.inverter_efficiency = inverter_efficiency;
    p.temp_coefficient_per_c = temp_coefficient_per_c;
    p.noct_c = noct_c;
    p.check();
    return p;
}

WindFarm ScenarioConfig::wind_farm(int turbines) const {
    WindFarm f;
    f.turbine_count = turbines;
    f.turbine_rated_kw = turbine_rated_kw;
    f.cut_in_ms = cut_in_ms;
    f.rated_speed_ms = rated_speed_ms;
    f.cut_out_ms = cut_out_ms;
    f.hub_height_m = hub_height_m;
    f.shear_exponent = shear_exponent;
    f.check();
    return f;
}

BatteryParams ScenarioConfig::battery_params(int units) const {
    BatteryParams b;
    b.capacity_kwh = battery_unit_kwh * units;
    b.min_soc = min_soc;
    b.max_soc = max_soc;
    b.charge_efficiency = charge_efficiency;
    b.discharge_efficiency = discharge_efficiency;
    b.max_charge_kw = battery_c_rate * b.capacity_kwh;
    b.max_discharge_kw = battery_c_rate * b.capacity_kwh;
    b.initial_soc = initial_soc;
    b.charge_taper_knee_soc = charge_taper_knee_soc;
    b.check();
    return b;
}

void ScenarioConfig::check() const {
    if (load_trace.empty() || weather_trace.empty() || carbon_trace.empty())
        throw Error("trace paths must not be empty");
    if (step_seconds <= 0)
        throw Error("traces.step_seconds must be > 0");
    if (!(wind_ref_height_m > 0.0))
        throw Error("traces.wind_ref_height_m must be > 0");
    if (!(solar_unit_dc_kw >= 0.0))
        throw Error("solar.unit_dc_kw must be >= 0");
    if (!(noct_c >= 20.0))
        throw Error("solar.noct_c must be >= 20");
    if (!(battery_unit_kwh >= 0.0))
        throw Error("battery.unit_capacity_kwh must be >= 0");
    if (!(battery_c_rate >= 0.0))
        throw Error("battery.c_rate must be >= 0");
    if (projection_horizon_days < 0)
        throw Error("projection.horizon_days must be >= 0");
    if (candidate_budgets_tco2.empty())
        throw Error("candidates.budgets_tco2 must not be empty");
    for (std::size_t i = 0; i < candidate_budgets_tco2.size(); ++i) {
        if (!(candidate_budgets_tco2[i] > 0.0))
            throw Error("candidates.budgets_tco2 entries must be > 0");
        if (i > 0 && !(candidate_budgets_tco2[i] > candidate_budgets_tco2[i - 1]))
            throw Error("candidates.budgets_tco2 must be strictly ascending");
    }
    // Delegated checks cover the remaining field invariants.
    solar_plant(1);
    wind_farm(1);
    battery_params(1);
    embodied.check();
    space.check();
    search.check();
    if (!space.contains(composition))
        throw Error("composition outside configured space: " + composition_label(composition));
}

namespace {

std::string require_string(toml::Reader& r, std::string_view key) {
    if (!r.has(key))
        throw Error(r.origin() + ": missing required key '" + std::string(key) + "'");
    return r.get_string(key, "");
}

ScenarioConfig read_config(toml::Reader& r, const std::filesystem::path& base_dir) {
    ScenarioConfig c;
    c.base_dir = base_dir;

    c.site_name = r.get_string("site.name", c.site_name);

    c.load_trace = require_string(r, "traces.load");
    c.weather_trace = require_string(r, "traces.weather");
    c.carbon_trace = require_string(r, "traces.carbon_intensity");
    c.step_seconds = r.get_int("traces.step_seconds", c.step_seconds);
    c.wind_ref_height_m = r.get_double("traces.wind_ref_height_m", c.wind_ref_height_m);
    c.window_start = r.get_string("traces.window_start", c.window_start);
    c.window_end = r.get_string("traces.window_end", c.window_end);

    c.solar_unit_dc_kw = r.get_double("solar.unit_dc_kw", c.solar_unit_dc_kw);
    c.system_loss_fraction = r.get_double("solar.system_loss_fraction", c.system_loss_fraction);
    c.inverter_efficiency = r.get_double("solar.inverter_efficiency", c.inverter_efficiency);
    c.temp_coefficient_per_c =
        r.get_double("solar.temp_coefficient_per_c", c.temp_coefficient_per_c);
    c.noct_c = r.get_double("solar.noct_c", c.noct_c);

    c.turbine_rated_kw = r.get_double("wind.turbine_rated_kw", c.turbine_rated_kw);
    c.cut_in_ms = r.get_double("wind.cut_in_ms", c.cut_in_ms);
    c.rated_speed_ms = r.get_double("wind.rated_speed_ms", c.rated_speed_ms);
    c.cut_out_ms = r.get_double("wind.cut_out_ms", c.cut_out_ms);
    c.hub_height_m = r.get_double("wind.hub_height_m", c.hub_height_m);
    c.shear_exponent = r.get_double("wind.shear_exponent", c.shear_exponent);

    c.battery_unit_kwh = r.get_double("battery.unit_capacity_kwh", c.battery_unit_kwh);
    c.min_soc = r.get_double("battery.min_soc", c.min_soc);
    c.max_soc = r.get_double("battery.max_soc", c.max_soc);
    c.charge_efficiency = r.get_double("battery.charge_efficiency", c.charge_efficiency);
    c.discharge_efficiency = r.get_double("battery.discharge_efficiency", c.discharge_efficiency);
    c.battery_c_rate = r.get_double("battery.c_rate", c.battery_c_rate);
    c.initial_soc = r.get_double("battery.initial_soc", c.initial_soc);
    if (r.has("battery.charge_taper_knee_soc"))
        c.charge_taper_knee_soc = r.get_double("battery.charge_taper_knee_soc", 0.0);

    c.embodied.solar_tco2_per_unit =
        r.get_double("embodied_factors.solar_tco2_per_unit", c.embodied.solar_tco2_per_unit);
    c.embodied.wind_tco2_per_turbine =
        r.get_double("embodied_factors.wind_tco2_per_turbine", c.embodied.wind_tco2_per_turbine);
    c.embodied.battery_tco2_per_unit =
        r.get_double("embodied_factors.battery_tco2_per_unit", c.embodied.battery_tco2_per_unit);

    c.allow_grid_charging = r.get_bool("dispatch.allow_grid_charging", c.allow_grid_charging);

    c.composition.wind_turbines = static_cast<int>(
        r.get_int("composition.wind_turbines", c.composition.wind_turbines));
    c.composition.solar_units =
        static_cast<int>(r.get_int("composition.solar_units", c.composition.solar_units));
    c.composition.battery_units =
        static_cast<int>(r.get_int("composition.battery_units", c.composition.battery_units));

    c.space.max_wind_turbines =
        static_cast<int>(r.get_int("space.max_wind_turbines", c.space.max_wind_turbines));
    c.space.max_solar_units =
        static_cast<int>(r.get_int("space.max_solar_units", c.space.max_solar_units));
    c.space.max_battery_units =
        static_cast<int>(r.get_int("space.max_battery_units", c.space.max_battery_units));

    c.search.population_size =
        static_cast<int>(r.get_int("search.population_size", c.search.population_size));
    c.search.max_evaluations =
        static_cast<int>(r.get_int("search.max_evaluations", c.search.max_evaluations));
    c.search.crossover_probability =
        r.get_double("search.crossover_probability", c.search.crossover_probability);
    c.search.mutation_probability =
        r.get_double("search.mutation_probability", c.search.mutation_probability);
    const std::int64_t seed =
        r.get_int("search.seed", static_cast<std::int64_t>(c.search.seed));
    if (seed < 0)
        throw Error("search.seed must be >= 0");
    c.search.seed = static_cast<std::uint64_t>(seed);
    c.search.objectives = r.get_string_array("search.objectives", c.search.objectives);

    c.projection_horizon_days = r.get_int("projection.horizon_days", c.projection_horizon_days);
    c.candidate_budgets_tco2 =
        r.get_double_array("candidates.budgets_tco2", c.candidate_budgets_tco2);

    r.reject_unknown_keys();
    c.check();
    return c;
}

} // namespace

ScenarioConfig load_config(const std::filesystem::path& path) {
    toml::Reader r(toml::parse_file(path));
    ScenarioConfig c = read_config(r, path.parent_path());
    for (const std::string* trace : {&c.load_trace, &c.weather_trace, &c.carbon_trace}) {
        const std::filesystem::path p = c.resolve(*trace);
        if (!std::filesystem::exists(p))
            throw Error("trace file not found: " + p.string());
    }
    return c;
}

ScenarioConfig load_config_from_string(std::string_view text, std::string_view origin,
                                       const std::filesystem::path& base_dir) {
    toml::Reader r(toml::parse_string(text, origin));
    return read_config(r, base_dir);
}

namespace {

std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (const char ch : s) {
        if (ch == '"' || ch == '\\')
            out.push_back('\\');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

} // namespace

std::string dump_config(const ScenarioConfig& c) {
    std::ostringstream out;
    out << "[site]\n";
    out << "name = " << quoted(c.site_name) << "\n";
    out << "\n[traces]\n";
    out << "load = " << quoted(c.load_trace) << "\n";
    out << "weather = " << quoted(c.weather_trace) << "\n";
    out << "carbon_intensity = " << quoted(c.carbon_trace) << "\n";
    out << "step_seconds = " << c.step_seconds << "\n";
    out << "wind_ref_height_m = " << format_double(c.wind_ref_height_m) << "\n";
    if (!c.window_start.empty())
        out << "window_start = " << quoted(c.window_start) << "\n";
    if (!c.window_end.empty())
        out << "window_end = " << quoted(c.window_end) << "\n";
    out << "\n[solar]\n";
    out << "unit_dc_kw = " << format_double(c.solar_unit_dc_kw) << "\n";
    out << "system_loss_fraction = " << format_double(c.system_loss_fraction) << "\n";
    out << "inverter_efficiency = " << format_double(c.inverter_efficiency) << "\n";
    out << "temp_coefficient_per_c = " << format_double(c.temp_coefficient_per_c) << "\n";
    out << "noct_c = " << format_double(c.noct_c) << "\n";
    out << "\n[wind]\n";
    out << "turbine_rated_kw = " << format_double(c.turbine_rated_kw) << "\n";
    out << "cut_in_ms = " << format_double(c.cut_in_ms) << "\n";
    out << "rated_speed_ms = " << format_double(c.rated_speed_ms) << "\n";
    out << "cut_out_ms = " << format_double(c.cut_out_ms) << "\n";
    out << "hub_height_m = " << format_double(c.hub_height_m) << "\n";
    out << "shear_exponent = " << format_double(c.shear_exponent) << "\n";
    out << "\n[battery]\n";
    out << "unit_capacity_kwh = " << format_double(c.battery_unit_kwh) << "\n";
    out << "min_soc = " << format_double(c.min_soc) << "\n";
    out << "max_soc = " << format_double(c.max_soc) << "\n";
    out << "charge_efficiency = " << format_double(c.charge_efficiency) << "\n";
    out << "discharge_efficiency = " << format_double(c.discharge_efficiency) << "\n";
    out << "c_rate = " << format_double(c.battery_c_rate) << "\n";
    out << "initial_soc = " << format_double(c.initial_soc) << "\n";
    if (c.charge_taper_knee_soc)
        out << "charge_taper_knee_soc = " << format_double(*c.charge_taper_knee_soc) << "\n";
    out << "\n[embodied_factors]\n";
    out << "solar_tco2_per_unit = " << format_double(c.embodied.solar_tco2_per_unit) << "\n";
    out << "wind_tco2_per_turbine = " << format_double(c.embodied.wind_tco2_per_turbine) << "\n";
    out << "battery_tco2_per_unit = " << format_double(c.embodied.battery_tco2_per_unit) << "\n";
    out << "\n[dispatch]\n";
    out << "allow_grid_charging = " << (c.allow_grid_charging ? "true" : "false") << "\n";
    out << "\n[composition]\n";
    out << "wind_turbines = " << c.composition.wind_turbines << "\n";
    out << "solar_units = " << c.composition.solar_units << "\n";
    out << "battery_units = " << c.composition.battery_units << "\n";
    out << "\n[space]\n";
    out << "max_wind_turbines = " << c.space.max_wind_turbines << "\n";
    out << "max_solar_units = " << c.space.max_solar_units << "\n";
    out << "max_battery_units = " << c.space.max_battery_units << "\n";
    out << "\n[search]\n";
    out << "population_size = " << c.search.population_size << "\n";
    out << "max_evaluations = " << c.search.max_evaluations << "\n";
    out << "crossover_probability = " << format_double(c.search.crossover_probability) << "\n";
    out << "mutation_probability = " << format_double(c.search.mutation_probability) << "\n";
    out << "seed = " << c.search.seed << "\n";
    out << "objectives = [";
    for (std::size_t i = 0; i < c.search.objectives.size(); ++i) {
        if (i > 0)
            out << ", ";
        out << quoted(c.search.objectives[i]);
    }
    out << "]\n";
    out << "\n[projection]\n";
    out << "horizon_days = " << c.projection_horizon_days << "\n";
    out << "\n[candidates]\n";
    out << "budgets_tco2 = [";
    for (std::size_t i = 0; i < c.candidate_budgets_tco2.size(); ++i) {
        if (i > 0)
            out << ", ";
        out << format_double(c.candidate_budgets_tco2[i]);
    }
    out << "]\n";
    return out.str();
}

} // namespace mgs
