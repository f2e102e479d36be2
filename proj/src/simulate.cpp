#include "mgs/simulate.hpp"

#include <algorithm>

#include "mgs/carbon.hpp"
#include "mgs/error.hpp"
#include "mgs/generation.hpp"

namespace mgs {

DispatchOutcome dispatch_step(double gen_kw, double load_kw, const BatteryParams& params,
                              const BatteryState& state, double dt_seconds,
                              bool allow_grid_charging) {
    if (gen_kw < 0.0 || load_kw < 0.0)
        throw Error("dispatch_step: negative power input");
    StepResult sr;
    sr.generation_kw = gen_kw;
    sr.load_kw = load_kw;
    const double net = gen_kw - load_kw;
    BatteryStepResult bres;
    if (net >= 0.0) {
        const double request = allow_grid_charging ? params.max_charge_kw : net;
        bres = battery_step(params, state, request, dt_seconds);
        sr.battery_flow_kw = bres.actual_kw;
        if (bres.actual_kw > net)
            sr.grid_import_kw = bres.actual_kw - net;
        else
            sr.grid_export_kw = net - bres.actual_kw;
    } else {
        bres = battery_step(params, state, net, dt_seconds);
        sr.battery_flow_kw = bres.actual_kw;
        sr.grid_import_kw = -net - (-bres.actual_kw);
    }
    return {sr, bres.state};
}

Scenario Scenario::load_traces(const ScenarioConfig& config) {
    auto load_cols = load_csv(config.resolve(config.load_trace), {{"load_kw", Unit::kilowatt}});
    auto weather_cols = load_csv(config.resolve(config.weather_trace),
                                 {{"poa_w_m2", Unit::watt_per_m2},
                                  {"temp_c", Unit::celsius},
                                  {"wind_ms", Unit::meter_per_second}});
    auto carbon_cols =
        load_csv(config.resolve(config.carbon_trace), {{"gco2_per_kwh", Unit::gco2_per_kwh}});

    WeatherFrame weather;
    weather.poa_irradiance = std::move(weather_cols.at("poa_w_m2"));
    weather.ambient_temp = std::move(weather_cols.at("temp_c"));
    weather.wind_speed_ref = std::move(weather_cols.at("wind_ms"));
    weather.ref_height_m = config.wind_ref_height_m;

    return from_series(config, load_cols.at("load_kw"), weather,
                       carbon_cols.at("gco2_per_kwh"));
}

Scenario Scenario::from_series(ScenarioConfig config, const TimeSeries& load_kw,
                               const WeatherFrame& weather, const TimeSeries& ci) {
    config.check();
    weather.check();
    load_kw.check();
    ci.check();

    const TimeSeries* all[] = {&load_kw, &weather.poa_irradiance, &weather.ambient_temp,
                               &weather.wind_speed_ref, &ci};

    Window window;
    if (config.window_start.empty()) {
        window.start = (*std::max_element(std::begin(all), std::end(all),
                                          [](auto* a, auto* b) { return a->start < b->start; }))
                           ->start;
    } else {
        window.start = parse_iso8601(config.window_start);
    }
    std::int64_t end = 0;
    if (config.window_end.empty()) {
        end = (*std::min_element(std::begin(all), std::end(all),
                                 [](auto* a, auto* b) { return a->end() < b->end(); }))
                  ->end();
        // Auto windows snap down to a whole number of steps; explicit windows
        // must already be exact and error out in clip_to_window otherwise.
        const std::int64_t span = end - window.start;
        if (span < config.step_seconds)
            throw Error("traces do not overlap for even one step");
        end = window.start + (span / config.step_seconds) * config.step_seconds;
    } else {
        end = parse_iso8601(config.window_end);
    }
    window.end = end;

    std::vector<TimeSeries> inputs;
    inputs.reserve(5);
    for (const TimeSeries* ts : all)
        inputs.push_back(*ts);
    std::vector<TimeSeries> aligned = align(inputs, window, config.step_seconds);

    Scenario sc;
    sc.config = std::move(config);
    sc.load = std::move(aligned[0]);
    sc.poa = std::move(aligned[1]);
    sc.ambient = std::move(aligned[2]);
    sc.wind_ref = std::move(aligned[3]);
    sc.carbon_intensity = std::move(aligned[4]);

    const std::size_t n = sc.load.size();
    const WindFarm turbine = sc.config.wind_farm(1);
    sc.hub_speed_ms.resize(n);
    sc.turbine_kw.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        sc.hub_speed_ms[i] = wind_speed_at_hub(sc.wind_ref.values[i], sc.config.wind_ref_height_m,
                                               turbine.hub_height_m, turbine.shear_exponent);
        sc.turbine_kw[i] = turbine_power(turbine, sc.hub_speed_ms[i]);
    }

    sc.solar_unit_profiles.resize(static_cast<std::size_t>(sc.config.space.max_solar_units) + 1);
    for (int u = 0; u <= sc.config.space.max_solar_units; ++u) {
        auto& profile = sc.solar_unit_profiles[static_cast<std::size_t>(u)];
        profile.resize(n);
        if (u == 0)
            continue;
        const SolarPlant plant = sc.config.solar_plant(u);
        for (std::size_t i = 0; i < n; ++i)
            profile[i] = solar_power(plant, sc.poa.values[i], sc.ambient.values[i]);
    }
    return sc;
}

SimulationMetrics run_simulation(const Scenario& sc, const Composition& comp,
                                 std::vector<StepTrace>* trace) {
    if (!sc.config.space.contains(comp))
        throw Error("composition outside configured space: " + composition_label(comp));
    const std::size_t n = sc.steps();
    const double dt = sc.dt_seconds();
    const double dt_h = dt / 3600.0;
    const double w = static_cast<double>(comp.wind_turbines);
    const auto& solar = sc.solar_unit_profiles[static_cast<std::size_t>(comp.solar_units)];

    const BatteryParams battery = sc.config.battery_params(comp.battery_units);
    BatteryState state = initial_battery_state(battery);

    TimeSeries import_series;
    import_series.start = sc.load.start;
    import_series.step = sc.load.step;
    import_series.unit = Unit::kilowatt;
    import_series.values.resize(n);

    if (trace != nullptr) {
        trace->clear();
        trace->reserve(n);
    }

    double import_kw_sum = 0.0;
    double export_kw_sum = 0.0;
    double load_kw_sum = 0.0;
    double gen_kw_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double gen = solar[i] + w * sc.turbine_kw[i];
        const DispatchOutcome out = dispatch_step(gen, sc.load.values[i], battery, state, dt,
                                                  sc.config.allow_grid_charging);
        state = out.state;
        import_series.values[i] = out.step.grid_import_kw;
        import_kw_sum += out.step.grid_import_kw;
        export_kw_sum += out.step.grid_export_kw;
        load_kw_sum += out.step.load_kw;
        gen_kw_sum += gen;
        if (trace != nullptr)
            trace->push_back({out.step, state.stored_kwh});
    }

    SimulationMetrics m;
    m.import_kwh = import_kw_sum * dt_h;
    m.export_kwh = export_kw_sum * dt_h;
    m.load_kwh = load_kw_sum * dt_h;
    m.onsite_generation_kwh = gen_kw_sum * dt_h;
    m.embodied_tco2 = embodied_tco2(comp, sc.config.embodied);
    m.operational_tco2_per_day = operational_tco2_per_day(import_series, sc.carbon_intensity);
    if (m.load_kwh > 0.0)
        m.coverage_percent = std::clamp(100.0 * (1.0 - m.import_kwh / m.load_kwh), 0.0, 100.0);
    else
        m.coverage_percent = 100.0;
    m.battery_cycles = equivalent_cycles(battery, state);
    return m;
}

} // namespace mgs
