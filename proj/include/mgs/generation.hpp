#pragma once

namespace mgs {

// PVWatts-style solar farm: nameplate DC rating derated by irradiance, cell
// temperature and fixed system losses, then clipped through the inverter.
struct SolarPlant {
    double rated_dc_kw = 0.0;
    double system_loss_fraction = 0.14;    // [0, 1)
    double inverter_efficiency = 0.96;     // (0, 1]
    double temp_coefficient_per_c = -0.0047;
    double noct_c = 45.0;

    void check() const;
};

// Wind farm of identical turbines with a piecewise-cubic power curve and
// power-law vertical shear to the hub height.
struct WindFarm {
    int turbine_count = 0;
    double turbine_rated_kw = 3000.0;
    double cut_in_ms = 3.0;
    double rated_speed_ms = 12.0;
    double cut_out_ms = 25.0;
    double hub_height_m = 100.0;
    double shear_exponent = 0.14;

    void check() const;
};

// NOCT approximation: ambient + poa * (noct - 20) / 800.
double cell_temperature(double ambient_c, double poa_w_m2, double noct_c);

// AC output in kW, clamped to [0, rated_dc_kw * inverter_efficiency].
double solar_power(const SolarPlant& plant, double poa_w_m2, double ambient_c);

// v_ref * (hub_height / ref_height)^alpha.
double wind_speed_at_hub(double v_ref_ms, double ref_height_m, double hub_height_m,
                         double shear_exponent);

// Single-turbine output: zero below cut-in and at/above cut-out, cubic ramp on
// [cut_in, rated_speed), rated plateau on [rated_speed, cut_out).
double turbine_power(const WindFarm& farm, double v_hub_ms);

// turbine_count * turbine_power at the hub-height speed.
double farm_power(const WindFarm& farm, double v_ref_ms, double ref_height_m);

} // namespace mgs
