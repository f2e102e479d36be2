#include "mgs/generation.hpp"

#include <algorithm>
#include <cmath>

#include "mgs/error.hpp"

namespace mgs {

void SolarPlant::check() const {
    if (rated_dc_kw < 0.0)
        throw Error("solar rated capacity must be >= 0");
    if (system_loss_fraction < 0.0 || system_loss_fraction >= 1.0)
        throw Error("solar system loss fraction must be in [0, 1)");
    if (inverter_efficiency <= 0.0 || inverter_efficiency > 1.0)
        throw Error("inverter efficiency must be in (0, 1]");
    if (noct_c <= 0.0)
        throw Error("NOCT must be > 0 degC");
}

void WindFarm::check() const {
    if (turbine_count < 0)
        throw Error("turbine count must be >= 0");
    if (turbine_rated_kw <= 0.0)
        throw Error("turbine rating must be > 0");
    if (!(0.0 < cut_in_ms && cut_in_ms < rated_speed_ms && rated_speed_ms < cut_out_ms))
        throw Error("wind speeds must satisfy 0 < cut_in < rated_speed < cut_out");
    if (hub_height_m <= 0.0)
        throw Error("hub height must be > 0");
}

double cell_temperature(double ambient_c, double poa_w_m2, double noct_c) {
    return ambient_c + poa_w_m2 * (noct_c - 20.0) / 800.0;
}

double solar_power(const SolarPlant& plant, double poa_w_m2, double ambient_c) {
    const double t_cell = cell_temperature(ambient_c, poa_w_m2, plant.noct_c);
    double dc = plant.rated_dc_kw * (poa_w_m2 / 1000.0) *
                (1.0 + plant.temp_coefficient_per_c * (t_cell - 25.0)) *
                (1.0 - plant.system_loss_fraction);
    dc = std::clamp(dc, 0.0, plant.rated_dc_kw);
    return dc * plant.inverter_efficiency;
}

double wind_speed_at_hub(double v_ref_ms, double ref_height_m, double hub_height_m,
                         double shear_exponent) {
    if (hub_height_m == ref_height_m)
        return v_ref_ms;
    return v_ref_ms * std::pow(hub_height_m / ref_height_m, shear_exponent);
}

double turbine_power(const WindFarm& farm, double v_hub_ms) {
    if (v_hub_ms < farm.cut_in_ms || v_hub_ms >= farm.cut_out_ms)
        return 0.0;
    if (v_hub_ms >= farm.rated_speed_ms)
        return farm.turbine_rated_kw;
    const double v3 = v_hub_ms * v_hub_ms * v_hub_ms;
    const double ci3 = farm.cut_in_ms * farm.cut_in_ms * farm.cut_in_ms;
    const double rs3 = farm.rated_speed_ms * farm.rated_speed_ms * farm.rated_speed_ms;
    return farm.turbine_rated_kw * (v3 - ci3) / (rs3 - ci3);
}

double farm_power(const WindFarm& farm, double v_ref_ms, double ref_height_m) {
    if (farm.turbine_count == 0)
        return 0.0;
    const double v_hub = wind_speed_at_hub(v_ref_ms, ref_height_m, farm.hub_height_m,
                                           farm.shear_exponent);
    return static_cast<double>(farm.turbine_count) * turbine_power(farm, v_hub);
}

} // namespace mgs
