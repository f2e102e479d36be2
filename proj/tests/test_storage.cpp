#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mgs/error.hpp"
#include "mgs/storage.hpp"

using namespace mgs;
using testutil::contains;
using testutil::thrown;

static BatteryParams wide_open(double cap) {
    BatteryParams p;
    p.capacity_kwh = cap;
    p.min_soc = 0.0;
    p.max_soc = 1.0;
    p.charge_efficiency = 0.9;
    p.discharge_efficiency = 0.9;
    p.max_charge_kw = 5.0;
    p.max_discharge_kw = 5.0;
    p.initial_soc = 0.0;
    return p;
}

TEST_CASE("charging stores the efficiency-scaled energy") {
    BatteryParams p = wide_open(10.0);
    BatteryState s;
    s.stored_kwh = 5.0;
    const auto r = battery_step(p, s, 2.0, 3600.0);
    CHECK(r.actual_kw == 2.0);
    CHECK(r.state.stored_kwh == 6.8); // 5 + 2*1*0.9
    CHECK(r.state.cumulative_charge_kwh == 2.0);
    CHECK(r.state.cumulative_discharge_kwh == 0.0);
}

TEST_CASE("full battery refuses further charge") {
    BatteryParams p;
    p.capacity_kwh = 7500.0;
    p.max_charge_kw = 3750.0;
    p.max_discharge_kw = 3750.0;
    BatteryState s;
    s.stored_kwh = p.ceiling_kwh();
    const auto r = battery_step(p, s, 100.0, 3600.0);
    CHECK(r.actual_kw == 0.0);
    CHECK(r.state.stored_kwh == s.stored_kwh);
}

TEST_CASE("battery at the floor refuses discharge") {
    BatteryParams p;
    p.capacity_kwh = 7500.0;
    p.max_charge_kw = 3750.0;
    p.max_discharge_kw = 3750.0;
    const BatteryState s = initial_battery_state(p);
    CHECK(s.stored_kwh == p.floor_kwh());
    const auto r = battery_step(p, s, -100.0, 3600.0);
    CHECK(r.actual_kw == 0.0);
    CHECK(r.state.stored_kwh == s.stored_kwh);
}

TEST_CASE("zero request is a no-op") {
    BatteryParams p = wide_open(10.0);
    BatteryState s;
    s.stored_kwh = 4.0;
    const auto r = battery_step(p, s, 0.0, 60.0);
    CHECK(r.actual_kw == 0.0);
    CHECK(r.state.stored_kwh == 4.0);
}

TEST_CASE("charge clamps to headroom") {
    BatteryParams p = wide_open(10.0);
    p.max_charge_kw = 1000.0;
    BatteryState s;
    s.stored_kwh = 8.5; // headroom 1.5 kWh
    const auto r = battery_step(p, s, 1000.0, 3600.0);
    CHECK(r.actual_kw == doctest::Approx(1.5 / 0.9).epsilon(1e-12));
    CHECK(r.state.stored_kwh == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("discharge clamps to the available energy") {
    BatteryParams p = wide_open(10.0);
    p.max_discharge_kw = 1000.0;
    BatteryState s;
    s.stored_kwh = 1.2;
    const auto r = battery_step(p, s, -1000.0, 3600.0);
    CHECK(r.actual_kw == doctest::Approx(-1.2 * 0.9).epsilon(1e-12));
    CHECK(r.state.stored_kwh == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("equivalent cycles") {
    BatteryParams p;
    p.capacity_kwh = 12.5; // usable 10 at soc bounds [0.1, 0.9]
    p.max_charge_kw = 1.0;
    p.max_discharge_kw = 1.0;
    BatteryState s = initial_battery_state(p);
    CHECK(equivalent_cycles(p, s) == 0.0);
    s.cumulative_discharge_kwh = 250.0;
    CHECK(equivalent_cycles(p, s) == doctest::Approx(25.0).epsilon(1e-12));

    BatteryParams none;
    none.capacity_kwh = 0.0;
    CHECK(!equivalent_cycles(none, BatteryState{}).has_value());
}

TEST_CASE("round trip delivers the efficiency product") {
    std::mt19937_64 gen(21);
    auto uni = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 100; ++trial) {
        BatteryParams p;
        p.capacity_kwh = 50.0 + uni() * 1000.0;
        p.min_soc = 0.05 + uni() * 0.3;
        p.max_soc = p.min_soc + 0.2 + uni() * (0.99 - p.min_soc - 0.2);
        p.charge_efficiency = 0.7 + uni() * 0.3;
        p.discharge_efficiency = 0.7 + uni() * 0.3;
        p.max_charge_kw = 1e6;
        p.max_discharge_kw = 1e6;
        p.initial_soc = p.min_soc;
        p.check();

        const double dt = 60.0 + uni() * 7200.0;
        const BatteryState start = initial_battery_state(p);
        // request less external power than the headroom admits
        const double e_kw = p.usable_capacity_kwh() / (dt / 3600.0) / p.charge_efficiency * uni();
        const auto charged = battery_step(p, start, e_kw, dt);
        CHECK(charged.actual_kw == doctest::Approx(e_kw).epsilon(1e-12));

        // drain fully back to the starting soc
        const auto drained = battery_step(p, charged.state, -1e9, dt);
        CHECK(drained.state.stored_kwh == doctest::Approx(start.stored_kwh).scale(p.capacity_kwh));
        const double delivered = -drained.actual_kw * dt / 3600.0;
        const double injected = e_kw * dt / 3600.0;
        CHECK(delivered ==
              doctest::Approx(injected * p.charge_efficiency * p.discharge_efficiency)
                  .epsilon(1e-9));
    }
}

TEST_CASE("energy bookkeeping ties the counters to the stored energy") {
    std::mt19937_64 gen(22);
    auto uni = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    BatteryParams p;
    p.capacity_kwh = 400.0;
    p.max_charge_kw = 80.0;
    p.max_discharge_kw = 90.0;
    const BatteryState start = initial_battery_state(p);
    BatteryState s = start;
    for (int i = 0; i < 20000; ++i) {
        const double req = (uni() * 2.0 - 1.0) * 150.0;
        s = battery_step(p, s, req, 300.0).state;
    }
    const double delta = s.stored_kwh - start.stored_kwh;
    const double expect = p.charge_efficiency * s.cumulative_charge_kwh -
                          s.cumulative_discharge_kwh / p.discharge_efficiency;
    CHECK(delta == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("clamping is idempotent") {
    std::mt19937_64 gen(23);
    auto uni = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 2000; ++trial) {
        BatteryParams p;
        p.capacity_kwh = 10.0 + uni() * 100.0;
        p.max_charge_kw = uni() * 50.0;
        p.max_discharge_kw = uni() * 50.0;
        if (trial % 2)
            p.charge_taper_knee_soc = p.min_soc + uni() * (p.max_soc - p.min_soc - 1e-6);
        BatteryState s;
        s.stored_kwh = p.floor_kwh() + uni() * (p.ceiling_kwh() - p.floor_kwh());
        const double req = (uni() * 2.0 - 1.0) * 80.0;
        const double dt = 60.0 + uni() * 3600.0;

        const auto once = battery_step(p, s, req, dt);
        const auto again = battery_step(p, s, once.actual_kw, dt);
        CHECK(again.actual_kw == once.actual_kw);
        CHECK(again.state.stored_kwh == once.state.stored_kwh);
    }
}

TEST_CASE("charge taper ramps down above the knee") {
    BatteryParams p;
    p.capacity_kwh = 100.0;
    p.min_soc = 0.0;
    p.max_soc = 1.0;
    p.charge_efficiency = 1.0;
    p.discharge_efficiency = 1.0;
    p.max_charge_kw = 10.0;
    p.max_discharge_kw = 10.0;
    p.initial_soc = 0.0;
    p.charge_taper_knee_soc = 0.8;

    BatteryState s;
    s.stored_kwh = 90.0; // halfway between knee and max
    const auto r = battery_step(p, s, 10.0, 60.0);
    CHECK(r.actual_kw == doctest::Approx(5.0).epsilon(1e-12));

    s.stored_kwh = 70.0; // below the knee: untapered
    CHECK(battery_step(p, s, 10.0, 60.0).actual_kw == 10.0);

    s.stored_kwh = 100.0;
    CHECK(battery_step(p, s, 10.0, 60.0).actual_kw == 0.0);
}

TEST_CASE("battery parameter validation") {
    BatteryParams p;
    p.capacity_kwh = -1.0;
    CHECK(contains(thrown([&] { p.check(); }), "capacity"));
    p = BatteryParams{};
    p.min_soc = 1.0;
    CHECK(contains(thrown([&] { p.check(); }), "min SoC"));
    p = BatteryParams{};
    p.max_soc = 0.05;
    CHECK(contains(thrown([&] { p.check(); }), "max SoC"));
    p = BatteryParams{};
    p.charge_efficiency = 1.2;
    CHECK(contains(thrown([&] { p.check(); }), "charge efficiency"));
    p = BatteryParams{};
    p.initial_soc = 0.95;
    CHECK(contains(thrown([&] { p.check(); }), "initial SoC"));
    p = BatteryParams{};
    p.charge_taper_knee_soc = 0.95;
    CHECK(contains(thrown([&] { p.check(); }), "taper knee"));
    CHECK(contains(thrown([] { battery_step(BatteryParams{}, BatteryState{}, 1.0, 0.0); }),
                   "duration"));
}
