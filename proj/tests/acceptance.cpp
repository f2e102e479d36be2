// End-to-end acceptance gate. Prints one PASS/FAIL line per criterion and
// exits with the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mgs/candidates.hpp"
#include "mgs/carbon.hpp"
#include "mgs/optimize.hpp"
#include "mgs/simulate.hpp"
#include "mgs/synthetic.hpp"
#include "reference_sim.hpp"

using namespace mgs;
namespace fs = std::filesystem;
using steady = std::chrono::steady_clock;

static int failures = 0;

static double secs(steady::time_point t0) {
    return std::chrono::duration<double>(steady::now() - t0).count();
}

static void report(int n, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++failures;
}

static std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, a, b, c);
    return buf;
}

static ScenarioConfig stub_config() {
    ScenarioConfig cfg;
    cfg.load_trace = "load.csv";
    cfg.weather_trace = "weather.csv";
    cfg.carbon_trace = "carbon_intensity.csv";
    return cfg;
}

static void criterion_embodied() {
    const auto t0 = steady::now();
    const EmbodiedFactors f;
    const std::vector<std::pair<Composition, double>> expect{
        {{4, 0, 1}, 4649.0},  {{3, 2, 3}, 9573.0},  {{4, 3, 7}, 14999.0}, {{10, 10, 8}, 39380.0},
        {{1, 1, 3}, 4961.0},  {{0, 3, 5}, 9885.0},  {{3, 3, 7}, 13953.0}, {{10, 10, 8}, 39380.0},
    };
    int exact = 0;
    for (const auto& [comp, want] : expect)
        exact += std::fabs(embodied_tco2(comp, f) - want) <= 1.0;
    const double dt = secs(t0);
    report(1, exact == 8 && dt < 1.0,
           fmt("%.0f/8 published embodied values within 1 t (%.3f s)", exact, dt));
}

static void criterion_crossover() {
    const auto t0 = steady::now();
    const auto h = crossover_time_days({0.0, 15.54}, {39380.0, 0.02});
    const auto b = crossover_time_days({0.0, 9.33}, {39380.0, 0.02});
    const double hy = h ? *h / 365.0 : -1.0;
    const double by = b ? *b / 365.0 : -1.0;
    const bool ok = h && b && std::fabs(hy - 6.95) <= 0.1 && std::fabs(by - 11.6) <= 0.1 &&
                    secs(t0) < 1.0;
    report(2, ok, fmt("Houston %.2f y (expect 6.95), Berkeley %.2f y (expect 11.6)", hy, by));
}

static void criterion_grid() {
    const auto t0 = steady::now();
    const auto grid = parameter_grid(SpaceBounds{});
    const double dt = secs(t0);
    report(3, grid.size() == 1089 && dt < 1.0,
           fmt("%.0f compositions enumerated (%.4f s)", double(grid.size()), dt));
}

static void criterion_search(const Scenario& year) {
    const std::vector<std::string> names{"embodied_tco2", "operational_tco2_per_day"};

    const auto t0 = steady::now();
    const auto truth = exhaustive_run(year, year.config.space, names, 1);
    const double exhaustive_s = secs(t0);

    SearchConfig conf; // defaults: population 50, 350 evaluations, seed 42
    const auto found = nsga2_run(year, year.config.space, conf, 1);

    std::set<Composition> true_set;
    for (const auto& p : truth.front.points)
        true_set.insert(p.composition);
    std::size_t hit = 0;
    for (const auto& p : found.front.points)
        hit += true_set.count(p.composition);
    const double recovery = 100.0 * double(hit) / double(true_set.size());

    const bool ok = recovery >= 70.0 && exhaustive_s < 600.0 &&
                    found.distinct_evaluations <= 350;
    report(4, ok,
           fmt("NSGA-II recovered %.1f%% of the %.0f-point exhaustive front "
               "(exhaustive pass %.2f s)",
               recovery, double(true_set.size()), exhaustive_s));
}

static void criterion_speed(const Scenario& year) {
    auto t0 = steady::now();
    run_simulation(year, {4, 3, 2});
    const double hourly_s = secs(t0);

    SyntheticOptions fine;
    fine.step_seconds = 60;
    const auto syn = make_synthetic(fine);
    auto cfg = stub_config();
    cfg.step_seconds = 60;
    const auto minutely = Scenario::from_series(cfg, syn.load, syn.weather, syn.carbon_intensity);

    t0 = steady::now();
    run_simulation(minutely, {4, 3, 2});
    const double minutely_s = secs(t0);

    report(5, hourly_s < 1.0 && minutely_s < 60.0 && minutely.steps() == 525600,
           fmt("hourly year %.4f s, minutely year (525600 steps) %.3f s", hourly_s, minutely_s));
}

// -- criterion 6 property suites ---------------------------------------------

struct Uni {
    std::mt19937_64 gen;
    explicit Uni(std::uint64_t seed) : gen(seed) {}
    double operator()() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    double range(double lo, double hi) { return lo + (*this)() * (hi - lo); }
    int below(int n) { return static_cast<int>(gen() % static_cast<std::uint64_t>(n)); }
};

static BatteryParams random_battery(Uni& u) {
    BatteryParams p;
    p.capacity_kwh = u.range(0.0, 20000.0);
    p.min_soc = u.range(0.0, 0.4);
    p.max_soc = u.range(p.min_soc + 0.1, 1.0);
    p.charge_efficiency = u.range(0.6, 1.0);
    p.discharge_efficiency = u.range(0.6, 1.0);
    p.max_charge_kw = u.range(0.0, 5000.0);
    p.max_discharge_kw = u.range(0.0, 5000.0);
    p.initial_soc = u.range(p.min_soc, p.max_soc);
    return p;
}

static bool balance_and_soc_million() {
    Uni u(61);
    BatteryParams p = random_battery(u);
    BatteryState s = initial_battery_state(p);
    for (int i = 0; i < 1000000; ++i) {
        if (i % 2500 == 0) {
            p = random_battery(u);
            s = initial_battery_state(p);
        }
        const double gen = u.range(0.0, 12000.0);
        const double load = u.range(0.0, 12000.0);
        const auto out = dispatch_step(gen, load, p, s, u.range(30.0, 10800.0), u() < 0.25);
        s = out.state;
        const double lhs = gen + out.step.grid_import_kw;
        const double rhs = load + out.step.grid_export_kw + out.step.battery_flow_kw;
        if (std::fabs(lhs - rhs) > 1e-9 * std::max({lhs, rhs, 1.0}))
            return false;
        if (s.stored_kwh < p.floor_kwh() - 1e-9 * std::max(p.capacity_kwh, 1.0) ||
            s.stored_kwh > p.ceiling_kwh() + 1e-9 * std::max(p.capacity_kwh, 1.0))
            return false;
    }
    return true;
}

static bool round_trip_efficiency() {
    Uni u(62);
    for (int trial = 0; trial < 100; ++trial) {
        BatteryParams p = random_battery(u);
        p.capacity_kwh += 1.0;
        p.max_charge_kw = 1e9;
        p.max_discharge_kw = 1e9;
        p.initial_soc = p.min_soc;
        const double dt = u.range(60.0, 7200.0);
        const BatteryState start = initial_battery_state(p);
        const double e_kw = p.usable_capacity_kwh() / (dt / 3600.0) / p.charge_efficiency * u();
        const auto up = battery_step(p, start, e_kw, dt);
        const auto down = battery_step(p, up.state, -1e12, dt);
        const double injected = up.actual_kw * dt / 3600.0;
        const double delivered = -down.actual_kw * dt / 3600.0;
        const double want = injected * p.charge_efficiency * p.discharge_efficiency;
        if (std::fabs(delivered - want) > 1e-9 * std::max(want, 1e-12))
            return false;
    }
    return true;
}

static bool nds_brute_force() {
    Uni u(63);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 1 + u.below(100);
        const int dims = 2 + u.below(3);
        std::vector<std::vector<double>> objs(static_cast<std::size_t>(n));
        for (auto& row : objs) {
            row.resize(static_cast<std::size_t>(dims));
            for (auto& v : row)
                v = u.below(8);
        }
        const auto fronts = non_dominated_sort(objs);
        std::set<std::size_t> brute;
        for (std::size_t i = 0; i < objs.size(); ++i) {
            bool dominated = false;
            for (std::size_t j = 0; j < objs.size() && !dominated; ++j)
                dominated = j != i && dominates(objs[j], objs[i]);
            if (!dominated)
                brute.insert(i);
        }
        if (fronts.empty() ||
            std::set<std::size_t>(fronts[0].begin(), fronts[0].end()) != brute)
            return false;
    }
    return true;
}

static bool import_monotonicity() {
    Uni u(64);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 24 + u.below(49);
        std::vector<double> load(static_cast<std::size_t>(n)), poa(load.size()),
            temp(load.size()), wind(load.size()), ci(load.size());
        for (std::size_t i = 0; i < load.size(); ++i) {
            load[i] = u.range(100.0, 9000.0);
            poa[i] = u.range(0.0, 1100.0);
            temp[i] = u.range(-10.0, 40.0);
            wind[i] = u.range(0.0, 18.0);
            ci[i] = u.range(50.0, 650.0);
        }
        auto mk = [](std::int64_t step, std::vector<double> v, Unit unit) {
            TimeSeries ts;
            ts.step = step;
            ts.values = std::move(v);
            ts.unit = unit;
            return ts;
        };
        WeatherFrame w;
        w.poa_irradiance = mk(3600, poa, Unit::watt_per_m2);
        w.ambient_temp = mk(3600, temp, Unit::celsius);
        w.wind_speed_ref = mk(3600, wind, Unit::meter_per_second);
        const auto sc = Scenario::from_series(stub_config(), mk(3600, load, Unit::kilowatt), w,
                                              mk(3600, ci, Unit::gco2_per_kwh));
        const Composition base{u.below(10), u.below(10), u.below(9)};
        const double at_base = run_simulation(sc, base).import_kwh;
        Composition sun = base, gust = base;
        sun.solar_units += 1;
        gust.wind_turbines += 1;
        const double slack = 1e-9 * std::max(at_base, 1.0);
        if (run_simulation(sc, sun).import_kwh > at_base + slack ||
            run_simulation(sc, gust).import_kwh > at_base + slack)
            return false;
    }
    return true;
}

static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

static bool cli_jobs_diff(const std::string& mgsizer, const std::string& synth,
                          const fs::path& work, std::string& detail) {
    const fs::path scen = work / "scen";
    std::string cmd = "\"" + synth + "\" --out \"" + scen.string() + "\" --days 30 > /dev/null";
    if (std::system(cmd.c_str()) != 0) {
        detail = "scenario generation failed";
        return false;
    }
    const std::string config = (scen / "scenario.toml").string();
    for (int jobs : {1, 8}) {
        cmd = "\"" + mgsizer + "\" optimize --config \"" + config + "\" --out \"" +
              (work / ("opt" + std::to_string(jobs))).string() + "\" --jobs " +
              std::to_string(jobs) + " > /dev/null";
        if (std::system(cmd.c_str()) != 0) {
            detail = "optimize run failed";
            return false;
        }
    }
    for (const char* name : {"front.json", "evaluations.csv"}) {
        if (slurp(work / "opt1" / name) != slurp(work / "opt8" / name)) {
            detail = std::string(name) + " differs between --jobs 1 and --jobs 8";
            return false;
        }
    }
    detail = "front.json and evaluations.csv byte-identical for --jobs 1 vs 8";
    return true;
}

static void criterion_properties(const std::string& mgsizer, const std::string& synth,
                                 const fs::path& work) {
    const bool balance = balance_and_soc_million();
    const bool round_trip = round_trip_efficiency();
    const bool nds = nds_brute_force();
    const bool mono = import_monotonicity();
    std::string jobs_detail;
    const bool jobs = cli_jobs_diff(mgsizer, synth, work, jobs_detail);

    std::ostringstream detail;
    detail << "balance/soc 1e6 steps " << (balance ? "ok" : "FAILED") << ", round-trip "
           << (round_trip ? "ok" : "FAILED") << ", nds-vs-brute x1000 "
           << (nds ? "ok" : "FAILED") << ", import monotonicity x100 "
           << (mono ? "ok" : "FAILED") << ", " << jobs_detail;
    report(6, balance && round_trip && nds && mono && jobs, detail.str());
}

static void criterion_reference() {
    SyntheticOptions opt;
    opt.days = 7;
    const auto syn = make_synthetic(opt);
    const auto cfg = stub_config();
    const auto sc = Scenario::from_series(cfg, syn.load, syn.weather, syn.carbon_intensity);
    const Composition comp{1, 1, 1};
    const auto got = run_simulation(sc, comp);
    const auto want = reference_simulate(
        cfg, sc.load, WeatherFrame{sc.poa, sc.ambient, sc.wind_ref, cfg.wind_ref_height_m},
        sc.carbon_intensity, comp);

    auto close = [](double a, double b) {
        return std::fabs(a - b) <= 1e-9 * std::max({std::fabs(a), std::fabs(b), 1.0});
    };
    double worst = 0.0;
    auto track = [&](double a, double b) {
        const double rel = std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1.0});
        worst = std::max(worst, rel);
        return close(a, b);
    };
    bool ok = track(got.operational_tco2_per_day, want.operational_tco2_per_day);
    ok = track(got.embodied_tco2, want.embodied_tco2) && ok;
    ok = track(got.coverage_percent, want.coverage_percent) && ok;
    ok = track(got.import_kwh, want.import_kwh) && ok;
    ok = track(got.export_kwh, want.export_kwh) && ok;
    ok = track(got.load_kwh, want.load_kwh) && ok;
    ok = track(got.onsite_generation_kwh, want.onsite_generation_kwh) && ok;
    ok = got.battery_cycles.has_value() && want.battery_cycles.has_value() &&
         track(*got.battery_cycles, *want.battery_cycles) && ok;
    report(7, ok, fmt("largest relative deviation %.2e against the reference simulator", worst));
}

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: %s <mgsizer> <mgs_synth>\n", argv[0]);
        return 64;
    }
    const std::string mgsizer = argv[1];
    const std::string synth = argv[2];

    const fs::path work = fs::temp_directory_path() / "mgs_acceptance";
    std::error_code ec;
    fs::remove_all(work, ec);
    fs::create_directories(work);

    criterion_embodied();
    criterion_crossover();
    criterion_grid();

    const auto syn = make_synthetic(SyntheticOptions{});
    const auto year = Scenario::from_series(stub_config(), syn.load, syn.weather,
                                            syn.carbon_intensity);
    criterion_search(year);
    criterion_speed(year);
    criterion_properties(mgsizer, synth, work);
    criterion_reference();

    fs::remove_all(work, ec);
    std::printf("acceptance: %d/7 criteria passed\n", 7 - failures);
    return failures;
}
