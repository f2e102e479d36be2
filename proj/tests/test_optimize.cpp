#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "helpers.hpp"
#include "mgs/error.hpp"
#include "mgs/optimize.hpp"
#include "mgs/synthetic.hpp"

using namespace mgs;
using testutil::contains;
using testutil::series;
using testutil::thrown;

static ScenarioConfig tiny_config() {
    ScenarioConfig cfg;
    cfg.load_trace = "l.csv";
    cfg.weather_trace = "w.csv";
    cfg.carbon_trace = "c.csv";
    return cfg;
}

// Small scenario with real structure: daytime sun, evening wind, diurnal load.
static Scenario tiny_scenario(int days = 3) {
    auto cfg = tiny_config();
    const int n = days * 24;
    std::vector<double> load(static_cast<std::size_t>(n)), poa(load.size()), temp(load.size()),
        wind(load.size()), ci(load.size());
    for (int i = 0; i < n; ++i) {
        const int h = i % 24;
        const auto u = static_cast<std::size_t>(i);
        load[u] = 2000.0 + 400.0 * std::sin(2.0 * 3.14159265358979 * h / 24.0);
        poa[u] = (h >= 7 && h <= 17) ? 700.0 * std::sin(3.14159265358979 * (h - 7) / 10.0) : 0.0;
        temp[u] = 15.0 + 8.0 * std::sin(2.0 * 3.14159265358979 * (h - 14) / 24.0);
        wind[u] = (h >= 16 || h <= 4) ? 7.5 : 3.5;
        ci[u] = 420.0;
    }
    WeatherFrame w;
    w.poa_irradiance = series(0, 3600, poa, Unit::watt_per_m2);
    w.ambient_temp = series(0, 3600, temp, Unit::celsius);
    w.wind_speed_ref = series(0, 3600, wind, Unit::meter_per_second);
    return Scenario::from_series(cfg, series(0, 3600, load), w,
                                 series(0, 3600, ci, Unit::gco2_per_kwh));
}

TEST_CASE("objective registry resolves the documented names") {
    for (const auto& name : {"embodied_tco2", "operational_tco2_per_day", "import_kwh",
                             "export_kwh"})
        CHECK(objective_fn(name) != nullptr);
    CHECK(contains(thrown([] { objective_fn("cost_usd"); }), "unknown objective 'cost_usd'"));

    SimulationMetrics m;
    m.embodied_tco2 = 7.0;
    m.import_kwh = 11.0;
    const auto vals = compute_objectives(m, std::vector<std::string>{"import_kwh",
                                                                     "embodied_tco2"});
    CHECK(vals == std::vector<double>{11.0, 7.0});
}

TEST_CASE("parameter grid enumerates the space in lexicographic order") {
    const auto grid = parameter_grid(SpaceBounds{});
    CHECK(grid.size() == 1089);
    CHECK(grid.front() == Composition{0, 0, 0});
    CHECK(grid[1] == Composition{0, 0, 1}); // battery varies fastest
    CHECK(grid.back() == Composition{10, 10, 8});
    CHECK(std::is_sorted(grid.begin(), grid.end()));

    CHECK(parameter_grid(SpaceBounds{0, 0, 0}).size() == 1);

    const auto small = parameter_grid(SpaceBounds{1, 1, 0});
    REQUIRE(small.size() == 4);
    CHECK(small[0] == Composition{0, 0, 0});
    CHECK(small[1] == Composition{0, 1, 0});
    CHECK(small[2] == Composition{1, 0, 0});
    CHECK(small[3] == Composition{1, 1, 0});
}

TEST_CASE("dominance relation") {
    const std::vector<double> a{1.0, 2.0}, b{2.0, 3.0}, c{2.0, 1.0}, d{1.0, 2.0};
    CHECK(dominates(a, b));
    CHECK(!dominates(b, a));
    CHECK(!dominates(a, c));
    CHECK(!dominates(c, a));
    CHECK(!dominates(a, d)); // ties do not dominate
    CHECK(contains(thrown([&] { dominates(a, std::vector<double>{1.0}); }), "mismatched"));
}

TEST_CASE("non-dominated sort splits the documented example") {
    const std::vector<std::vector<double>> objs{{1, 2}, {2, 1}, {3, 3}};
    const auto fronts = non_dominated_sort(objs);
    REQUIRE(fronts.size() == 2);
    CHECK(fronts[0] == std::vector<std::size_t>{0, 1});
    CHECK(fronts[1] == std::vector<std::size_t>{2});

    CHECK(non_dominated_sort({{5, 5}}).size() == 1);

    const auto tied = non_dominated_sort({{1, 1}, {1, 1}, {1, 1}});
    REQUIRE(tied.size() == 1);
    CHECK(tied[0].size() == 3);
}

TEST_CASE("crowding distance") {
    const double inf = std::numeric_limits<double>::infinity();

    const auto two = crowding_distance({{0, 1}, {1, 0}});
    CHECK(two == std::vector<double>{inf, inf});

    const auto three = crowding_distance({{0, 2}, {1, 1}, {2, 0}});
    CHECK(three[0] == inf);
    CHECK(three[2] == inf);
    CHECK(three[1] == doctest::Approx(2.0).epsilon(1e-12));

    // degenerate front: boundaries infinite, interiors zero
    const auto flat = crowding_distance({{4, 4}, {4, 4}, {4, 4}, {4, 4}});
    CHECK(flat.front() == inf);
    CHECK(flat.back() == inf);
    CHECK(flat[1] == 0.0);
    CHECK(flat[2] == 0.0);
}

TEST_CASE("make_front filters and orders canonically") {
    std::vector<ObjectivePoint> pts(3);
    pts[0].composition = {1, 0, 0};
    pts[0].objectives = {2.0, 1.0};
    pts[1].composition = {0, 1, 0};
    pts[1].objectives = {1.0, 2.0};
    pts[2].composition = {0, 0, 1};
    pts[2].objectives = {3.0, 3.0}; // dominated
    const auto front = make_front(pts);
    REQUIRE(front.points.size() == 2);
    CHECK(front.points[0].objectives == std::vector<double>{1.0, 2.0});
    CHECK(front.points[1].objectives == std::vector<double>{2.0, 1.0});
    front.check();

    ParetoFront bad;
    bad.points = pts; // contains the dominated point
    CHECK(contains(thrown([&] { bad.check(); }), "dominated"));
}

TEST_CASE("evaluator memoizes simulations") {
    const auto sc = tiny_scenario();
    Evaluator ev(sc, {"embodied_tco2", "operational_tco2_per_day"});
    const auto& first = ev.evaluate({1, 1, 1});
    CHECK(first.objectives[0] == 4031.0);
    const auto& again = ev.evaluate({1, 1, 1});
    CHECK(ev.distinct_evaluations() == 1);
    CHECK(again.objectives == first.objectives);
    REQUIRE(ev.log().size() == 2);
    CHECK(!ev.log()[0].cache_hit);
    CHECK(ev.log()[1].cache_hit);
}

TEST_CASE("evaluator matches a direct simulation call") {
    const auto sc = tiny_scenario();
    Evaluator ev(sc, {"embodied_tco2", "operational_tco2_per_day"});
    for (const Composition c : {Composition{0, 0, 0}, {2, 0, 1}, {0, 3, 2}, {4, 4, 4}}) {
        const auto& got = ev.evaluate(c);
        const auto direct = run_simulation(sc, c);
        CHECK(got.objectives[0] == direct.embodied_tco2);
        CHECK(got.objectives[1] == direct.operational_tco2_per_day);
        CHECK(got.metrics.import_kwh == direct.import_kwh);
    }
    // the empty build reports the grid-only baseline
    const auto& base = ev.evaluate({0, 0, 0});
    CHECK(base.objectives[0] == 0.0);
    CHECK(base.objectives[1] > 0.0);
}

TEST_CASE("exhaustive run covers the grid and finds the true front") {
    const auto sc = tiny_scenario();
    SpaceBounds space{1, 1, 1};
    const std::vector<std::string> names{"embodied_tco2", "operational_tco2_per_day"};
    const auto res = exhaustive_run(sc, space, names);
    CHECK(res.distinct_evaluations == 8);
    CHECK(res.evaluated.size() == 8);

    // brute-force dominance over the same evaluations
    std::vector<ObjectivePoint> keep;
    for (const auto& p : res.evaluated) {
        bool dominated = false;
        for (const auto& q : res.evaluated)
            if (dominates(q.objectives, p.objectives))
                dominated = true;
        if (!dominated)
            keep.push_back(p);
    }
    CHECK(res.front.points.size() == keep.size());
    res.front.check();

    const auto single = exhaustive_run(sc, SpaceBounds{0, 0, 0}, names);
    REQUIRE(single.front.points.size() == 1);
    CHECK(single.front.points[0].composition == Composition{0, 0, 0});
}

TEST_CASE("nsga2 is deterministic for a fixed seed") {
    const auto sc = tiny_scenario();
    SearchConfig conf;
    conf.population_size = 8;
    conf.max_evaluations = 40;
    conf.seed = 7;
    const auto a = nsga2_run(sc, sc.config.space, conf);
    const auto b = nsga2_run(sc, sc.config.space, conf);
    REQUIRE(a.front.points.size() == b.front.points.size());
    for (std::size_t i = 0; i < a.front.points.size(); ++i) {
        CHECK(a.front.points[i].composition == b.front.points[i].composition);
        CHECK(a.front.points[i].objectives == b.front.points[i].objectives);
    }
    REQUIRE(a.log.size() == b.log.size());
    for (std::size_t i = 0; i < a.log.size(); ++i) {
        CHECK(a.log[i].composition == b.log[i].composition);
        CHECK(a.log[i].cache_hit == b.log[i].cache_hit);
        CHECK(a.log[i].generation == b.log[i].generation);
    }

    // a different seed explores differently
    conf.seed = 8;
    const auto c = nsga2_run(sc, sc.config.space, conf);
    bool same = a.log.size() == c.log.size();
    if (same)
        for (std::size_t i = 0; i < a.log.size(); ++i)
            if (!(a.log[i].composition == c.log[i].composition))
                same = false;
    CHECK(!same);
}

TEST_CASE("nsga2 with budget equal to the population is one random draw") {
    const auto sc = tiny_scenario();
    SearchConfig conf;
    conf.population_size = 10;
    conf.max_evaluations = 10;
    conf.seed = 3;
    const auto res = nsga2_run(sc, sc.config.space, conf);
    CHECK(res.generations == 0);
    CHECK(res.distinct_evaluations <= 10);
    // the front is exactly the non-dominated filter of what was drawn
    const auto expect = make_front(res.evaluated);
    REQUIRE(res.front.points.size() == expect.points.size());
    for (std::size_t i = 0; i < expect.points.size(); ++i)
        CHECK(res.front.points[i].composition == expect.points[i].composition);
}

TEST_CASE("nsga2 respects the evaluation budget") {
    const auto sc = tiny_scenario();
    for (int budget : {12, 20, 36}) {
        SearchConfig conf;
        conf.population_size = 12;
        conf.max_evaluations = budget;
        conf.seed = 5;
        const auto res = nsga2_run(sc, sc.config.space, conf);
        CHECK(res.distinct_evaluations <= static_cast<std::size_t>(budget));
        std::set<Composition> seen;
        for (const auto& rec : res.log)
            if (!rec.cache_hit)
                seen.insert(rec.composition);
        CHECK(seen.size() == res.distinct_evaluations);
    }
}

TEST_CASE("nsga2 exhausts a small space") {
    const auto sc = tiny_scenario();
    SpaceBounds space{1, 1, 1};
    SearchConfig conf;
    conf.population_size = 4;
    conf.max_evaluations = 100;
    conf.seed = 11;
    const auto res = nsga2_run(sc, space, conf);
    CHECK(res.distinct_evaluations == 8); // stopped at the space size
    const auto truth = exhaustive_run(sc, space, conf.objectives);
    REQUIRE(res.front.points.size() == truth.front.points.size());
    for (std::size_t i = 0; i < truth.front.points.size(); ++i)
        CHECK(res.front.points[i].composition == truth.front.points[i].composition);
}

TEST_CASE("nsga2 results are independent of the thread count") {
    const auto sc = tiny_scenario();
    SearchConfig conf;
    conf.population_size = 10;
    conf.max_evaluations = 60;
    conf.seed = 17;
    const auto serial = nsga2_run(sc, sc.config.space, conf, 1);
    const auto parallel = nsga2_run(sc, sc.config.space, conf, 8);
    REQUIRE(serial.log.size() == parallel.log.size());
    for (std::size_t i = 0; i < serial.log.size(); ++i) {
        CHECK(serial.log[i].composition == parallel.log[i].composition);
        CHECK(serial.log[i].objectives == parallel.log[i].objectives);
        CHECK(serial.log[i].cache_hit == parallel.log[i].cache_hit);
    }
    REQUIRE(serial.front.points.size() == parallel.front.points.size());
    for (std::size_t i = 0; i < serial.front.points.size(); ++i)
        CHECK(serial.front.points[i].objectives == parallel.front.points[i].objectives);
}

TEST_CASE("archive coverage of the true front never shrinks between generations") {
    const auto sc = tiny_scenario();
    SpaceBounds space{3, 3, 2};
    const auto truth = exhaustive_run(sc, space, std::vector<std::string>{
                                                     "embodied_tco2",
                                                     "operational_tco2_per_day"});
    std::set<Composition> true_front;
    for (const auto& p : truth.front.points)
        true_front.insert(p.composition);

    SearchConfig conf;
    conf.population_size = 8;
    conf.max_evaluations = 40;
    conf.seed = 2;
    const auto res = nsga2_run(sc, space, conf);

    int max_gen = 0;
    for (const auto& rec : res.log)
        max_gen = std::max(max_gen, rec.generation);
    std::size_t prev = 0;
    for (int g = 0; g <= max_gen; ++g) {
        std::vector<ObjectivePoint> upto;
        std::set<Composition> seen;
        for (const auto& rec : res.log) {
            if (rec.generation > g || seen.count(rec.composition))
                continue;
            seen.insert(rec.composition);
            ObjectivePoint p;
            p.composition = rec.composition;
            p.objectives = rec.objectives;
            upto.push_back(p);
        }
        const auto front = make_front(upto);
        std::size_t covered = 0;
        for (const auto& p : front.points)
            covered += true_front.count(p.composition);
        CHECK(covered >= prev);
        prev = covered;
    }
    CHECK(prev > 0);
}
