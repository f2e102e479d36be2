// mgsizer: size a data-center microgrid for carbon.
//
// simulate    run one composition through a year of traces
// exhaustive  evaluate the whole composition grid
// optimize    NSGA-II search of the grid under an evaluation budget
// candidates  reduce a Pareto front to a decision shortlist
// project     20-year cumulative emission projection vs. the grid-only baseline
// validate    check a scenario config and its traces, write nothing

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mgs/candidates.hpp"
#include "mgs/carbon.hpp"
#include "mgs/config.hpp"
#include "mgs/error.hpp"
#include "mgs/format.hpp"
#include "mgs/optimize.hpp"
#include "mgs/report.hpp"
#include "mgs/simulate.hpp"
#include "mgs/timeseries.hpp"

namespace {

using namespace mgs;

std::string file_hash_hex(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open config file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string bytes = ss.str();
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return std::string(buf);
}

struct Run {
    std::filesystem::path out;
    Manifest manifest;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    Run(const std::string& subcommand, const std::filesystem::path& config_path,
        const ScenarioConfig& config, const std::string& out_dir, int jobs) {
        out = out_dir;
        std::filesystem::create_directories(out);
        manifest.subcommand = subcommand;
        manifest.config_path = config_path.string();
        manifest.config_hash = file_hash_hex(config_path);
        manifest.site = config.site_name;
        manifest.jobs = jobs;
        manifest.out_dir = out_dir;
        manifest.started_utc = format_iso8601_utc(static_cast<std::int64_t>(std::time(nullptr)));
    }

    void finish() {
        const auto dt = std::chrono::steady_clock::now() - t0;
        manifest.wall_time_seconds = std::chrono::duration<double>(dt).count();
        write_manifest(out / "manifest.json", manifest);
    }
};

// Per-flag override so `--wind 4` alone keeps the config's solar/battery.
struct CompositionFlags {
    int wind = 0, solar = 0, battery = 0;
    CLI::Option* wind_opt = nullptr;
    CLI::Option* solar_opt = nullptr;
    CLI::Option* battery_opt = nullptr;

    void attach(CLI::App* cmd) {
        wind_opt = cmd->add_option("--wind", wind, "Wind turbine count");
        solar_opt = cmd->add_option("--solar", solar, "Solar unit count (4 MW DC each)");
        battery_opt = cmd->add_option("--battery", battery, "Battery unit count (7.5 MWh each)");
    }

    Composition resolve(const ScenarioConfig& config) const {
        Composition c = config.composition;
        if (wind_opt->count() > 0)
            c.wind_turbines = wind;
        if (solar_opt->count() > 0)
            c.solar_units = solar;
        if (battery_opt->count() > 0)
            c.battery_units = battery;
        return c;
    }
};

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 const CompositionFlags& flags, bool dump_steps) {
    const ScenarioConfig config = load_config(config_path);
    const Composition comp = flags.resolve(config);
    Run run("simulate", config_path, config, out_dir, 1);
    run.manifest.composition = comp;

    const Scenario scenario = Scenario::load_traces(config);
    std::vector<StepTrace> trace;
    const SimulationMetrics metrics =
        run_simulation(scenario, comp, dump_steps ? &trace : nullptr);

    write_metrics_json(run.out / "metrics.json", comp, metrics);
    if (dump_steps)
        write_steps_csv(run.out / "steps.csv", scenario, trace);
    run.finish();

    std::cout << composition_label(comp) << ": embodied " << format_double(metrics.embodied_tco2)
              << " tCO2, operational " << format_double(metrics.operational_tco2_per_day)
              << " tCO2/day, coverage " << format_double(metrics.coverage_percent) << " %\n";
    return 0;
}

int cmd_exhaustive(const std::string& config_path, const std::string& out_dir, int jobs) {
    const ScenarioConfig config = load_config(config_path);
    Run run("exhaustive", config_path, config, out_dir, jobs);

    const Scenario scenario = Scenario::load_traces(config);
    const SearchResult res =
        exhaustive_run(scenario, config.space, config.search.objectives, jobs);

    write_evaluations_csv(run.out / "evaluations.csv", res.log, config.search.objectives);
    write_front_json(run.out / "front.json", res.front, config.search.objectives);
    run.finish();

    std::cout << "evaluated " << res.distinct_evaluations << " compositions, front size "
              << res.front.points.size() << "\n";
    return 0;
}

int cmd_optimize(const std::string& config_path, const std::string& out_dir, int jobs,
                 const std::optional<std::uint64_t>& seed) {
    ScenarioConfig config = load_config(config_path);
    if (seed)
        config.search.seed = *seed;
    Run run("optimize", config_path, config, out_dir, jobs);
    run.manifest.seed = config.search.seed;

    const Scenario scenario = Scenario::load_traces(config);
    const SearchResult res = nsga2_run(scenario, config.space, config.search, jobs);

    write_evaluations_csv(run.out / "evaluations.csv", res.log, config.search.objectives);
    write_front_json(run.out / "front.json", res.front, config.search.objectives);
    run.finish();

    std::cout << res.distinct_evaluations << " distinct evaluations over " << res.generations
              << " generations, front size " << res.front.points.size() << "\n";
    return 0;
}

int cmd_candidates(const std::string& config_path, const std::string& out_dir,
                   const std::string& front_path, const std::string& method, std::size_t k,
                   const std::optional<std::uint64_t>& seed) {
    const ScenarioConfig config = load_config(config_path);
    Run run("candidates", config_path, config, out_dir, 1);

    const FrontFile front_file = front_from_json(front_path);
    std::vector<ObjectivePoint> picks;
    if (method == "threshold") {
        picks = threshold_select(front_file.front, config.candidate_budgets_tco2);
    } else if (method == "greedy") {
        picks = greedy_diversity(front_file.front, k);
    } else if (method == "kmeans") {
        picks = kmeans_select(front_file.front, k, seed ? *seed : config.search.seed);
        run.manifest.seed = seed ? *seed : config.search.seed;
    } else {
        throw Error("unknown method '" + method + "' (threshold, greedy, kmeans)");
    }

    write_candidates_csv(run.out / "candidates.csv", picks, config);
    run.finish();

    std::cout << candidates_table(picks, config);
    return 0;
}

int cmd_project(const std::string& config_path, const std::string& out_dir,
                const CompositionFlags& flags, const std::optional<std::int64_t>& horizon) {
    const ScenarioConfig config = load_config(config_path);
    const Composition comp = flags.resolve(config);
    Run run("project", config_path, config, out_dir, 1);
    run.manifest.composition = comp;
    const std::int64_t days = horizon ? *horizon : config.projection_horizon_days;
    if (days < 0)
        throw Error("projection horizon must be >= 0");

    const Scenario scenario = Scenario::load_traces(config);
    const Composition baseline{0, 0, 0};

    std::vector<ProjectionLine> lines;
    for (const Composition& c : {baseline, comp}) {
        if (!lines.empty() && c == lines.front().composition)
            continue;
        const SimulationMetrics m = run_simulation(scenario, c);
        ProjectionLine line;
        line.label = composition_label(c);
        line.composition = c;
        line.profile = EmissionProfile{m.embodied_tco2, m.operational_tco2_per_day};
        line.cumulative_tco2 = project_cumulative(line.profile, days);
        lines.push_back(std::move(line));
    }

    std::optional<double> crossover;
    if (lines.size() == 2)
        crossover = crossover_time_days(lines[0].profile, lines[1].profile);

    write_projection_csv(run.out / "projection.csv", lines);
    write_projection_json(run.out / "metrics.json", lines, crossover);
    run.finish();

    if (crossover) {
        char years[32];
        std::snprintf(years, sizeof(years), "%.2f", *crossover / 365.0);
        std::cout << composition_label(comp) << " overtakes the grid-only baseline after "
                  << years << " years\n";
    } else
        std::cout << composition_label(comp) << ": no crossover with the baseline within any horizon\n";
    return 0;
}

int cmd_validate(const std::string& config_path) {
    const ScenarioConfig config = load_config(config_path);
    const Scenario scenario = Scenario::load_traces(config);
    std::cout << "config ok: " << config.site_name << ", " << scenario.steps() << " steps at "
              << scenario.config.step_seconds << " s (" << format_double(scenario.duration_days())
              << " days)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Microgrid composition sizing for data-center carbon"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    int jobs = 1;
    bool dump_steps = false;
    std::string method = "threshold";
    std::size_t k = 5;
    std::string front_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> horizon;
    CompositionFlags sim_flags, proj_flags;

    auto add_config = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Scenario config file (TOML)")->required();
    };
    auto add_out = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_dir, "Output directory (default: out)");
    };

    CLI::App* sim = app.add_subcommand("simulate", "Simulate one composition over the traces");
    add_config(sim);
    add_out(sim);
    sim_flags.attach(sim);
    sim->add_flag("--dump-steps", dump_steps, "Also write per-step dispatch results");

    CLI::App* exh = app.add_subcommand("exhaustive", "Evaluate every composition in the space");
    add_config(exh);
    add_out(exh);
    exh->add_option("--jobs", jobs, "Concurrent evaluation threads");

    CLI::App* opt = app.add_subcommand("optimize", "NSGA-II search under the evaluation budget");
    add_config(opt);
    add_out(opt);
    opt->add_option("--jobs", jobs, "Concurrent evaluation threads");
    opt->add_option("--seed", seed, "Override search.seed");

    CLI::App* cand = app.add_subcommand("candidates", "Shortlist a Pareto front");
    add_config(cand);
    add_out(cand);
    cand->add_option("--front", front_path, "front.json from exhaustive/optimize")->required();
    cand->add_option("--method", method, "threshold, greedy or kmeans")
        ->check(CLI::IsMember({"threshold", "greedy", "kmeans"}));
    cand->add_option("--k", k, "Shortlist size for greedy/kmeans");
    cand->add_option("--seed", seed, "Seed for kmeans");

    CLI::App* proj = app.add_subcommand("project", "Cumulative emissions vs. grid-only baseline");
    add_config(proj);
    add_out(proj);
    proj_flags.attach(proj);
    proj->add_option("--horizon", horizon, "Projection horizon in days");

    CLI::App* val = app.add_subcommand("validate", "Check config and traces, write nothing");
    add_config(val);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints the right (sub)command help, exits 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1; // usage errors are always 1, whatever CLI11 would pick
    }

    try {
        if (sim->parsed())
            return cmd_simulate(config_path, out_dir, sim_flags, dump_steps);
        if (exh->parsed())
            return cmd_exhaustive(config_path, out_dir, jobs);
        if (opt->parsed())
            return cmd_optimize(config_path, out_dir, jobs, seed);
        if (cand->parsed())
            return cmd_candidates(config_path, out_dir, front_path, method, k, seed);
        if (proj->parsed())
            return cmd_project(config_path, out_dir, proj_flags, horizon);
        if (val->parsed())
            return cmd_validate(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
