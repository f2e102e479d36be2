#include "mgs/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "mgs/error.hpp"
#include "mgs/format.hpp"
#include "mgs/timeseries.hpp"

namespace mgs {

using ordered_json = nlohmann::ordered_json;

namespace {

void dump_to(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open output file: " + path.string());
    out << text;
    if (!out)
        throw Error("failed writing " + path.string());
}

void dump_json(const std::filesystem::path& path, const ordered_json& j) {
    dump_to(path, j.dump(2) + "\n");
}

ordered_json composition_json(const Composition& c) {
    ordered_json j;
    j["wind_turbines"] = c.wind_turbines;
    j["solar_units"] = c.solar_units;
    j["battery_units"] = c.battery_units;
    return j;
}

ordered_json metrics_json(const SimulationMetrics& m) {
    ordered_json j;
    j["operational_tco2_per_day"] = m.operational_tco2_per_day;
    j["embodied_tco2"] = m.embodied_tco2;
    j["coverage_percent"] = m.coverage_percent;
    if (m.battery_cycles)
        j["battery_cycles"] = *m.battery_cycles;
    else
        j["battery_cycles"] = nullptr;
    j["import_kwh"] = m.import_kwh;
    j["export_kwh"] = m.export_kwh;
    j["load_kwh"] = m.load_kwh;
    j["onsite_generation_kwh"] = m.onsite_generation_kwh;
    return j;
}

SimulationMetrics metrics_from_json(const ordered_json& j) {
    SimulationMetrics m;
    m.operational_tco2_per_day = j.at("operational_tco2_per_day").get<double>();
    m.embodied_tco2 = j.at("embodied_tco2").get<double>();
    m.coverage_percent = j.at("coverage_percent").get<double>();
    if (!j.at("battery_cycles").is_null())
        m.battery_cycles = j.at("battery_cycles").get<double>();
    m.import_kwh = j.at("import_kwh").get<double>();
    m.export_kwh = j.at("export_kwh").get<double>();
    m.load_kwh = j.at("load_kwh").get<double>();
    m.onsite_generation_kwh = j.at("onsite_generation_kwh").get<double>();
    return m;
}

Composition composition_from_json(const ordered_json& j) {
    Composition c;
    c.wind_turbines = j.at("wind_turbines").get<int>();
    c.solar_units = j.at("solar_units").get<int>();
    c.battery_units = j.at("battery_units").get<int>();
    return c;
}

std::string csv_optional(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

// "4,649" style grouping for the text table.
std::string grouped(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.0f", v);
    std::string digits(buf);
    std::string sign;
    if (!digits.empty() && digits.front() == '-') {
        sign = "-";
        digits.erase(digits.begin());
    }
    std::string out;
    int count = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if (count > 0 && count % 3 == 0)
            out.push_back(',');
        out.push_back(*it);
        ++count;
    }
    std::reverse(out.begin(), out.end());
    return sign + out;
}

std::string fixed(double v, int places) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", places, v);
    return std::string(buf);
}

// Trims trailing zeros of a fixed representation: 12.0 -> "12", 7.50 -> "7.5".
std::string compact(double v) {
    std::string s = fixed(v, 2);
    while (!s.empty() && s.back() == '0')
        s.pop_back();
    if (!s.empty() && s.back() == '.')
        s.pop_back();
    return s;
}

} // namespace

void write_metrics_json(const std::filesystem::path& path, const Composition& composition,
                        const SimulationMetrics& metrics) {
    ordered_json j;
    j["label"] = composition_label(composition);
    j["composition"] = composition_json(composition);
    j["metrics"] = metrics_json(metrics);
    dump_json(path, j);
}

void write_front_json(const std::filesystem::path& path, const ParetoFront& front,
                      std::span<const std::string> objective_names) {
    front.check();
    ordered_json j;
    j["objectives"] = std::vector<std::string>(objective_names.begin(), objective_names.end());
    ordered_json points = ordered_json::array();
    for (const ObjectivePoint& p : front.points) {
        ordered_json pj;
        pj["label"] = composition_label(p.composition);
        pj["composition"] = composition_json(p.composition);
        pj["objectives"] = p.objectives;
        pj["metrics"] = metrics_json(p.metrics);
        points.push_back(std::move(pj));
    }
    j["points"] = std::move(points);
    dump_json(path, j);
}

FrontFile front_from_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open front file: " + path.string());
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error("cannot parse " + path.string() + ": " + e.what());
    }
    FrontFile out;
    try {
        out.objectives = j.at("objectives").get<std::vector<std::string>>();
        for (const auto& pj : j.at("points")) {
            ObjectivePoint p;
            p.composition = composition_from_json(pj.at("composition"));
            p.objectives = pj.at("objectives").get<std::vector<double>>();
            p.metrics = metrics_from_json(pj.at("metrics"));
            out.front.points.push_back(std::move(p));
        }
    } catch (const std::exception& e) {
        throw Error("malformed front file " + path.string() + ": " + e.what());
    }
    out.front.check();
    return out;
}

void write_evaluations_csv(const std::filesystem::path& path, std::span<const EvalRecord> log,
                           std::span<const std::string> objective_names) {
    std::ostringstream out;
    out << "wind_turbines,solar_units,battery_units";
    for (const std::string& name : objective_names)
        out << ",obj_" << name;
    out << ",operational_tco2_per_day,embodied_tco2,coverage_percent,battery_cycles,"
           "import_kwh,export_kwh,load_kwh,onsite_generation_kwh,cache_hit,generation\n";
    for (const EvalRecord& r : log) {
        if (r.objectives.size() != objective_names.size())
            throw Error("evaluation log row does not match the objective list");
        out << r.composition.wind_turbines << ',' << r.composition.solar_units << ','
            << r.composition.battery_units;
        for (const double v : r.objectives)
            out << ',' << format_double(v);
        const SimulationMetrics& m = r.metrics;
        out << ',' << format_double(m.operational_tco2_per_day) << ','
            << format_double(m.embodied_tco2) << ',' << format_double(m.coverage_percent) << ','
            << csv_optional(m.battery_cycles) << ',' << format_double(m.import_kwh) << ','
            << format_double(m.export_kwh) << ',' << format_double(m.load_kwh) << ','
            << format_double(m.onsite_generation_kwh) << ',' << (r.cache_hit ? 1 : 0) << ','
            << r.generation << '\n';
    }
    dump_to(path, out.str());
}

void write_candidates_csv(const std::filesystem::path& path,
                          std::span<const ObjectivePoint> candidates,
                          const ScenarioConfig& config) {
    std::ostringstream out;
    out << "wind_mw,solar_mw,battery_mwh,embodied_tco2,operational_tco2_per_day,"
           "coverage_percent,battery_cycles,wind_turbines,solar_units,battery_units\n";
    for (const ObjectivePoint& p : candidates) {
        const Composition& c = p.composition;
        out << format_double(c.wind_turbines * config.turbine_rated_kw / 1000.0) << ','
            << format_double(c.solar_units * config.solar_unit_dc_kw / 1000.0) << ','
            << format_double(c.battery_units * config.battery_unit_kwh / 1000.0) << ','
            << format_double(p.metrics.embodied_tco2) << ','
            << format_double(p.metrics.operational_tco2_per_day) << ','
            << format_double(p.metrics.coverage_percent) << ','
            << csv_optional(p.metrics.battery_cycles) << ',' << c.wind_turbines << ','
            << c.solar_units << ',' << c.battery_units << '\n';
    }
    dump_to(path, out.str());
}

std::string candidates_table(std::span<const ObjectivePoint> candidates,
                             const ScenarioConfig& config) {
    const char* headers[] = {"Wind MW",   "Solar MW", "Battery MWh",   "Embodied tCO2",
                             "Operat. tCO2/day", "Cov. %",   "Battery cycles"};
    constexpr std::size_t ncols = std::size(headers);
    std::vector<std::vector<std::string>> rows;
    for (const ObjectivePoint& p : candidates) {
        const Composition& c = p.composition;
        rows.push_back({compact(c.wind_turbines * config.turbine_rated_kw / 1000.0),
                        compact(c.solar_units * config.solar_unit_dc_kw / 1000.0),
                        compact(c.battery_units * config.battery_unit_kwh / 1000.0),
                        grouped(p.metrics.embodied_tco2),
                        fixed(p.metrics.operational_tco2_per_day, 2),
                        fixed(p.metrics.coverage_percent, 1),
                        p.metrics.battery_cycles ? fixed(*p.metrics.battery_cycles, 1)
                                                 : std::string("--")});
    }
    std::size_t width[ncols];
    for (std::size_t i = 0; i < ncols; ++i) {
        width[i] = std::string(headers[i]).size();
        for (const auto& row : rows)
            width[i] = std::max(width[i], row[i].size());
    }
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < ncols; ++i) {
            if (i > 0)
                out << "  ";
            out << std::string(width[i] - cells[i].size(), ' ') << cells[i];
        }
        out << '\n';
    };
    emit(std::vector<std::string>(headers, headers + ncols));
    for (std::size_t i = 0; i < ncols; ++i) {
        if (i > 0)
            out << "  ";
        out << std::string(width[i], '-');
    }
    out << '\n';
    for (const auto& row : rows)
        emit(row);
    return out.str();
}

void write_projection_csv(const std::filesystem::path& path,
                          std::span<const ProjectionLine> lines) {
    if (lines.empty())
        throw Error("projection needs at least one line");
    const std::size_t n = lines.front().cumulative_tco2.size();
    std::ostringstream out;
    out << "day";
    for (const ProjectionLine& line : lines) {
        if (line.cumulative_tco2.size() != n)
            throw Error("projection lines have mismatched horizons");
        out << ',' << line.label;
    }
    out << '\n';
    for (std::size_t day = 0; day < n; ++day) {
        out << day;
        for (const ProjectionLine& line : lines)
            out << ',' << format_double(line.cumulative_tco2[day]);
        out << '\n';
    }
    dump_to(path, out.str());
}

void write_projection_json(const std::filesystem::path& path,
                           std::span<const ProjectionLine> lines,
                           std::optional<double> crossover_days) {
    ordered_json j;
    ordered_json profiles = ordered_json::array();
    for (const ProjectionLine& line : lines) {
        ordered_json pj;
        pj["label"] = line.label;
        pj["composition"] = composition_json(line.composition);
        pj["embodied_tco2"] = line.profile.embodied_tco2;
        pj["operational_rate_tco2_per_day"] = line.profile.operational_rate_tco2_per_day;
        profiles.push_back(std::move(pj));
    }
    j["profiles"] = std::move(profiles);
    if (crossover_days) {
        j["crossover_days"] = *crossover_days;
        j["crossover_years"] = *crossover_days / 365.0;
    } else {
        j["crossover_days"] = nullptr;
        j["crossover_years"] = nullptr;
    }
    dump_json(path, j);
}

void write_steps_csv(const std::filesystem::path& path, const Scenario& scenario,
                     std::span<const StepTrace> trace) {
    std::ostringstream out;
    out << "timestamp,generation_kw,load_kw,battery_flow_kw,grid_import_kw,grid_export_kw,"
           "stored_kwh\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const StepTrace& t = trace[i];
        out << format_iso8601_utc(scenario.load.start +
                                  scenario.load.step * static_cast<std::int64_t>(i))
            << ',' << format_double(t.step.generation_kw) << ',' << format_double(t.step.load_kw)
            << ',' << format_double(t.step.battery_flow_kw) << ','
            << format_double(t.step.grid_import_kw) << ',' << format_double(t.step.grid_export_kw)
            << ',' << format_double(t.stored_kwh) << '\n';
    }
    dump_to(path, out.str());
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
    ordered_json j;
    j["tool"] = "mgsizer";
    j["version"] = kToolVersion;
    j["subcommand"] = manifest.subcommand;
    j["config_path"] = manifest.config_path;
    j["config_fnv1a64"] = manifest.config_hash;
    j["site"] = manifest.site;
    if (manifest.composition)
        j["composition"] = composition_json(*manifest.composition);
    else
        j["composition"] = nullptr;
    if (manifest.seed)
        j["seed"] = *manifest.seed;
    else
        j["seed"] = nullptr;
    j["jobs"] = manifest.jobs;
    j["out_dir"] = manifest.out_dir;
    j["started_utc"] = manifest.started_utc;
    j["wall_time_seconds"] = manifest.wall_time_seconds;
    dump_json(path, j);
}

} // namespace mgs
