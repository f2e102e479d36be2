// Generates the bundled synthetic scenario: deterministic trace CSVs plus a
// ready-to-run scenario.toml.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mgs/error.hpp"
#include "mgs/synthetic.hpp"
#include "mgs/timeseries.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Synthetic microgrid scenario generator"};

    std::string out_dir;
    std::string start = "2023-01-01T00:00:00Z";
    mgs::SyntheticOptions options;

    app.add_option("--out", out_dir, "Directory for CSVs and scenario.toml")->required();
    app.add_option("--days", options.days, "Days to generate (default 365)");
    app.add_option("--step", options.step_seconds, "Step in seconds (default 3600)");
    app.add_option("--seed", options.seed, "Noise seed");
    app.add_option("--start", start, "First timestamp (ISO-8601)");
    app.add_option("--load-mean", options.load_mean_kw, "Mean load in kW (default 1620)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        options.start = mgs::parse_iso8601(start);
        const auto config_path = mgs::write_synthetic_scenario(out_dir, options);
        std::cout << config_path.string() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
