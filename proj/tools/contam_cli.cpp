// contam: minimax likelihood-ratio tests under label-noise contamination.
//
//   contam run    --scenario FILE [--out DIR] [--grid-points N]
//   contam nustar --scenario FILE
//   contam region --scenario FILE
//   contam curve  --scenario FILE --out DIR [--grid-points N]

#include "contam/error.hpp"
#include "contam/scenario.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Options {
    std::string scenario;
    std::string out;
    std::optional<int> grid_points;
};

contam::ScenarioConfig load(const Options& opt) {
    auto cfg = contam::load_scenario(opt.scenario);
    if (opt.grid_points) {
        cfg.search.grid_points = *opt.grid_points;
    }
    return cfg;
}

void add_common(CLI::App* cmd, Options& opt, bool with_search) {
    cmd->add_option("--scenario", opt.scenario, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
    if (with_search) {
        cmd->add_option("--grid-points", opt.grid_points, "Threshold grid size")->check(CLI::Range(2, 10000000));
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimax likelihood-ratio tests under label-noise contamination"};
    app.require_subcommand(1);

    Options opt;
    auto* run = app.add_subcommand("run", "Full pipeline: proportions, region, minimax search, outputs");
    add_common(run, opt, true);
    run->add_option("--out", opt.out, "Directory for curves.csv and summary.json");

    auto* nustar = app.add_subcommand("nustar", "Maximal mixture proportions only");
    add_common(nustar, opt, false);

    auto* region = app.add_subcommand("region", "Feasible polygon vertices and cone-filter flags");
    add_common(region, opt, false);

    auto* curve = app.add_subcommand("curve", "Risk curves only");
    add_common(curve, opt, true);
    curve->add_option("--out", opt.out, "Directory for curves.csv")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // help and version requests exit 0; usage errors count as config errors
        const int status = app.exit(e);
        return status == 0 ? 0 : 2;
    }

    try {
        const auto cfg = load(opt);
        if (*nustar) {
            std::cout << contam::format_nu_stars(contam::compute_nu_stars(cfg));
            return 0;
        }
        if (*region) {
            const auto nu = contam::compute_nu_stars(cfg);
            std::cout << contam::format_region(contam::build_region(cfg, nu));
            return 0;
        }
        const auto result = contam::run_scenario(cfg);
        if (*curve) {
            contam::emit_curves(result, opt.out, true);
            return 0;
        }
        std::cout << contam::format_report(result);
        if (!opt.out.empty()) {
            contam::emit_curves(result, opt.out);
        }
        return 0;
    } catch (const contam::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == contam::ErrorCode::config ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
