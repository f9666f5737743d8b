#include "contam/error.hpp"
#include "contam/scenario.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace contam;
using nlohmann::json;

namespace {

const std::filesystem::path kScenarios = CONTAM_SCENARIO_DIR;

json fixture(const std::string& name) {
    std::ifstream in(kScenarios / name);
    return json::parse(in);
}

// Field named in the config error raised by the document, or "" when it parses.
std::string config_error(const json& doc) {
    try {
        parse_scenario(doc.dump());
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::config);
        return e.what();
    }
    return {};
}

std::string csv_of(const MinimaxResult& r) {
    std::ostringstream out;
    write_curves_csv(r, out);
    return out.str();
}

} // namespace

TEST_CASE("bundled fixtures parse") {
    const auto g = load_scenario(kScenarios / "gaussian_s5.json");
    CHECK(g.name == "gaussian_s5");
    CHECK_FALSE(g.observer_mode());
    CHECK(g.constraints.size() == 4);
    CHECK(std::holds_alternative<NuToken>(g.constraints[2].a1));
    CHECK(g.constraints[0].sense == Sense::at_least);
    CHECK(g.search.grid_points == 2000);
    const auto o = load_scenario(kScenarios / "exponential_observer.json");
    CHECK(o.observer_mode());
    CHECK_FALSE(o.pi_true);
}

TEST_CASE("config errors name the field") {
    auto doc = fixture("gaussian_s5.json");
    CHECK(config_error(doc).empty());

    auto missing = doc;
    missing["bayes"].erase("q0");
    CHECK(config_error(missing).find("bayes.q0") != std::string::npos);

    auto both = doc;
    both["observed_contaminated"] = json::object();
    CHECK(config_error(both).find("observed_contaminated") != std::string::npos);

    auto neither = doc;
    neither.erase("pi_true");
    CHECK_FALSE(config_error(neither).empty());

    auto sense = doc;
    sense["constraints"][1]["sense"] = "=";
    CHECK(config_error(sense).find("constraints[1].sense") != std::string::npos);

    auto token = doc;
    token["constraints"][2]["a1"] = "nu";
    CHECK(config_error(token).find("constraints[2].a1") != std::string::npos);

    auto family = doc;
    family["model1"]["family"] = "cauchy";
    CHECK(config_error(family).find("model1") != std::string::npos);

    auto mixed = doc;
    mixed["model1"] = {{"family", "exponential"}, {"rate", 2.0}};
    CHECK(config_error(mixed).find("model1") != std::string::npos);

    auto sd = doc;
    sd["model0"]["stddev"] = -1.0;
    CHECK(config_error(sd).find("model0") != std::string::npos);

    auto pi = doc;
    pi["pi_true"] = {0.6, 0.5};
    CHECK(config_error(pi).find("pi_true") != std::string::npos);

    auto grid = doc;
    grid["search"]["grid_points"] = 1.5;
    CHECK(config_error(grid).find("search.grid_points") != std::string::npos);

    auto bound = doc;
    bound["nu_pure_upper_bounds"] = {1.2, nullptr};
    CHECK(config_error(bound).find("nu_pure_upper_bounds[0]") != std::string::npos);

    CHECK(config_error(json::array()).size() > 0);
    try {
        parse_scenario("{ not json");
        FAIL("expected a config error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::config);
    }
}

TEST_CASE("gaussian scenario end to end") {
    const auto run = run_scenario(load_scenario(kScenarios / "gaussian_s5.json"));
    CHECK(std::abs(run.nu.nu_tilde_01 - 0.2857) < 5e-4);
    CHECK(std::abs(run.nu.nu_tilde_10 - 0.7202) < 5e-4);
    REQUIRE(run.nu.nu_pure);
    CHECK(run.nu.nu_pure->nu_10 == doctest::Approx(0.496677753127517).epsilon(1e-8));
    CHECK(run.region.vertices().size() == 6);
    CHECK(std::abs(run.result.worst_vertex[0] - 0.1619) < 5e-4);
    CHECK(std::abs(run.result.worst_vertex[1] - 0.1334) < 5e-4);
    CHECK(std::abs(run.result.minimax_risk - 0.3845) < 1e-3);

    const auto summary = json::parse(summary_json(run));
    for (const char* key : {"nu_tilde_01", "nu_tilde_10", "vertex_count", "candidate_vertices", "worst_vertex",
                            "lambda_star", "minimax_risk", "min_risk_true", "min_risk_zero"}) {
        CHECK(summary.contains(key));
    }
    CHECK(summary["vertex_count"] == 6);

    const auto csv = csv_of(run.result);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "lambda,risk_max,risk_true,risk_zero");
    int rows = 0;
    double min_max = 1e9, min_true = 1e9, min_zero = 1e9;
    while (std::getline(lines, line)) {
        ++rows;
        double v[4];
        char comma;
        std::istringstream row(line);
        row >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3];
        min_max = std::min(min_max, v[1]);
        min_true = std::min(min_true, v[2]);
        min_zero = std::min(min_zero, v[3]);
    }
    CHECK(rows == 2000);
    // column minima agree with the refined optima within one grid step
    CHECK(std::abs(min_max - run.result.minimax_risk) < 1e-4);
    CHECK(std::abs(min_true - *run.result.min_risk_true) < 1e-4);
    CHECK(std::abs(min_zero - run.result.min_risk_zero) < 1e-4);
    CHECK(std::abs(min_true - 0.3372) < 1e-3);
    CHECK(std::abs(min_zero - 0.4186) < 1e-3);

    const auto report = format_report(run);
    CHECK(report.find("0.3845") != std::string::npos);
    CHECK(report.find("0.2857") != std::string::npos);
}

TEST_CASE("exponential scenario and its observer twin") {
    const auto sim = run_scenario(load_scenario(kScenarios / "exponential_s5.json"));
    CHECK(sim.nu.nu_tilde_01 == doctest::Approx(12.0 / 17.0).epsilon(1e-9));
    CHECK(sim.nu.nu_tilde_10 == doctest::Approx(0.375).epsilon(1e-9));
    CHECK(sim.region.vertices().size() == 5);
    CHECK(sim.result.minimax_risk == doctest::Approx(19.0 / 46.0).epsilon(1e-8));

    const auto obs = run_scenario(load_scenario(kScenarios / "exponential_observer.json"));
    CHECK(obs.observer_mode);
    CHECK_FALSE(obs.nu.nu_pure);
    CHECK(obs.nu.nu_tilde_01 == doctest::Approx(sim.nu.nu_tilde_01).epsilon(1e-4));
    CHECK(obs.nu.nu_tilde_10 == doctest::Approx(sim.nu.nu_tilde_10).epsilon(1e-4));
    CHECK(obs.region.vertices().size() == 5);
    CHECK(std::abs(obs.result.minimax_risk - sim.result.minimax_risk) < 1e-4);
    CHECK(std::abs(obs.result.min_risk_zero - sim.result.min_risk_zero) < 1e-4);
    CHECK(obs.result.risk_curve_true.empty());
    CHECK(json::parse(summary_json(obs))["min_risk_true"].is_null());

    const auto csv = csv_of(obs.result);
    const auto second_line = csv.substr(csv.find('\n') + 1);
    CHECK(second_line.find(",,") != std::string::npos);
}

TEST_CASE("outputs are deterministic") {
    const auto cfg = load_scenario(kScenarios / "gaussian_s5.json");
    const auto a = run_scenario(cfg);
    const auto b = run_scenario(cfg);
    CHECK(csv_of(a.result) == csv_of(b.result));
    CHECK(summary_json(a) == summary_json(b));
}

TEST_CASE("emit_curves writes the files") {
    const auto dir = std::filesystem::temp_directory_path() / "contam_emit_test";
    std::filesystem::remove_all(dir);
    auto doc = fixture("exponential_s5.json");
    doc["search"]["grid_points"] = 50;
    const auto run = run_scenario(parse_scenario(doc.dump()));
    emit_curves(run, dir, true);
    CHECK(std::filesystem::exists(dir / "curves.csv"));
    CHECK_FALSE(std::filesystem::exists(dir / "summary.json"));
    emit_curves(run, dir);
    CHECK(std::filesystem::exists(dir / "summary.json"));
    std::ifstream in(dir / "summary.json");
    CHECK(json::parse(in)["vertex_count"] == 5);
    std::filesystem::remove_all(dir);
}

TEST_CASE("pure-proportion bounds match the equivalent explicit lines") {
    // the gaussian fixture's last two constraints written as bounds on the pure proportions
    auto doc = fixture("gaussian_s5.json");
    const auto run = run_scenario(parse_scenario(doc.dump()));
    const double nt01 = run.nu.nu_tilde_01;
    const double nt10 = run.nu.nu_tilde_10;
    // pi0 + nt01 pi1 >= (nt01 - u) / (1 - u) = 0.2
    const double u01 = (nt01 - 0.2) / (1 - 0.2);
    const double u10 = (nt10 - 0.25) / (1 - 0.25);
    doc["constraints"] = json::array({doc["constraints"][0], doc["constraints"][1]});
    doc["nu_pure_upper_bounds"] = {u01, u10};
    const auto cfg = parse_scenario(doc.dump());
    const auto region = build_region(cfg, compute_nu_stars(cfg));
    REQUIRE(region.vertices().size() == run.region.vertices().size());
    for (std::size_t i = 0; i < region.vertices().size(); ++i) {
        CHECK(region.vertices()[i].point[0] == doctest::Approx(run.region.vertices()[i].point[0]).epsilon(1e-12));
        CHECK(region.vertices()[i].point[1] == doctest::Approx(run.region.vertices()[i].point[1]).epsilon(1e-12));
    }
}

TEST_CASE("no contamination gives the classical Bayes risk") {
    // equal variances make the pure models mutually irreducible, so the base
    // region collapses to the origin
    auto doc = fixture("gaussian_s5.json");
    doc["pi_true"] = {0.0, 0.0};
    doc["model1"] = {{"family", "gaussian"}, {"mean", 1.0}, {"stddev", 1.0}};
    doc.erase("constraints");
    const auto run = run_scenario(parse_scenario(doc.dump()));
    REQUIRE(run.region.vertices().size() == 1);
    CHECK(run.region.vertices()[0].point == Vec2{0, 0});
    // midpoint threshold: Q(1/2)
    CHECK(run.result.minimax_risk == doctest::Approx(0.308537538725987).epsilon(1e-9));
    CHECK(run.result.minimax_risk == doctest::Approx(run.result.min_risk_zero).epsilon(1e-12));
    CHECK(run.result.minimax_risk == doctest::Approx(*run.result.min_risk_true).epsilon(1e-12));
}

TEST_CASE("without contamination a reducible pair still leaves a segment") {
    auto doc = fixture("gaussian_s5.json");
    doc["pi_true"] = {0.0, 0.0};
    doc.erase("constraints");
    const auto run = run_scenario(parse_scenario(doc.dump()));
    CHECK(run.region.vertices().size() == 2);
    CHECK(run.nu.nu_tilde_10 == doctest::Approx(0.496677753127517).epsilon(1e-8));
    CHECK(run.result.minimax_risk >= *run.result.min_risk_true);
}
