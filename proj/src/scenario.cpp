#include "contam/scenario.hpp"

#include "contam/error.hpp"

#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <limits>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace contam {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw Error(ErrorCode::config, field + ": " + message);
}

const json& require(const json& node, const std::string& key, const std::string& path) {
    if (!node.is_object() || !node.contains(key)) {
        fail(path + key, "missing required field");
    }
    return node.at(key);
}

double number(const json& node, const std::string& field) {
    if (!node.is_number()) {
        fail(field, "expected a number");
    }
    return node.get<double>();
}

std::vector<double> numbers(const json& node, const std::string& field) {
    if (!node.is_array()) {
        fail(field, "expected an array of numbers");
    }
    std::vector<double> out;
    out.reserve(node.size());
    for (std::size_t i = 0; i < node.size(); ++i) {
        out.push_back(number(node[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

// Runs a library constructor and rewrites its validation failure as a config
// error for the given field.
template <class F>
auto field_guard(const std::string& field, F&& make) -> decltype(make()) {
    try {
        return make();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::config) {
            throw;
        }
        fail(field, e.what());
    }
}

DensityModel parse_model(const json& node, const std::string& field) {
    const auto& family = require(node, "family", field + ".");
    if (!family.is_string()) {
        fail(field + ".family", "expected a string");
    }
    const auto name = family.get<std::string>();
    if (name == "gaussian") {
        const double mean = number(require(node, "mean", field + "."), field + ".mean");
        const double sd = number(require(node, "stddev", field + "."), field + ".stddev");
        return field_guard(field, [&] { return DensityModel::gaussian(mean, sd); });
    }
    if (name == "exponential") {
        const double rate = number(require(node, "rate", field + "."), field + ".rate");
        return field_guard(field, [&] { return DensityModel::exponential(rate); });
    }
    if (name == "tabulated") {
        auto grid = numbers(require(node, "grid", field + "."), field + ".grid");
        auto density = numbers(require(node, "density", field + "."), field + ".density");
        return field_guard(field, [&] {
            return DensityModel::tabulated(std::move(grid), std::move(density));
        });
    }
    fail(field + ".family", "unknown family '" + name + "' (gaussian, exponential, tabulated)");
}

Coefficient parse_coefficient(const json& node, const std::string& field) {
    if (node.is_number()) {
        return node.get<double>();
    }
    if (node.is_string()) {
        const auto token = node.get<std::string>();
        if (token == "nu_tilde_01") {
            return NuToken::nu_tilde_01;
        }
        if (token == "nu_tilde_10") {
            return NuToken::nu_tilde_10;
        }
    }
    fail(field, "expected a number, \"nu_tilde_01\" or \"nu_tilde_10\"");
}

std::optional<double> optional_bound(const json& node, const std::string& field) {
    if (node.is_null()) {
        return std::nullopt;
    }
    return number(node, field);
}

double resolve(const Coefficient& c, const ObservedProportions& nu) {
    if (const auto* v = std::get_if<double>(&c)) {
        return *v;
    }
    return std::get<NuToken>(c) == NuToken::nu_tilde_01 ? nu.nu_tilde_01 : nu.nu_tilde_10;
}

std::string describe(const ConstraintSpec& spec, const ObservedProportions& nu) {
    std::ostringstream label;
    label << resolve(spec.a0, nu) << "*pi0 + " << resolve(spec.a1, nu) << "*pi1 "
          << (spec.sense == Sense::at_least ? ">= " : "<= ") << spec.b;
    return label.str();
}

std::string fixed4(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << v;
    return s.str();
}

std::string point4(const Vec2& p) {
    return "(" + fixed4(p[0]) + ", " + fixed4(p[1]) + ")";
}

std::string sig6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace

ScenarioConfig parse_scenario(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail("<file>", e.what());
    }
    if (!root.is_object()) {
        fail("<root>", "expected a JSON object");
    }

    ScenarioConfig cfg;
    if (root.contains("name")) {
        if (!root["name"].is_string()) {
            fail("name", "expected a string");
        }
        cfg.name = root["name"].get<std::string>();
    }

    const bool has_pi = root.contains("pi_true");
    const bool has_observed = root.contains("observed_contaminated");
    if (has_pi == has_observed) {
        fail("pi_true/observed_contaminated", "exactly one of the two must be present");
    }
    if (has_pi) {
        const auto pi = numbers(root["pi_true"], "pi_true");
        if (pi.size() != 2) {
            fail("pi_true", "expected [pi0, pi1]");
        }
        cfg.pi_true = field_guard("pi_true", [&] { return ContaminationParams(pi[0], pi[1]); });
        cfg.model0 = parse_model(require(root, "model0", ""), "model0");
        cfg.model1 = parse_model(require(root, "model1", ""), "model1");
        field_guard("model1", [&] {
            require_common_support(*cfg.model0, *cfg.model1);
            return 0;
        });
    } else {
        if (root.contains("model0") || root.contains("model1")) {
            fail("model0/model1", "pure models are unknown in observer mode; remove them");
        }
        const auto& obs = root["observed_contaminated"];
        auto grid = numbers(require(obs, "grid", "observed_contaminated."), "observed_contaminated.grid");
        auto p0 = numbers(require(obs, "p0_tilde", "observed_contaminated."),
                          "observed_contaminated.p0_tilde");
        auto p1 = numbers(require(obs, "p1_tilde", "observed_contaminated."),
                          "observed_contaminated.p1_tilde");
        auto m0 = field_guard("observed_contaminated.p0_tilde",
                              [&] { return DensityModel::tabulated(grid, std::move(p0)); });
        auto m1 = field_guard("observed_contaminated.p1_tilde",
                              [&] { return DensityModel::tabulated(std::move(grid), std::move(p1)); });
        cfg.observed = ObservedDensities{std::move(m0), std::move(m1)};
    }

    const auto& bayes = require(root, "bayes", "");
    const double q0 = number(require(bayes, "q0", "bayes."), "bayes.q0");
    const double c01 = number(require(bayes, "c01", "bayes."), "bayes.c01");
    const double c10 = number(require(bayes, "c10", "bayes."), "bayes.c10");
    cfg.bayes = field_guard("bayes", [&] { return BayesConfig(q0, c01, c10); });

    if (root.contains("constraints")) {
        const auto& list = root["constraints"];
        if (!list.is_array()) {
            fail("constraints", "expected an array");
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string field = "constraints[" + std::to_string(i) + "]";
            const auto& c = list[i];
            ConstraintSpec spec;
            spec.a0 = parse_coefficient(require(c, "a0", field + "."), field + ".a0");
            spec.a1 = parse_coefficient(require(c, "a1", field + "."), field + ".a1");
            spec.b = number(require(c, "b", field + "."), field + ".b");
            const auto& sense = require(c, "sense", field + ".");
            const std::string s = sense.is_string() ? sense.get<std::string>() : "";
            if (s == "<=") {
                spec.sense = Sense::at_most;
            } else if (s == ">=") {
                spec.sense = Sense::at_least;
            } else {
                fail(field + ".sense", "expected \"<=\" or \">=\"");
            }
            cfg.constraints.push_back(spec);
        }
    }

    if (root.contains("nu_pure_upper_bounds")) {
        const auto& ub = root["nu_pure_upper_bounds"];
        if (!ub.is_array() || ub.size() != 2) {
            fail("nu_pure_upper_bounds", "expected [u01, u10] (entries may be null)");
        }
        cfg.nu_pure_upper_01 = optional_bound(ub[0], "nu_pure_upper_bounds[0]");
        cfg.nu_pure_upper_10 = optional_bound(ub[1], "nu_pure_upper_bounds[1]");
        for (const auto& [v, f] : {std::pair{cfg.nu_pure_upper_01, "nu_pure_upper_bounds[0]"},
                                   std::pair{cfg.nu_pure_upper_10, "nu_pure_upper_bounds[1]"}}) {
            if (v && !(*v >= 0.0 && *v < 1.0)) {
                fail(f, "bound must lie in [0, 1)");
            }
        }
    }

    if (root.contains("search")) {
        const auto& search = root["search"];
        if (search.contains("grid_points")) {
            const auto& g = search["grid_points"];
            if (!g.is_number_integer() || g.get<long long>() < 2) {
                fail("search.grid_points", "expected an integer >= 2");
            }
            cfg.search.grid_points = g.get<int>();
        }
        if (search.contains("tolerance")) {
            const double tol = number(search["tolerance"], "search.tolerance");
            if (!(tol > 0.0)) {
                fail("search.tolerance", "expected a positive number");
            }
            cfg.search.lambda_tolerance = tol;
        }
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::config, path.string() + ": " + std::strerror(errno));
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_scenario(text.str());
}

ObservedProportions compute_nu_stars(const ScenarioConfig& config) {
    ObservedProportions out;
    if (config.observer_mode()) {
        const MixtureDensity p0(config.observed->p0_tilde);
        const MixtureDensity p1(config.observed->p1_tilde);
        out.nu_tilde_01 = nu_star(p0, p1).value;
        out.nu_tilde_10 = nu_star(p1, p0).value;
        out.lambda_range = attainable_lambda_range(p0, p1);
        return out;
    }
    const auto pair = contaminate(*config.model0, *config.model1, *config.pi_true);
    const auto quartet = nu_star_quartet(pair);
    out.nu_tilde_01 = quartet.nu_tilde_01;
    out.nu_tilde_10 = quartet.nu_tilde_10;
    out.nu_pure = PureNuStars{quartet.nu_pure_01, quartet.nu_pure_10};
    out.lambda_range = {quartet.nu_tilde_10,
                        quartet.nu_tilde_01 > 0.0 ? 1.0 / quartet.nu_tilde_01
                                                  : std::numeric_limits<double>::infinity()};
    return out;
}

FeasibleRegion build_region(const ScenarioConfig& config, const ObservedProportions& nu) {
    const FeasibleRegion base = base_region(nu.nu_tilde_01, nu.nu_tilde_10);
    std::vector<HalfPlane> extra;
    for (const auto& spec : config.constraints) {
        extra.push_back(make_half_plane({resolve(spec.a0, nu), resolve(spec.a1, nu)}, spec.b,
                                        spec.sense, describe(spec, nu)));
    }
    if (config.nu_pure_upper_01) {
        extra.push_back(pure_nu_bound(PureDirection::zero_one, *config.nu_pure_upper_01,
                                      Sense::at_most, nu.nu_tilde_01, nu.nu_tilde_10));
    }
    if (config.nu_pure_upper_10) {
        extra.push_back(pure_nu_bound(PureDirection::one_zero, *config.nu_pure_upper_10,
                                      Sense::at_most, nu.nu_tilde_01, nu.nu_tilde_10));
    }
    return add_constraints(base, extra);
}

RateSource make_rate_source(const ScenarioConfig& config, const ObservedProportions& nu) {
    RateSource source;
    source.range = nu.lambda_range;
    if (config.observer_mode()) {
        source.rates_tilde = [obs = *config.observed, range = nu.lambda_range](double lambda) {
            if (lambda <= range.lower) {
                return ErrorPair{1.0, 0.0};
            }
            if (lambda >= range.upper) {
                return ErrorPair{0.0, 1.0};
            }
            return threshold_error_rates(obs.p0_tilde, obs.p1_tilde, lambda);
        };
        return source;
    }
    source.pi_true = config.pi_true;
    source.rates_tilde = [pair = contaminate(*config.model0, *config.model1, *config.pi_true),
                          range = nu.lambda_range](double lambda) {
        return contaminated_error_rates(pair, ThresholdRule(lambda), range).rates;
    };
    return source;
}

ScenarioRun run_scenario(const ScenarioConfig& config) {
    auto nu = compute_nu_stars(config);
    auto region = build_region(config, nu);
    auto result = minimax_search(make_rate_source(config, nu), region, config.bayes, config.search);
    return {config.name, config.observer_mode(), std::move(nu), std::move(region), std::move(result)};
}

void write_curves_csv(const MinimaxResult& result, std::ostream& out) {
    out << "lambda,risk_max,risk_true,risk_zero\n";
    const bool has_true = !result.risk_curve_true.empty();
    for (std::size_t i = 0; i < result.risk_curve_max.size(); ++i) {
        out << sig6(result.risk_curve_max[i].lambda) << ',' << sig6(result.risk_curve_max[i].risk)
            << ',' << (has_true ? sig6(result.risk_curve_true[i].risk) : std::string{}) << ','
            << sig6(result.risk_curve_zero[i].risk) << '\n';
    }
}

std::string summary_json(const ScenarioRun& run) {
    json candidates = json::array();
    for (const auto& v : run.region.candidate_vertices()) {
        candidates.push_back({v.point[0], v.point[1]});
    }
    json summary = {
        {"nu_tilde_01", run.nu.nu_tilde_01},
        {"nu_tilde_10", run.nu.nu_tilde_10},
        {"vertex_count", run.region.vertices().size()},
        {"candidate_vertices", candidates},
        {"worst_vertex", {run.result.worst_vertex[0], run.result.worst_vertex[1]}},
        {"lambda_star", run.result.lambda_star},
        {"minimax_risk", run.result.minimax_risk},
        {"min_risk_true", run.result.min_risk_true ? json(*run.result.min_risk_true) : json(nullptr)},
        {"min_risk_zero", run.result.min_risk_zero},
    };
    return summary.dump(2) + "\n";
}

void emit_curves(const ScenarioRun& run, const std::filesystem::path& dir, bool curves_only) {
    std::filesystem::create_directories(dir);
    auto write = [](const std::filesystem::path& path, const auto& body) {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error(path.string() + ": " + std::strerror(errno));
        }
        body(out);
        out.flush();
        if (!out) {
            throw std::runtime_error(path.string() + ": write failed");
        }
    };
    write(dir / "curves.csv", [&](std::ostream& out) { write_curves_csv(run.result, out); });
    if (!curves_only) {
        write(dir / "summary.json", [&](std::ostream& out) { out << summary_json(run); });
    }
}

std::string format_nu_stars(const ObservedProportions& nu) {
    std::ostringstream s;
    s << "nu*(P~0,P~1) = " << fixed4(nu.nu_tilde_01) << "\n"
      << "nu*(P~1,P~0) = " << fixed4(nu.nu_tilde_10) << "\n";
    if (nu.nu_pure) {
        s << "nu*(P0,P1)   = " << fixed4(nu.nu_pure->nu_01)
          << (is_irreducible(nu.nu_pure->nu_01) ? "  (irreducible)" : "") << "\n"
          << "nu*(P1,P0)   = " << fixed4(nu.nu_pure->nu_10)
          << (is_irreducible(nu.nu_pure->nu_10) ? "  (irreducible)" : "") << "\n";
    }
    s << "lambda range = (" << fixed4(nu.lambda_range.lower) << ", "
      << (std::isfinite(nu.lambda_range.upper) ? fixed4(nu.lambda_range.upper) : std::string("inf"))
      << ")\n";
    return s.str();
}

std::string format_region(const FeasibleRegion& region) {
    std::ostringstream s;
    s << "feasible region: " << region.vertices().size() << " vertices\n";
    for (const auto& v : region.vertices()) {
        s << "  " << point4(v.point) << (v.candidate ? "  candidate" : "") << "  active:";
        for (const auto i : v.active_set) {
            s << " [" << region.half_planes()[i].label << "]";
        }
        s << "\n";
    }
    return s.str();
}

std::string format_report(const ScenarioRun& run) {
    std::ostringstream s;
    s << "scenario: " << (run.name.empty() ? "<unnamed>" : run.name)
      << (run.observer_mode ? " (observer mode)" : " (simulation mode)") << "\n"
      << format_nu_stars(run.nu) << format_region(run.region)
      << "lambda*          = " << fixed4(run.result.lambda_star) << "\n"
      << "worst vertex     = " << point4(run.result.worst_vertex) << "\n"
      << "minimax risk     = " << fixed4(run.result.minimax_risk) << "\n";
    if (run.result.min_risk_true) {
        s << "min risk, true pi = " << fixed4(*run.result.min_risk_true) << "\n";
    }
    s << "min risk, pi = 0  = " << fixed4(run.result.min_risk_zero) << "\n";
    return s.str();
}

} // namespace contam
