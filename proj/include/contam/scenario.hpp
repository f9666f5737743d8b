#pragma once
// Declarative scenarios: a JSON file names the likelihood models (or the
// observed contaminated densities), the Bayes costs, extra constraints on the
// contamination proportions and the search settings; run_scenario executes
// the full pipeline.

#include "contam/minimax.hpp"
#include "contam/mixprop.hpp"
#include "contam/models.hpp"
#include "contam/region.hpp"
#include "contam/risk.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace contam {

// A constraint coefficient is either a number or one of the observed
// proportions, so the lines parallel to the polygon's outer boundary can be
// written without copying rounded values into the file.
enum class NuToken { nu_tilde_01, nu_tilde_10 };
using Coefficient = std::variant<double, NuToken>;

struct ConstraintSpec {
    Coefficient a0 = 0.0;
    Coefficient a1 = 0.0;
    double b = 0.0;
    Sense sense = Sense::at_most;
};

struct ObservedDensities {
    DensityModel p0_tilde;
    DensityModel p1_tilde;
};

struct ScenarioConfig {
    std::string name;
    std::optional<DensityModel> model0;
    std::optional<DensityModel> model1;
    std::optional<ContaminationParams> pi_true;       // simulation mode
    std::optional<ObservedDensities> observed;        // observer mode
    BayesConfig bayes{0.5, 1.0, 1.0};
    std::vector<ConstraintSpec> constraints;
    std::optional<double> nu_pure_upper_01;
    std::optional<double> nu_pure_upper_10;
    SearchOptions search;

    bool observer_mode() const noexcept { return observed.has_value(); }
};

// Throws Error(config) naming the offending field.
ScenarioConfig parse_scenario(std::string_view json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

struct ObservedProportions {
    double nu_tilde_01 = 0.0;
    double nu_tilde_10 = 0.0;
    std::optional<PureNuStars> nu_pure;  // simulation mode only
    LambdaRange lambda_range;
};

ObservedProportions compute_nu_stars(const ScenarioConfig& config);

FeasibleRegion build_region(const ScenarioConfig& config, const ObservedProportions& nu);

RateSource make_rate_source(const ScenarioConfig& config, const ObservedProportions& nu);

struct ScenarioRun {
    std::string name;
    bool observer_mode = false;
    ObservedProportions nu;
    FeasibleRegion region;
    MinimaxResult result;
};

ScenarioRun run_scenario(const ScenarioConfig& config);

// Header lambda,risk_max,risk_true,risk_zero; 6 significant digits; the
// risk_true field is empty when the true proportions are unknown.
void write_curves_csv(const MinimaxResult& result, std::ostream& out);

// Machine summary, full precision.
std::string summary_json(const ScenarioRun& run);

// Writes curves.csv (and summary.json unless curves_only) into dir.
void emit_curves(const ScenarioRun& run, const std::filesystem::path& dir, bool curves_only = false);

// Human-readable report, 4 decimals.
std::string format_report(const ScenarioRun& run);
std::string format_nu_stars(const ObservedProportions& nu);
std::string format_region(const FeasibleRegion& region);

} // namespace contam
