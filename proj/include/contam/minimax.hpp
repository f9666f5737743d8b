#pragma once
// Worst case over the feasible polygon (inner maximization) and the threshold
// that minimizes it (outer minimization).

#include "contam/region.hpp"
#include "contam/risk.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace contam {

struct InnerMaxResult {
    Vec2 vertex{};
    double risk = 0.0;
    std::size_t vertex_index = 0;   // into region.vertices()
    bool used_all_vertices = false; // rates above the random-guess line skip the cone filter
};

// Maximum of the risk over the region, evaluated through the linear-fractional
// form at the cone-filtered vertices. Ties keep the first vertex in
// counterclockwise order.
InnerMaxResult inner_max(const FeasibleRegion& region, const ErrorPair& rates_tilde,
                         const BayesConfig& config);

// Same maximum over every vertex, without the cone filter.
InnerMaxResult inner_max_all_vertices(const FeasibleRegion& region, const ErrorPair& rates_tilde,
                                      const BayesConfig& config);

// Independent route to the inner maximum: the largest t for which
//     max over pi in region of  c . pi + d - t (1 - pi0 - pi1)
// is nonnegative, found by bisection to 1e-9.
double lp_bisection_oracle(const ErrorPair& rates_tilde, const FeasibleRegion& region,
                           const BayesConfig& config);

// Maps a threshold on the contaminated ratio to the rule's error rates under
// the contaminated distributions.
struct RateSource {
    std::function<ErrorPair(double)> rates_tilde;
    LambdaRange range;
    std::optional<ContaminationParams> pi_true;  // enables the true-proportion curve
};

struct SearchOptions {
    int grid_points = 2000;
    double relative_margin = 1e-6;
    double lambda_tolerance = 1e-8;  // relative, for the golden-section refinement
};

struct CurvePoint {
    double lambda;
    double risk;
};

struct MinimaxResult {
    double lambda_star = 0.0;
    double minimax_risk = 0.0;
    Vec2 worst_vertex{};

    std::vector<CurvePoint> risk_curve_max;
    std::vector<CurvePoint> risk_curve_true;  // empty without a known true pi
    std::vector<CurvePoint> risk_curve_zero;

    std::optional<double> min_risk_true;
    std::optional<double> lambda_true;
    double min_risk_zero = 0.0;
    double lambda_zero = 0.0;
};

// Log-spaced grid over the attainable range (shrunk by the relative margin;
// a zero lower end or infinite upper end is replaced by 1e-8 or 1e8 times a
// finite reference), then golden-section refinement of the best bracket of
// each curve. Throws no_valid_threshold when the range is empty.
MinimaxResult minimax_search(const RateSource& source, const FeasibleRegion& region,
                             const BayesConfig& config, const SearchOptions& options = {});

// Grid actually searched for a given range, exposed for diagnostics and tests.
std::vector<double> lambda_grid(const LambdaRange& range, const SearchOptions& options);

} // namespace contam
