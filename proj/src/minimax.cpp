#include "contam/minimax.hpp"

#include "contam/detail/golden.hpp"
#include "contam/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace contam {

namespace {

constexpr double kGuessSlack = 1e-12;
constexpr double kRangeFloor = 1e-8;
constexpr double kRangeCeiling = 1e8;

InnerMaxResult max_over(const FeasibleRegion& region, const RiskCoeffs& coeffs, bool candidates_only) {
    InnerMaxResult best;
    best.risk = -std::numeric_limits<double>::infinity();
    best.used_all_vertices = !candidates_only;
    const auto vertices = region.vertices();
    for (std::size_t k = 0; k < vertices.size(); ++k) {
        if (candidates_only && !vertices[k].candidate) {
            continue;
        }
        const double r = coeffs.evaluate(vertices[k].point);
        if (r > best.risk) {
            best.vertex = vertices[k].point;
            best.risk = r;
            best.vertex_index = k;
        }
    }
    return best;
}

void require_simplex(const FeasibleRegion& region) {
    for (const auto& v : region.vertices()) {
        if (!(v.point[0] + v.point[1] < 1.0)) {
            throw Error(ErrorCode::invalid_argument,
                        "region reaches pi0 + pi1 >= 1, where the risk is undefined");
        }
    }
}

struct Refined {
    double lambda;
    double value;
};

// Grid argmin of f, then golden-section in log(lambda) on the neighbouring
// bracket.
template <class F>
Refined refine_minimum(const std::vector<double>& grid, const std::vector<double>& values, F&& f,
                       double tolerance) {
    const auto k = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    Refined best{grid[k], values[k]};
    if (grid.size() < 2) {
        return best;
    }
    const double lo = std::log(grid[k == 0 ? 0 : k - 1]);
    const double hi = std::log(grid[std::min(k + 1, grid.size() - 1)]);
    const auto [x, v] = detail::golden_section(
        [&](double t) { return f(std::exp(t)); }, lo, hi,
        [&](double a, double b) { return std::expm1(b - a) < tolerance; });
    if (v < best.value) {
        best = {std::exp(x), v};
    }
    return best;
}

} // namespace

InnerMaxResult inner_max(const FeasibleRegion& region, const ErrorPair& rates_tilde,
                         const BayesConfig& config) {
    require_simplex(region);
    const RiskCoeffs coeffs = risk_coeffs(rates_tilde, config);
    const auto vertices = region.vertices();
    const bool filter = rates_tilde.r0 + rates_tilde.r1 <= 1.0 + kGuessSlack &&
                        std::any_of(vertices.begin(), vertices.end(),
                                    [](const auto& v) { return v.candidate; });
    return max_over(region, coeffs, filter);
}

InnerMaxResult inner_max_all_vertices(const FeasibleRegion& region, const ErrorPair& rates_tilde,
                                      const BayesConfig& config) {
    require_simplex(region);
    return max_over(region, risk_coeffs(rates_tilde, config), false);
}

double lp_bisection_oracle(const ErrorPair& rates_tilde, const FeasibleRegion& region,
                           const BayesConfig& config) {
    require_simplex(region);
    const RiskCoeffs coeffs = risk_coeffs(rates_tilde, config);
    // A vertex attains the optimum of the linear objective.
    auto lp_value = [&](double t) {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& v : region.vertices()) {
            const auto& p = v.point;
            best = std::max(best, coeffs.c[0] * p[0] + coeffs.c[1] * p[1] + coeffs.d -
                                      t * (1.0 - p[0] - p[1]));
        }
        return best;
    };
    // lp_value is strictly decreasing in t; start from the clamped-risk bound.
    const double bound = 3.0 * std::max(config.type1_weight(), config.type2_weight());
    double lo = 0.0;
    double hi = bound;
    while (lp_value(lo) < 0.0) {
        hi = lo;
        lo -= bound;
    }
    while (lp_value(hi) >= 0.0) {
        lo = hi;
        hi += bound;
    }
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        (lp_value(mid) >= 0.0 ? lo : hi) = mid;
    }
    return lo;
}

std::vector<double> lambda_grid(const LambdaRange& range, const SearchOptions& options) {
    if (!(range.lower < range.upper) || range.lower < 0.0) {
        throw Error(ErrorCode::no_valid_threshold, "the attainable threshold range is empty");
    }
    if (options.grid_points < 2) {
        throw Error(ErrorCode::invalid_argument, "the threshold grid needs at least two points");
    }
    double lo = range.lower * (1.0 + options.relative_margin);
    double hi = range.upper * (1.0 - options.relative_margin);
    if (!(lo > 0.0)) {
        lo = kRangeFloor * (std::isfinite(range.upper) ? std::min(range.upper, 1.0) : 1.0);
    }
    if (!std::isfinite(hi)) {
        hi = kRangeCeiling * std::max(lo, 1.0);
    }
    if (!(lo < hi)) {
        throw Error(ErrorCode::no_valid_threshold, "the attainable threshold range is empty");
    }
    const int n = options.grid_points;
    std::vector<double> grid(static_cast<std::size_t>(n));
    const double log_lo = std::log(lo);
    const double step = (std::log(hi) - log_lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
        grid[static_cast<std::size_t>(i)] = std::exp(log_lo + step * i);
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

MinimaxResult minimax_search(const RateSource& source, const FeasibleRegion& region,
                             const BayesConfig& config, const SearchOptions& options) {
    const auto grid = lambda_grid(source.range, options);

    auto max_risk = [&](double lambda) { return inner_max(region, source.rates_tilde(lambda), config).risk; };
    auto zero_risk = [&](double lambda) { return bayes_risk(source.rates_tilde(lambda), config); };
    auto true_risk = [&](double lambda) {
        return bayes_risk(decontaminate(source.rates_tilde(lambda), *source.pi_true).rates, config);
    };

    MinimaxResult out;
    std::vector<double> max_values;
    std::vector<double> zero_values;
    std::vector<double> true_values;
    max_values.reserve(grid.size());
    zero_values.reserve(grid.size());
    for (const double lambda : grid) {
        const ErrorPair rates = source.rates_tilde(lambda);
        const double rmax = inner_max(region, rates, config).risk;
        const double rzero = bayes_risk(rates, config);
        max_values.push_back(rmax);
        zero_values.push_back(rzero);
        out.risk_curve_max.push_back({lambda, rmax});
        out.risk_curve_zero.push_back({lambda, rzero});
        if (source.pi_true) {
            const double rtrue = bayes_risk(decontaminate(rates, *source.pi_true).rates, config);
            true_values.push_back(rtrue);
            out.risk_curve_true.push_back({lambda, rtrue});
        }
    }

    const Refined star = refine_minimum(grid, max_values, max_risk, options.lambda_tolerance);
    out.lambda_star = star.lambda;
    const InnerMaxResult worst = inner_max(region, source.rates_tilde(star.lambda), config);
    out.minimax_risk = worst.risk;
    out.worst_vertex = worst.vertex;

    const Refined zero = refine_minimum(grid, zero_values, zero_risk, options.lambda_tolerance);
    out.min_risk_zero = zero.value;
    out.lambda_zero = zero.lambda;
    if (source.pi_true) {
        const Refined truth = refine_minimum(grid, true_values, true_risk, options.lambda_tolerance);
        out.min_risk_true = truth.value;
        out.lambda_true = truth.lambda;
    }
    return out;
}

} // namespace contam
