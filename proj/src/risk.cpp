#include "contam/risk.hpp"

#include "contam/error.hpp"
#include "contam/mixprop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace contam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Pr(Y > y) and Pr(Y < y) for the closed-form families.
double prob_above(const DensityModel& m, double y) {
    if (const auto* g = m.as_gaussian()) {
        return q_function((y - g->mean) / g->stddev);
    }
    const double rate = m.as_exponential()->rate;
    return y <= 0.0 ? 1.0 : std::exp(-rate * y);
}

double prob_below(const DensityModel& m, double y) {
    if (const auto* g = m.as_gaussian()) {
        return q_function((g->mean - y) / g->stddev);
    }
    const double rate = m.as_exponential()->rate;
    return y <= 0.0 ? 0.0 : -std::expm1(-rate * y);
}

double prob_between(const DensityModel& m, double lo, double hi) {
    if (!(hi > lo)) {
        return 0.0;
    }
    // Subtract in whichever tail keeps the operands small.
    const double via_upper = prob_above(m, lo) - prob_above(m, hi);
    const double via_lower = prob_below(m, hi) - prob_below(m, lo);
    return prob_above(m, lo) < prob_below(m, hi) ? via_upper : via_lower;
}

// Probability that the rule decides h1, under model m.
double prob_h1(const DensityModel& m, const DecisionRegion& region) {
    return std::visit(
        overloaded{
            [&](const decision::OutsideInterval& r) {
                return prob_below(m, r.y_minus) + prob_above(m, r.y_plus);
            },
            [&](const decision::InsideInterval& r) { return prob_between(m, r.y_minus, r.y_plus); },
            [&](const decision::Above& r) { return prob_above(m, r.y_star); },
            [&](const decision::Below& r) { return prob_below(m, r.y_star); },
            [](const decision::AllH0&) { return 0.0; },
            [](const decision::AllH1&) { return 1.0; },
        },
        region);
}

double prob_h0(const DensityModel& m, const DecisionRegion& region) {
    return std::visit(
        overloaded{
            [&](const decision::OutsideInterval& r) { return prob_between(m, r.y_minus, r.y_plus); },
            [&](const decision::InsideInterval& r) {
                return prob_below(m, r.y_minus) + prob_above(m, r.y_plus);
            },
            [&](const decision::Above& r) { return prob_below(m, r.y_star); },
            [&](const decision::Below& r) { return prob_above(m, r.y_star); },
            [](const decision::AllH0&) { return 1.0; },
            [](const decision::AllH1&) { return 0.0; },
        },
        region);
}

// Real roots of a y^2 + b y + c with a != 0 and b^2 - 4ac >= 0, ascending.
std::pair<double, double> quadratic_roots(double a, double b, double c) {
    const double disc = std::max(b * b - 4.0 * a * c, 0.0);
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    if (q == 0.0) {
        const double r = -b / (2.0 * a);
        return {r, r};
    }
    const double r1 = q / a;
    const double r2 = c / q;
    return {std::min(r1, r2), std::max(r1, r2)};
}

DecisionRegion gaussian_region(const Gaussian& g0, const Gaussian& g1, double gamma) {
    const double s0 = g0.stddev * g0.stddev;
    const double s1 = g1.stddev * g1.stddev;
    const double a = s1 - s0;
    const double b = 2.0 * (g1.mean * s0 - g0.mean * s1);
    const double c = g0.mean * g0.mean * s1 - g1.mean * g1.mean * s0 -
                     2.0 * s0 * s1 * std::log(gamma * g1.stddev / g0.stddev);
    // h1 iff a y^2 + b y + c > 0
    if (a == 0.0) {
        if (b == 0.0) {
            return c > 0.0 ? DecisionRegion{decision::AllH1{}} : DecisionRegion{decision::AllH0{}};
        }
        const double root = -c / b;
        return b > 0.0 ? DecisionRegion{decision::Above{root}} : DecisionRegion{decision::Below{root}};
    }
    if (b * b - 4.0 * a * c < 0.0) {
        return a > 0.0 ? DecisionRegion{decision::AllH1{}} : DecisionRegion{decision::AllH0{}};
    }
    const auto [lo, hi] = quadratic_roots(a, b, c);
    if (a > 0.0) {
        return decision::OutsideInterval{lo, hi};
    }
    return decision::InsideInterval{lo, hi};
}

DecisionRegion exponential_region(const Exponential& e0, const Exponential& e1, double gamma) {
    // log(p1/p0) = log(a1/a0) - (a1 - a0) y on y >= 0
    const double slope = e1.rate - e0.rate;
    const double intercept = std::log(e1.rate / e0.rate) - std::log(gamma);
    if (slope == 0.0) {
        return intercept > 0.0 ? DecisionRegion{decision::AllH1{}} : DecisionRegion{decision::AllH0{}};
    }
    const double y_star = intercept / slope;
    if (slope > 0.0) {
        return y_star <= 0.0 ? DecisionRegion{decision::AllH0{}} : DecisionRegion{decision::Below{y_star}};
    }
    return y_star < 0.0 ? DecisionRegion{decision::AllH1{}} : DecisionRegion{decision::Above{y_star}};
}

ErrorPair tabulated_rates(const Tabulated& t0, const Tabulated& t1, double gamma) {
    const auto& x = t0.grid;
    double r0 = 0.0;
    double r1 = 0.0;
    auto mass = [](double width, double left, double right) { return 0.5 * width * (left + right); };
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double w = x[i + 1] - x[i];
        const double p0a = t0.density[i];
        const double p0b = t0.density[i + 1];
        const double p1a = t1.density[i];
        const double p1b = t1.density[i + 1];
        const double fa = p1a - gamma * p0a;
        const double fb = p1b - gamma * p0b;
        if (fa > 0.0 && fb > 0.0) {
            r0 += mass(w, p0a, p0b);
        } else if (fa <= 0.0 && fb <= 0.0) {
            r1 += mass(w, p1a, p1b);
        } else {
            const double s = fa / (fa - fb);  // crossing, as a fraction of the cell
            const double p0s = p0a + s * (p0b - p0a);
            const double p1s = p1a + s * (p1b - p1a);
            if (fa > 0.0) {
                r0 += mass(s * w, p0a, p0s);
                r1 += mass((1.0 - s) * w, p1s, p1b);
            } else {
                r1 += mass(s * w, p1a, p1s);
                r0 += mass((1.0 - s) * w, p0s, p0b);
            }
        }
    }
    return {std::clamp(r0, 0.0, 1.0), std::clamp(r1, 0.0, 1.0)};
}

} // namespace

ThresholdRule::ThresholdRule(double lambda) : lambda_(lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorCode::invalid_argument, "threshold must be positive and finite");
    }
}

BayesConfig::BayesConfig(double q0, double c01, double c10) : q0_(q0), c01_(c01), c10_(c10) {
    if (!(q0 > 0.0 && q0 < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "prior q0 must lie in (0, 1)");
    }
    if (!(c01 > 0.0) || !(c10 > 0.0) || !std::isfinite(c01) || !std::isfinite(c10)) {
        throw Error(ErrorCode::invalid_argument, "error costs must be positive");
    }
}

double RiskCoeffs::evaluate(const Vec2& pi) const noexcept {
    return (c[0] * pi[0] + c[1] * pi[1] + d) / (1.0 - pi[0] - pi[1]);
}

Vec2 RiskCoeffs::gradient(const Vec2& pi) const noexcept {
    const double den = 1.0 - pi[0] - pi[1];
    const double num = c[0] * pi[0] + c[1] * pi[1] + d;
    return {(c[0] * den + num) / (den * den), (c[1] * den + num) / (den * den)};
}

double q_function(double y) noexcept {
    return 0.5 * std::erfc(y / std::numbers::sqrt2);
}

DecisionRegion decision_region(const DensityModel& p0, const DensityModel& p1, double gamma) {
    require_common_support(p0, p1);
    if (p0.family() == Family::tabulated) {
        throw Error(ErrorCode::unsupported_family,
                    "tabulated models have no closed-form decision region");
    }
    if (!(gamma >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "threshold must be nonnegative");
    }
    if (gamma == 0.0) {
        return decision::AllH1{};
    }
    if (std::isinf(gamma)) {
        return decision::AllH0{};
    }
    if (const auto* g0 = p0.as_gaussian()) {
        return gaussian_region(*g0, *p1.as_gaussian(), gamma);
    }
    return exponential_region(*p0.as_exponential(), *p1.as_exponential(), gamma);
}

ErrorPair pure_error_rates(const DensityModel& p0, const DensityModel& p1,
                           const DecisionRegion& region) {
    require_common_support(p0, p1);
    if (p0.family() == Family::tabulated) {
        throw Error(ErrorCode::unsupported_family,
                    "use threshold_error_rates for tabulated models");
    }
    return {std::clamp(prob_h1(p0, region), 0.0, 1.0), std::clamp(prob_h0(p1, region), 0.0, 1.0)};
}

ErrorPair threshold_error_rates(const DensityModel& p0, const DensityModel& p1, double gamma) {
    require_common_support(p0, p1);
    if (p0.family() != Family::tabulated) {
        return pure_error_rates(p0, p1, decision_region(p0, p1, gamma));
    }
    if (!(gamma >= 0.0)) {
        throw Error(ErrorCode::invalid_argument, "threshold must be nonnegative");
    }
    if (std::isinf(gamma)) {
        return {0.0, 1.0};
    }
    return tabulated_rates(*p0.as_tabulated(), *p1.as_tabulated(), gamma);
}

LambdaRange attainable_lambda_range(const MixtureDensity& p0_tilde,
                                    const MixtureDensity& p1_tilde) {
    const double lower = nu_star(p1_tilde, p0_tilde).value;
    const double nu01 = nu_star(p0_tilde, p1_tilde).value;
    return {lower, nu01 > 0.0 ? 1.0 / nu01 : kInf};
}

LambdaRange attainable_lambda_range(const ContaminatedPair& pair) {
    return attainable_lambda_range(pair.p0_tilde(), pair.p1_tilde());
}

ContaminatedRates contaminated_error_rates(const ContaminatedPair& pair, const ThresholdRule& rule,
                                           const LambdaRange& range) {
    const double lambda = rule.lambda();
    const double gamma = pure_threshold(lambda, pair.params());
    if (lambda <= range.lower) {
        return {{1.0, 0.0}, gamma, true};
    }
    if (lambda >= range.upper) {
        return {{0.0, 1.0}, gamma, true};
    }
    const ErrorPair pure = threshold_error_rates(pair.p0(), pair.p1(), gamma);
    return {contaminate_rates(pure, pair.params()), gamma, false};
}

ContaminatedRates contaminated_error_rates(const ContaminatedPair& pair, const ThresholdRule& rule) {
    return contaminated_error_rates(pair, rule, attainable_lambda_range(pair));
}

ErrorPair contaminate_rates(const ErrorPair& pure, const ContaminationParams& params) {
    const double pi0 = params.pi0();
    const double pi1 = params.pi1();
    return {(1.0 - pi0) * pure.r0 + pi0 * (1.0 - pure.r1),
            (1.0 - pi1) * pure.r1 + pi1 * (1.0 - pure.r0)};
}

DecontaminatedRates decontaminate(const ErrorPair& rates_tilde, const ContaminationParams& params) {
    const double pi0 = params.pi0();
    const double pi1 = params.pi1();
    const double den = 1.0 - pi0 - pi1;
    const Vec2 raw{((1.0 - pi1) * rates_tilde.r0 - pi0 * (1.0 - rates_tilde.r1)) / den,
                   ((1.0 - pi0) * rates_tilde.r1 - pi1 * (1.0 - rates_tilde.r0)) / den};
    DecontaminatedRates out;
    out.unclamped = raw;
    out.rates = {std::clamp(raw[0], 0.0, 1.0), std::clamp(raw[1], 0.0, 1.0)};
    out.clamped = out.rates.r0 != raw[0] || out.rates.r1 != raw[1];
    return out;
}

RatePartials decontaminated_partials(const ErrorPair& rates_tilde, const Vec2& pi) {
    const double slack = 1.0 - rates_tilde.r0 - rates_tilde.r1;
    const double den = 1.0 - pi[0] - pi[1];
    const double scale = -slack / (den * den);
    return {{scale * (1.0 - pi[1]), scale * pi[0]}, {scale * pi[1], scale * (1.0 - pi[0])}};
}

double bayes_risk(const ErrorPair& rates, const BayesConfig& config) noexcept {
    return config.type1_weight() * rates.r0 + config.type2_weight() * rates.r1;
}

RiskCoeffs risk_coeffs(const ErrorPair& rates_tilde, const BayesConfig& config) noexcept {
    const double w0 = config.type1_weight();
    const double w1 = config.type2_weight();
    const double r0 = rates_tilde.r0;
    const double r1 = rates_tilde.r1;
    return {{-w0 * (1.0 - r1) - w1 * r1, -w0 * r0 - w1 * (1.0 - r0)}, w0 * r0 + w1 * r1};
}

} // namespace contam
