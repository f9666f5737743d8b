#pragma once
// Error probabilities and Bayes risk of likelihood-ratio rules, both under the
// true and the contaminated distributions, and the linear-fractional form of
// the risk in (pi0, pi1).

#include "contam/models.hpp"

#include <variant>

namespace contam {

// Decide h1 when p1~(y) / p0~(y) > lambda; ties go to h0.
class ThresholdRule {
public:
    explicit ThresholdRule(double lambda);
    double lambda() const noexcept { return lambda_; }

private:
    double lambda_;
};

// Set of observations where a pure likelihood-ratio test p1/p0 > gamma picks h1.
namespace decision {
struct OutsideInterval {  // y < y_minus or y > y_plus
    double y_minus;
    double y_plus;
};
struct InsideInterval {  // y_minus < y < y_plus
    double y_minus;
    double y_plus;
};
struct Above {  // y > y_star
    double y_star;
};
struct Below {  // y < y_star
    double y_star;
};
struct AllH0 {};
struct AllH1 {};
} // namespace decision

using DecisionRegion = std::variant<decision::OutsideInterval, decision::InsideInterval,
                                    decision::Above, decision::Below, decision::AllH0,
                                    decision::AllH1>;

// r0 = Pr(decide h1 | h0), r1 = Pr(decide h0 | h1).
struct ErrorPair {
    double r0 = 0.0;
    double r1 = 0.0;
};

class BayesConfig {
public:
    BayesConfig(double q0, double c01, double c10);

    double q0() const noexcept { return q0_; }
    double c01() const noexcept { return c01_; }
    double c10() const noexcept { return c10_; }
    double type1_weight() const noexcept { return c01_ * q0_; }
    double type2_weight() const noexcept { return c10_ * (1.0 - q0_); }

private:
    double q0_;
    double c01_;
    double c10_;
};

// R_B(pi) = (c . pi + d) / (1 - pi0 - pi1) for a fixed rule.
struct RiskCoeffs {
    Vec2 c{};
    double d = 0.0;

    double evaluate(const Vec2& pi) const noexcept;
    Vec2 gradient(const Vec2& pi) const noexcept;
};

// Upper-tail probability of the standard normal.
double q_function(double y) noexcept;

// Closed-form decision region of the pure test for Gaussian or exponential
// pairs. Throws unsupported_family for tabulated models.
DecisionRegion decision_region(const DensityModel& p0, const DensityModel& p1, double gamma);

ErrorPair pure_error_rates(const DensityModel& p0, const DensityModel& p1,
                           const DecisionRegion& region);

// Rates of the rule p1/p0 > gamma. Closed form for Gaussian and exponential
// models; tabulated models are integrated exactly (the interpolants are
// piecewise linear, so each cell contributes one linear crossing at most).
ErrorPair threshold_error_rates(const DensityModel& p0, const DensityModel& p1, double gamma);

// Open interval of thresholds that split the support nontrivially:
// (nu*(P~1, P~0), 1 / nu*(P~0, P~1)).
struct LambdaRange {
    double lower = 0.0;
    double upper = 0.0;
};

LambdaRange attainable_lambda_range(const ContaminatedPair& pair);
LambdaRange attainable_lambda_range(const MixtureDensity& p0_tilde, const MixtureDensity& p1_tilde);

struct ContaminatedRates {
    ErrorPair rates;
    double gamma = 0.0;         // equivalent threshold on the pure ratio
    bool out_of_range = false;  // lambda outside the attainable range; rates are constant-rule rates
};

// Rates of the rule under P~0, P~1 computed from the pure rates at the
// equivalent pure threshold and pushed through the contamination map.
ContaminatedRates contaminated_error_rates(const ContaminatedPair& pair, const ThresholdRule& rule,
                                           const LambdaRange& range);
ContaminatedRates contaminated_error_rates(const ContaminatedPair& pair, const ThresholdRule& rule);

// Error events under the contamination map:
//     R~0 = (1 - pi0) R0 + pi0 (1 - R1),  R~1 = (1 - pi1) R1 + pi1 (1 - R0).
ErrorPair contaminate_rates(const ErrorPair& pure, const ContaminationParams& params);

struct DecontaminatedRates {
    ErrorPair rates;      // clamped to [0, 1]
    Vec2 unclamped{};     // direct inversion of the contamination map
    bool clamped = false;
};

DecontaminatedRates decontaminate(const ErrorPair& rates_tilde, const ContaminationParams& params);

// Partial derivatives of the decontaminated rates with respect to (pi0, pi1).
struct RatePartials {
    Vec2 r0{};  // (dR0/dpi0, dR0/dpi1)
    Vec2 r1{};  // (dR1/dpi0, dR1/dpi1)
};

RatePartials decontaminated_partials(const ErrorPair& rates_tilde, const Vec2& pi);

double bayes_risk(const ErrorPair& rates, const BayesConfig& config) noexcept;

RiskCoeffs risk_coeffs(const ErrorPair& rates_tilde, const BayesConfig& config) noexcept;

} // namespace contam
