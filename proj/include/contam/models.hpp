#pragma once
// Univariate likelihood models and the label-noise contamination map.
//
// A ContaminatedPair holds the true models P0, P1, the contamination
// proportions (pi0, pi1) and the observable mixtures
//     P0~ = (1 - pi0) P0 + pi0 P1
//     P1~ = (1 - pi1) P1 + pi1 P0.

#include <array>
#include <limits>
#include <span>
#include <variant>
#include <vector>

namespace contam {

using Vec2 = std::array<double, 2>;

enum class Family { gaussian, exponential, tabulated };

struct Gaussian {
    double mean = 0.0;
    double stddev = 1.0;

    bool operator==(const Gaussian&) const = default;
};

struct Exponential {
    double rate = 1.0;

    bool operator==(const Exponential&) const = default;
};

// Piecewise-linear density on a strictly increasing grid, zero outside it.
struct Tabulated {
    std::vector<double> grid;
    std::vector<double> density;

    bool operator==(const Tabulated&) const = default;
};

// Closed support interval; endpoints may be infinite.
struct Support {
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();

    bool contains(double y) const noexcept { return y >= lower && y <= upper; }
    bool operator==(const Support&) const = default;
};

class DensityModel {
public:
    static DensityModel gaussian(double mean, double stddev);
    static DensityModel exponential(double rate);
    // Raw mass on the grid (trapezoid rule, exact for the interpolant) must be
    // within 1e-4 of one; the stored values are renormalized to unit mass.
    static DensityModel tabulated(std::vector<double> grid, std::vector<double> density);

    Family family() const noexcept;
    Support support() const noexcept;

    double pdf(double y) const noexcept;
    // -inf where the density vanishes.
    double log_pdf(double y) const noexcept;

    const Gaussian* as_gaussian() const noexcept { return std::get_if<Gaussian>(&params_); }
    const Exponential* as_exponential() const noexcept { return std::get_if<Exponential>(&params_); }
    const Tabulated* as_tabulated() const noexcept { return std::get_if<Tabulated>(&params_); }

    bool operator==(const DensityModel&) const;

private:
    using Params = std::variant<Gaussian, Exponential, Tabulated>;
    explicit DensityModel(Params p) : params_(std::move(p)) {}

    Params params_;
};

// Throws incomparable_support unless the two models can be compared pointwise:
// same family and, for tabulated models, the same grid.
void require_common_support(const DensityModel& a, const DensityModel& b);

struct MixtureComponent {
    double weight;
    DensityModel model;
};

// Finite mixture of same-family models. A single model converts implicitly
// into a one-component mixture so every density routine accepts both.
class MixtureDensity {
public:
    MixtureDensity(const DensityModel& model);  // NOLINT(google-explicit-constructor)
    explicit MixtureDensity(std::vector<MixtureComponent> components);

    std::span<const MixtureComponent> components() const noexcept { return components_; }
    Family family() const noexcept { return components_.front().model.family(); }
    Support support() const noexcept { return components_.front().model.support(); }

    double pdf(double y) const noexcept;
    double log_pdf(double y) const noexcept;

    // Shared tabulation grid (tabulated family only, empty otherwise).
    std::span<const double> grid() const noexcept;

private:
    std::vector<MixtureComponent> components_;
};

void require_common_support(const MixtureDensity& a, const MixtureDensity& b);

class ContaminationParams {
public:
    // pi0, pi1 in [0, 1] with pi0 + pi1 < 1.
    ContaminationParams(double pi0, double pi1);

    double pi0() const noexcept { return pi0_; }
    double pi1() const noexcept { return pi1_; }
    Vec2 as_vec() const noexcept { return {pi0_, pi1_}; }

private:
    double pi0_;
    double pi1_;
};

// pi0~ = pi0 / (1 - pi1), pi1~ = pi1 / (1 - pi0).
struct ReducedContamination {
    double pi0_tilde = 0.0;
    double pi1_tilde = 0.0;
};

ReducedContamination reduce_params(const ContaminationParams& params);
ContaminationParams expand_params(const ReducedContamination& reduced);

class ContaminatedPair {
public:
    const DensityModel& p0() const noexcept { return p0_; }
    const DensityModel& p1() const noexcept { return p1_; }
    const ContaminationParams& params() const noexcept { return params_; }
    const MixtureDensity& p0_tilde() const noexcept { return p0_tilde_; }
    const MixtureDensity& p1_tilde() const noexcept { return p1_tilde_; }

private:
    friend ContaminatedPair contaminate(const DensityModel&, const DensityModel&,
                                        const ContaminationParams&);
    ContaminatedPair(DensityModel p0, DensityModel p1, ContaminationParams params,
                     MixtureDensity p0_tilde, MixtureDensity p1_tilde);

    DensityModel p0_;
    DensityModel p1_;
    ContaminationParams params_;
    MixtureDensity p0_tilde_;
    MixtureDensity p1_tilde_;
};

ContaminatedPair contaminate(const DensityModel& p0, const DensityModel& p1,
                             const ContaminationParams& params);

// Ratio q(y) / p(y) of two densities over their common support, evaluated in
// the log domain. Throws unsupported_point outside the support or where the
// denominator vanishes.
double density_ratio(const MixtureDensity& numerator, const MixtureDensity& denominator,
                     double y);

// p1~(y) / p0~(y).
double likelihood_ratio(const ContaminatedPair& pair, double y);

// Contaminated ratio as a function of the pure ratio l = p1/p0:
//     l~ = ((1 - pi1) l + pi1) / (pi0 l + (1 - pi0)).
// l may be +inf (limit taken).
double contaminated_ratio_from_pure(double pure_ratio, const ContaminationParams& params);

// Inverse of the map above: the pure threshold gamma whose contaminated image
// is lambda, gamma = ((1 - pi0) lambda - pi1) / ((1 - pi1) - pi0 lambda).
double pure_threshold(double lambda, const ContaminationParams& params);

} // namespace contam
