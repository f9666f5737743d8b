#include "contam/models.hpp"

#include "contam/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace contam {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Densities below this are treated as zero when forming ratios.
constexpr double kDensityFloor = 1e-300;

double tabulated_pdf(const Tabulated& t, double y) {
    const auto& g = t.grid;
    if (!(y >= g.front() && y <= g.back())) {
        return 0.0;
    }
    auto it = std::upper_bound(g.begin(), g.end(), y);
    if (it == g.end()) {
        return t.density.back();
    }
    const auto hi = static_cast<std::size_t>(it - g.begin());
    const auto lo = hi - 1;
    const double w = (y - g[lo]) / (g[hi] - g[lo]);
    return (1.0 - w) * t.density[lo] + w * t.density[hi];
}

double trapezoid_mass(std::span<const double> grid, std::span<const double> density) {
    double mass = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        mass += 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
    }
    return mass;
}

} // namespace

DensityModel DensityModel::gaussian(double mean, double stddev) {
    if (!std::isfinite(mean)) {
        throw Error(ErrorCode::invalid_argument, "gaussian mean must be finite");
    }
    if (!(stddev > 0.0) || !std::isfinite(stddev)) {
        throw Error(ErrorCode::invalid_argument, "gaussian stddev must be positive");
    }
    return DensityModel(Gaussian{mean, stddev});
}

DensityModel DensityModel::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw Error(ErrorCode::invalid_argument, "exponential rate must be positive");
    }
    return DensityModel(Exponential{rate});
}

DensityModel DensityModel::tabulated(std::vector<double> grid, std::vector<double> density) {
    if (grid.size() < 2 || grid.size() != density.size()) {
        throw Error(ErrorCode::invalid_argument,
                    "tabulated model needs at least two grid points and one density value per point");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!std::isfinite(grid[i]) || !std::isfinite(density[i]) || density[i] < 0.0) {
            throw Error(ErrorCode::invalid_argument,
                        "tabulated grid and density values must be finite, densities nonnegative");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw Error(ErrorCode::invalid_argument, "tabulated grid must be strictly increasing");
        }
    }
    const double mass = trapezoid_mass(grid, density);
    if (std::abs(mass - 1.0) > 1e-4) {
        std::ostringstream msg;
        msg << "tabulated density has mass " << mass
            << " on its grid; the grid must carry at least 99.99% of the mass";
        throw Error(ErrorCode::invalid_argument, msg.str());
    }
    for (auto& d : density) {
        d /= mass;
    }
    return DensityModel(Tabulated{std::move(grid), std::move(density)});
}

Family DensityModel::family() const noexcept {
    return std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Gaussian>) {
                return Family::gaussian;
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return Family::exponential;
            } else {
                return Family::tabulated;
            }
        },
        params_);
}

Support DensityModel::support() const noexcept {
    if (as_exponential() != nullptr) {
        return {0.0, kInf};
    }
    if (const auto* t = as_tabulated()) {
        return {t->grid.front(), t->grid.back()};
    }
    return {};
}

double DensityModel::pdf(double y) const noexcept {
    if (const auto* t = as_tabulated()) {
        return tabulated_pdf(*t, y);
    }
    return std::exp(log_pdf(y));
}

double DensityModel::log_pdf(double y) const noexcept {
    if (const auto* g = as_gaussian()) {
        const double z = (y - g->mean) / g->stddev;
        return -0.5 * z * z - std::log(g->stddev) - 0.5 * std::log(2.0 * std::numbers::pi);
    }
    if (const auto* e = as_exponential()) {
        if (y < 0.0) {
            return kNegInf;
        }
        return std::log(e->rate) - e->rate * y;
    }
    const double p = tabulated_pdf(*as_tabulated(), y);
    return p > 0.0 ? std::log(p) : kNegInf;
}

bool DensityModel::operator==(const DensityModel& other) const {
    return params_ == other.params_;
}

void require_common_support(const DensityModel& a, const DensityModel& b) {
    if (a.family() != b.family()) {
        throw Error(ErrorCode::incomparable_support, "models belong to different families");
    }
    if (a.family() == Family::tabulated && a.as_tabulated()->grid != b.as_tabulated()->grid) {
        throw Error(ErrorCode::incomparable_support, "tabulated models must share one grid");
    }
}

MixtureDensity::MixtureDensity(const DensityModel& model) : components_{{1.0, model}} {}

MixtureDensity::MixtureDensity(std::vector<MixtureComponent> components) {
    double total = 0.0;
    for (auto& c : components) {
        if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) {
            throw Error(ErrorCode::invalid_argument, "mixture weights must be nonnegative");
        }
        if (c.weight > 0.0) {
            total += c.weight;
            components_.push_back(std::move(c));
        }
    }
    if (components_.empty() || std::abs(total - 1.0) > 1e-12) {
        throw Error(ErrorCode::invalid_argument, "mixture weights must sum to one");
    }
    for (std::size_t i = 1; i < components_.size(); ++i) {
        require_common_support(components_.front().model, components_[i].model);
    }
}

double MixtureDensity::pdf(double y) const noexcept {
    double sum = 0.0;
    for (const auto& c : components_) {
        sum += c.weight * c.model.pdf(y);
    }
    return sum;
}

double MixtureDensity::log_pdf(double y) const noexcept {
    double best = kNegInf;
    for (const auto& c : components_) {
        best = std::max(best, std::log(c.weight) + c.model.log_pdf(y));
    }
    if (best == kNegInf) {
        return kNegInf;
    }
    double sum = 0.0;
    for (const auto& c : components_) {
        sum += std::exp(std::log(c.weight) + c.model.log_pdf(y) - best);
    }
    return best + std::log(sum);
}

std::span<const double> MixtureDensity::grid() const noexcept {
    if (const auto* t = components_.front().model.as_tabulated()) {
        return t->grid;
    }
    return {};
}

void require_common_support(const MixtureDensity& a, const MixtureDensity& b) {
    require_common_support(a.components().front().model, b.components().front().model);
}

ContaminationParams::ContaminationParams(double pi0, double pi1) : pi0_(pi0), pi1_(pi1) {
    if (!(pi0 >= 0.0 && pi0 <= 1.0) || !(pi1 >= 0.0 && pi1 <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, "contamination proportions must lie in [0, 1]");
    }
    if (!(pi0 + pi1 < 1.0)) {
        throw Error(ErrorCode::invalid_argument,
                    "contamination proportions must satisfy pi0 + pi1 < 1");
    }
}

ReducedContamination reduce_params(const ContaminationParams& params) {
    return {params.pi0() / (1.0 - params.pi1()), params.pi1() / (1.0 - params.pi0())};
}

ContaminationParams expand_params(const ReducedContamination& reduced) {
    const double a = reduced.pi0_tilde;
    const double b = reduced.pi1_tilde;
    if (!(a >= 0.0 && a < 1.0) || !(b >= 0.0 && b < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "reduced proportions must lie in [0, 1)");
    }
    const double det = 1.0 - a * b;
    return {a * (1.0 - b) / det, b * (1.0 - a) / det};
}

ContaminatedPair::ContaminatedPair(DensityModel p0, DensityModel p1, ContaminationParams params,
                                   MixtureDensity p0_tilde, MixtureDensity p1_tilde)
    : p0_(std::move(p0)),
      p1_(std::move(p1)),
      params_(params),
      p0_tilde_(std::move(p0_tilde)),
      p1_tilde_(std::move(p1_tilde)) {}

ContaminatedPair contaminate(const DensityModel& p0, const DensityModel& p1,
                             const ContaminationParams& params) {
    require_common_support(p0, p1);
    MixtureDensity p0_tilde({{1.0 - params.pi0(), p0}, {params.pi0(), p1}});
    MixtureDensity p1_tilde({{1.0 - params.pi1(), p1}, {params.pi1(), p0}});
    return ContaminatedPair(p0, p1, params, std::move(p0_tilde), std::move(p1_tilde));
}

double density_ratio(const MixtureDensity& numerator, const MixtureDensity& denominator,
                     double y) {
    require_common_support(numerator, denominator);
    if (!numerator.support().contains(y)) {
        std::ostringstream msg;
        msg << "y = " << y << " lies outside the common support";
        throw Error(ErrorCode::unsupported_point, msg.str());
    }
    const double log_den = denominator.log_pdf(y);
    if (log_den < std::log(kDensityFloor)) {
        std::ostringstream msg;
        msg << "denominator density vanishes at y = " << y;
        throw Error(ErrorCode::unsupported_point, msg.str());
    }
    const double log_num = numerator.log_pdf(y);
    if (log_num == kNegInf) {
        return 0.0;
    }
    return std::exp(log_num - log_den);
}

double likelihood_ratio(const ContaminatedPair& pair, double y) {
    return density_ratio(pair.p1_tilde(), pair.p0_tilde(), y);
}

double contaminated_ratio_from_pure(double pure_ratio, const ContaminationParams& params) {
    const double pi0 = params.pi0();
    const double pi1 = params.pi1();
    if (std::isinf(pure_ratio)) {
        return pi0 > 0.0 ? (1.0 - pi1) / pi0 : kInf;
    }
    return ((1.0 - pi1) * pure_ratio + pi1) / (pi0 * pure_ratio + (1.0 - pi0));
}

double pure_threshold(double lambda, const ContaminationParams& params) {
    const double pi0 = params.pi0();
    const double pi1 = params.pi1();
    const double den = (1.0 - pi1) - pi0 * lambda;
    const double num = (1.0 - pi0) * lambda - pi1;
    if (den <= 0.0) {
        return kInf;
    }
    return std::max(num, 0.0) / den;
}

} // namespace contam
