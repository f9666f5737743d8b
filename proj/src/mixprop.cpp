#include "contam/mixprop.hpp"

#include "contam/detail/golden.hpp"
#include "contam/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace contam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kScanPoints = 4001;
constexpr std::size_t kMaxRefinements = 16;
constexpr double kArgTolerance = 1e-8;
constexpr double kClampWarn = 1e-6;

// Lexicographic tail-dominance key of a component: the component with the
// largest key dominates the mixture as y runs to the given infinity.
std::pair<double, double> tail_key(const DensityModel& m, Attainment dir) {
    if (const auto* g = m.as_gaussian()) {
        return {g->stddev, dir == Attainment::plus_infinity ? g->mean : -g->mean};
    }
    return {-m.as_exponential()->rate, 0.0};
}

// lim p(y)/q(y) as y -> +-inf for same-family mixtures: only the components
// with the heaviest tail survive, and identical components cancel exactly.
double tail_limit(const MixtureDensity& p, const MixtureDensity& q, Attainment dir) {
    std::pair<double, double> best{-kInf, -kInf};
    for (const auto* mix : {&p, &q}) {
        for (const auto& c : mix->components()) {
            best = std::max(best, tail_key(c.model, dir));
        }
    }
    auto dominant_weight = [&](const MixtureDensity& mix) {
        double w = 0.0;
        for (const auto& c : mix.components()) {
            if (tail_key(c.model, dir) == best) {
                w += c.weight;
            }
        }
        return w;
    };
    const double a = dominant_weight(p);
    const double b = dominant_weight(q);
    if (b == 0.0) {
        return kInf;
    }
    return a / b;
}

std::pair<double, double> scan_interval(const MixtureDensity& p, const MixtureDensity& q) {
    if (p.family() == Family::exponential) {
        double rate_min = kInf;
        for (const auto* mix : {&p, &q}) {
            for (const auto& c : mix->components()) {
                rate_min = std::min(rate_min, c.model.as_exponential()->rate);
            }
        }
        return {0.0, 40.0 / rate_min};
    }
    double mean_lo = kInf;
    double mean_hi = -kInf;
    double sigma_max = 0.0;
    for (const auto* mix : {&p, &q}) {
        for (const auto& c : mix->components()) {
            const auto* g = c.model.as_gaussian();
            mean_lo = std::min(mean_lo, g->mean);
            mean_hi = std::max(mean_hi, g->mean);
            sigma_max = std::max(sigma_max, g->stddev);
        }
    }
    return {mean_lo - 12.0 * sigma_max, mean_hi + 12.0 * sigma_max};
}

struct Candidate {
    double ratio;
    Attainment where;
    std::optional<double> location;
};

void keep_smaller(Candidate& best, const Candidate& c) {
    if (c.ratio < best.ratio) {
        best = c;
    }
}

Candidate tabulated_infimum(const MixtureDensity& p, const MixtureDensity& q) {
    const auto grid = p.grid();
    Candidate best{kInf, Attainment::interior, std::nullopt};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double den = q.pdf(grid[i]);
        if (den <= 0.0) {
            continue;
        }
        const bool endpoint = i == 0 || i + 1 == grid.size();
        keep_smaller(best, {p.pdf(grid[i]) / den,
                            endpoint ? Attainment::support_endpoint : Attainment::interior,
                            grid[i]});
    }
    return best;
}

Candidate analytic_infimum(const MixtureDensity& p, const MixtureDensity& q) {
    const auto [lo, hi] = scan_interval(p, q);
    auto log_ratio = [&](double y) { return p.log_pdf(y) - q.log_pdf(y); };

    std::vector<double> ys(kScanPoints);
    std::vector<double> lr(kScanPoints);
    for (int i = 0; i < kScanPoints; ++i) {
        ys[i] = lo + (hi - lo) * static_cast<double>(i) / (kScanPoints - 1);
        lr[i] = log_ratio(ys[i]);
    }

    Candidate best{kInf, Attainment::interior, std::nullopt};
    const bool finite_lower = std::isfinite(p.support().lower);
    if (finite_lower) {
        keep_smaller(best, {std::exp(lr.front()), Attainment::support_endpoint, ys.front()});
    } else {
        keep_smaller(best, {tail_limit(p, q, Attainment::minus_infinity),
                            Attainment::minus_infinity, std::nullopt});
    }

    // Interior local minima, strict on at least one side so flat stretches
    // do not each spawn a refinement.
    std::vector<std::size_t> minima;
    for (std::size_t i = 1; i + 1 < ys.size(); ++i) {
        if (lr[i] <= lr[i - 1] && lr[i] <= lr[i + 1] && (lr[i] < lr[i - 1] || lr[i] < lr[i + 1])) {
            minima.push_back(i);
        }
    }
    const auto argmin = static_cast<std::size_t>(std::min_element(lr.begin(), lr.end()) - lr.begin());
    if (argmin > 0 && argmin + 1 < ys.size()) {
        minima.push_back(argmin);
    }
    std::sort(minima.begin(), minima.end(),
              [&](std::size_t a, std::size_t b) { return lr[a] < lr[b] || (lr[a] == lr[b] && a < b); });
    minima.erase(std::unique(minima.begin(), minima.end()), minima.end());
    if (minima.size() > kMaxRefinements) {
        minima.resize(kMaxRefinements);
    }
    for (const auto i : minima) {
        const auto [y, v] = detail::golden_section(
            log_ratio, ys[i - 1], ys[i + 1],
            [](double a, double b) { return b - a <= kArgTolerance; });
        keep_smaller(best, {std::exp(v), Attainment::interior, y});
        keep_smaller(best, {std::exp(lr[i]), Attainment::interior, ys[i]});
    }
    // Grid minimum itself (covers a flat ratio with no strict local minimum).
    keep_smaller(best, {std::exp(lr[argmin]), Attainment::interior, ys[argmin]});

    keep_smaller(best, {tail_limit(p, q, Attainment::plus_infinity), Attainment::plus_infinity,
                        std::nullopt});
    return best;
}

} // namespace

NuStarValue nu_star(const MixtureDensity& p, const MixtureDensity& q) {
    require_common_support(p, q);
    const Candidate c =
        p.family() == Family::tabulated ? tabulated_infimum(p, q) : analytic_infimum(p, q);

    NuStarValue out;
    out.where = c.where;
    out.location = c.location;
    out.clamped = c.ratio < -kClampWarn || c.ratio > 1.0 + kClampWarn;
    out.value = std::clamp(c.ratio, 0.0, 1.0);
    return out;
}

NuStarQuartet nu_star_quartet(const ContaminatedPair& pair) {
    return {
        nu_star(pair.p0_tilde(), pair.p1_tilde()).value,
        nu_star(pair.p1_tilde(), pair.p0_tilde()).value,
        nu_star(pair.p0(), pair.p1()).value,
        nu_star(pair.p1(), pair.p0()).value,
    };
}

double lemma1_contaminated_from_pure(double nu_pure, double pi_other) {
    if (!(nu_pure >= 0.0 && nu_pure <= 1.0) || !(pi_other >= 0.0 && pi_other < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "need nu in [0, 1] and pi in [0, 1)");
    }
    return nu_pure / (1.0 - pi_other + pi_other * nu_pure);
}

double lemma2_reduced_from_nustars(double nu_tilde, double nu_mixed) {
    if (!(nu_mixed >= 0.0 && nu_mixed < 1.0) || !(nu_tilde >= 0.0 && nu_tilde <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, "need nu_mixed in [0, 1) and nu_tilde in [0, 1]");
    }
    if (nu_mixed > nu_tilde) {
        throw Error(ErrorCode::invalid_ordering,
                    "mixed proportion nu*(P0, P~1) exceeds contaminated nu*(P~0, P~1)");
    }
    return (nu_tilde - nu_mixed) / (1.0 - nu_mixed);
}

ContaminationParams theorem1_forward(double nu_pure_01, double nu_pure_10, double nu_tilde_01,
                                     double nu_tilde_10) {
    for (const double v : {nu_pure_01, nu_pure_10, nu_tilde_01, nu_tilde_10}) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw Error(ErrorCode::invalid_argument, "maximal mixture proportions lie in [0, 1]");
        }
    }
    if (nu_pure_01 >= 1.0 || nu_pure_10 >= 1.0) {
        throw Error(ErrorCode::invalid_argument, "pure proportions must be below one");
    }
    if (nu_pure_01 > nu_tilde_01 || nu_pure_10 > nu_tilde_10) {
        throw Error(ErrorCode::invalid_ordering,
                    "pure proportions cannot exceed the contaminated ones");
    }
    const double det = 1.0 - nu_tilde_01 * nu_tilde_10;
    if (!(det > 0.0)) {
        throw Error(ErrorCode::singular_system,
                    "nu~01 * nu~10 >= 1: the contaminated distributions coincide");
    }
    const double r0 = (nu_tilde_01 - nu_pure_01) / (1.0 - nu_pure_01);
    const double r1 = (nu_tilde_10 - nu_pure_10) / (1.0 - nu_pure_10);
    double pi0 = (r0 - nu_tilde_01 * r1) / det;
    double pi1 = (r1 - nu_tilde_10 * r0) / det;
    // Rounding can push an exact zero slightly negative.
    constexpr double slack = 1e-12;
    if (pi0 < 0.0 && pi0 > -slack) {
        pi0 = 0.0;
    }
    if (pi1 < 0.0 && pi1 > -slack) {
        pi1 = 0.0;
    }
    if (pi0 < 0.0 || pi1 < 0.0 || pi0 + pi1 >= 1.0) {
        throw Error(ErrorCode::infeasible_params,
                    "the relations have no solution with pi0, pi1 >= 0 and pi0 + pi1 < 1");
    }
    return {pi0, pi1};
}

PureNuStars theorem1_inverse(const ContaminationParams& params, double nu_tilde_01,
                             double nu_tilde_10) {
    if (!(nu_tilde_01 >= 0.0 && nu_tilde_01 <= 1.0) || !(nu_tilde_10 >= 0.0 && nu_tilde_10 <= 1.0)) {
        throw Error(ErrorCode::invalid_argument, "maximal mixture proportions lie in [0, 1]");
    }
    const double r0 = params.pi0() + nu_tilde_01 * params.pi1();
    const double r1 = nu_tilde_10 * params.pi0() + params.pi1();
    auto solve = [](double nu_tilde, double r) {
        constexpr double slack = 1e-9;
        const double nu = (nu_tilde - r) / (1.0 - r);
        if (nu < -slack || nu > 1.0 + slack) {
            throw Error(ErrorCode::infeasible_params,
                        "implied pure proportion falls outside [0, 1]");
        }
        return std::clamp(nu, 0.0, 1.0);
    };
    return {solve(nu_tilde_01, r0), solve(nu_tilde_10, r1)};
}

} // namespace contam
