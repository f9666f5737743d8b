#pragma once
// Test-only reference computations. Nothing here calls into the decision
// region, threshold mapping, or vertex machinery it is used to check.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace contam::testing {

template <class F>
double integrate(F&& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-13);
}

// Integral of density over {y in [lo, hi] : sign(y) > 0}. Sign changes are
// bracketed on a uniform scan and polished by bisection.
template <class Density, class Sign>
double mass_where_positive(Density&& density, Sign&& sign, double lo, double hi, int cells = 20000) {
    std::vector<double> breaks{lo};
    double prev_x = lo;
    double prev_s = sign(lo);
    for (int i = 1; i <= cells; ++i) {
        const double x = lo + (hi - lo) * i / cells;
        const double s = sign(x);
        if ((prev_s > 0.0) != (s > 0.0)) {
            if (prev_s * s < 0.0) {
                auto [a, b] = boost::math::tools::bisect(
                    [&](double t) { return sign(t); }, prev_x, x,
                    boost::math::tools::eps_tolerance<double>(50));
                breaks.push_back(0.5 * (a + b));
            } else {
                breaks.push_back(x);  // underflowed tail, no mass either way
            }
        }
        prev_x = x;
        prev_s = s;
    }
    breaks.push_back(hi);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double mid = 0.5 * (breaks[k] + breaks[k + 1]);
        if (sign(mid) > 0.0) {
            total += integrate(density, breaks[k], breaks[k + 1]);
        }
    }
    return total;
}

// Brute-force maximum of f over a (n x n) lattice on [0,1]^2 restricted by
// inside(p).
template <class F, class Inside>
double lattice_max(F&& f, Inside&& inside, double lo0, double hi0, double lo1, double hi1, int n) {
    double best = -INFINITY;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const std::array<double, 2> p{lo0 + (hi0 - lo0) * i / (n - 1), lo1 + (hi1 - lo1) * j / (n - 1)};
            if (inside(p)) {
                best = std::max(best, f(p));
            }
        }
    }
    return best;
}

// Decontaminated rates written out in long double, for finite differencing.
inline std::array<long double, 2> decontaminate_ld(long double rt0, long double rt1, long double p0,
                                                   long double p1) {
    const long double den = 1.0L - p0 - p1;
    return {((1.0L - p1) * rt0 - p0 * (1.0L - rt1)) / den, ((1.0L - p0) * rt1 - p1 * (1.0L - rt0)) / den};
}

// Central differences of decontaminate_ld: {dR0/dpi0, dR0/dpi1, dR1/dpi0, dR1/dpi1}.
inline std::array<double, 4> decontaminate_partials_fd(double rt0, double rt1, double p0, double p1,
                                                       long double h = 1e-6L) {
    const auto a = decontaminate_ld(rt0, rt1, p0 + h, p1);
    const auto b = decontaminate_ld(rt0, rt1, p0 - h, p1);
    const auto c = decontaminate_ld(rt0, rt1, p0, p1 + h);
    const auto d = decontaminate_ld(rt0, rt1, p0, p1 - h);
    return {static_cast<double>((a[0] - b[0]) / (2 * h)), static_cast<double>((c[0] - d[0]) / (2 * h)),
            static_cast<double>((a[1] - b[1]) / (2 * h)), static_cast<double>((c[1] - d[1]) / (2 * h))};
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

private:
    std::mt19937_64 engine_;
};

} // namespace contam::testing
