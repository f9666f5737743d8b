#pragma once
// Maximal mixture proportions nu*(P, Q) = inf p/q and the identities that tie
// the pure, mixed and contaminated proportions to (pi0, pi1).

#include "contam/models.hpp"

#include <optional>

namespace contam {

enum class Attainment {
    interior,          // at a finite point inside the support
    support_endpoint,  // at a finite endpoint of the support
    minus_infinity,    // only in the limit y -> -inf
    plus_infinity,     // only in the limit y -> +inf
};

struct NuStarValue {
    double value = 1.0;
    Attainment where = Attainment::interior;
    std::optional<double> location;  // set unless attained in a tail limit
    bool clamped = false;            // raw value was outside [0, 1] by more than 1e-6
};

// nu*(P~0, P~1), nu*(P~1, P~0), nu*(P0, P1), nu*(P1, P0).
struct NuStarQuartet {
    double nu_tilde_01 = 0.0;
    double nu_tilde_10 = 0.0;
    double nu_pure_01 = 0.0;
    double nu_pure_10 = 0.0;
};

// Infimum of p(y)/q(y) over the common support. Closed-form families combine a
// grid scan with golden-section refinement of every local minimum and the
// analytic tail limits of the ratio; tabulated densities are piecewise linear,
// so the infimum sits on a grid point and is read off exactly.
NuStarValue nu_star(const MixtureDensity& p, const MixtureDensity& q);

NuStarQuartet nu_star_quartet(const ContaminatedPair& pair);

// Diagnostic only: nu* below 1e-6 is reported as irreducible.
inline bool is_irreducible(double nu) noexcept { return nu < 1e-6; }

// nu*(P0, P1~) = nu / (1 - pi1 + pi1 nu) where nu = nu*(P0, P1); the mirror
// identity swaps indices.
double lemma1_contaminated_from_pure(double nu_pure, double pi_other);

// pi0~ = (nu*(P~0, P~1) - nu*(P0, P~1)) / (1 - nu*(P0, P~1)), and mirror.
// Throws invalid_ordering when nu_mixed > nu_tilde.
double lemma2_reduced_from_nustars(double nu_tilde, double nu_mixed);

// Solves
//     pi0 + nu~01 pi1 = (nu~01 - nu01) / (1 - nu01)
//     nu~10 pi0 + pi1 = (nu~10 - nu10) / (1 - nu10)
// for (pi0, pi1). Throws singular_system when nu~01 nu~10 >= 1.
ContaminationParams theorem1_forward(double nu_pure_01, double nu_pure_10, double nu_tilde_01,
                                     double nu_tilde_10);

struct PureNuStars {
    double nu_01 = 0.0;
    double nu_10 = 0.0;
};

// Pure proportions implied by (pi0, pi1) and the observed contaminated ones.
// Throws infeasible_params when either lands outside [0, 1].
PureNuStars theorem1_inverse(const ContaminationParams& params, double nu_tilde_01,
                             double nu_tilde_10);

} // namespace contam
