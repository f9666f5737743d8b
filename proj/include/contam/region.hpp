#pragma once
// Feasible set of contamination proportions as a convex polygon
//     { pi : a_i . pi <= b_i, i = 1..m }
// with its vertices and the KKT cone filter that discards vertices which can
// never maximize a risk whose gradient lies in the nonpositive quadrant.

#include "contam/models.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace contam {

// normal . pi <= offset
struct HalfPlane {
    Vec2 normal{};
    double offset = 0.0;
    std::string label;
};

enum class Sense { at_most, at_least };

// a . pi (sense) b, written in the canonical <= form.
HalfPlane make_half_plane(Vec2 a, double b, Sense sense, std::string label = {});

// Index pair of a pure proportion: nu*(P0, P1) or nu*(P1, P0).
enum class PureDirection { zero_one, one_zero };

// A bound on a pure maximal mixture proportion is a bound on the matching
// boundary-parallel line pi0 + nu~01 pi1 (or nu~10 pi0 + pi1). An upper bound
// on nu pushes the polygon away from the origin.
HalfPlane pure_nu_bound(PureDirection dir, double bound, Sense sense_on_nu, double nu_tilde_01,
                        double nu_tilde_10);

struct PolygonVertex {
    Vec2 point{};
    std::vector<std::size_t> active_set;  // indices into the region's half-planes
    bool candidate = false;               // passes the cone condition
};

inline constexpr double kFeasibilityTolerance = 1e-9;
inline constexpr double kVertexMergeDistance = 1e-8;

// Immutable polygon; vertices are enumerated and cone-filtered on
// construction, ordered counterclockwise. Residuals are measured along the
// unit normal. Throws unbounded_region, empty_region, or invalid_argument for
// a zero normal.
class FeasibleRegion {
public:
    explicit FeasibleRegion(std::vector<HalfPlane> half_planes);

    std::span<const HalfPlane> half_planes() const noexcept { return half_planes_; }
    std::span<const PolygonVertex> vertices() const noexcept { return vertices_; }
    std::vector<PolygonVertex> candidate_vertices() const;

    bool contains(const Vec2& pi, double tol = kFeasibilityTolerance) const noexcept;

private:
    std::vector<HalfPlane> half_planes_;
    std::vector<PolygonVertex> vertices_;
};

// The region allowed by the observed proportions alone (pure proportions free
// in [0, 1]): pi >= 0, pi0 + nu~01 pi1 <= nu~01, nu~10 pi0 + pi1 <= nu~10.
// Throws degenerate_region when nu~ lies outside [0, 1) or nu~01 nu~10 >= 1.
FeasibleRegion base_region(double nu_tilde_01, double nu_tilde_10);

FeasibleRegion add_constraints(const FeasibleRegion& region, std::span<const HalfPlane> extra);

// Vertices of the polygon described by the half-planes (counterclockwise,
// active sets attached, candidate flags unset). Throws empty_region.
std::vector<PolygonVertex> enumerate_vertices(std::span<const HalfPlane> half_planes);

// True iff the cone spanned by the normals contains a nonzero vector with both
// components <= 0.
bool cone_condition(std::span<const Vec2> active_normals);
bool cone_condition(const PolygonVertex& vertex, const FeasibleRegion& region);

} // namespace contam
