#include "contam/region.hpp"

#include "contam/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace contam {

namespace {

constexpr double kAngleTolerance = 1e-12;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm(const Vec2& v) { return std::hypot(v[0], v[1]); }

double residual(const HalfPlane& h, const Vec2& p) {
    return (h.normal[0] * p[0] + h.normal[1] * p[1] - h.offset) / norm(h.normal);
}

double wrap(double angle) {
    angle = std::fmod(angle, kTwoPi);
    return angle < 0.0 ? angle + kTwoPi : angle;
}

// Angles of the normals sorted ascending in [0, 2pi), and the widest gap
// between consecutive ones (circularly) together with the angle that ends it.
struct AngularSpan {
    double gap = 0.0;
    double gap_end = 0.0;
};

AngularSpan widest_gap(std::vector<double> angles) {
    std::sort(angles.begin(), angles.end());
    AngularSpan out{angles.front() + kTwoPi - angles.back(), angles.front()};
    for (std::size_t i = 1; i < angles.size(); ++i) {
        const double g = angles[i] - angles[i - 1];
        if (g > out.gap) {
            out = {g, angles[i]};
        }
    }
    return out;
}

bool is_bounded(std::span<const HalfPlane> half_planes) {
    if (half_planes.size() < 3) {
        return false;
    }
    std::vector<double> angles;
    angles.reserve(half_planes.size());
    for (const auto& h : half_planes) {
        angles.push_back(wrap(std::atan2(h.normal[1], h.normal[0])));
    }
    return widest_gap(std::move(angles)).gap < std::numbers::pi - kAngleTolerance;
}

// Closed arcs [s1, s1 + w1] and [s2, s2 + w2] on the circle.
bool arcs_intersect(double s1, double w1, double s2, double w2) {
    return wrap(s2 - s1) <= w1 + kAngleTolerance || wrap(s1 - s2) <= w2 + kAngleTolerance;
}

} // namespace

HalfPlane make_half_plane(Vec2 a, double b, Sense sense, std::string label) {
    if (sense == Sense::at_least) {
        return {{-a[0], -a[1]}, -b, std::move(label)};
    }
    return {a, b, std::move(label)};
}

HalfPlane pure_nu_bound(PureDirection dir, double bound, Sense sense_on_nu, double nu_tilde_01,
                        double nu_tilde_10) {
    if (!(bound >= 0.0 && bound < 1.0)) {
        throw Error(ErrorCode::invalid_argument, "pure proportion bound must lie in [0, 1)");
    }
    const double nu_tilde = dir == PureDirection::zero_one ? nu_tilde_01 : nu_tilde_10;
    const Vec2 a = dir == PureDirection::zero_one ? Vec2{1.0, nu_tilde_01} : Vec2{nu_tilde_10, 1.0};
    // The line value (nu~ - nu) / (1 - nu) decreases in nu, so the sense flips.
    const double level = (nu_tilde - bound) / (1.0 - bound);
    const Sense on_line = sense_on_nu == Sense::at_most ? Sense::at_least : Sense::at_most;
    std::ostringstream label;
    label << (dir == PureDirection::zero_one ? "nu*(P0,P1)" : "nu*(P1,P0)")
          << (sense_on_nu == Sense::at_most ? " <= " : " >= ") << bound;
    return make_half_plane(a, level, on_line, label.str());
}

std::vector<PolygonVertex> enumerate_vertices(std::span<const HalfPlane> half_planes) {
    struct Found {
        Vec2 point;
        std::vector<std::size_t> defining;
    };
    std::vector<Found> found;
    const std::size_t m = half_planes.size();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const auto& a = half_planes[i];
            const auto& b = half_planes[j];
            const double det = a.normal[0] * b.normal[1] - a.normal[1] * b.normal[0];
            if (std::abs(det) <= 1e-14 * norm(a.normal) * norm(b.normal)) {
                continue;
            }
            const Vec2 p{(a.offset * b.normal[1] - a.normal[1] * b.offset) / det,
                         (a.normal[0] * b.offset - a.offset * b.normal[0]) / det};
            const bool feasible = std::all_of(half_planes.begin(), half_planes.end(), [&](const auto& h) {
                return residual(h, p) <= kFeasibilityTolerance;
            });
            if (!feasible) {
                continue;
            }
            auto same = std::find_if(found.begin(), found.end(), [&](const Found& f) {
                return std::hypot(f.point[0] - p[0], f.point[1] - p[1]) <= kVertexMergeDistance;
            });
            if (same == found.end()) {
                found.push_back({p, {i, j}});
            } else {
                same->defining.push_back(i);
                same->defining.push_back(j);
            }
        }
    }
    if (found.empty()) {
        throw Error(ErrorCode::empty_region, "no point satisfies every constraint");
    }

    std::vector<PolygonVertex> vertices;
    vertices.reserve(found.size());
    for (auto& f : found) {
        PolygonVertex v{f.point, std::move(f.defining), false};
        for (std::size_t k = 0; k < m; ++k) {
            if (std::abs(residual(half_planes[k], v.point)) <= kFeasibilityTolerance) {
                v.active_set.push_back(k);
            }
        }
        std::sort(v.active_set.begin(), v.active_set.end());
        v.active_set.erase(std::unique(v.active_set.begin(), v.active_set.end()), v.active_set.end());
        vertices.push_back(std::move(v));
    }

    Vec2 centroid{0.0, 0.0};
    for (const auto& v : vertices) {
        centroid[0] += v.point[0] / static_cast<double>(vertices.size());
        centroid[1] += v.point[1] / static_cast<double>(vertices.size());
    }
    auto angle = [&](const PolygonVertex& v) {
        return std::atan2(v.point[1] - centroid[1], v.point[0] - centroid[0]);
    };
    std::stable_sort(vertices.begin(), vertices.end(),
                     [&](const auto& a, const auto& b) { return angle(a) < angle(b); });
    return vertices;
}

bool cone_condition(std::span<const Vec2> active_normals) {
    std::vector<double> angles;
    for (const auto& a : active_normals) {
        const double n = norm(a);
        if (n == 0.0) {
            continue;
        }
        if (a[0] <= kAngleTolerance * n && a[1] <= kAngleTolerance * n) {
            return true;
        }
        angles.push_back(wrap(std::atan2(a[1], a[0])));
    }
    if (angles.empty()) {
        return false;
    }
    const auto span = widest_gap(angles);
    if (span.gap < std::numbers::pi - kAngleTolerance) {
        return true;  // the normals positively span the plane
    }
    // Cone = closed arc starting where the widest gap ends. The closed third
    // quadrant is the arc [pi, 3pi/2].
    return arcs_intersect(span.gap_end, kTwoPi - span.gap, std::numbers::pi, std::numbers::pi / 2);
}

bool cone_condition(const PolygonVertex& vertex, const FeasibleRegion& region) {
    std::vector<Vec2> normals;
    normals.reserve(vertex.active_set.size());
    for (const auto i : vertex.active_set) {
        normals.push_back(region.half_planes()[i].normal);
    }
    return cone_condition(normals);
}

FeasibleRegion::FeasibleRegion(std::vector<HalfPlane> half_planes)
    : half_planes_(std::move(half_planes)) {
    for (const auto& h : half_planes_) {
        if (!(norm(h.normal) > 0.0) || !std::isfinite(norm(h.normal)) || !std::isfinite(h.offset)) {
            throw Error(ErrorCode::invalid_argument,
                        "half-plane '" + h.label + "' needs a finite nonzero normal and offset");
        }
    }
    if (!is_bounded(half_planes_)) {
        throw Error(ErrorCode::unbounded_region, "constraints do not bound the polygon");
    }
    vertices_ = enumerate_vertices(half_planes_);
    for (auto& v : vertices_) {
        v.candidate = cone_condition(v, *this);
    }
}

std::vector<PolygonVertex> FeasibleRegion::candidate_vertices() const {
    std::vector<PolygonVertex> out;
    std::copy_if(vertices_.begin(), vertices_.end(), std::back_inserter(out),
                 [](const auto& v) { return v.candidate; });
    return out;
}

bool FeasibleRegion::contains(const Vec2& pi, double tol) const noexcept {
    return std::all_of(half_planes_.begin(), half_planes_.end(),
                       [&](const auto& h) { return residual(h, pi) <= tol; });
}

FeasibleRegion base_region(double nu_tilde_01, double nu_tilde_10) {
    const bool in_range = nu_tilde_01 >= 0.0 && nu_tilde_01 < 1.0 && nu_tilde_10 >= 0.0 &&
                          nu_tilde_10 < 1.0;
    if (!in_range || !(nu_tilde_01 * nu_tilde_10 < 1.0)) {
        throw Error(ErrorCode::degenerate_region,
                    "observed proportions must lie in [0, 1) with nu~01 * nu~10 < 1");
    }
    return FeasibleRegion({
        {{-1.0, 0.0}, 0.0, "pi0 >= 0"},
        {{0.0, -1.0}, 0.0, "pi1 >= 0"},
        {{1.0, nu_tilde_01}, nu_tilde_01, "nu*(P0,P1) >= 0"},
        {{nu_tilde_10, 1.0}, nu_tilde_10, "nu*(P1,P0) >= 0"},
    });
}

FeasibleRegion add_constraints(const FeasibleRegion& region, std::span<const HalfPlane> extra) {
    std::vector<HalfPlane> all(region.half_planes().begin(), region.half_planes().end());
    all.insert(all.end(), extra.begin(), extra.end());
    return FeasibleRegion(std::move(all));
}

} // namespace contam
