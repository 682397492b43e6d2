#pragma once

// Predicate-level geometry of the quarter median: projections, the weighted
// marginal medians of a point set seen in a rotated frame, the mass report
// that checks the defining inequalities
//
//   all four closed half planes through theta carry mass >= 1/2,
//   all four closed quadrants around theta carry mass >= 1/4,
//
// and the median map Psi (midpoint marginal median, mapped back to original
// coordinates). Closed sides mean boundary points count toward both sides;
// the on-boundary band is kSignTolFactor * scale wide.

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "qmed/common.hpp"
#include "qmed/frame.hpp"
#include "qmed/median.hpp"
#include "qmed/point_set.hpp"

namespace qmed {

struct MassReport {
    // Closed half-plane masses: H+(b1), H-(b1), H+(b2), H-(b2).
    std::array<double, 4> half_masses{};
    // Closed quadrant masses: V++, V+-, V-+, V--.
    std::array<double, 4> quad_masses{};
    bool satisfies_halfplane = false;
    bool satisfies_quadrant = false;

    bool valid() const { return satisfies_halfplane && satisfies_quadrant; }
};

// Projections <b, x_k> in stored point order; b must be unit length.
inline std::vector<double> project(const PointSet& ps, Vec2 direction) {
    if (std::abs(norm(direction) - 1.0) > 1e-12)
        throw invalid_input("project: direction must be unit length");
    std::vector<double> out;
    out.reserve(ps.size());
    for (const Vec2& p : ps.points()) out.push_back(dot(direction, p));
    return out;
}

namespace detail {

// Mass report against an explicit axis pair (cos a, sin a), (-sin a, cos a)
// for a raw, unreduced angle. The scan solver sweeps a over [0, pi/2), where
// the identity of the upper-right quadrant depends on the representative, so
// it cannot go through the canonical Frame.
inline MassReport mass_report_raw(const PointSet& ps, Vec2 theta, double cos_a, double sin_a,
                                  double sign_tol) {
    MassReport r;
    double hp1 = 0, hm1 = 0, hp2 = 0, hm2 = 0;
    double qpp = 0, qpm = 0, qmp = 0, qmm = 0;
    const std::vector<Vec2>& pts = ps.points();
    const std::vector<double>& w = ps.weights();
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double dx = pts[k].x - theta.x;
        const double dy = pts[k].y - theta.y;
        const int t1 = side_of(cos_a * dx + sin_a * dy, sign_tol);
        const int t2 = side_of(-sin_a * dx + cos_a * dy, sign_tol);
        if (t1 >= 0) hp1 += w[k];
        if (t1 <= 0) hm1 += w[k];
        if (t2 >= 0) hp2 += w[k];
        if (t2 <= 0) hm2 += w[k];
        if (t1 >= 0 && t2 >= 0) qpp += w[k];
        if (t1 >= 0 && t2 <= 0) qpm += w[k];
        if (t1 <= 0 && t2 >= 0) qmp += w[k];
        if (t1 <= 0 && t2 <= 0) qmm += w[k];
    }
    r.half_masses = {hp1, hm1, hp2, hm2};
    r.quad_masses = {qpp, qpm, qmp, qmm};
    r.satisfies_halfplane = hp1 >= 0.5 - kMassTol && hm1 >= 0.5 - kMassTol &&
                            hp2 >= 0.5 - kMassTol && hm2 >= 0.5 - kMassTol;
    r.satisfies_quadrant = qpp >= 0.25 - kMassTol && qpm >= 0.25 - kMassTol &&
                           qmp >= 0.25 - kMassTol && qmm >= 0.25 - kMassTol;
    return r;
}

// Median triples of the two projected marginals in the given frame.
inline std::pair<MedianTriple, MedianTriple> axis_medians(const PointSet& ps, const Frame& f) {
    const std::vector<Vec2>& pts = ps.points();
    const std::vector<double>& w = ps.weights();
    std::vector<std::pair<double, double>> vw1, vw2;
    vw1.reserve(pts.size());
    vw2.reserve(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const Vec2 s = f.to_frame(pts[k]);
        vw1.emplace_back(s.x, w[k]);
        vw2.emplace_back(s.y, w[k]);
    }
    std::sort(vw1.begin(), vw1.end());
    std::sort(vw2.begin(), vw2.end());
    return {median_of_sorted(vw1), median_of_sorted(vw2)};
}

// Distinct values of a median triple in (lo, mid, hi) order.
inline std::size_t distinct_triple(const MedianTriple& m, std::array<double, 3>& out) {
    out[0] = m.lo;
    std::size_t k = 1;
    if (m.mid != m.lo) out[k++] = m.mid;
    if (m.hi != m.mid && m.hi != m.lo) out[k++] = m.hi;
    return k;
}

}  // namespace detail

inline MassReport mass_report(const PointSet& ps, Vec2 theta, const Frame& frame) {
    if (!std::isfinite(theta.x) || !std::isfinite(theta.y))
        throw invalid_input("mass_report: non-finite theta");
    return detail::mass_report_raw(ps, theta, frame.b1().x, frame.b1().y, ps.sign_tol());
}

// The <= 9 candidate points {lo, mid, hi} x {lo, mid, hi} of the marginal
// median intervals in the given frame, mapped back to original coordinates.
// Duplicates collapse when a marginal median is unique.
inline std::vector<Vec2> marginal_median_candidates(const PointSet& ps, const Frame& frame) {
    const auto [m1, m2] = detail::axis_medians(ps, frame);
    std::array<double, 3> a{}, b{};
    const std::size_t na = detail::distinct_triple(m1, a);
    const std::size_t nb = detail::distinct_triple(m2, b);
    std::vector<Vec2> out;
    out.reserve(na * nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) out.push_back(frame.from_frame({a[i], b[j]}));
    return out;
}

// Psi(U, P): the midpoint marginal median of the rotated set, mapped back.
inline Vec2 psi(const PointSet& ps, const Frame& frame) {
    const auto [m1, m2] = detail::axis_medians(ps, frame);
    return frame.from_frame({m1.mid, m2.mid});
}

}  // namespace qmed
