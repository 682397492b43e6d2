#pragma once

// Competing location estimators: sample mean, spatial (geometric) median,
// Oja median, and halfspace (Tukey) depth with an approximate depth median.
//
// The spatial median uses the modified Weiszfeld iteration: when an iterate
// lands on a data point a_j, the pull of the others R = sum_{k!=j} w_k
// (x_k - a_j)/|x_k - a_j| decides. |R| <= w_j certifies a_j as the minimizer
// (subgradient condition); otherwise the iterate steps off the anchor along
// R with the damped step (|R| - w_j)/L, L = sum_{k!=j} w_k/|x_k - a_j|,
// which keeps the objective non-increasing.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "qmed/common.hpp"
#include "qmed/generator.hpp"
#include "qmed/geometry.hpp"
#include "qmed/point_set.hpp"
#include "qmed/quadrature.hpp"
#include "qmed/random.hpp"

namespace qmed {

inline Vec2 sample_mean(const PointSet& ps) {
    Vec2 m{};
    const std::vector<Vec2>& pts = ps.points();
    const std::vector<double>& w = ps.weights();
    for (std::size_t k = 0; k < pts.size(); ++k) m = m + w[k] * pts[k];
    return m;
}

// Weighted sum of distances; the objective the spatial median minimizes.
inline double fermat_objective(const PointSet& ps, Vec2 x) {
    double f = 0.0;
    const std::vector<Vec2>& pts = ps.points();
    const std::vector<double>& w = ps.weights();
    for (std::size_t k = 0; k < pts.size(); ++k) f += w[k] * norm(x - pts[k]);
    return f;
}

struct weiszfeld_failure : numerical_error {
    Vec2 best_iterate;
    explicit weiszfeld_failure(Vec2 best)
        : numerical_error("spatial_median: iteration limit reached"), best_iterate(best) {}
};

struct WeiszfeldTrace {
    Vec2 point{};
    std::size_t iterations = 0;
    bool anchor_certified = false;       // returned a data point via the subgradient test
    std::vector<double> objective;       // objective after each accepted step
};

namespace detail {

// Pull R and Lipschitz sum L of all points except those within snap of x;
// reports the accumulated snapped weight and one snapped index (if any).
inline void anchor_pull(const PointSet& ps, Vec2 x, double snap, Vec2& R, double& L,
                        double& snapped_weight, std::size_t& snapped_index) {
    R = {0, 0};
    L = 0.0;
    snapped_weight = 0.0;
    snapped_index = ps.size();
    const std::vector<Vec2>& pts = ps.points();
    const std::vector<double>& w = ps.weights();
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const Vec2 d = pts[k] - x;
        const double dist = norm(d);
        if (dist <= snap) {
            snapped_weight += w[k];
            snapped_index = k;
        } else {
            R = R + (w[k] / dist) * d;
            L += w[k] / dist;
        }
    }
}

}  // namespace detail

inline WeiszfeldTrace spatial_median_traced(const PointSet& ps, double tol = 1e-10,
                                            std::size_t max_iter = 10000) {
    WeiszfeldTrace tr;
    const std::vector<Vec2>& pts = ps.points();
    if (pts.size() == 1) {
        tr.point = pts[0];
        tr.anchor_certified = true;
        tr.objective.push_back(0.0);
        return tr;
    }
    const double scale = 1.0 + ps.scale();
    const double snap = 1e-13 * scale;
    const double step_tol = tol * scale;

    // Start from the best data point; if its subgradient condition holds it
    // already is the minimizer, otherwise step off it.
    std::size_t best = 0;
    double best_f = fermat_objective(ps, pts[0]);
    for (std::size_t k = 1; k < pts.size(); ++k) {
        const double f = fermat_objective(ps, pts[k]);
        if (f < best_f) {
            best_f = f;
            best = k;
        }
    }
    Vec2 R;
    double L, wa;
    std::size_t ai;
    detail::anchor_pull(ps, pts[best], snap, R, L, wa, ai);
    const double rn = norm(R);
    if (rn <= wa * (1.0 + 1e-12)) {
        tr.point = pts[best];
        tr.anchor_certified = true;
        tr.objective.push_back(best_f);
        return tr;
    }
    Vec2 x = pts[best] + ((rn - wa) / L / rn) * R;
    tr.objective.push_back(fermat_objective(ps, x));

    for (std::size_t it = 0; it < max_iter; ++it) {
        detail::anchor_pull(ps, x, snap, R, L, wa, ai);
        Vec2 next;
        if (wa > 0.0) {
            // On (or numerically at) an anchor.
            const double r = norm(R);
            if (r <= wa * (1.0 + 1e-12)) {
                tr.point = ai < ps.size() ? pts[ai] : x;
                tr.iterations = it;
                tr.anchor_certified = true;
                return tr;
            }
            next = x + ((r - wa) / L / r) * R;
        } else {
            // Plain Weiszfeld update; R/L is the weighted-average pull.
            next = x + (1.0 / L) * R;
            if (norm(R) <= tol) {  // subgradient already negligible
                tr.point = x;
                tr.iterations = it;
                return tr;
            }
        }
        tr.objective.push_back(fermat_objective(ps, next));
        const double step = norm(next - x);
        x = next;
        if (step <= step_tol) {
            tr.point = x;
            tr.iterations = it + 1;
            return tr;
        }
    }
    throw weiszfeld_failure(x);
}

inline Vec2 spatial_median(const PointSet& ps, double tol = 1e-10) {
    return spatial_median_traced(ps, tol).point;
}

// Asymptotic variance multiplier of the spatial median in the spherical
// standard model: 2 (E 1/R)^{-2} in the plane, with E(1/R) evaluated by
// quadrature of (2 pi / c2) h(r^2) over [0, inf).
inline double smed_spherical_variance(const DensityGenerator& g) {
    const double inv_r = integrate_half_line(
        [&g](double r) { return (2.0 * kPi / g.c2()) * g.h(r * r); }, 1e-10);
    if (!(inv_r > 0.0)) throw numerical_error("smed_spherical_variance: E(1/R) not positive");
    return 2.0 / (inv_r * inv_r);
}

// ---------------------------------------------------------------------------
// Oja median

// Weighted sum over point pairs of the triangle area spanned with theta:
// sum_{k<l} w_k w_l |det(x_k - theta, x_l - theta)| / 2.
inline double oja_objective(const PointSet& ps, Vec2 theta) {
    const std::vector<Vec2>& pts = ps.points();
    const std::vector<double>& w = ps.weights();
    double f = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const Vec2 a = pts[k] - theta;
        for (std::size_t l = k + 1; l < pts.size(); ++l)
            f += 0.5 * w[k] * w[l] * std::abs(cross(a, pts[l] - theta));
    }
    return f;
}

namespace detail {

inline bool collinear(const PointSet& ps) {
    const std::vector<Vec2>& pts = ps.points();
    if (pts.size() < 3) return true;
    const Vec2 base = pts[1] - pts[0];
    const double tol = 1e-12 * (1.0 + ps.scale()) * (1.0 + ps.scale());
    for (std::size_t k = 2; k < pts.size(); ++k)
        if (std::abs(cross(base, pts[k] - pts[0])) > tol) return false;
    return true;
}

// Nelder-Mead on the plane. The Oja objective is piecewise linear and
// convex, so the simple simplex search is reliable; it just flattens slowly
// into kinks, hence the generous iteration cap.
inline Vec2 nelder_mead(const PointSet& ps, Vec2 start, double h, double tol, double& f_out) {
    struct V {
        Vec2 x;
        double f;
    };
    std::array<V, 3> s{V{start, oja_objective(ps, start)},
                       V{start + Vec2{h, 0}, oja_objective(ps, start + Vec2{h, 0})},
                       V{start + Vec2{0, h}, oja_objective(ps, start + Vec2{0, h})}};
    auto order = [&s] {
        std::sort(s.begin(), s.end(), [](const V& a, const V& b) {
            if (a.f != b.f) return a.f < b.f;
            return lex_less(a.x, b.x);
        });
    };
    order();
    for (int it = 0; it < 500; ++it) {
        const double size = std::max(norm(s[1].x - s[0].x), norm(s[2].x - s[0].x));
        if (size <= tol && s[2].f - s[0].f <= 1e-12 * (1.0 + std::abs(s[0].f))) break;
        const Vec2 c = 0.5 * (s[0].x + s[1].x);
        const Vec2 xr = c + (c - s[2].x);
        const double fr = oja_objective(ps, xr);
        if (fr < s[0].f) {
            const Vec2 xe = c + 2.0 * (c - s[2].x);
            const double fe = oja_objective(ps, xe);
            s[2] = fe < fr ? V{xe, fe} : V{xr, fr};
        } else if (fr < s[1].f) {
            s[2] = {xr, fr};
        } else {
            const Vec2 xc = c + 0.5 * (s[2].x - c);
            const double fc = oja_objective(ps, xc);
            if (fc < s[2].f) {
                s[2] = {xc, fc};
            } else {
                for (int k = 1; k < 3; ++k) {
                    s[k].x = s[0].x + 0.5 * (s[k].x - s[0].x);
                    s[k].f = oja_objective(ps, s[k].x);
                }
            }
        }
        order();
    }
    f_out = s[0].f;
    return s[0].x;
}

}  // namespace detail

inline Vec2 oja_median(const PointSet& ps, double tol = 1e-9) {
    if (detail::collinear(ps))
        throw degenerate_input("oja_median: points are collinear");
    const double scale = 1.0 + ps.scale();
    const double h = 0.05 * scale;

    std::array<Vec2, 3> starts{sample_mean(ps), psi(ps, Frame{}), spatial_median(ps)};
    Vec2 best{};
    double best_f = 0.0;
    bool have = false;
    for (const Vec2& s : starts) {
        double f;
        const Vec2 x = detail::nelder_mead(ps, s, h, tol * scale, f);
        if (!have || f < best_f - 1e-12 * (1.0 + std::abs(best_f)) ||
            (std::abs(f - best_f) <= 1e-12 * (1.0 + std::abs(best_f)) && lex_less(x, best))) {
            have = true;
            best_f = f;
            best = x;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Tukey depth

namespace detail {

// Arcs narrower than this are skipped when probing directions. Distinct
// lines through theta give event angles separated by far more than this for
// any reasonable input; separations below it come from one geometric line
// whose two float event angles disagree in the last bits. Probing inside
// such an ulp-wide sliver would classify the involved points by rounding
// noise, so the sliver is treated as the single breakpoint it really is.
inline constexpr double kTukeyArcTol = 1e-9;

}  // namespace detail

// Exact halfspace depth: the minimum closed-half-plane mass over all
// directions. The mass as a function of the direction angle is piecewise
// constant with breakpoints where the boundary line sweeps over a data
// point, so the minimum is attained on one of the open arcs between
// consecutive breakpoints; evaluating at arc midpoints (where no point can
// sit on the boundary) is exact. Points exactly at theta lie in every
// closed half-plane and only need excluding from event generation.
inline double tukey_depth(const PointSet& ps, Vec2 theta) {
    if (!std::isfinite(theta.x) || !std::isfinite(theta.y))
        throw invalid_input("tukey_depth: non-finite theta");
    const std::vector<Vec2>& pts = ps.points();
    const std::vector<double>& w = ps.weights();

    double at_theta = 0.0;
    std::vector<std::size_t> off;
    off.reserve(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const Vec2 d = pts[k] - theta;
        if (d.x == 0.0 && d.y == 0.0)
            at_theta += w[k];
        else
            off.push_back(k);
    }
    if (off.empty()) return at_theta;

    std::vector<double> events;
    events.reserve(2 * off.size());
    for (std::size_t k : off) {
        const Vec2 d = pts[k] - theta;
        const double a = std::atan2(d.y, d.x);
        for (double e : {a + kPi / 2, a - kPi / 2}) {
            double m = std::fmod(e, 2 * kPi);
            if (m < 0) m += 2 * kPi;
            events.push_back(m);
        }
    }
    std::sort(events.begin(), events.end());

    // At least one arc is wide enough to probe: the widths sum to 2*pi.
    double depth = 1.0;
    const std::size_t m = events.size();
    for (std::size_t e = 0; e < m; ++e) {
        const double next = e + 1 < m ? events[e + 1] : events[0] + 2 * kPi;
        if (next - events[e] < detail::kTukeyArcTol) continue;
        const double phi = 0.5 * (events[e] + next);
        const Vec2 u{std::cos(phi), std::sin(phi)};
        double mass = at_theta;
        for (std::size_t k : off)
            if (dot(u, pts[k] - theta) >= 0.0) mass += w[k];
        depth = std::min(depth, mass);
    }
    return depth;
}

namespace detail {

// Fixed seed for the deterministic intersection subsample below; the result
// depends on the input alone.
inline constexpr std::uint64_t kTukeySubsampleSeed = 0x51ED0C5ull;
inline constexpr std::size_t kTukeyIntersectionCap = 200000;

}  // namespace detail

// Approximate Tukey median: maximize depth over the data points and the
// pairwise intersections of lines through point pairs (the arrangement
// vertices, where the depth maximum lives). Beyond the cap the line pairs
// are subsampled deterministically. Ties at the maximal depth are averaged.
inline Vec2 tukey_median_approx(const PointSet& ps) {
    const std::vector<Vec2>& pts = ps.points();
    const std::size_t n = pts.size();
    std::vector<Vec2> cand(pts.begin(), pts.end());

    if (n >= 2) {
        std::vector<std::pair<std::size_t, std::size_t>> lines;
        lines.reserve(n * (n - 1) / 2);
        for (std::size_t i = 0; i + 1 < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) lines.emplace_back(i, j);

        // The depth maximum lies in the convex hull of the data, so
        // intersections outside the bounding box can never win and are
        // dropped (near-parallel lines meet arbitrarily far away).
        double xlo = pts[0].x, xhi = pts[0].x, ylo = pts[0].y, yhi = pts[0].y;
        for (const Vec2& p : pts) {
            xlo = std::min(xlo, p.x);
            xhi = std::max(xhi, p.x);
            ylo = std::min(ylo, p.y);
            yhi = std::max(yhi, p.y);
        }
        const double margin = ps.sign_tol();
        const double par_tol = 1e-12 * (1.0 + ps.scale()) * (1.0 + ps.scale());
        auto intersect = [&](std::size_t a, std::size_t b) {
            const auto [i1, j1] = lines[a];
            const auto [i2, j2] = lines[b];
            const Vec2 d1 = pts[j1] - pts[i1];
            const Vec2 d2 = pts[j2] - pts[i2];
            const double den = cross(d1, d2);
            if (std::abs(den) <= par_tol) return;
            const double t = cross(pts[i2] - pts[i1], d2) / den;
            const Vec2 p = pts[i1] + t * d1;
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) return;
            if (p.x < xlo - margin || p.x > xhi + margin || p.y < ylo - margin ||
                p.y > yhi + margin)
                return;
            cand.push_back(p);
        };

        const std::size_t L = lines.size();
        const std::size_t pairs = L * (L - 1) / 2;
        if (pairs <= detail::kTukeyIntersectionCap) {
            for (std::size_t a = 0; a + 1 < L; ++a)
                for (std::size_t b = a + 1; b < L; ++b) intersect(a, b);
        } else {
            RandomStream rs(detail::kTukeySubsampleSeed);
            for (std::size_t d = 0; d < detail::kTukeyIntersectionCap; ++d) {
                const std::size_t a = rs.next_u64() % L;
                const std::size_t b = rs.next_u64() % L;
                if (a != b) intersect(a, b);
            }
        }
    }

    // Collapse near-duplicate candidates so the tie average is over distinct
    // locations, then keep the deepest.
    std::sort(cand.begin(), cand.end(), lex_less);
    const double coord_tol = 1e-12 * (1.0 + ps.scale());
    std::vector<Vec2> uniq;
    uniq.reserve(cand.size());
    for (const Vec2& c : cand) {
        if (!uniq.empty() && std::abs(c.x - uniq.back().x) <= coord_tol &&
            std::abs(c.y - uniq.back().y) <= coord_tol)
            continue;
        uniq.push_back(c);
    }

    double best = -1.0;
    std::vector<Vec2> argmax;
    for (const Vec2& c : uniq) {
        const double d = tukey_depth(ps, c);
        if (d > best + 1e-12) {
            best = d;
            argmax.assign(1, c);
        } else if (d >= best - 1e-12) {
            argmax.push_back(c);
        }
    }
    Vec2 avg{};
    for (const Vec2& c : argmax) avg = avg + c;
    return avg / static_cast<double>(argmax.size());
}

}  // namespace qmed
