#pragma once

// Quarter median solvers.
//
// solve_exact enumerates the finite candidate set that is guaranteed to
// contain a solution: for every pair of distinct points take the frame whose
// first axis points from one to the other, and inside each frame test the
// <= 9 grid points built from the two marginal median intervals. The
// canonical frame (alpha = 0) is always tested as well; it is where the
// classical axis-aligned solutions live and it covers the one-point case.
//
// solve_scan is the cheap heuristic: sweep alpha over a grid of [0, pi/2),
// follow the midpoint median map Psi, and watch the mass of the open
// upper-right quadrant. Grid angles are validated directly; around strict
// sign changes of (open mass - 1/4) the sweep refines by bisection over the
// piecewise-constant event structure, whose jump angles are the candidate
// pair directions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "qmed/common.hpp"
#include "qmed/frame.hpp"
#include "qmed/geometry.hpp"
#include "qmed/point_set.hpp"

namespace qmed {

struct CandidateDirection {
    std::size_t i = 0;  // indices into PointSet storage, i < j
    std::size_t j = 0;
    Vec2 b{};           // unit vector from point i to point j
    double alpha = 0.0; // canonical frame angle of the spanned line pair
};

struct QuarterMedianSolution {
    Vec2 theta{};
    Frame frame{};
    MassReport report{};
};

enum class SolveMode { exact, scan };

struct SolveResult {
    // Deduplicated, sorted ascending by (alpha, theta.x, theta.y).
    std::vector<QuarterMedianSolution> solutions;
    SolveMode mode = SolveMode::exact;
    // Number of (frame, grid point) mass checks performed.
    std::size_t candidates_checked = 0;

    // Deterministic representative: the first solution of the median distinct
    // frame angle (ties in theta resolve lexicographically by the sort
    // order). On finite samples the set of validating angles is a window
    // around the population angle; picking its middle group avoids the edge
    // bias an extreme selection (say, the smallest angle) would inject into
    // the frame estimate. Lvalue-only: the reference points into this
    // result's storage.
    const QuarterMedianSolution& canonical() const& {
        if (solutions.empty()) throw internal_error("SolveResult: no solutions");
        // Angles within 1e-12 count as one group, matching the dedupe rule.
        std::size_t groups = 1;
        for (std::size_t k = 1; k < solutions.size(); ++k)
            if (solutions[k].frame.alpha() - solutions[k - 1].frame.alpha() > 1e-12) ++groups;
        const std::size_t target = (groups - 1) / 2;
        std::size_t g = 0;
        std::size_t k = 0;
        while (g < target) {
            ++k;
            if (solutions[k].frame.alpha() - solutions[k - 1].frame.alpha() > 1e-12) ++g;
        }
        return solutions[k];
    }
    const QuarterMedianSolution& canonical() const&& = delete;
};

inline std::vector<CandidateDirection> candidate_directions(const PointSet& ps) {
    if (ps.size() < 2)
        throw degenerate_input("candidate_directions: need at least 2 distinct points");
    const std::vector<Vec2>& pts = ps.points();
    std::vector<CandidateDirection> out;
    out.reserve(ps.size() * (ps.size() - 1) / 2);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const Vec2 d = pts[j] - pts[i];
            const double len = norm(d);
            out.push_back({i, j, d / len, wrap_quarter(std::atan2(d.y, d.x))});
        }
    }
    return out;
}

namespace detail {

struct FrameScratch {
    std::vector<double> s1, s2;
    std::vector<std::pair<double, double>> vw1, vw2;
};

// Evaluate every grid candidate of one frame in a single pass over the
// points: project, take the axis medians, then accumulate the half-plane and
// quadrant masses of all (<= 3) x (<= 3) grid values at once. Sign
// conventions and accumulation order match mass_report exactly, so the
// reports attached to solutions are the ones a direct call would produce.
// Returns the number of candidates checked; appends valid solutions to out.
inline std::size_t solve_frame(const PointSet& ps, const Frame& f, FrameScratch& sc,
                               std::vector<QuarterMedianSolution>& out) {
    const std::vector<Vec2>& pts = ps.points();
    const std::vector<double>& w = ps.weights();
    const std::size_t n = pts.size();
    const double tol = ps.sign_tol();

    sc.s1.resize(n);
    sc.s2.resize(n);
    sc.vw1.resize(n);
    sc.vw2.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Vec2 s = f.to_frame(pts[k]);
        sc.s1[k] = s.x;
        sc.s2[k] = s.y;
        sc.vw1[k] = {s.x, w[k]};
        sc.vw2[k] = {s.y, w[k]};
    }
    std::sort(sc.vw1.begin(), sc.vw1.end());
    std::sort(sc.vw2.begin(), sc.vw2.end());
    const MedianTriple m1 = median_of_sorted(sc.vw1);
    const MedianTriple m2 = median_of_sorted(sc.vw2);

    std::array<double, 3> a{}, b{};
    const std::size_t na = distinct_triple(m1, a);
    const std::size_t nb = distinct_triple(m2, b);

    double hp1[3] = {}, hm1[3] = {}, hp2[3] = {}, hm2[3] = {};
    double qpp[3][3] = {}, qpm[3][3] = {}, qmp[3][3] = {}, qmm[3][3] = {};
    int t1[3], t2[3];
    for (std::size_t k = 0; k < n; ++k) {
        const double wk = w[k];
        for (std::size_t i = 0; i < na; ++i) {
            t1[i] = side_of(sc.s1[k] - a[i], tol);
            if (t1[i] >= 0) hp1[i] += wk;
            if (t1[i] <= 0) hm1[i] += wk;
        }
        for (std::size_t j = 0; j < nb; ++j) {
            t2[j] = side_of(sc.s2[k] - b[j], tol);
            if (t2[j] >= 0) hp2[j] += wk;
            if (t2[j] <= 0) hm2[j] += wk;
        }
        for (std::size_t i = 0; i < na; ++i) {
            if (t1[i] >= 0) {
                for (std::size_t j = 0; j < nb; ++j) {
                    if (t2[j] >= 0) qpp[i][j] += wk;
                    if (t2[j] <= 0) qpm[i][j] += wk;
                }
            }
            if (t1[i] <= 0) {
                for (std::size_t j = 0; j < nb; ++j) {
                    if (t2[j] >= 0) qmp[i][j] += wk;
                    if (t2[j] <= 0) qmm[i][j] += wk;
                }
            }
        }
    }

    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            MassReport r;
            r.half_masses = {hp1[i], hm1[i], hp2[j], hm2[j]};
            r.quad_masses = {qpp[i][j], qpm[i][j], qmp[i][j], qmm[i][j]};
            r.satisfies_halfplane = hp1[i] >= 0.5 - kMassTol && hm1[i] >= 0.5 - kMassTol &&
                                    hp2[j] >= 0.5 - kMassTol && hm2[j] >= 0.5 - kMassTol;
            r.satisfies_quadrant = qpp[i][j] >= 0.25 - kMassTol && qpm[i][j] >= 0.25 - kMassTol &&
                                   qmp[i][j] >= 0.25 - kMassTol && qmm[i][j] >= 0.25 - kMassTol;
            if (r.valid()) out.push_back({f.from_frame({a[i], b[j]}), f, r});
        }
    }
    return na * nb;
}

inline void sort_dedupe_solutions(std::vector<QuarterMedianSolution>& sols, double coord_tol) {
    std::sort(sols.begin(), sols.end(),
              [](const QuarterMedianSolution& u, const QuarterMedianSolution& v) {
                  if (u.frame.alpha() != v.frame.alpha()) return u.frame.alpha() < v.frame.alpha();
                  if (u.theta.x != v.theta.x) return u.theta.x < v.theta.x;
                  return u.theta.y < v.theta.y;
              });
    std::vector<QuarterMedianSolution> kept;
    kept.reserve(sols.size());
    for (const QuarterMedianSolution& s : sols) {
        if (!kept.empty()) {
            const QuarterMedianSolution& p = kept.back();
            if (std::abs(s.frame.alpha() - p.frame.alpha()) <= 1e-12 &&
                std::abs(s.theta.x - p.theta.x) <= coord_tol &&
                std::abs(s.theta.y - p.theta.y) <= coord_tol)
                continue;
        }
        kept.push_back(s);
    }
    sols.swap(kept);
}

inline double open_upper_right_mass(const PointSet& ps, Vec2 theta, double ca, double sa) {
    const double tol = ps.sign_tol();
    const std::vector<Vec2>& pts = ps.points();
    const std::vector<double>& w = ps.weights();
    double m = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const double dx = pts[k].x - theta.x;
        const double dy = pts[k].y - theta.y;
        if (ca * dx + sa * dy > tol && -sa * dx + ca * dy > tol) m += w[k];
    }
    return m;
}

}  // namespace detail

inline SolveResult solve_exact(const PointSet& ps) {
    SolveResult res;
    res.mode = SolveMode::exact;

    // Frame angles to test: canonical axes plus every pair direction.
    // Angles within 1e-12 rad collapse to one representative: directions
    // that are equal modulo pi/2 (slope 2 vs slope -1/2, say) can come out
    // of atan2 an ulp apart, and a rotation that small shifts projections by
    // less than the sign tolerance, so the duplicate frame yields the exact
    // same classifications.
    std::vector<double> alphas;
    alphas.push_back(0.0);
    const std::vector<Vec2>& pts = ps.points();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const Vec2 d = pts[j] - pts[i];
            alphas.push_back(wrap_quarter(std::atan2(d.y, d.x)));
        }
    }
    std::sort(alphas.begin(), alphas.end());
    std::vector<double> kept;
    kept.reserve(alphas.size());
    for (double a : alphas) {
        if (kept.empty() || a - kept.back() > 1e-12)
            kept.push_back(a);
        else if (a == 0.0)
            kept.back() = 0.0;  // prefer the exact axis frame as representative
    }
    alphas.swap(kept);

    detail::FrameScratch sc;
    for (double a : alphas)
        res.candidates_checked += detail::solve_frame(ps, Frame::from_angle(a), sc, res.solutions);

    detail::sort_dedupe_solutions(res.solutions, 1e-12 * (1.0 + ps.scale()));
    if (res.solutions.empty())
        throw internal_error("solve_exact: candidate set contained no valid solution");
    return res;
}

struct ScanPoint {
    double alpha = 0.0;  // raw sweep angle in [0, pi/2)
    double count = 0.0;  // open upper-right quadrant mass at Psi(alpha), times n
};

inline std::vector<ScanPoint> scan_count_curve(const PointSet& ps, std::size_t grid) {
    if (grid < 1) throw invalid_input("scan_count_curve: grid must be positive");
    std::vector<ScanPoint> out;
    out.reserve(grid);
    const double step = kPi / 2 / static_cast<double>(grid);
    for (std::size_t j = 0; j < grid; ++j) {
        const double a = step * static_cast<double>(j);
        const Vec2 theta = psi(ps, Frame::from_angle(a));
        const double mass = detail::open_upper_right_mass(ps, theta, std::cos(a), std::sin(a));
        out.push_back({a, mass * static_cast<double>(ps.size())});
    }
    return out;
}

struct CurvePoint {
    double alpha = 0.0;  // raw sweep angle in [0, pi/2)
    Vec2 theta{};
    bool valid = false;
};

inline std::vector<CurvePoint> median_curve(const PointSet& ps, std::size_t grid) {
    if (grid < 1) throw invalid_input("median_curve: grid must be positive");
    std::vector<CurvePoint> out;
    out.reserve(grid);
    const double step = kPi / 2 / static_cast<double>(grid);
    for (std::size_t j = 0; j < grid; ++j) {
        const double a = step * static_cast<double>(j);
        const Frame f = Frame::from_angle(a);
        const Vec2 theta = psi(ps, f);
        out.push_back({a, theta, mass_report(ps, theta, f).valid()});
    }
    return out;
}

namespace detail {

// Probe one sweep angle: Psi, validation, and the open-count excess.
struct ScanProbe {
    Vec2 theta{};
    MassReport report{};
    double excess = 0.0;  // open upper-right mass - 1/4
};

inline ScanProbe scan_probe(const PointSet& ps, double a) {
    const Frame f = Frame::from_angle(a);
    ScanProbe p;
    p.theta = psi(ps, f);
    p.report = mass_report(ps, p.theta, f);
    p.excess = open_upper_right_mass(ps, p.theta, std::cos(a), std::sin(a)) - 0.25;
    return p;
}

inline int excess_sign(double g) { return g > kMassTol ? 1 : (g < -kMassTol ? -1 : 0); }

}  // namespace detail

inline SolveResult solve_scan(const PointSet& ps, std::size_t grid) {
    if (grid < 1) throw invalid_input("solve_scan: grid must be positive");
    SolveResult res;
    res.mode = SolveMode::scan;

    const double step = kPi / 2 / static_cast<double>(grid);
    std::vector<double> excess(grid);
    auto try_angle = [&](double a) {
        const Frame f = Frame::from_angle(a);
        const Vec2 theta = psi(ps, f);
        const MassReport rep = mass_report(ps, theta, f);
        ++res.candidates_checked;
        if (rep.valid()) res.solutions.push_back({theta, f, rep});
        return detail::open_upper_right_mass(ps, theta, std::cos(a), std::sin(a)) - 0.25;
    };

    for (std::size_t j = 0; j < grid; ++j) excess[j] = try_angle(step * static_cast<double>(j));

    // Refine around strict sign changes of the open-count excess. The excess
    // is piecewise constant in alpha with jumps only where a quadrant
    // boundary sweeps over a data point, i.e. at candidate pair angles, so
    // bisection runs over that event list.
    if (ps.size() >= 2) {
        for (std::size_t j = 0; j + 1 < grid; ++j) {
            const int sl = detail::excess_sign(excess[j]);
            const int sr = detail::excess_sign(excess[j + 1]);
            if (sl * sr >= 0) continue;
            const double lo = step * static_cast<double>(j);
            const double hi = step * static_cast<double>(j + 1);

            std::vector<double> events;
            const std::vector<Vec2>& pts = ps.points();
            for (std::size_t p = 0; p + 1 < pts.size(); ++p) {
                for (std::size_t q = p + 1; q < pts.size(); ++q) {
                    const Vec2 d = pts[q] - pts[p];
                    double a = wrap_quarter(std::atan2(d.y, d.x));
                    if (a < 0) a += kPi / 2;  // to the sweep range [0, pi/2)
                    if (a > lo && a < hi) events.push_back(a);
                }
            }
            std::sort(events.begin(), events.end());
            events.erase(std::unique(events.begin(), events.end()), events.end());
            if (events.empty()) continue;

            std::vector<double> bounds;
            bounds.push_back(lo);
            bounds.insert(bounds.end(), events.begin(), events.end());
            bounds.push_back(hi);
            auto mid = [&](std::size_t k) { return 0.5 * (bounds[k] + bounds[k + 1]); };

            std::size_t li = 0, hi_i = bounds.size() - 2;
            const int s_left = detail::excess_sign(try_angle(mid(li)));
            const int s_right = detail::excess_sign(try_angle(mid(hi_i)));
            if (s_left == s_right) continue;  // probes already validated above
            while (hi_i - li > 1) {
                const std::size_t m = li + (hi_i - li) / 2;
                const int sm = detail::excess_sign(try_angle(mid(m)));
                if (sm == s_left)
                    li = m;
                else
                    hi_i = m;
            }
            try_angle(bounds[hi_i]);  // the crossing event angle itself
        }
    }

    detail::sort_dedupe_solutions(res.solutions, 1e-12 * (1.0 + ps.scale()));
    if (res.solutions.empty())
        throw not_found("solve_scan: no angle on the grid validated; increase grid");
    return res;
}

}  // namespace qmed
