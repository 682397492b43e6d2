// Acceptance harness. Each run checks one numbered criterion and prints
// exactly one "criterion N: PASS" or "criterion N: FAIL" line on stdout;
// measurements and failure details go to stderr. Tolerances and seeds are
// pinned here so a rerun is the same experiment, not a fresh roll.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <qmed/common.hpp>
#include <qmed/elliptical.hpp>
#include <qmed/estimators.hpp>
#include <qmed/generator.hpp>
#include <qmed/geometry.hpp>
#include <qmed/montecarlo.hpp>
#include <qmed/point_set.hpp>
#include <qmed/random.hpp>
#include <qmed/solver.hpp>

using namespace qmed;

namespace {

// Shared master seed for every Monte Carlo criterion; chosen once and frozen
// together with the bands measured under it.
constexpr std::uint64_t kAcceptanceSeed = 20260823ull;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Checker {
    bool ok = true;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            std::fprintf(stderr, "  FAIL: %s\n", what.c_str());
        }
    }

    void expect_close(double got, double want, double tol, const std::string& what) {
        const bool cond = std::isfinite(got) && std::abs(got - want) <= tol;
        if (!cond) {
            ok = false;
            std::fprintf(stderr, "  FAIL: %s: got %.17g want %.17g (tol %.3g)\n", what.c_str(),
                         got, want, tol);
        }
    }

    void expect_ratio(double got, double want, double rel, const std::string& what) {
        const bool cond = std::isfinite(got) && std::abs(got / want - 1.0) <= rel;
        std::fprintf(stderr, "  %s: got %.9g want %.9g ratio %.4f (band +-%.0f%%)%s\n",
                     what.c_str(), got, want, got / want, rel * 100.0, cond ? "" : "  <- FAIL");
        if (!cond) ok = false;
    }

    void expect_runtime(double elapsed, double bound) {
        std::fprintf(stderr, "  runtime %.2f s (bound %.0f s)\n", elapsed, bound);
        if (elapsed >= bound) {
            ok = false;
            std::fprintf(stderr, "  FAIL: runtime bound exceeded\n");
        }
    }
};

std::vector<Vec2> uniform_points(RandomStream& rs, std::size_t n, double spread) {
    std::vector<Vec2> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = spread * (2.0 * rs.uniform01() - 1.0);
        const double y = spread * (2.0 * rs.uniform01() - 1.0);
        pts.push_back({x, y});
    }
    return pts;
}

bool same_solution_lists(const SolveResult& a, const SolveResult& b) {
    if (a.solutions.size() != b.solutions.size()) return false;
    for (std::size_t k = 0; k < a.solutions.size(); ++k) {
        const QuarterMedianSolution& s = a.solutions[k];
        const QuarterMedianSolution& t = b.solutions[k];
        if (s.theta.x != t.theta.x || s.theta.y != t.theta.y) return false;
        if (s.frame.alpha() != t.frame.alpha()) return false;
        for (int i = 0; i < 4; ++i) {
            if (s.report.half_masses[i] != t.report.half_masses[i]) return false;
            if (s.report.quad_masses[i] != t.report.quad_masses[i]) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- criterion 1

bool criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;

    const struct {
        const char* family;
        double target;
        double tol;
    } sig[] = {
        {"normal", kPi / 2.0, 1e-12},
        {"double_exponential", kPi * kPi, 1e-12},
        {"cauchy", kPi * kPi / 4.0, 1e-12},
        {"pearson2", 25.0 * kPi * kPi / 1024.0, 1e-12},
        {"logistic", 1.35901156, 1e-6},
    };
    for (const auto& row : sig) {
        const double got = sigma2_qmed(DensityGenerator::from_name(row.family));
        c.expect_close(got, row.target, row.tol * std::max(1.0, std::abs(row.target)),
                       std::string("sigma2_qmed ") + row.family);
    }

    const std::vector<EfficiencyRow> table = efficiency_table();
    const struct {
        const char* family;
        double eff;
    } eff[] = {
        {"normal", 2.0 / kPi},
        {"double_exponential", 8.0 / (kPi * kPi)},
        {"cauchy", 20.0 / (3.0 * kPi * kPi)},
        {"pearson2", 256.0 / (75.0 * kPi * kPi)},
        {"logistic", 0.46253446},
    };
    c.expect(table.size() == 5, "efficiency table has five rows");
    for (const auto& want : eff) {
        bool found = false;
        for (const EfficiencyRow& row : table)
            if (row.family == want.family) {
                found = true;
                c.expect_close(row.eff_qmed, want.eff, 1e-8,
                               std::string("eff_qmed ") + want.family);
            }
        c.expect(found, std::string("efficiency row present: ") + want.family);
    }

    c.expect_runtime(seconds_since(t0), 1.0);
    return c.ok;
}

// ---------------------------------------------------------------- criterion 2

bool criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    for (const char* fam :
         {"normal", "double_exponential", "cauchy", "pearson2", "logistic"}) {
        const DensityGenerator g = DensityGenerator::from_name(fam);
        c.expect_close(ck_quadrature(g, 1), g.c1(), 1e-8, std::string("c1 ") + fam);
        c.expect_close(ck_quadrature(g, 2), g.c2(), 1e-8, std::string("c2 ") + fam);
    }
    c.expect_runtime(seconds_since(t0), 5.0);
    return c.ok;
}

// ---------------------------------------------------------------- criterion 3

bool criterion3() {
    Checker c;

    const std::vector<Vec2> tri_pts{{0, 0}, {0.5, 1}, {1, 0.5}};
    const PointSet tri(tri_pts);
    const SolveResult tr = solve_exact(tri);
    bool tri_hit = false;
    for (const QuarterMedianSolution& s : tr.solutions)
        if (s.theta.x == 0.5 && s.theta.y == 0.5 && s.report.valid()) tri_hit = true;
    c.expect(tri_hit, "three-point set: (0.5, 0.5) validates");
    const MassReport bad1 = mass_report(tri, {1.0, 0.5}, Frame{});
    c.expect(!bad1.satisfies_halfplane, "three-point set: (1, 0.5) fails the half-plane test");

    const std::vector<Vec2> six_pts{{1, 1}, {2, 1}, {1, 2}, {2, 2}, {3, 1}, {3, 3}};
    const PointSet six(six_pts);
    const SolveResult sr = solve_exact(six);
    bool six_hit = false;
    for (const QuarterMedianSolution& s : sr.solutions)
        if (s.theta.x == 2.0 && s.theta.y == 2.0 && s.report.valid()) six_hit = true;
    c.expect(six_hit, "six-point set: (2, 2) validates");
    const MassReport bad2 = mass_report(six, {1.5, 1.0}, Frame{});
    c.expect(!bad2.valid(), "six-point set: (1.5, 1) fails");
    for (const QuarterMedianSolution& s : sr.solutions)
        c.expect(!(s.theta.x == 1.5 && s.theta.y == 1.0),
                 "six-point set: (1.5, 1) absent from solutions");

    // Bitwise determinism: fresh runs and permuted input produce the same
    // solution list.
    c.expect(same_solution_lists(tr, solve_exact(PointSet(tri_pts))),
             "three-point rerun bit-identical");
    std::vector<Vec2> six_perm{{3, 3}, {1, 2}, {2, 2}, {1, 1}, {3, 1}, {2, 1}};
    c.expect(same_solution_lists(sr, solve_exact(PointSet(six_perm))),
             "six-point permuted rerun bit-identical");
    return c.ok;
}

// ---------------------------------------------------------------- criterion 4

bool criterion4() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    const std::array<DensityGenerator, 5> gens{
        DensityGenerator::from_name("normal"),
        DensityGenerator::from_name("double_exponential"),
        DensityGenerator::from_name("cauchy"),
        DensityGenerator::from_name("pearson2"),
        DensityGenerator::from_name("logistic"),
    };
    const RandomStream master(kAcceptanceSeed);
    const std::size_t total = 10000;
    std::size_t failures = 0;

    for (std::size_t iter = 0; iter < total; ++iter) {
        RandomStream rs = master.substream(iter);
        // Cube the size draw so most datasets stay small while the large end
        // of 1..200 is still exercised; a flat draw would spend nearly all
        // wall time on the quadratic-candidate large instances.
        const double u = rs.uniform01();
        const std::size_t size = 1 + static_cast<std::size_t>(199.0 * u * u * u);
        const int kind = static_cast<int>(iter % 7);

        try {
            std::vector<Vec2> pts;
            if (kind < 5) {
                const Vec2 mu{10.0 * rs.uniform01() - 5.0, 10.0 * rs.uniform01() - 5.0};
                const double l1 = 0.3 + 2.0 * rs.uniform01();
                const double l2 = l1 * (0.05 + 0.95 * rs.uniform01());
                const double ori = (rs.uniform01() - 0.5) * kPi / 2.0;
                const EllipticalModel model(gens[kind], mu, l1, l2, ori);
                pts = model.sample(size, rs).points();
            } else if (kind == 5) {
                // Collinear, with quantized parameters to force duplicates on
                // half of the sets.
                const Vec2 a{4.0 * rs.uniform01() - 2.0, 4.0 * rs.uniform01() - 2.0};
                const double ang = 2.0 * kPi * rs.uniform01();
                const Vec2 d{std::cos(ang), std::sin(ang)};
                const bool quantize = (iter / 7) % 2 == 0;
                for (std::size_t i = 0; i < size; ++i) {
                    double t = 6.0 * rs.uniform01() - 3.0;
                    if (quantize) t = std::floor(t * 2.0) / 2.0;
                    pts.push_back(a + t * d);
                }
            } else {
                // Duplicate-heavy: a pool of at most four distinct points.
                const std::size_t m = 1 + rs.next_u64() % 4;
                std::vector<Vec2> pool = uniform_points(rs, m, 3.0);
                for (std::size_t i = 0; i < size; ++i)
                    pts.push_back(pool[rs.next_u64() % m]);
            }

            const PointSet ps(pts);
            const SolveResult res = solve_exact(ps);
            const QuarterMedianSolution& sol = res.canonical();
            if (res.solutions.empty() ||
                !mass_report(ps, sol.theta, sol.frame).valid())
                throw numerical_error("canonical solution does not re-validate");
        } catch (const std::exception& e) {
            ++failures;
            if (failures <= 5)
                std::fprintf(stderr, "  dataset %zu (kind %d, size %zu): %s\n", iter, kind,
                             size, e.what());
        }
    }

    std::fprintf(stderr, "  %zu datasets, %zu failures\n", total, failures);
    c.expect(failures == 0, "zero solve failures");
    c.expect_runtime(seconds_since(t0), 600.0);
    return c.ok;
}

// ---------------------------------------------------------------- criterion 5

bool criterion5() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    const RandomStream master(kAcceptanceSeed + 1);
    const std::size_t total = 1000;
    std::size_t bad_mass = 0, bad_perm = 0;

    for (std::size_t iter = 0; iter < total; ++iter) {
        RandomStream rs = master.substream(iter);
        const std::size_t n = 1 + rs.next_u64() % 60;
        std::vector<Vec2> pts = uniform_points(rs, n, 2.0);
        const double phi = 2.0 * kPi * rs.uniform01();
        const double s = 0.5 + 2.5 * rs.uniform01();
        const Vec2 shift{10.0 * rs.uniform01() - 5.0, 10.0 * rs.uniform01() - 5.0};

        const PointSet ps(pts);
        const SolveResult base = solve_exact(ps);
        const QuarterMedianSolution& sol = base.canonical();

        const double co = std::cos(phi), sn = std::sin(phi);
        auto map = [&](Vec2 p) {
            return Vec2{s * (co * p.x - sn * p.y) + shift.x,
                        s * (sn * p.x + co * p.y) + shift.y};
        };
        std::vector<Vec2> moved;
        moved.reserve(n);
        for (const Vec2& p : pts) moved.push_back(map(p));
        // Evaluate against the literally rotated axes (unreduced angle):
        // canonical Frame reduction into [-pi/4, pi/4) would relabel the
        // half-plane and quadrant slots in three quarters of the tuples.
        const PointSet tps(moved);
        const double raw = sol.frame.alpha() + phi;
        const MassReport img = detail::mass_report_raw(tps, map(sol.theta), std::cos(raw),
                                                       std::sin(raw), tps.sign_tol());
        bool mass_ok = img.valid();
        for (int i = 0; i < 4; ++i) {
            mass_ok = mass_ok && img.half_masses[i] == sol.report.half_masses[i];
            mass_ok = mass_ok && img.quad_masses[i] == sol.report.quad_masses[i];
        }
        if (!mass_ok) {
            ++bad_mass;
            if (bad_mass <= 3)
                std::fprintf(stderr,
                             "  tuple %zu: transformed canonical masses differ or invalid\n",
                             iter);
        }

        // Row permutation must not change any output bit.
        std::vector<Vec2> perm = pts;
        for (std::size_t k = perm.size(); k > 1; --k)
            std::swap(perm[k - 1], perm[rs.next_u64() % k]);
        if (!same_solution_lists(base, solve_exact(PointSet(perm)))) {
            ++bad_perm;
            if (bad_perm <= 3)
                std::fprintf(stderr, "  tuple %zu: permuted rows changed the output\n", iter);
        }
    }

    std::fprintf(stderr, "  %zu tuples, %zu mass mismatches, %zu permutation mismatches\n",
                 total, bad_mass, bad_perm);
    c.expect(bad_mass == 0, "transformed canonical solutions validate with exact masses");
    c.expect(bad_perm == 0, "row permutations leave output bit-identical");
    c.expect_runtime(seconds_since(t0), 120.0);
    return c.ok;
}

// ---------------------------------------------------------------- criterion 6

bool criterion6() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    const struct {
        double lambda;
        double published_l1, published_l2;  // published reps=1e4 values for this model
    } cells[] = {
        {0.1, 1.550401, 0.157899},
        {0.5, 1.551297, 0.767945},
    };
    for (const auto& cell : cells) {
        ExperimentConfig cfg{
            EllipticalModel(DensityGenerator::from_name("normal"), {0, 0}, 1.0, cell.lambda,
                            0.0),
            100,
            1000,
            kAcceptanceSeed,
            {Estimator::qmed},
            1,
            true,
        };
        const ExperimentReport rep = run_experiment(cfg);
        const EstimatorStats& st = rep.for_estimator(Estimator::qmed);
        const double want1 = kPi / 2.0, want2 = kPi * cell.lambda / 2.0;
        char label[64];
        std::snprintf(label, sizeof label, "lambda=%g l1", cell.lambda);
        c.expect_ratio(st.l_hat[0], want1, 0.10, label);
        std::snprintf(label, sizeof label, "lambda=%g l2", cell.lambda);
        c.expect_ratio(st.l_hat[1], want2, 0.10, label);

        const bool in1 = st.l_lo[0] <= cell.published_l1 && cell.published_l1 <= st.l_hi[0];
        const bool in2 = st.l_lo[1] <= cell.published_l2 && cell.published_l2 <= st.l_hi[1];
        std::fprintf(stderr,
                     "  lambda=%g 95%% bands [%.6f, %.6f] [%.6f, %.6f] vs published "
                     "%.6f %.6f\n",
                     cell.lambda, st.l_lo[0], st.l_hi[0], st.l_lo[1], st.l_hi[1],
                     cell.published_l1, cell.published_l2);
        c.expect(in1 && in2, "published reps=1e4 values inside the 95% bands");
    }
    c.expect_runtime(seconds_since(t0), 900.0);
    return c.ok;
}

// ---------------------------------------------------------------- criterion 7

bool criterion7() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    const EllipticalModel model(DensityGenerator::from_name("normal"), {0, 0}, 1.0, 0.25,
                                0.0);
    const AngleCltResult res = angle_clt_check(model, 200, 2000, kAcceptanceSeed, 1);
    std::fprintf(stderr, "  angle mean deviation %.6f\n", res.mean_dev);
    c.expect_ratio(res.empirical_n_var, res.theoretical, 0.15, "n*Var(alpha_n - alpha)");
    c.expect(std::abs(res.corr_x) < 0.1 && std::abs(res.corr_y) < 0.1,
             "angle-location correlations below 0.1 (got " + std::to_string(res.corr_x) +
                 ", " + std::to_string(res.corr_y) + ")");
    c.expect_runtime(seconds_since(t0), 900.0);
    return c.ok;
}

// ---------------------------------------------------------------- criterion 8

bool criterion8() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    const struct {
        const char* family;
        double want;
    } rows[] = {
        {"normal", 4.0 / kPi},
        {"double_exponential", 8.0},
        {"cauchy", 2.0},
    };
    for (const auto& row : rows)
        c.expect_close(smed_spherical_variance(DensityGenerator::from_name(row.family)),
                       row.want, 1e-8, std::string("smed variance ") + row.family);

    ExperimentConfig cfg{
        EllipticalModel(DensityGenerator::from_name("normal"), {0, 0}, 1.0, 1.0, 0.0),
        100,
        1000,
        kAcceptanceSeed,
        {Estimator::smed},
        1,
        true,
    };
    const ExperimentReport rep = run_experiment(cfg);
    const EstimatorStats& st = rep.for_estimator(Estimator::smed);
    c.expect_ratio(st.l_hat[0], 4.0 / kPi, 0.10, "smed l1");
    c.expect_ratio(st.l_hat[1], 4.0 / kPi, 0.10, "smed l2");
    c.expect_runtime(seconds_since(t0), 600.0);
    return c.ok;
}

// ---------------------------------------------------------------- criterion 9

// Independent Oja objective: average triangle area over data pairs.
double oja_brute_objective(const std::vector<Vec2>& pts, Vec2 theta) {
    const double w = 1.0 / static_cast<double>(pts.size());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        for (std::size_t l = k + 1; l < pts.size(); ++l)
            total += w * w * 0.5 * std::abs(cross(pts[k] - theta, pts[l] - theta));
    return total;
}

Vec2 oja_grid_minimizer(const std::vector<Vec2>& pts) {
    double xlo = pts[0].x, xhi = pts[0].x, ylo = pts[0].y, yhi = pts[0].y;
    for (const Vec2& p : pts) {
        xlo = std::min(xlo, p.x);
        xhi = std::max(xhi, p.x);
        ylo = std::min(ylo, p.y);
        yhi = std::max(yhi, p.y);
    }
    Vec2 center{0.5 * (xlo + xhi), 0.5 * (ylo + yhi)};
    double hx = 0.55 * (xhi - xlo) + 1e-3, hy = 0.55 * (yhi - ylo) + 1e-3;
    Vec2 best = center;
    for (int level = 0; level < 3; ++level) {
        double best_f = oja_brute_objective(pts, best);
        Vec2 arg = best;
        const int grid = 80;
        for (int i = 0; i <= grid; ++i)
            for (int j = 0; j <= grid; ++j) {
                const Vec2 p{center.x - hx + 2.0 * hx * i / grid,
                             center.y - hy + 2.0 * hy * j / grid};
                const double f = oja_brute_objective(pts, p);
                if (f < best_f) {
                    best_f = f;
                    arg = p;
                }
            }
        best = arg;
        center = arg;
        // Zoom to three cells around the winner; the objective is convex, so
        // the minimizer cannot hide outside the refined box.
        hx = 3.0 * (2.0 * hx / grid);
        hy = 3.0 * (2.0 * hy / grid);
    }
    return best;
}

// Independent Tukey depth: enumerate the arcs between directions at which a
// data point enters or leaves the closed half-plane, and probe each arc.
double tukey_brute_depth(const std::vector<Vec2>& pts, Vec2 theta) {
    const double w = 1.0 / static_cast<double>(pts.size());
    std::vector<double> events;
    for (const Vec2& p : pts) {
        const Vec2 d = p - theta;
        if (d.x == 0.0 && d.y == 0.0) continue;
        const double a = std::atan2(d.y, d.x);
        for (double e : {a + kPi / 2.0, a - kPi / 2.0}) {
            while (e < 0.0) e += 2.0 * kPi;
            while (e >= 2.0 * kPi) e -= 2.0 * kPi;
            events.push_back(e);
        }
    }
    if (events.empty()) return 1.0;  // every data point sits at theta
    std::sort(events.begin(), events.end());
    events.push_back(events.front() + 2.0 * kPi);

    double depth = 1.0;
    for (std::size_t k = 0; k + 1 < events.size(); ++k) {
        // Sub-1e-9 arcs are float artifacts of one geometric breakpoint
        // (collinear points give the same perpendicular up to rounding);
        // probing inside them would read rounding noise.
        if (events[k + 1] - events[k] < 1e-9) continue;
        for (double frac : {0.25, 0.5, 0.75}) {
            const double ang = events[k] + frac * (events[k + 1] - events[k]);
            const Vec2 u{std::cos(ang), std::sin(ang)};
            double mass = 0.0;
            for (const Vec2& p : pts)
                if (dot(u, p - theta) >= 0.0) mass += w;
            depth = std::min(depth, mass);
        }
    }
    return depth;
}

bool criterion9() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;

    const RandomStream master(kAcceptanceSeed + 2);
    for (std::size_t set = 0; set < 30; ++set) {
        RandomStream rs = master.substream(set);
        const std::size_t n = 5 + rs.next_u64() % 8;  // 5..12
        const std::vector<Vec2> pts = uniform_points(rs, n, 2.0);
        const PointSet ps(pts);
        const Vec2 ours = oja_median(ps);
        const Vec2 grid = oja_grid_minimizer(pts);
        const double dist = norm(ours - grid);
        bool pass = dist <= 1e-3;
        if (!pass) {
            // The objective can be exactly flat on a region; the grid argmin
            // is then one of many tied minimizers, picked by scan order. Our
            // answer is good if a grid point next to it ties the brute-force
            // optimum: that point is itself a dense-grid minimizer and lies
            // within 1e-3 of ours by construction.
            const double f_grid = oja_brute_objective(pts, grid);
            const double tie = 1e-12 * (1.0 + std::abs(f_grid));
            for (int i = -10; i <= 10 && !pass; ++i)
                for (int j = -10; j <= 10 && !pass; ++j) {
                    const Vec2 g{ours.x + 1e-4 * i, ours.y + 1e-4 * j};
                    if (norm(g - ours) <= 1e-3 && oja_brute_objective(pts, g) <= f_grid + tie)
                        pass = true;
                }
        }
        if (!pass) {
            c.expect(false, "oja set " + std::to_string(set) + ": |ours - grid| = " +
                                std::to_string(dist));
            std::fprintf(stderr, "    ours (%.9f, %.9f) f=%.12g; grid (%.9f, %.9f) f=%.12g\n",
                         ours.x, ours.y, oja_brute_objective(pts, ours), grid.x, grid.y,
                         oja_brute_objective(pts, grid));
        }
    }

    std::size_t depth_checks = 0, depth_bad = 0;
    auto check_depth = [&](const std::vector<Vec2>& pts, Vec2 at) {
        const PointSet ps(pts);
        const double lib = tukey_depth(ps, at);
        const double oracle = tukey_brute_depth(pts, at);
        ++depth_checks;
        if (lib != oracle) {
            ++depth_bad;
            if (depth_bad <= 5)
                std::fprintf(stderr, "  depth mismatch at (%.9f, %.9f): lib %.17g oracle %.17g\n",
                             at.x, at.y, lib, oracle);
        }
    };
    for (std::size_t set = 0; set < 25; ++set) {
        RandomStream rs = master.substream(1000 + set);
        const std::size_t n = 1 + rs.next_u64() % 12;  // 1..12
        const std::vector<Vec2> pts = uniform_points(rs, n, 2.0);
        const PointSet ps(pts);
        for (const Vec2& p : pts) check_depth(pts, p);
        check_depth(pts, sample_mean(ps));
        check_depth(pts, psi(ps, Frame{}));
        check_depth(pts, {2.0 * rs.uniform01() - 1.0, 2.0 * rs.uniform01() - 1.0});
        check_depth(pts, tukey_median_approx(ps));
    }
    // Structured sets with boundary alignments.
    const std::vector<Vec2> square{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    for (const Vec2& at : {Vec2{0.5, 0.5}, Vec2{0, 0}, Vec2{0.5, 0}, Vec2{2, 2}})
        check_depth(square, at);
    const std::vector<Vec2> line{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}};
    for (const Vec2& at : {Vec2{2, 0}, Vec2{0, 0}, Vec2{2, 1}}) check_depth(line, at);

    std::fprintf(stderr, "  %zu depth comparisons, %zu mismatches\n", depth_checks, depth_bad);
    c.expect(depth_bad == 0, "tukey_depth matches the direction-enumeration oracle exactly");
    c.expect_runtime(seconds_since(t0), 120.0);
    return c.ok;
}

// --------------------------------------------------------------- criterion 10

struct CliResult {
    int status = -1;
    std::string out;
};

CliResult run_cli(const std::string& cli, const std::string& args, const std::string& scratch) {
    const std::string path = scratch + "/stdout.bin";
    const std::string cmd = cli + " " + args + " > " + path + " 2>/dev/null";
    CliResult r;
    r.status = std::system(cmd.c_str());
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool criterion10(const std::string& cli) {
    Checker c;
    const std::string scratch = "/tmp/qmed_acceptance";
    std::filesystem::create_directories(scratch);

    const std::string data = scratch + "/points.csv";
    {
        const CliResult s = run_cli(
            cli,
            "sample --family logistic --mu 0.5 -1 --lambda1 2 --lambda2 0.5 "
            "--orientation 0.3 --n 40 --seed 99",
            scratch);
        c.expect(s.status == 0, "sample exits 0");
        std::ofstream(data, std::ios::binary) << s.out;
    }

    // Stdout-only commands: run twice, expect byte-identical output.
    const std::vector<std::pair<std::string, std::string>> stdout_cmds = {
        {"efficiencies", "efficiencies"},
        {"sample", "sample --family cauchy --mu 0 0 --lambda1 1 --lambda2 0.2 "
                   "--orientation -0.1 --n 25 --seed 4207"},
        {"solve exact", "solve --input " + data + " --method exact"},
        {"solve scan", "solve --input " + data + " --method scan --grid 720"},
        {"simulate", "simulate --family normal --lambda1 1 --lambda2 0.5 --n 25 --reps 40 "
                     "--seed 7 --estimators mean,qmed,smed,omed,tmed --workers 1"},
    };
    for (const auto& [label, args] : stdout_cmds) {
        const CliResult a = run_cli(cli, args, scratch);
        const CliResult b = run_cli(cli, args, scratch);
        c.expect(a.status == 0 && b.status == 0, label + " exits 0");
        c.expect(!a.out.empty(), label + " produces output");
        c.expect(a.out == b.out, label + " rerun is byte-identical");
    }

    // File-writing commands: compare emitted artifacts across reruns.
    const std::string curve_args = "curve --input " + data + " --grid 360 --out-csv " +
                                   scratch + "/curve.csv --out-svg " + scratch + "/curve.svg";
    const std::string scan_args = "scan --input " + data + " --grid 360 --out-csv " +
                                  scratch + "/scan.csv --out-svg " + scratch + "/scan.svg";
    for (const auto& [label, args, files] :
         std::vector<std::tuple<std::string, std::string, std::vector<std::string>>>{
             {"curve", curve_args, {scratch + "/curve.csv", scratch + "/curve.svg"}},
             {"scan", scan_args, {scratch + "/scan.csv", scratch + "/scan.svg"}}}) {
        c.expect(run_cli(cli, args, scratch).status == 0, label + " exits 0");
        std::vector<std::string> first;
        for (const std::string& f : files) first.push_back(slurp(f));
        c.expect(run_cli(cli, args, scratch).status == 0, label + " rerun exits 0");
        for (std::size_t k = 0; k < files.size(); ++k)
            c.expect(!first[k].empty() && slurp(files[k]) == first[k],
                     label + " artifact byte-identical: " + files[k]);
    }

    // Worker count is a scheduling knob only.
    const std::string sim = "simulate --family pearson2 --lambda1 1.5 --lambda2 0.4 "
                            "--n 30 --reps 60 --seed 11 --estimators mean,qmed,smed";
    const CliResult w1 = run_cli(cli, sim + " --workers 1", scratch);
    const CliResult w3 = run_cli(cli, sim + " --workers 3", scratch);
    const CliResult w0 = run_cli(cli, sim + " --workers 0", scratch);
    c.expect(w1.status == 0 && w3.status == 0 && w0.status == 0, "simulate exits 0");
    c.expect(!w1.out.empty() && w1.out == w3.out && w1.out == w0.out,
             "simulate output identical for workers 1, 3 and 0");

    return c.ok;
}

}  // namespace

int main(int argc, char** argv) {
    int criterion = 0;
    std::string cli;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc)
            criterion = std::atoi(argv[++i]);
        else if (arg == "--cli" && i + 1 < argc)
            cli = argv[++i];
    }
    if (criterion < 1 || criterion > 10) {
        std::fprintf(stderr, "usage: %s --criterion N [--cli PATH]\n", argv[0]);
        return 2;
    }
    if (criterion == 10 && cli.empty()) {
        std::fprintf(stderr, "criterion 10 needs --cli PATH\n");
        return 2;
    }

    bool ok = false;
    try {
        switch (criterion) {
            case 1: ok = criterion1(); break;
            case 2: ok = criterion2(); break;
            case 3: ok = criterion3(); break;
            case 4: ok = criterion4(); break;
            case 5: ok = criterion5(); break;
            case 6: ok = criterion6(); break;
            case 7: ok = criterion7(); break;
            case 8: ok = criterion8(); break;
            case 9: ok = criterion9(); break;
            case 10: ok = criterion10(cli); break;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "  unexpected exception: %s\n", e.what());
        ok = false;
    }

    std::printf("criterion %d: %s\n", criterion, ok ? "PASS" : "FAIL");
    return ok ? 0 : 1;
}
