#pragma once

// Seeded replication harness: draw samples from an elliptical model, apply
// the requested location estimators, and summarize the sqrt(n)-scaled
// deviations from the true center (empirical mean, covariance, eigenvalues
// with 95% bands). For the quarter median the frame angle is tracked too.
//
// Reproducibility contract: replication r always uses the substream
// (master_seed, r), results are stored per replication, and all reductions
// run in a fixed serial order after the workers join. Reports are therefore
// bit-identical across runs and across worker counts.

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qmed/common.hpp"
#include "qmed/elliptical.hpp"
#include "qmed/estimators.hpp"
#include "qmed/point_set.hpp"
#include "qmed/random.hpp"
#include "qmed/solver.hpp"

namespace qmed {

enum class Estimator { mean, qmed, smed, omed, tmed };

inline const char* estimator_name(Estimator e) {
    switch (e) {
        case Estimator::mean: return "mean";
        case Estimator::qmed: return "qmed";
        case Estimator::smed: return "smed";
        case Estimator::omed: return "omed";
        case Estimator::tmed: return "tmed";
    }
    throw internal_error("estimator_name: unhandled id");
}

inline Estimator estimator_from_name(std::string_view name) {
    if (name == "mean") return Estimator::mean;
    if (name == "qmed") return Estimator::qmed;
    if (name == "smed") return Estimator::smed;
    if (name == "omed") return Estimator::omed;
    if (name == "tmed") return Estimator::tmed;
    throw invalid_input("unknown estimator: " + std::string(name));
}

struct ExperimentConfig {
    EllipticalModel model;
    std::size_t n = 100;
    std::size_t reps = 1000;
    std::uint64_t master_seed = 1;
    std::vector<Estimator> estimators{Estimator::qmed};
    unsigned workers = 1;  // 0 picks hardware concurrency
    bool strict = false;   // rethrow per-replication estimator failures
};

// Frame-angle summary for the quarter median: wrapped deviations
// alpha_n - alpha in (-pi/4, pi/4], their n-scaled variance, and the
// correlation with the scaled location deviations (asymptotically zero).
struct AngleStats {
    double mean_dev = 0.0;
    double n_var = 0.0;
    double corr_x = 0.0;
    double corr_y = 0.0;
};

struct EstimatorStats {
    Estimator id = Estimator::mean;
    Vec2 m_hat{};                          // mean of sqrt(n) * (estimate - mu)
    Mat2 cov{};                            // sample covariance of the same
    std::array<double, 2> l_hat{};         // its eigenvalues, descending
    std::array<double, 2> l_lo{};          // 95% band per eigenvalue
    std::array<double, 2> l_hi{};
    std::array<double, 2> l_lo99{};        // 99% band
    std::array<double, 2> l_hi99{};
    std::size_t excluded = 0;              // replications dropped by failures
    std::optional<AngleStats> angle;       // qmed only
};

struct ExperimentReport {
    std::size_t n = 0;
    std::size_t reps = 0;
    std::uint64_t master_seed = 0;
    std::vector<EstimatorStats> stats;
    double wall_seconds = 0.0;  // informational; not part of serialized artifacts

    const EstimatorStats& for_estimator(Estimator e) const {
        for (const EstimatorStats& s : stats)
            if (s.id == e) return s;
        throw invalid_input("report has no entry for estimator " +
                            std::string(estimator_name(e)));
    }
};

namespace detail {

// Fixed-shape summation: the split points depend only on the index range,
// so the result is independent of how the terms were produced.
template <class F>
double pairwise_sum(std::size_t lo, std::size_t hi, const F& term) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term);
}

struct RepRecord {
    Vec2 dev{};          // sqrt(n) * (estimate - mu)
    double angle_dev{};  // qmed only: wrapped alpha_n - alpha
    bool ok = false;
    std::string error;
};

}  // namespace detail

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    if (cfg.n < 4) throw invalid_input("run_experiment: need n >= 4");
    if (cfg.reps < 2) throw invalid_input("run_experiment: need reps >= 2");
    if (cfg.estimators.empty())
        throw invalid_input("run_experiment: estimator list is empty");
    std::vector<Estimator> ests;
    for (Estimator e : cfg.estimators)
        if (std::find(ests.begin(), ests.end(), e) == ests.end()) ests.push_back(e);

    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t ne = ests.size();
    const double sqn = std::sqrt(static_cast<double>(cfg.n));
    const Vec2 mu = cfg.model.mu();
    const double alpha_true = cfg.model.canonical_alpha();

    std::vector<std::vector<detail::RepRecord>> rec(
        ne, std::vector<detail::RepRecord>(cfg.reps));

    unsigned workers = cfg.workers == 0 ? std::thread::hardware_concurrency() : cfg.workers;
    if (workers == 0) workers = 1;
    workers = static_cast<unsigned>(
        std::min<std::size_t>(workers, cfg.reps));

    std::atomic<std::size_t> next{0};
    auto body = [&] {
        for (;;) {
            const std::size_t r = next.fetch_add(1);
            if (r >= cfg.reps) return;
            RandomStream stream(cfg.master_seed, r);
            const PointSet ps = cfg.model.sample(cfg.n, stream);
            for (std::size_t e = 0; e < ne; ++e) {
                detail::RepRecord& out = rec[e][r];
                try {
                    Vec2 est{};
                    switch (ests[e]) {
                        case Estimator::mean: est = sample_mean(ps); break;
                        case Estimator::qmed: {
                            const SolveResult res = solve_exact(ps);
                            const QuarterMedianSolution& sol = res.canonical();
                            est = sol.theta;
                            out.angle_dev = wrap_quarter_upper(sol.frame.alpha() - alpha_true);
                            break;
                        }
                        case Estimator::smed: est = spatial_median(ps); break;
                        case Estimator::omed: est = oja_median(ps); break;
                        case Estimator::tmed: est = tukey_median_approx(ps); break;
                    }
                    out.dev = sqn * (est - mu);
                    out.ok = true;
                } catch (const std::exception& ex) {
                    out.ok = false;
                    out.error = ex.what();
                }
            }
        }
    };
    if (workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(body);
        for (std::thread& t : pool) t.join();
    }

    ExperimentReport rep;
    rep.n = cfg.n;
    rep.reps = cfg.reps;
    rep.master_seed = cfg.master_seed;

    for (std::size_t e = 0; e < ne; ++e) {
        const std::vector<detail::RepRecord>& rr = rec[e];
        if (cfg.strict) {
            for (std::size_t r = 0; r < cfg.reps; ++r)
                if (!rr[r].ok)
                    throw numerical_error(std::string(estimator_name(ests[e])) +
                                          " failed at replication " + std::to_string(r) +
                                          ": " + rr[r].error);
        }
        EstimatorStats st;
        st.id = ests[e];
        std::size_t m = 0;
        for (const detail::RepRecord& x : rr)
            if (x.ok) ++m;
        st.excluded = cfg.reps - m;
        if (m < 2)
            throw numerical_error(std::string(estimator_name(ests[e])) +
                                  ": fewer than 2 successful replications");
        const double dm = static_cast<double>(m);
        // Excluded replications contribute zero terms; sums keep the fixed
        // shape over the full index range, so they stay schedule-invariant.
        auto mean_of = [&](auto&& get) {
            return detail::pairwise_sum(0, cfg.reps, [&](std::size_t r) {
                       return rr[r].ok ? get(rr[r]) : 0.0;
                   }) /
                   dm;
        };
        st.m_hat.x = mean_of([](const detail::RepRecord& x) { return x.dev.x; });
        st.m_hat.y = mean_of([](const detail::RepRecord& x) { return x.dev.y; });
        auto central = [&](auto&& fa, auto&& fb) {
            return detail::pairwise_sum(0, cfg.reps, [&](std::size_t r) {
                       return rr[r].ok ? fa(rr[r]) * fb(rr[r]) : 0.0;
                   }) /
                   (dm - 1.0);
        };
        auto cx = [&](const detail::RepRecord& x) { return x.dev.x - st.m_hat.x; };
        auto cy = [&](const detail::RepRecord& x) { return x.dev.y - st.m_hat.y; };
        st.cov.a11 = central(cx, cx);
        st.cov.a12 = st.cov.a21 = central(cx, cy);
        st.cov.a22 = central(cy, cy);
        st.l_hat = symmetric_eigenvalues(st.cov);
        st.l_hat[0] = std::max(st.l_hat[0], 0.0);
        st.l_hat[1] = std::max(st.l_hat[1], 0.0);
        // Large-sample bands for a normal-theory variance estimate: relative
        // standard error sqrt(2/m) per eigenvalue.
        const double se = std::sqrt(2.0 / dm);
        const double h95 = 1.959963984540054 * se;
        const double h99 = 2.5758293035489004 * se;
        for (int i = 0; i < 2; ++i) {
            st.l_lo[i] = st.l_hat[i] * (1.0 - h95);
            st.l_hi[i] = st.l_hat[i] * (1.0 + h95);
            st.l_lo99[i] = st.l_hat[i] * (1.0 - h99);
            st.l_hi99[i] = st.l_hat[i] * (1.0 + h99);
        }
        if (ests[e] == Estimator::qmed) {
            AngleStats as;
            as.mean_dev = mean_of([](const detail::RepRecord& x) { return x.angle_dev; });
            auto ca = [&](const detail::RepRecord& x) { return x.angle_dev - as.mean_dev; };
            const double var_a = central(ca, ca);
            as.n_var = static_cast<double>(cfg.n) * var_a;
            const double sa = std::sqrt(var_a);
            const double sx = std::sqrt(st.cov.a11);
            const double sy = std::sqrt(st.cov.a22);
            as.corr_x = sa > 0 && sx > 0 ? central(ca, cx) / (sa * sx) : 0.0;
            as.corr_y = sa > 0 && sy > 0 ? central(ca, cy) / (sa * sy) : 0.0;
            st.angle = as;
        }
        rep.stats.push_back(st);
    }
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// Limiting eigenvalue pairs of the sqrt(n)-scaled deviations, where theory
// provides them; absent entries carry the reason instead of a number.
struct LimitEntry {
    Estimator id = Estimator::mean;
    std::optional<std::array<double, 2>> eigenvalues;
    std::string note;
};

inline std::vector<LimitEntry> theoretical_limits(const EllipticalModel& model) {
    const DensityGenerator& g = model.generator();
    const double l1 = model.lambda1();
    const double l2 = model.lambda2();
    std::vector<LimitEntry> out;

    {
        LimitEntry e;
        e.id = Estimator::mean;
        if (auto mult = g.mean_cov_multiplier())
            e.eigenvalues = {{*mult * l1, *mult * l2}};
        else
            e.note = "mean has no limit distribution for this family";
        out.push_back(e);
    }
    {
        LimitEntry e;
        e.id = Estimator::qmed;
        if (l1 > l2) {
            const double s2 = sigma2_qmed(g);
            e.eigenvalues = {{s2 * l1, s2 * l2}};
        } else {
            e.note = "limit stated for distinct dispersion eigenvalues only";
        }
        out.push_back(e);
    }
    {
        LimitEntry e;
        e.id = Estimator::smed;
        if (l1 == l2) {
            const double v = smed_spherical_variance(g) * l1;
            e.eigenvalues = {{v, v}};
        } else {
            e.note = "closed form known only in the spherical case";
        }
        out.push_back(e);
    }
    {
        LimitEntry e;
        e.id = Estimator::omed;
        if (g.family() == Family::normal)
            e.eigenvalues = {{(4.0 / kPi) * l1, (4.0 / kPi) * l2}};
        else
            e.note = "closed form known only for the normal family";
        out.push_back(e);
    }
    {
        LimitEntry e;
        e.id = Estimator::tmed;
        e.note = "limit distribution type unknown";
        out.push_back(e);
    }
    return out;
}

struct AngleCltResult {
    double empirical_n_var = 0.0;
    double theoretical = 0.0;
    double mean_dev = 0.0;
    double corr_x = 0.0;
    double corr_y = 0.0;
};

inline AngleCltResult angle_clt_check(const EllipticalModel& model, std::size_t n,
                                      std::size_t reps, std::uint64_t master_seed,
                                      unsigned workers = 1) {
    ExperimentConfig cfg{model, n, reps, master_seed, {Estimator::qmed}, workers,
                         /*strict=*/true};
    const ExperimentReport rep = run_experiment(cfg);
    const EstimatorStats& st = rep.for_estimator(Estimator::qmed);
    AngleCltResult res;
    res.empirical_n_var = st.angle->n_var;
    res.theoretical =
        sigma2_alpha(model.generator(), model.lambda1(), model.lambda2());
    res.mean_dev = st.angle->mean_dev;
    res.corr_x = st.angle->corr_x;
    res.corr_y = st.angle->corr_y;
    return res;
}

}  // namespace qmed
