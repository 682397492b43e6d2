#pragma once

// Bivariate elliptical model Ell2(mu, Sigma; h) with Sigma given in spectral
// form: eigenvalues lambda1 >= lambda2 > 0 and an orientation angle for the
// first eigen-axis. Provides the density, sampling through the radial
// quantile (mixture representation: X = mu + U^T diag(sqrt lambda) R Phi with
// R the radial law and Phi uniform on the circle), and the asymptotic
// constants of the quarter median:
//
//   sigma2_qmed = c2^2 / (2 c1)^2,
//   covariance of sqrt(n)(theta_n - mu)  ->  sigma2_qmed * Sigma,
//   n Var(alpha_n) -> c2^2 lambda1 lambda2 /
//                       (4 c1^2 (sqrt lambda1 - sqrt lambda2)^2).

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qmed/common.hpp"
#include "qmed/generator.hpp"
#include "qmed/point_set.hpp"
#include "qmed/random.hpp"

namespace qmed {

class EllipticalModel {
public:
    EllipticalModel(DensityGenerator gen, Vec2 mu, double lambda1, double lambda2,
                    double orientation)
        : gen_(std::move(gen)), mu_(mu), l1_(lambda1), l2_(lambda2), orient_(orientation) {
        if (!std::isfinite(mu.x) || !std::isfinite(mu.y) || !std::isfinite(orientation))
            throw degenerate_model("EllipticalModel: non-finite parameter");
        if (!(lambda2 > 0.0) || !(lambda1 >= lambda2) || !std::isfinite(lambda1))
            throw degenerate_model("EllipticalModel: need lambda1 >= lambda2 > 0");
        co_ = std::cos(orientation);
        so_ = std::sin(orientation);
    }

    const DensityGenerator& generator() const { return gen_; }
    Vec2 mu() const { return mu_; }
    double lambda1() const { return l1_; }
    double lambda2() const { return l2_; }
    double orientation() const { return orient_; }
    bool spherical() const { return l1_ == l2_; }

    // Canonical frame angle of the eigen-axes; the ground truth the solver's
    // alpha estimate converges to in the strictly elliptical case.
    double canonical_alpha() const { return wrap_quarter(orient_); }

    Mat2 sigma() const {
        return {l1_ * co_ * co_ + l2_ * so_ * so_, (l1_ - l2_) * co_ * so_,
                (l1_ - l2_) * co_ * so_, l1_ * so_ * so_ + l2_ * co_ * co_};
    }

    double density(Vec2 x) const {
        const double dx = x.x - mu_.x;
        const double dy = x.y - mu_.y;
        const double s1 = co_ * dx + so_ * dy;
        const double s2 = -so_ * dx + co_ * dy;
        const double q = s1 * s1 / l1_ + s2 * s2 / l2_;
        return gen_.h(q) / (gen_.c2() * std::sqrt(l1_ * l2_));
    }

    // Density of the projection <a, X> at its median <a, mu>, for unit a.
    double marginal_density_at_median(Vec2 a) const {
        if (std::abs(norm(a) - 1.0) > 1e-12)
            throw invalid_input("marginal_density_at_median: direction must be unit length");
        const double ca = co_ * a.x + so_ * a.y;
        const double sa = -so_ * a.x + co_ * a.y;
        const double var_a = l1_ * ca * ca + l2_ * sa * sa;
        return gen_.c1() / (gen_.c2() * std::sqrt(var_a));
    }

    // n independent draws in draw order. Per point the stream is consumed in
    // a fixed documented order: one (0,1) uniform for the radial quantile,
    // then one [0,1) uniform for the angle. Sampling from (mu, Sigma) is
    // exactly the affine image of the (0, I) sample path with the same
    // stream.
    std::vector<Vec2> sample_raw(std::size_t n, RandomStream& stream) const {
        if (n < 1) throw invalid_input("sample: need n >= 1");
        const double sq1 = std::sqrt(l1_);
        const double sq2 = std::sqrt(l2_);
        std::vector<Vec2> pts;
        pts.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double r = gen_.radial_quantile(stream.uniform_open01());
            const double phi = 2.0 * kPi * stream.uniform01();
            const double z1 = sq1 * r * std::cos(phi);
            const double z2 = sq2 * r * std::sin(phi);
            pts.push_back({mu_.x + co_ * z1 - so_ * z2, mu_.y + so_ * z1 + co_ * z2});
        }
        return pts;
    }

    PointSet sample(std::size_t n, RandomStream& stream) const {
        return PointSet(sample_raw(n, stream));
    }

private:
    DensityGenerator gen_;
    Vec2 mu_;
    double l1_, l2_, orient_;
    double co_ = 1.0, so_ = 0.0;
};

inline double sigma2_qmed(const DensityGenerator& g) {
    const double ratio = g.c2() / (2.0 * g.c1());
    return ratio * ratio;
}

// Asymptotic variance of the frame-angle estimate, strictly elliptical case.
inline double sigma2_alpha(const DensityGenerator& g, double lambda1, double lambda2) {
    if (!(lambda2 > 0.0) || !(lambda1 > lambda2))
        throw degenerate_model("sigma2_alpha: need lambda1 > lambda2 > 0");
    const double d = std::sqrt(lambda1) - std::sqrt(lambda2);
    return sigma2_qmed(g) * lambda1 * lambda2 / (d * d);
}

inline Mat2 qmed_asymptotic_covariance(const EllipticalModel& m) {
    const double s2 = sigma2_qmed(m.generator());
    const Mat2 sig = m.sigma();
    return {s2 * sig.a11, s2 * sig.a12, s2 * sig.a21, s2 * sig.a22};
}

// Diagonal limit covariance over the eigen-directions b_i: entries
// 1 / (2 f_{b_i}(median))^2 with f_{b_i} the marginal density along b_i.
// Equals sigma2_qmed * lambda_i; the full covariance is U^T Delta U.
inline Mat2 delta_matrix(const EllipticalModel& m) {
    const double c1 = m.generator().c1();
    const double c2 = m.generator().c2();
    auto entry = [&](double lambda) {
        const double f = c1 / (c2 * std::sqrt(lambda));  // marginal density at the median
        const double twof = 2.0 * f;
        return 1.0 / (twof * twof);
    };
    return {entry(m.lambda1()), 0.0, 0.0, entry(m.lambda2())};
}

struct EfficiencyRow {
    std::string family;
    std::optional<double> eff_mean;  // ARE(mean, ML); absent when no mean exists
    double eff_qmed = 0.0;           // ARE(quarter median, ML)
    std::string mean_form;           // exact closed form, for display
    std::string qmed_form;
};

// Asymptotic relative efficiencies against the family's ML estimator for the
// five built-in families.
inline std::vector<EfficiencyRow> efficiency_table() {
    std::vector<EfficiencyRow> rows;
    auto add = [&rows](const DensityGenerator& g, std::string mean_form, std::string qmed_form) {
        EfficiencyRow r;
        r.family = g.name();
        const double ml = *g.sigma2_ml();
        if (auto m = g.mean_cov_multiplier()) r.eff_mean = ml / *m;
        r.eff_qmed = ml / sigma2_qmed(g);
        r.mean_form = std::move(mean_form);
        r.qmed_form = std::move(qmed_form);
        rows.push_back(std::move(r));
    };
    add(DensityGenerator::normal(), "1", "2/pi");
    add(DensityGenerator::double_exponential(), "2/3", "8/pi^2");
    add(DensityGenerator::cauchy(), "", "20/(3 pi^2)");
    add(DensityGenerator::pearson2(), "2/3", "256/(75 pi^2)");
    add(DensityGenerator::logistic(), "", "");  // no closed form, decimals only
    return rows;
}

}  // namespace qmed
