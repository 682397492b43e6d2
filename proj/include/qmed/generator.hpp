#pragma once

// Density generators h for bivariate elliptical laws with density
//
//   f(x) = h((x - mu)^T Sigma^-1 (x - mu)) / (c2(h) sqrt(det Sigma)),
//
// together with their normalization constants
//
//   c_k(h) = pi^{k/2} / Gamma(k/2) * Integral_0^inf r^{k/2 - 1} h(r) dr,
//
// and the law of the radius R = |X| in the spherical standard case, whose
// density is (2 pi / c2) r h(r^2). Five families ship with closed-form
// constants, CDFs and quantiles; custom generators get everything by
// quadrature and bracketed root finding. c1 doubles as the marginal density
// value at the median: for unit a, f_a(a^T mu) = c1 / (c2 sqrt(a^T Sigma a)).

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "qmed/common.hpp"
#include "qmed/quadrature.hpp"

namespace qmed {

enum class Family { normal, double_exponential, cauchy, pearson2, logistic, custom };

// Frozen high-precision constants for the logistic family, where no closed
// form exists. c1 = Integral t^{-1/2} e^{-t} (1+e^{-t})^{-2} dt; k_sml is the
// information-type constant whose reciprocal is the ML asymptotic variance.
inline constexpr double kLogisticC1 = 0.67371823885775398;
inline constexpr double kLogisticKSml = 1.5908629074132604;

class DensityGenerator {
public:
    static DensityGenerator normal() {
        DensityGenerator g(Family::normal, "normal", [](double t) { return std::exp(-0.5 * t); });
        g.c1_ = std::sqrt(2.0 * kPi);
        g.c2_ = 2.0 * kPi;
        g.sigma2_ml_ = 1.0;
        g.mean_cov_multiplier_ = 1.0;
        return g;
    }

    static DensityGenerator double_exponential() {
        DensityGenerator g(Family::double_exponential, "double_exponential",
                           [](double t) { return std::exp(-0.5 * std::sqrt(t)); });
        g.c1_ = 4.0;
        g.c2_ = 8.0 * kPi;
        g.sigma2_ml_ = 8.0;
        g.mean_cov_multiplier_ = 12.0;
        return g;
    }

    static DensityGenerator cauchy() {
        DensityGenerator g(Family::cauchy, "cauchy",
                           [](double t) { return 1.0 / ((1.0 + t) * std::sqrt(1.0 + t)); });
        g.c1_ = 2.0;
        g.c2_ = 2.0 * kPi;
        g.sigma2_ml_ = 5.0 / 3.0;
        g.mean_cov_multiplier_ = std::nullopt;  // no first moment
        return g;
    }

    static DensityGenerator pearson2() {
        DensityGenerator g(Family::pearson2, "pearson2", [](double t) {
            if (t >= 1.0) return 0.0;
            const double s = 1.0 - t;
            return s * s;
        });
        g.c1_ = 16.0 / 15.0;
        g.c2_ = kPi / 3.0;
        g.sigma2_ml_ = 1.0 / 12.0;
        g.mean_cov_multiplier_ = 1.0 / 8.0;
        return g;
    }

    static DensityGenerator logistic() {
        DensityGenerator g(Family::logistic, "logistic", [](double t) {
            const double e = std::exp(-t);
            const double d = 1.0 + e;
            return e / (d * d);
        });
        g.c1_ = kLogisticC1;
        g.c2_ = kPi / 2.0;
        g.sigma2_ml_ = 1.0 / kLogisticKSml;
        g.mean_cov_multiplier_ = std::numbers::ln2;
        return g;
    }

    // Custom generator; h must be nonnegative with finite c1 and c2, which
    // are computed here by quadrature (numerical_error if divergent).
    static DensityGenerator custom(std::function<double(double)> h) {
        if (!h) throw invalid_input("DensityGenerator::custom: empty function");
        DensityGenerator g(Family::custom, "custom", std::move(h));
        g.c1_ = ck_of(g, 1);
        g.c2_ = ck_of(g, 2);
        if (!(g.c1_ > 0.0) || !(g.c2_ > 0.0))
            throw degenerate_model("DensityGenerator::custom: c1/c2 not positive");
        return g;
    }

    static DensityGenerator from_name(std::string_view name) {
        if (name == "normal") return normal();
        if (name == "double_exponential") return double_exponential();
        if (name == "cauchy") return cauchy();
        if (name == "pearson2") return pearson2();
        if (name == "logistic") return logistic();
        throw invalid_input("unknown family: " + std::string(name));
    }

    Family family() const { return family_; }
    const std::string& name() const { return name_; }
    double h(double t) const { return h_(t); }
    double c1() const { return c1_; }
    double c2() const { return c2_; }

    // Asymptotic variance multiplier of the family's ML location estimator
    // (times Sigma), where known.
    std::optional<double> sigma2_ml() const { return sigma2_ml_; }
    // Cov(X) = multiplier * Sigma when the second moment exists.
    std::optional<double> mean_cov_multiplier() const { return mean_cov_multiplier_; }
    bool has_mean() const { return family_ != Family::cauchy; }

    // Density of R = |X| under the spherical standard law.
    double radial_density(double r) const {
        if (r < 0.0) return 0.0;
        return (2.0 * kPi / c2_) * r * h_(r * r);
    }

    double radial_cdf(double r) const {
        if (r <= 0.0) return 0.0;
        switch (family_) {
            case Family::normal:
                return -std::expm1(-0.5 * r * r);
            case Family::double_exponential: {
                // Gamma(2, scale 2) radius: F(r) = 1 - e^{-r/2}(1 + r/2).
                const double x = 0.5 * r;
                return -std::expm1(-x) - x * std::exp(-x);
            }
            case Family::cauchy:
                return 1.0 - 1.0 / std::sqrt(1.0 + r * r);
            case Family::pearson2: {
                if (r >= 1.0) return 1.0;
                const double s = 1.0 - r * r;
                return 1.0 - s * s * s;
            }
            case Family::logistic:
                return std::tanh(0.5 * r * r);
            case Family::custom: {
                const double v = (2.0 * kPi / c2_) *
                                 integrate_interval([this](double s) { return s * h_(s * s); },
                                                    0.0, r, 1e-12);
                return std::min(v, 1.0);
            }
        }
        throw internal_error("radial_cdf: unhandled family");
    }

    double radial_quantile(double u) const {
        if (!(u > 0.0 && u < 1.0))
            throw invalid_input("radial_quantile: u must lie in (0, 1)");
        switch (family_) {
            case Family::normal:
                return std::sqrt(-2.0 * std::log1p(-u));
            case Family::double_exponential: {
                // Bracketed root of the regularized incomplete gamma
                // P(2, x) = 1 - e^{-x}(1 + x) = u, then r = 2x.
                auto p2 = [](double x) { return -std::expm1(-x) - x * std::exp(-x); };
                double hi = 1.0;
                while (p2(hi) < u) {
                    hi *= 2.0;
                    if (hi > 1e6) throw numerical_error("radial_quantile: bracket failed");
                }
                const double x =
                    find_root_bracketed([&](double t) { return p2(t) - u; }, 0.0, hi, 1e-12);
                return 2.0 * x;
            }
            case Family::cauchy: {
                const double om = 1.0 - u;
                return std::sqrt(u * (2.0 - u)) / om;
            }
            case Family::pearson2:
                return std::sqrt(-std::expm1(std::log1p(-u) / 3.0));
            case Family::logistic:
                return std::sqrt(std::log((1.0 + u) / (1.0 - u)));
            case Family::custom: {
                double hi = 1.0;
                while (radial_cdf(hi) < u) {
                    hi *= 2.0;
                    if (hi > 1e12) throw numerical_error("radial_quantile: bracket failed");
                }
                return find_root_bracketed([&](double r) { return radial_cdf(r) - u; }, 0.0, hi,
                                           1e-12);
            }
        }
        throw internal_error("radial_quantile: unhandled family");
    }

private:
    DensityGenerator(Family fam, std::string name, std::function<double(double)> h)
        : family_(fam), name_(std::move(name)), h_(std::move(h)) {}

    // Shared by ck_quadrature and the custom constructor. The substitution
    // u = sqrt(r) removes the r^{-1/2} endpoint singularity of the k = 1
    // integrand:
    //   c1 = 2 Integral h(u^2) du,   c2 = 2 pi Integral u h(u^2) du.
    static double ck_of(const DensityGenerator& g, int k) {
        if (k == 1)
            return integrate_half_line([&g](double u) { return 2.0 * g.h_(u * u); }, 1e-10);
        if (k == 2)
            return integrate_half_line([&g](double u) { return 2.0 * kPi * u * g.h_(u * u); },
                                       1e-10);
        throw invalid_input("ck_quadrature: k must be 1 or 2");
    }

    friend double ck_quadrature(const DensityGenerator&, int);

    Family family_;
    std::string name_;
    std::function<double(double)> h_;
    double c1_ = 0.0;
    double c2_ = 0.0;
    std::optional<double> sigma2_ml_;
    std::optional<double> mean_cov_multiplier_;
};

// Normalization constant c_k(h), k in {1, 2}, by adaptive quadrature; the
// independent cross-check of the stored closed forms.
inline double ck_quadrature(const DensityGenerator& g, int k) {
    return DensityGenerator::ck_of(g, k);
}

}  // namespace qmed
