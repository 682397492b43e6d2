#pragma once

// Weighted univariate median interval. The two endpoints are the usual outer
// medians of a distribution function F:
//
//   lo = inf{ x : F(x) >= 1/2 },   hi = sup{ x : P([x, inf)) >= 1/2 },
//
// and mid is their midpoint, the representative used by the median map Psi.

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "qmed/common.hpp"

namespace qmed {

struct MedianTriple {
    double lo = 0.0;
    double mid = 0.0;
    double hi = 0.0;
};

namespace detail {

// Core routine on (value, weight) pairs already sorted by value with weights
// summing to ~1. Shared with the solver, which sorts projections itself.
inline MedianTriple median_of_sorted(std::span<const std::pair<double, double>> vw) {
    const double half = 0.5 - kMedianMassTol;
    double cum = 0.0;
    double lo = vw.back().first;
    for (const auto& [v, w] : vw) {
        cum += w;
        if (cum >= half) {
            lo = v;
            break;
        }
    }
    double cum_hi = 0.0;
    double hi = vw.front().first;
    for (std::size_t k = vw.size(); k-- > 0;) {
        cum_hi += vw[k].second;
        if (cum_hi >= half) {
            hi = vw[k].first;
            break;
        }
    }
    return {lo, 0.5 * (lo + hi), hi};
}

}  // namespace detail

inline MedianTriple univariate_median(std::span<const double> values,
                                      std::span<const double> weights) {
    if (values.empty()) throw invalid_input("univariate_median: empty input");
    if (values.size() != weights.size())
        throw invalid_input("univariate_median: values/weights size mismatch");

    std::vector<std::pair<double, double>> vw;
    vw.reserve(values.size());
    double total = 0.0;
    for (std::size_t k = 0; k < values.size(); ++k) {
        if (!std::isfinite(values[k]) || !std::isfinite(weights[k]))
            throw invalid_input("univariate_median: non-finite entry");
        if (weights[k] <= 0.0)
            throw invalid_input("univariate_median: weights must be positive");
        total += weights[k];
        vw.emplace_back(values[k], weights[k]);
    }
    std::sort(vw.begin(), vw.end());
    if (std::abs(total - 1.0) > 1e-6) {
        // Tolerate unnormalized input; thresholds below assume total mass 1.
        for (auto& [v, w] : vw) w /= total;
    }
    return detail::median_of_sorted(vw);
}

// Convenience overload for uniform weights.
inline MedianTriple univariate_median(std::span<const double> values) {
    if (values.empty()) throw invalid_input("univariate_median: empty input");
    std::vector<double> w(values.size(), 1.0 / static_cast<double>(values.size()));
    return univariate_median(values, w);
}

}  // namespace qmed
