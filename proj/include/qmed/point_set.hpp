#pragma once

// Weighted planar point set. Construction canonicalizes: exact duplicate
// coordinates are merged by adding weights, points are stored in lexicographic
// (x, then y) order, and weights are normalized to sum to 1. The fixed storage
// order is what makes every downstream computation independent of the order
// in which points arrived (bitwise, not just mathematically).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <tuple>
#include <vector>

#include "qmed/common.hpp"

namespace qmed {

class PointSet {
public:
    // Raw weight 1 per point: the total is then exactly n and the normalized
    // weights come out as correctly rounded 1/n. Passing pre-divided weights
    // here would renormalize by their inexact float sum and shift every
    // weight by an ulp.
    explicit PointSet(const std::vector<Vec2>& pts)
        : PointSet(pts, std::vector<double>(pts.size(), 1.0)) {}

    PointSet(const std::vector<Vec2>& pts, const std::vector<double>& weights) {
        if (pts.empty()) throw invalid_input("PointSet: empty point list");
        if (pts.size() != weights.size())
            throw invalid_input("PointSet: points/weights size mismatch");

        // Sort (x, y, w) triples so that both the merge below and the weight
        // accumulation order are permutation invariant.
        std::vector<std::tuple<double, double, double>> rows;
        rows.reserve(pts.size());
        double total = 0.0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (!std::isfinite(pts[k].x) || !std::isfinite(pts[k].y))
                throw invalid_input("PointSet: non-finite coordinate");
            if (!std::isfinite(weights[k]) || weights[k] <= 0.0)
                throw invalid_input("PointSet: weights must be positive and finite");
            total += weights[k];
            rows.emplace_back(pts[k].x, pts[k].y, weights[k]);
        }
        if (!(total > 0.0) || !std::isfinite(total))
            throw invalid_input("PointSet: weight total not positive and finite");
        std::sort(rows.begin(), rows.end());

        pts_.reserve(rows.size());
        w_.reserve(rows.size());
        for (const auto& [x, y, w] : rows) {
            if (!pts_.empty() && pts_.back().x == x && pts_.back().y == y) {
                w_.back() += w;  // exact duplicate: merge mass
            } else {
                pts_.push_back({x, y});
                w_.push_back(w);
            }
        }
        for (double& w : w_) w /= total;

        scale_ = 0.0;
        for (const Vec2& p : pts_)
            scale_ = std::max({scale_, std::abs(p.x), std::abs(p.y)});
    }

    const std::vector<Vec2>& points() const { return pts_; }
    const std::vector<double>& weights() const { return w_; }
    std::size_t size() const { return pts_.size(); }

    // Largest coordinate magnitude; the reference scale for geometric sign
    // tolerances.
    double scale() const { return scale_; }

    // Half-width of the on-boundary band for sign tests against this set.
    double sign_tol() const { return kSignTolFactor * scale_; }

private:
    std::vector<Vec2> pts_;
    std::vector<double> w_;
    double scale_ = 0.0;
};

}  // namespace qmed
