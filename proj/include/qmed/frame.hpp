#pragma once

// Orthonormal coordinate frame of the plane, identified with the pair of
// lines its axes span. The axes of angle a are b1 = (cos a, sin a) and
// b2 = (-sin a, cos a); flipping signs or swapping rows yields the same line
// pair, so the quotient is parametrized by the angle reduced into
// [-pi/4, pi/4). Cos/sin are cached once from the reduced angle, which keeps
// every consumer of a given Frame bitwise consistent.

#include <cmath>

#include "qmed/common.hpp"

namespace qmed {

class Frame {
public:
    Frame() = default;  // canonical axes, alpha = 0

    static Frame from_angle(double alpha) {
        if (!std::isfinite(alpha)) throw invalid_input("Frame: non-finite angle");
        return Frame(wrap_quarter(alpha));
    }

    double alpha() const { return alpha_; }
    Vec2 b1() const { return {c_, s_}; }
    Vec2 b2() const { return {-s_, c_}; }

    // Coordinates of p in this frame: (dot(b1, p), dot(b2, p)).
    Vec2 to_frame(Vec2 p) const { return {c_ * p.x + s_ * p.y, -s_ * p.x + c_ * p.y}; }

    // Inverse map: the plane point with frame coordinates eta.
    Vec2 from_frame(Vec2 eta) const {
        return {c_ * eta.x - s_ * eta.y, s_ * eta.x + c_ * eta.y};
    }

    // Frame whose lines are this frame's lines rotated by phi.
    Frame rotated(double phi) const { return from_angle(alpha_ + phi); }

    friend bool operator==(const Frame& a, const Frame& b) { return a.alpha_ == b.alpha_; }

private:
    explicit Frame(double wrapped) : alpha_(wrapped), c_(std::cos(wrapped)), s_(std::sin(wrapped)) {}

    double alpha_ = 0.0;
    double c_ = 1.0;
    double s_ = 0.0;
};

// Canonical frame of an explicit 2x2 matrix with orthonormal rows (the rows
// being the axis vectors). Any row order/sign convention is accepted; only
// the spanned line pair matters.
inline Frame frame_from_matrix(const Mat2& m) {
    const Vec2 r1 = m.row1();
    const Vec2 r2 = m.row2();
    if (std::abs(norm(r1) - 1.0) > kOrthoTol || std::abs(norm(r2) - 1.0) > kOrthoTol ||
        std::abs(dot(r1, r2)) > kOrthoTol)
        throw invalid_input("frame_from_matrix: rows not orthonormal");
    return Frame::from_angle(std::atan2(r1.y, r1.x));
}

}  // namespace qmed
