#pragma once

// Shared small types, error classes and tolerance constants for the quarter
// median library. Everything is 2-D and value-semantic on purpose: the heavy
// lifting happens in flat loops over arrays of Vec2.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qmed {

inline constexpr const char* kVersion = "qmed 0.1.0";

// ---------------------------------------------------------------------------
// errors

// Malformed arguments: empty inputs, size mismatches, non-finite numbers,
// out-of-range parameters.
struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Structurally valid input on which the requested operation is not defined
// (e.g. Oja median of collinear points).
struct degenerate_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Model parameters outside the admissible set (e.g. lambda2 <= 0).
struct degenerate_model : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An iterative or quadrature routine failed to reach its tolerance.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A search completed without producing a result (e.g. scan solver with a
// grid too coarse to hit any valid angle window).
struct not_found : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A guaranteed invariant failed; indicates a bug, not a user mistake.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// tolerances

// Slack for the mass inequalities (half planes >= 1/2, quadrants >= 1/4).
// Weight sums of up to a few thousand points accumulate rounding well below
// this, while a genuine shortfall is at least 1/(4n).
inline constexpr double kMassTol = 1e-12;

// Slack for the cumulative-mass thresholds inside the univariate median.
// Looser than kMassTol: a cumulative sum of k copies of 1/n can land a few
// ulps under an exact 1/2, and any true deficit is at least one weight
// quantum, many orders above 1e-9.
inline constexpr double kMedianMassTol = 1e-9;

// Geometric sign tests classify a projection s as on-boundary when
// |s| <= kSignTolFactor * scale, where scale is the largest coordinate
// magnitude of the point set. Overridable per call where it matters.
inline constexpr double kSignTolFactor = 1e-12;

// Row orthonormality requirement for frame_from_matrix.
inline constexpr double kOrthoTol = 1e-10;

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// plane vectors

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
    friend Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
    friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// Strict lexicographic order (x, then y); the deterministic point order used
// throughout for storage and canonical selection.
inline bool lex_less(Vec2 a, Vec2 b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
}

// 2x2 matrix, row-major.
struct Mat2 {
    double a11 = 1.0, a12 = 0.0;
    double a21 = 0.0, a22 = 1.0;

    Vec2 row1() const { return {a11, a12}; }
    Vec2 row2() const { return {a21, a22}; }
};

// Eigenvalues of a symmetric 2x2 matrix, descending. Closed form; the
// discriminant is clamped at zero to absorb rounding for near-multiples of I.
inline std::array<double, 2> symmetric_eigenvalues(const Mat2& m) {
    const double tr = m.a11 + m.a22;
    const double off = 0.5 * (m.a12 + m.a21);
    double disc = 0.25 * (m.a11 - m.a22) * (m.a11 - m.a22) + off * off;
    disc = disc > 0.0 ? std::sqrt(disc) : 0.0;
    return {0.5 * tr + disc, 0.5 * tr - disc};
}

// ---------------------------------------------------------------------------
// angle reduction

// Reduce an axis angle modulo pi/2 into the canonical interval [-pi/4, pi/4).
// A frame and its row-permuted/sign-flipped variants span the same pair of
// lines, so the line pair is identified by this representative alone.
inline double wrap_quarter(double a) {
    double m = std::fmod(a + kPi / 4, kPi / 2);
    if (m < 0) m += kPi / 2;
    double r = m - kPi / 4;
    if (r >= kPi / 4) r -= kPi / 2;  // guards the m == pi/2 rounding edge
    return r;
}

// Same reduction but into (-pi/4, pi/4]; used for angle-error wrap-around in
// the Monte Carlo harness, where an estimate just below the seam must count
// as a small positive deviation.
inline double wrap_quarter_upper(double a) {
    double m = std::fmod(a + kPi / 4, kPi / 2);
    if (m <= 0) m += kPi / 2;
    double r = m - kPi / 4;
    if (r <= -kPi / 4) r += kPi / 2;
    return r;
}

// Tri-valued sign with a symmetric boundary band of half-width tol.
inline int side_of(double s, double tol) {
    if (s > tol) return 1;
    if (s < -tol) return -1;
    return 0;
}

}  // namespace qmed
