#pragma once

#include <cmath>
#include <stdexcept>

namespace clocksta {

// Quadrature-space vector (x, p).
struct Vec2 {
    double x = 0.0;
    double p = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, p + o.p}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, p - o.p}; }
    Vec2 operator*(double s) const { return {x * s, p * s}; }
    double dot(const Vec2& o) const { return x * o.x + p * o.p; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Real 2x2 matrix [[a, b], [c, d]] acting on (x, p).
struct Mat2 {
    double a = 0.0, b = 0.0;
    double c = 0.0, d = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 zero() { return {}; }
    static Mat2 diagonal(double m00, double m11) { return {m00, 0.0, 0.0, m11}; }
    // Symplectic form J = [[0, 1], [-1, 0]].
    static Mat2 symplectic_form() { return {0.0, 1.0, -1.0, 0.0}; }

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }

    Mat2 transpose() const { return {a, c, b, d}; }

    Mat2 inverse() const {
        const double dt = det();
        if (dt == 0.0)
            throw std::domain_error("Mat2::inverse: singular matrix");
        const double inv = 1.0 / dt;
        return {d * inv, -b * inv, -c * inv, a * inv};
    }

    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }
    Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }

    Vec2 operator*(const Vec2& v) const { return {a * v.x + b * v.p, c * v.x + d * v.p}; }

    double max_abs() const {
        return std::max(std::max(std::fabs(a), std::fabs(b)),
                        std::max(std::fabs(c), std::fabs(d)));
    }
};

inline Mat2 operator*(double s, const Mat2& m) { return m * s; }

// x^T M y
inline double bilinear(const Vec2& x, const Mat2& m, const Vec2& y) {
    return x.dot(m * y);
}

// M V M^T for symmetric V; result symmetrized against round-off.
inline Mat2 congruence(const Mat2& m, const Mat2& v) {
    Mat2 r = m * v * m.transpose();
    const double off = 0.5 * (r.b + r.c);
    r.b = off;
    r.c = off;
    return r;
}

}  // namespace clocksta
