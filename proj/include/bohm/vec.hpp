#pragma once

#include <cmath>
#include <complex>
#include <cstddef>

namespace bohm {

using cplx = std::complex<double>;

/// Point or vector in one or two dimensions. 1D quantities leave `y` at zero.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr double& operator[](std::size_t axis) { return axis == 0 ? x : y; }
    constexpr double operator[](std::size_t axis) const { return axis == 0 ? x : y; }

    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return a += b; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return a -= b; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }
    friend constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
    friend constexpr Vec2 operator/(Vec2 a, double s) { return a *= (1.0 / s); }
    friend constexpr bool operator==(Vec2, Vec2) = default;

    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

}  // namespace bohm
