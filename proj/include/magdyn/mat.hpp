#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace magdyn {

/// 2x2 real matrix, row-major.
struct Mat2 {
    double h11 = 1.0, h12 = 0.0, h21 = 0.0, h22 = 1.0;

    static Mat2 identity() { return {}; }

    double det() const { return h11 * h22 - h12 * h21; }
    double trace() const { return h11 + h22; }

    bool finite() const {
        return std::isfinite(h11) && std::isfinite(h12) && std::isfinite(h21) &&
               std::isfinite(h22);
    }

    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a.h11 * b.h11 + a.h12 * b.h21, a.h11 * b.h12 + a.h12 * b.h22,
                a.h21 * b.h11 + a.h22 * b.h21, a.h21 * b.h12 + a.h22 * b.h22};
    }

    std::array<double, 2> apply(double x, double p) const {
        return {h11 * x + h12 * p, h21 * x + h22 * p};
    }
};

/// 4x4 real matrix acting on (x, px, y, py).
struct Mat4 {
    std::array<double, 16> m{};

    static Mat4 identity() {
        Mat4 r;
        for (int i = 0; i < 4; ++i) r.m[4 * i + i] = 1.0;
        return r;
    }

    double& at(int r, int c) { return m[4 * r + c]; }
    double at(int r, int c) const { return m[4 * r + c]; }

    friend Mat4 operator*(const Mat4& a, const Mat4& b) {
        Mat4 r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s = 0.0;
                for (int k = 0; k < 4; ++k) s += a.at(i, k) * b.at(k, j);
                r.at(i, j) = s;
            }
        return r;
    }

    std::array<double, 4> apply(const std::array<double, 4>& v) const {
        std::array<double, 4> r{};
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) r[i] += at(i, k) * v[k];
        return r;
    }

    /// Determinant by LU with partial pivoting; the maps here are near
    /// symplectic so no special conditioning is needed.
    double det() const {
        std::array<double, 16> a = m;
        double d = 1.0;
        for (int c = 0; c < 4; ++c) {
            int p = c;
            for (int r = c + 1; r < 4; ++r)
                if (std::fabs(a[4 * r + c]) > std::fabs(a[4 * p + c])) p = r;
            if (p != c) {
                for (int k = 0; k < 4; ++k) std::swap(a[4 * c + k], a[4 * p + k]);
                d = -d;
            }
            if (a[4 * c + c] == 0.0) return 0.0;
            d *= a[4 * c + c];
            for (int r = c + 1; r < 4; ++r) {
                double f = a[4 * r + c] / a[4 * c + c];
                for (int k = c; k < 4; ++k) a[4 * r + k] -= f * a[4 * c + k];
            }
        }
        return d;
    }
};

/// Block diagonal embedding: h acting on (x,px) and on (y,py).
inline Mat4 block_diag(const Mat2& h) {
    Mat4 u;
    u.at(0, 0) = h.h11; u.at(0, 1) = h.h12;
    u.at(1, 0) = h.h21; u.at(1, 1) = h.h22;
    u.at(2, 2) = h.h11; u.at(2, 3) = h.h12;
    u.at(3, 2) = h.h21; u.at(3, 3) = h.h22;
    return u;
}

/// Planar rotation by phi applied jointly to the coordinate pair (x,y) and
/// the momentum pair (px,py). Positive phi turns +x toward -y, the sense of
/// the cyclotron drift of a positive beta; see compose_planar.
inline Mat4 pair_rotation(double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    Mat4 u;
    u.at(0, 0) = c;  u.at(0, 2) = s;
    u.at(1, 1) = c;  u.at(1, 3) = s;
    u.at(2, 0) = -s; u.at(2, 2) = c;
    u.at(3, 1) = -s; u.at(3, 3) = c;
    return u;
}

} // namespace magdyn
