#pragma once

#include <array>
#include <cmath>

#include "magdyn/errors.hpp"

namespace magdyn {

/// Dimensionless phase-space state, ordered (x, px, y, py).
struct PhaseVector {
    double x = 0.0, px = 0.0, y = 0.0, py = 0.0;

    std::array<double, 4> to_array() const { return {x, px, y, py}; }
    static PhaseVector from_array(const std::array<double, 4>& a) {
        return {a[0], a[1], a[2], a[3]};
    }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(px) && std::isfinite(y) &&
               std::isfinite(py);
    }

    double norm() const { return std::sqrt(x * x + px * px + y * y + py * py); }

    friend PhaseVector operator-(const PhaseVector& a, const PhaseVector& b) {
        return {a.x - b.x, a.px - b.px, a.y - b.y, a.py - b.py};
    }
    friend PhaseVector operator+(const PhaseVector& a, const PhaseVector& b) {
        return {a.x + b.x, a.px + b.px, a.y + b.y, a.py + b.py};
    }
};

/// L_z = x*py - y*px, conserved along unforced planar motion.
inline double angular_momentum(const PhaseVector& q) {
    return q.x * q.py - q.y * q.px;
}

/// Guiding-centre coordinates of the cyclotron-like orbit.
struct FuzzyCentre {
    double xbar = 0.0, ybar = 0.0;
};

/// Centre from the instantaneous field value. Velocities come from the
/// Hamiltonian relations vx = px + beta*y, vy = py - beta*x, and the
/// effective cyclotron frequency is 2*beta.
inline FuzzyCentre fuzzy_centre(const PhaseVector& q, double beta_now) {
    if (std::fabs(beta_now) < 1e-12)
        throw ZeroField("fuzzy_centre: |beta| < 1e-12");
    const double vx = q.px + beta_now * q.y;
    const double vy = q.py - beta_now * q.x;
    const double wc = 2.0 * beta_now;
    return {q.x + vy / wc, q.y - vx / wc};
}

} // namespace magdyn
