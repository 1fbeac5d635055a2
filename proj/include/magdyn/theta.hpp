#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "magdyn/errors.hpp"

namespace magdyn {

inline constexpr double kHalfPi = 1.5707963267948966;

/// Odd sine series theta(t) = sum a_k sin((2k-1) t), k = 1..4, solved so that
/// (theta(pi/2), theta'(0), theta''(pi/2), theta'''(0)) = (b, 2, -2/b, c).
/// theta'(0) = 2 keeps the derived field regular at the t = 0 zero, and
/// theta''(pi/2) = -2/b makes the field vanish at the interval endpoints.
struct ThetaDesign {
    std::array<double, 4> a{};  // a1, a3, a5, a7
    double b = 0.0;
    double c = 0.0;

    /// d-th derivative of the series at t (d = 0..5, analytic).
    double deriv(double t, int d) const {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double n = 2.0 * k + 1.0;
            s += a[static_cast<std::size_t>(k)] * std::pow(n, d) *
                 std::sin(n * t + d * kHalfPi);
        }
        return s;
    }

    double operator()(double t) const { return deriv(t, 0); }
};

namespace detail {

/// Gaussian elimination with partial pivoting for a small system.
template <int N>
inline std::array<double, N> solve_linear(std::array<std::array<double, N>, N> m,
                                          std::array<double, N> rhs) {
    for (int col = 0; col < N; ++col) {
        int piv = col;
        for (int r = col + 1; r < N; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
        if (m[piv][col] == 0.0) throw SingularSystem("singular constraint matrix");
        std::swap(m[col], m[piv]);
        std::swap(rhs[col], rhs[piv]);
        for (int r = 0; r < N; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            if (f == 0.0) continue;
            for (int k = col; k < N; ++k) m[r][k] -= f * m[col][k];
            rhs[r] -= f * rhs[col];
        }
    }
    std::array<double, N> out{};
    for (int i = 0; i < N; ++i) out[i] = rhs[i] / m[i][i];
    return out;
}

} // namespace detail

/// Solve the endpoint-constraint system for the series coefficients.
/// Rows are the analytic derivatives of the sine series at the constraint
/// points: theta(pi/2), theta'(0), theta''(pi/2), theta'''(0). Note the
/// third row entry for a7 is 49 = 7^2 (from -n^2 sin(n pi/2)).
inline ThetaDesign solve_theta(double b, double c) {
    if (b == 0.0 || !std::isfinite(b)) throw ZeroB("solve_theta: b must be nonzero");
    const std::array<std::array<double, 4>, 4> m{{{1, -1, 1, -1},
                                                  {1, 3, 5, 7},
                                                  {-1, 9, -25, 49},
                                                  {-1, -27, -125, -343}}};
    const std::array<double, 4> rhs{b, 2.0, -2.0 / b, c};
    ThetaDesign d;
    d.a = detail::solve_linear<4>(m, rhs);
    d.b = b;
    d.c = c;
    // residual check against the analytic rows
    for (int r = 0; r < 4; ++r) {
        double s = 0.0;
        for (int k = 0; k < 4; ++k) s += m[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] * d.a[static_cast<std::size_t>(k)];
        if (std::fabs(s - rhs[static_cast<std::size_t>(r)]) > 1e-12)
            throw SingularSystem("solve_theta: residual above 1e-12");
    }
    return d;
}

/// Exact inverse-design field
///   beta(t) = -theta''/(2 theta) + ((theta'/2)^2 - 1)/theta^2.
/// Near a zero of theta the quotient is evaluated from a 4th-order Taylor
/// expansion of theta about the zero; the zero is admissible only when
/// |theta'| = 2 there (within 1e-6).
///
/// ThetaFn must provide deriv(t, d) for d = 0..4.
template <typename ThetaFn>
inline double beta_from_theta(const ThetaFn& th, double t) {
    const double v = th.deriv(t, 0);
    if (std::fabs(v) >= 1e-6) {
        const double d1 = th.deriv(t, 1);
        const double d2 = th.deriv(t, 2);
        const double half = 0.5 * d1;
        return -d2 / (2.0 * v) + (half * half - 1.0) / (v * v);
    }
    // locate the zero by Newton from t
    double t0 = t;
    for (int it = 0; it < 8; ++it) {
        const double f = th.deriv(t0, 0);
        const double fp = th.deriv(t0, 1);
        if (fp == 0.0) break;
        t0 -= f / fp;
    }
    const double a1 = th.deriv(t0, 1);
    if (std::fabs(std::fabs(a1) - 2.0) > 1e-6)
        throw SingularTheta(t0, "beta_from_theta: theta=0 with |theta'| != 2");
    // theta = a1 u (1 + p u + q u^2 + r u^3) about the zero; with a1 = +/-2 the
    // singular parts cancel and beta = -3q/2 + (2pq - 4r) u + O(u^2).
    const double u = t - t0;
    const double p = th.deriv(t0, 2) / (2.0 * a1);
    const double q = th.deriv(t0, 3) / (6.0 * a1);
    const double r = th.deriv(t0, 4) / (24.0 * a1);
    return -1.5 * q + (2.0 * p * q - 4.0 * r) * u;
}

/// A solved design together with its derived field on [-pi/2, pi/2].
struct ExactPulse {
    ThetaDesign theta;
    double t_start = -kHalfPi;
    double t_end = kHalfPi;

    double beta(double t) const { return beta_from_theta(theta, t); }
};

inline ExactPulse make_exact_pulse(double b, double c) {
    return ExactPulse{solve_theta(b, c)};
}

enum class SignProfile { AllPositive, Mixed, NonPositive };

inline const char* to_string(SignProfile s) {
    switch (s) {
        case SignProfile::AllPositive: return "all-positive";
        case SignProfile::Mixed: return "mixed";
        case SignProfile::NonPositive: return "non-positive";
    }
    return "?";
}

struct ThetaZero {
    double t = 0.0;
    double slope = 0.0;          // theta'(t) at the zero
    double slope_defect = 0.0;   // | |theta'| - 2 |
};

struct ValidityReport {
    std::vector<ThetaZero> zeros;     // zeros of theta inside the interval
    SignProfile sign = SignProfile::Mixed;
    double max_abs_beta = 0.0;
    double min_beta = 0.0;
    double max_beta = 0.0;
    double symmetry_residual = 0.0;   // max |beta(t) - beta(-t)|
    double endpoint_left = 0.0;       // beta(-pi/2)
    double endpoint_right = 0.0;      // beta(pi/2)
    bool zeros_admissible = true;     // every zero has |theta'| = 2 within 1e-6
};

/// Scan the pulse on n_check interior samples: zeros with their slope
/// defects, the sign profile of beta (all-positive fields squeeze, mixed or
/// negative fields are loop candidates), extrema and the symmetry residual.
inline ValidityReport validate_design(const ExactPulse& pulse, int n_check) {
    if (n_check < 16) n_check = 16;
    ValidityReport rep;
    const ThetaDesign& th = pulse.theta;
    const double lo = pulse.t_start, hi = pulse.t_end;
    const double dt = (hi - lo) / n_check;

    // zeros of theta via sign changes, polished by Newton
    double prev = th.deriv(lo + 1e-12, 0);
    for (int i = 1; i <= n_check; ++i) {
        const double t = lo + i * dt;
        const double v = th.deriv(std::min(t, hi - 1e-12), 0);
        if (prev == 0.0 || prev * v < 0.0) {
            double z = t - 0.5 * dt;
            for (int it = 0; it < 50; ++it) {
                const double f = th.deriv(z, 0), fp = th.deriv(z, 1);
                if (fp == 0.0) break;
                const double step = f / fp;
                z -= step;
                if (std::fabs(step) < 1e-15) break;
            }
            if (z > lo + 1e-9 && z < hi - 1e-9) {
                const double slope = th.deriv(z, 1);
                ThetaZero tz{z, slope, std::fabs(std::fabs(slope) - 2.0)};
                if (tz.slope_defect > 1e-6) rep.zeros_admissible = false;
                rep.zeros.push_back(tz);
            }
        }
        prev = v;
    }

    double mn = 1e300, mx = -1e300, sym = 0.0;
    bool nonneg = true, nonpos = true;
    for (int i = 0; i <= n_check; ++i) {
        const double t = lo + i * dt;
        const double bv = pulse.beta(t);
        mn = std::min(mn, bv);
        mx = std::max(mx, bv);
        if (i > 0 && i < n_check) { // endpoints vanish by construction
            if (bv < 0.0) nonneg = false;
            if (bv > 0.0) nonpos = false;
        }
        sym = std::max(sym, std::fabs(bv - pulse.beta(-t)));
    }
    rep.min_beta = mn;
    rep.max_beta = mx;
    rep.max_abs_beta = std::max(std::fabs(mn), std::fabs(mx));
    rep.symmetry_residual = sym;
    rep.endpoint_left = pulse.beta(lo);
    rep.endpoint_right = pulse.beta(hi);
    rep.sign = nonneg ? SignProfile::AllPositive
                      : (nonpos ? SignProfile::NonPositive : SignProfile::Mixed);
    return rep;
}

} // namespace magdyn
