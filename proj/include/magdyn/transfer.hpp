#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "magdyn/errors.hpp"
#include "magdyn/mat.hpp"
#include "magdyn/pulse.hpp"

namespace magdyn {

/// Fixed-step integration settings. The step is exact (the given interval is
/// split into round((t1-t0)/step) equal pieces) so runs are reproducible.
struct ToleranceSpec {
    double step = 1e-4;
    bool richardson = false;     // half-step error monitor
    double overflow_guard = 1e12;
};

struct TransferMatrix {
    Mat2 h;
    double sigma = 2.0;                       // trace
    double delta = 0.0;                       // sigma^2 - 4
    std::complex<double> lambda_plus{1.0, 0.0};
    std::complex<double> lambda_minus{1.0, 0.0};
    double t_span = 0.0;
    double err_estimate = 0.0;                // Richardson estimate when enabled

    static TransferMatrix from(const Mat2& h, double span = 0.0, double err = 0.0) {
        TransferMatrix m;
        m.h = h;
        m.sigma = h.trace();
        m.delta = m.sigma * m.sigma - 4.0;
        const double d = h.det();
        // roots of lambda^2 - sigma lambda + det
        const double disc = m.sigma * m.sigma - 4.0 * d;
        if (disc >= 0.0) {
            const double r = std::sqrt(disc);
            m.lambda_plus = 0.5 * (m.sigma + r);
            m.lambda_minus = 0.5 * (m.sigma - r);
        } else {
            const double r = std::sqrt(-disc);
            m.lambda_plus = {0.5 * m.sigma, 0.5 * r};
            m.lambda_minus = {0.5 * m.sigma, -0.5 * r};
        }
        m.t_span = span;
        m.err_estimate = err;
        return m;
    }
};

namespace detail {

/// One RK4 step of h' = [[0,1],[-k,0]] h. k_a, k_m, k_b are the coefficient
/// at t, t+dt/2, t+dt.
inline void rk4_transfer_step(Mat2& h, double k_a, double k_m, double k_b, double dt) {
    const double a11 = h.h21, a12 = h.h22, a21 = -k_a * h.h11, a22 = -k_a * h.h12;
    double m11 = h.h11 + 0.5 * dt * a11, m12 = h.h12 + 0.5 * dt * a12;
    double m21 = h.h21 + 0.5 * dt * a21, m22 = h.h22 + 0.5 * dt * a22;
    const double b11 = m21, b12 = m22, b21 = -k_m * m11, b22 = -k_m * m12;
    m11 = h.h11 + 0.5 * dt * b11; m12 = h.h12 + 0.5 * dt * b12;
    m21 = h.h21 + 0.5 * dt * b21; m22 = h.h22 + 0.5 * dt * b22;
    const double c11 = m21, c12 = m22, c21 = -k_m * m11, c22 = -k_m * m12;
    m11 = h.h11 + dt * c11; m12 = h.h12 + dt * c12;
    m21 = h.h21 + dt * c21; m22 = h.h22 + dt * c22;
    const double d11 = m21, d12 = m22, d21 = -k_b * m11, d22 = -k_b * m12;
    h.h11 += dt / 6.0 * (a11 + 2.0 * (b11 + c11) + d11);
    h.h12 += dt / 6.0 * (a12 + 2.0 * (b12 + c12) + d12);
    h.h21 += dt / 6.0 * (a21 + 2.0 * (b21 + c21) + d21);
    h.h22 += dt / 6.0 * (a22 + 2.0 * (b22 + c22) + d22);
}

inline bool guard_tripped(const Mat2& h, double guard) {
    return !(std::fabs(h.h11) <= guard && std::fabs(h.h12) <= guard &&
             std::fabs(h.h21) <= guard && std::fabs(h.h22) <= guard) ||
           !h.finite();
}

/// Left flow h' = Lambda(t) h over [t0,t1] for an arbitrary coefficient
/// callable k(t). Throws NonFiniteState on overflow.
template <typename K>
inline Mat2 left_flow(K&& k, double t0, double t1, double step, double guard) {
    const double span = t1 - t0;
    const std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(span / step)));
    const double dt = span / static_cast<double>(n);
    Mat2 h;
    for (std::int64_t i = 0; i < n; ++i) {
        const double t = t0 + static_cast<double>(i) * dt;
        rk4_transfer_step(h, k(t), k(t + 0.5 * dt), k(t + dt), dt);
        if (guard_tripped(h, guard))
            throw NonFiniteState(t + dt, "transfer integration exceeded overflow guard");
    }
    return h;
}

/// Anti-commutator flow h' = Lambda(t) h + h Lambda(t), h(0) = 1, used for
/// verifying inverse designs on symmetric intervals.
template <typename K>
inline Mat2 anticommutator_flow(K&& k, double t0, double t1, double step, double guard) {
    const double span = t1 - t0;
    const std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(span / step)));
    const double dt = span / static_cast<double>(n);
    Mat2 h;
    auto deriv = [](const Mat2& m, double kv, Mat2& out) {
        // Lambda m + m Lambda with Lambda = [[0,1],[-k,0]]
        out.h11 = m.h21 - kv * m.h12;
        out.h12 = m.h11 + m.h22;
        out.h21 = -kv * (m.h11 + m.h22);
        out.h22 = m.h21 - kv * m.h12;
    };
    Mat2 k1, k2, k3, k4, tmp;
    for (std::int64_t i = 0; i < n; ++i) {
        const double t = t0 + static_cast<double>(i) * dt;
        const double ka = k(t), km = k(t + 0.5 * dt), kb = k(t + dt);
        deriv(h, ka, k1);
        tmp = {h.h11 + 0.5 * dt * k1.h11, h.h12 + 0.5 * dt * k1.h12,
               h.h21 + 0.5 * dt * k1.h21, h.h22 + 0.5 * dt * k1.h22};
        deriv(tmp, km, k2);
        tmp = {h.h11 + 0.5 * dt * k2.h11, h.h12 + 0.5 * dt * k2.h12,
               h.h21 + 0.5 * dt * k2.h21, h.h22 + 0.5 * dt * k2.h22};
        deriv(tmp, km, k3);
        tmp = {h.h11 + dt * k3.h11, h.h12 + dt * k3.h12,
               h.h21 + dt * k3.h21, h.h22 + dt * k3.h22};
        deriv(tmp, kb, k4);
        h.h11 += dt / 6.0 * (k1.h11 + 2.0 * (k2.h11 + k3.h11) + k4.h11);
        h.h12 += dt / 6.0 * (k1.h12 + 2.0 * (k2.h12 + k3.h12) + k4.h12);
        h.h21 += dt / 6.0 * (k1.h21 + 2.0 * (k2.h21 + k3.h21) + k4.h21);
        h.h22 += dt / 6.0 * (k1.h22 + 2.0 * (k2.h22 + k3.h22) + k4.h22);
        if (guard_tripped(h, guard))
            throw NonFiniteState(t + dt, "anticommutator flow exceeded overflow guard");
    }
    return h;
}

template <typename F>
inline double adaptive_simpson_rec(F&& f, double a, double b, double fa, double fm,
                                   double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double err = left + right - whole;
    if (depth <= 0 || std::fabs(err) <= 15.0 * tol)
        return left + right + err / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
inline double adaptive_simpson(F&& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    // split once up front so full-period sines do not fool the estimator
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    (void)whole;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, 48) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, 48);
}

} // namespace detail

/// h(t1) of dh/dt = Lambda(t) h, h(t0) = 1, with the pulse's coefficient
/// convention. |det h - 1| stays within 1e-8 for the default step.
inline TransferMatrix integrate_transfer(const Pulse& pulse, double t0, double t1,
                                         const ToleranceSpec& tol = {}) {
    if (!pulse.contains(t0, t1))
        throw IntervalOutsidePulse("integrate_transfer: [t0,t1] outside pulse interval");
    auto k = [&](double t) { return pulse.coefficient(t); };
    const Mat2 h = detail::left_flow(k, t0, t1, tol.step, tol.overflow_guard);
    double err = 0.0;
    if (tol.richardson) {
        const Mat2 fine = detail::left_flow(k, t0, t1, 0.5 * tol.step, tol.overflow_guard);
        err = std::max(std::max(std::fabs(h.h11 - fine.h11), std::fabs(h.h12 - fine.h12)),
                       std::max(std::fabs(h.h21 - fine.h21), std::fabs(h.h22 - fine.h22))) /
              15.0;
    }
    return TransferMatrix::from(h, t1 - t0, err);
}

/// Same flow sampled at n_samples points (inclusive of both ends).
inline std::vector<TransferMatrix> integrate_transfer_sampled(
    const Pulse& pulse, double t0, double t1, int n_samples,
    const ToleranceSpec& tol = {}) {
    if (!pulse.contains(t0, t1))
        throw IntervalOutsidePulse("integrate_transfer_sampled: outside pulse interval");
    if (n_samples < 2) n_samples = 2;
    std::vector<TransferMatrix> out;
    out.reserve(static_cast<std::size_t>(n_samples));
    out.push_back(TransferMatrix::from(Mat2::identity(), 0.0));
    Mat2 h;
    auto k = [&](double t) { return pulse.coefficient(t); };
    double t_prev = t0;
    for (int s = 1; s < n_samples; ++s) {
        const double t_next = t0 + (t1 - t0) * s / (n_samples - 1);
        const double span = t_next - t_prev;
        const std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(span / tol.step)));
        const double dt = span / static_cast<double>(n);
        for (std::int64_t i = 0; i < n; ++i) {
            const double t = t_prev + static_cast<double>(i) * dt;
            detail::rk4_transfer_step(h, k(t), k(t + 0.5 * dt), k(t + dt), dt);
            if (detail::guard_tripped(h, tol.overflow_guard))
                throw NonFiniteState(t + dt, "transfer integration exceeded overflow guard");
        }
        out.push_back(TransferMatrix::from(h, t_next - t0));
        t_prev = t_next;
    }
    return out;
}

/// Anti-commutator flow of the same pulse (verification path for symmetric
/// inverse designs; production trajectories use the left flow).
inline TransferMatrix integrate_anticommutator(const Pulse& pulse, double t0, double t1,
                                               const ToleranceSpec& tol = {}) {
    if (!pulse.contains(t0, t1))
        throw IntervalOutsidePulse("integrate_anticommutator: outside pulse interval");
    auto k = [&](double t) { return pulse.coefficient(t); };
    return TransferMatrix::from(detail::anticommutator_flow(k, t0, t1, tol.step, tol.overflow_guard),
                                t1 - t0);
}

/// phi = integral of the pulse's rotation rate, adaptive quadrature with
/// absolute error <= 1e-10. DirectBeta pulses have no rotational part and
/// integrate to zero.
inline double rotation_phase(const Pulse& pulse, double t0, double t1) {
    if (!pulse.contains(t0, t1))
        throw IntervalOutsidePulse("rotation_phase: [t0,t1] outside pulse interval");
    if (pulse.convention == Convention::DirectBeta) return 0.0;
    return detail::adaptive_simpson([&](double t) { return pulse.rotation_rate(t); },
                                    t0, t1, 1e-10);
}

} // namespace magdyn
