#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "magdyn/errors.hpp"
#include "magdyn/phase.hpp"
#include "magdyn/pulse.hpp"
#include "magdyn/transfer.hpp"

namespace magdyn {

/// Sampled planar trajectory with the angular momentum channel.
struct TrajectoryRecord {
    std::vector<double> t, x, px, y, py, lz;
    std::string pulse_desc;
    double force = 0.0;          // constant force magnitude recorded in meta
    std::string force_desc = "none";
    double step = 0.0;

    std::size_t size() const { return t.size(); }
    PhaseVector state(std::size_t i) const { return {x[i], px[i], y[i], py[i]}; }
    PhaseVector final_state() const { return state(t.size() - 1); }
};

namespace detail {

/// RK4 on the planar system
///   xdot = px + b y,  pxdot = -k x + b py - F,
///   ydot = py - b x,  pydot = -k y - b px,
/// where k is the oscillatory coefficient and b the rotation rate.
template <typename KFn, typename BFn, typename FFn>
inline void rk4_planar_step(std::array<double, 4>& q, double t, double dt,
                            KFn&& kf, BFn&& bf, FFn&& ff) {
    auto rhs = [&](const std::array<double, 4>& s, double tt,
                   std::array<double, 4>& d) {
        const double k = kf(tt), b = bf(tt), F = ff(tt);
        d[0] = s[1] + b * s[2];
        d[1] = -k * s[0] + b * s[3] - F;
        d[2] = s[3] - b * s[0];
        d[3] = -k * s[2] - b * s[1];
    };
    std::array<double, 4> k1, k2, k3, k4, tmp;
    rhs(q, t, k1);
    for (int i = 0; i < 4; ++i) tmp[i] = q[i] + 0.5 * dt * k1[i];
    rhs(tmp, t + 0.5 * dt, k2);
    for (int i = 0; i < 4; ++i) tmp[i] = q[i] + 0.5 * dt * k2[i];
    rhs(tmp, t + 0.5 * dt, k3);
    for (int i = 0; i < 4; ++i) tmp[i] = q[i] + dt * k3[i];
    rhs(tmp, t + dt, k4);
    for (int i = 0; i < 4; ++i)
        q[i] += dt / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
}

template <typename KFn, typename BFn, typename FFn>
inline std::array<double, 4> propagate_segment(std::array<double, 4> q, double t0,
                                               double t1, double step, double guard,
                                               KFn&& kf, BFn&& bf, FFn&& ff) {
    const double span = t1 - t0;
    if (span == 0.0) return q;
    const std::int64_t n = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::llround(span / step)));
    const double dt = span / static_cast<double>(n);
    for (std::int64_t i = 0; i < n; ++i) {
        rk4_planar_step(q, t0 + static_cast<double>(i) * dt, dt, kf, bf, ff);
        for (double v : q)
            if (!(std::fabs(v) <= guard))
                throw NonFiniteState(t0 + static_cast<double>(i + 1) * dt,
                                     "trajectory exceeded overflow guard");
    }
    return q;
}

} // namespace detail

/// Propagate the planar state under the pulse, sampling n_samples states
/// (both endpoints included). An optional constant force acts along Ox.
inline TrajectoryRecord propagate_trajectory(const Pulse& pulse, const PhaseVector& q0,
                                             double t0, double t1, int n_samples,
                                             std::optional<double> force = std::nullopt,
                                             const ToleranceSpec& tol = {}) {
    if (n_samples < 2) n_samples = 2;
    if (!pulse.contains(t0, t1))
        throw IntervalOutsidePulse("propagate_trajectory: outside pulse interval");
    const double F = force.value_or(0.0);
    auto kf = [&](double t) { return pulse.coefficient(t); };
    auto bf = [&](double t) { return pulse.rotation_rate(t); };
    auto ff = [&](double) { return F; };

    TrajectoryRecord rec;
    rec.pulse_desc = pulse.kind_name();
    rec.force = F;
    rec.force_desc = force ? "constant" : "none";
    rec.step = tol.step;
    rec.t.reserve(static_cast<std::size_t>(n_samples));

    std::array<double, 4> q = q0.to_array();
    double t_prev = t0;
    auto push = [&](double t) {
        rec.t.push_back(t);
        rec.x.push_back(q[0]);
        rec.px.push_back(q[1]);
        rec.y.push_back(q[2]);
        rec.py.push_back(q[3]);
        rec.lz.push_back(q[0] * q[3] - q[2] * q[1]);
    };
    push(t0);
    for (int s = 1; s < n_samples; ++s) {
        const double t_next = t0 + (t1 - t0) * s / (n_samples - 1);
        q = detail::propagate_segment(q, t_prev, t_next, tol.step, tol.overflow_guard,
                                      kf, bf, ff);
        push(t_next);
        t_prev = t_next;
    }
    return rec;
}

} // namespace magdyn
