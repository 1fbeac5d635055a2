#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "magdyn/mat.hpp"
#include "magdyn/phase.hpp"
#include "magdyn/planar.hpp"
#include "magdyn/pulse.hpp"
#include "magdyn/trajectory.hpp"
#include "magdyn/transfer.hpp"

namespace magdyn {

/// One protocol stage: the pulse is replayed on its own interval, time-shifted
/// onto the global clock. duration defaults to the pulse's interval length.
struct Stage {
    Pulse pulse;
    double duration = 0.0;

    double span() const {
        return duration > 0.0 ? duration : pulse.t_end - pulse.t_start;
    }
};

struct ProtocolResult {
    PhaseVector final_state;
    std::vector<TransferMatrix> stage_transfers;
    Mat4 composed;               // product of per-stage planar maps
    double lambda_x = 0.0;       // composed(0,0)
    double lambda_y = 0.0;       // composed(2,2)
    double offdiag_residual = 0.0;
    TrajectoryRecord record;
    double t_start = 0.0;
    double t_end = 0.0;
};

namespace detail {

struct StageClock {
    double global_start;  // stage start on the global clock
    double shift;         // global t - shift = pulse-local time
};

inline std::vector<StageClock> stage_clocks(const std::vector<Stage>& stages) {
    std::vector<StageClock> out;
    double t = stages.front().pulse.t_start;
    for (const auto& s : stages) {
        out.push_back({t, t - s.pulse.t_start});
        t += s.span();
    }
    return out;
}

} // namespace detail

/// Integrate the concatenated stages from the first pulse's own start time.
/// The trajectory samples span the whole protocol; ForceFn is evaluated on
/// the global clock.
template <typename ForceFn>
inline ProtocolResult run_protocol_forced(const std::vector<Stage>& stages,
                                          const PhaseVector& q0, ForceFn&& force,
                                          const ToleranceSpec& tol = {},
                                          int samples_per_stage = 257) {
    if (stages.empty()) throw std::invalid_argument("run_protocol: no stages");
    for (const auto& s : stages)
        if (!(s.span() > 0.0))
            throw std::invalid_argument("run_protocol: stage duration must be positive");

    ProtocolResult res;
    const auto clocks = detail::stage_clocks(stages);
    res.t_start = clocks.front().global_start;
    res.t_end = clocks.back().global_start + stages.back().span();

    res.composed = Mat4::identity();
    std::array<double, 4> q = q0.to_array();
    TrajectoryRecord rec;
    rec.pulse_desc = "protocol";
    rec.step = tol.step;
    auto push = [&](double t) {
        rec.t.push_back(t);
        rec.x.push_back(q[0]);
        rec.px.push_back(q[1]);
        rec.y.push_back(q[2]);
        rec.py.push_back(q[3]);
        rec.lz.push_back(q[0] * q[3] - q[2] * q[1]);
    };
    push(res.t_start);

    for (std::size_t si = 0; si < stages.size(); ++si) {
        const Stage& st = stages[si];
        const double g0 = clocks[si].global_start;
        const double g1 = g0 + st.span();
        const double shift = clocks[si].shift;
        const Pulse& p = st.pulse;

        // per-stage transfer over the pulse's own interval
        const TransferMatrix ht =
            integrate_transfer(p, p.t_start, p.t_start + st.span(), tol);
        res.stage_transfers.push_back(ht);
        const double phi = rotation_phase(p, p.t_start, p.t_start + st.span());
        res.composed = compose_planar(ht, phi).composed * res.composed;

        auto kf = [&](double t) { return p.coefficient(t - shift); };
        auto bf = [&](double t) { return p.rotation_rate(t - shift); };
        double t_prev = g0;
        for (int s = 1; s <= samples_per_stage; ++s) {
            const double t_next = g0 + (g1 - g0) * s / samples_per_stage;
            q = detail::propagate_segment(q, t_prev, t_next, tol.step,
                                          tol.overflow_guard, kf, bf, force);
            push(t_next);
            t_prev = t_next;
        }
    }
    res.final_state = PhaseVector{q[0], q[1], q[2], q[3]};
    res.record = std::move(rec);
    res.lambda_x = res.composed.at(0, 0);
    res.lambda_y = res.composed.at(2, 2);
    double off = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) off = std::max(off, std::fabs(res.composed.at(i, j)));
    res.offdiag_residual = off;
    return res;
}

inline ProtocolResult run_protocol(const std::vector<Stage>& stages, const PhaseVector& q0,
                                   std::optional<double> force = std::nullopt,
                                   const ToleranceSpec& tol = {},
                                   int samples_per_stage = 257) {
    const double F = force.value_or(0.0);
    return run_protocol_forced(stages, q0, [F](double) { return F; }, tol,
                               samples_per_stage);
}

inline std::vector<Stage> reversed_stages(std::vector<Stage> stages) {
    std::reverse(stages.begin(), stages.end());
    return stages;
}

/// Smallest elapsed time <= t_max at which the state returns within tol
/// (Euclidean over all four components) of q0 under the periodically
/// repeated pulse; nullopt when no return occurs. Detection samples every
/// integration step.
inline std::optional<double> find_loop_period(const Pulse& pulse, const PhaseVector& q0,
                                              double t_max, double tol,
                                              const ToleranceSpec& spec = {}) {
    if (!(t_max > 0.0)) throw std::invalid_argument("find_loop_period: t_max <= 0");
    const double period = pulse.t_end - pulse.t_start;
    auto wrap = [&](double t) {
        const double u = t - pulse.t_start;
        return pulse.t_start + (u - period * std::floor(u / period));
    };
    auto kf = [&](double t) { return pulse.coefficient(wrap(t)); };
    auto bf = [&](double t) { return pulse.rotation_rate(wrap(t)); };
    auto ff = [](double) { return 0.0; };

    std::array<double, 4> q = q0.to_array();
    const std::int64_t n = static_cast<std::int64_t>(std::ceil(t_max / spec.step));
    const double dt = t_max / static_cast<double>(n);
    double t = pulse.t_start;
    for (std::int64_t i = 0; i < n; ++i) {
        detail::rk4_planar_step(q, t, dt, kf, bf, ff);
        for (double v : q)
            if (!(std::fabs(v) <= spec.overflow_guard))
                throw NonFiniteState(t + dt, "loop search exceeded overflow guard");
        t = pulse.t_start + static_cast<double>(i + 1) * dt;
        const double d = std::sqrt((q[0] - q0.x) * (q[0] - q0.x) +
                                   (q[1] - q0.px) * (q[1] - q0.px) +
                                   (q[2] - q0.y) * (q[2] - q0.y) +
                                   (q[3] - q0.py) * (q[3] - q0.py));
        if (d < tol && t - pulse.t_start > dt) return t - pulse.t_start;
    }
    return std::nullopt;
}

} // namespace magdyn
