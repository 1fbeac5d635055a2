#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "magdyn/phase.hpp"
#include "magdyn/protocol.hpp"

namespace magdyn {

/// External force along Ox. Harmonic forces follow the absolute protocol
/// clock: F(t) = amplitude * sin(omega_f * t) with t the same variable the
/// stages run on (a two-pulse protocol starts at t = -pi/2).
struct ForceSpec {
    enum class Kind { None, Constant, Harmonic } kind = Kind::None;
    double amplitude = 0.0;
    double omega_f = 1.0;

    double operator()(double t) const {
        switch (kind) {
            case Kind::Constant: return amplitude;
            case Kind::Harmonic: return amplitude * std::sin(omega_f * t);
            case Kind::None: break;
        }
        return 0.0;
    }

    static ForceSpec none() { return {}; }
    static ForceSpec constant(double f) { return {Kind::Constant, f, 1.0}; }
    static ForceSpec harmonic(double f, double w = 1.0) { return {Kind::Harmonic, f, w}; }
};

inline const char* to_string(ForceSpec::Kind k) {
    switch (k) {
        case ForceSpec::Kind::None: return "none";
        case ForceSpec::Kind::Constant: return "constant";
        case ForceSpec::Kind::Harmonic: return "harmonic";
    }
    return "?";
}

struct DriftReport {
    FuzzyCentre centre_start, centre_end;
    double drift_x = 0.0, drift_y = 0.0;
    double transversality = 0.0;  // cosine between drift and the force axis
    bool transversal = false;     // |cos| <= 0.1
    double sample_t_start = 0.0, sample_t_end = 0.0;
    double beta_start = 0.0, beta_end = 0.0;
};

namespace detail {

/// Field value (the fuzzy-centre beta) of a protocol at global time t.
inline double protocol_field(const std::vector<Stage>& stages, double t) {
    const auto clocks = stage_clocks(stages);
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const double g0 = clocks[i].global_start;
        const double g1 = g0 + stages[i].span();
        if (t <= g1 || i + 1 == stages.size())
            if (t >= g0 - 1e-12) return stages[i].pulse.value(t - clocks[i].shift);
    }
    return stages.back().pulse.value(t - clocks.back().shift);
}

/// The centre formula divides by the field, so endpoint sampling moves to
/// the nearest interior instant where |field| >= max(1e-6, 5% of the
/// protocol peak); pulse ends vanish by design and would blow the centre up.
inline double sane_sample_instant(const std::vector<Stage>& stages, double t_edge,
                                  double t_limit, double direction) {
    double peak = 0.0;
    const auto clocks = stage_clocks(stages);
    for (std::size_t i = 0; i < stages.size(); ++i) {
        const double g0 = clocks[i].global_start, g1 = g0 + stages[i].span();
        for (int s = 0; s <= 256; ++s)
            peak = std::max(peak, std::fabs(protocol_field(stages, g0 + (g1 - g0) * s / 256.0)));
    }
    const double thr = std::max(1e-6, 0.05 * peak);
    double t = t_edge;
    const double dt = direction * 1e-4 * std::fabs(t_limit - t_edge);
    while ((direction > 0 ? t < t_limit : t > t_limit) &&
           std::fabs(protocol_field(stages, t)) < thr)
        t += dt;
    return t;
}

} // namespace detail

/// Forced protocol run plus the drift of the fuzzy centre between the first
/// and last field-sane instants of the protocol.
inline std::pair<ProtocolResult, DriftReport> perturbed_run(
    const std::vector<Stage>& stages, const PhaseVector& q0, const ForceSpec& force,
    const ToleranceSpec& tol = {}) {
    ProtocolResult res = run_protocol_forced(stages, q0, force, tol);

    DriftReport drift;
    const double t0 = res.t_start, t1 = res.t_end;
    drift.sample_t_start = detail::sane_sample_instant(stages, t0, t1, +1.0);
    drift.sample_t_end = detail::sane_sample_instant(stages, t1, t0, -1.0);
    drift.beta_start = detail::protocol_field(stages, drift.sample_t_start);
    drift.beta_end = detail::protocol_field(stages, drift.sample_t_end);

    // states at the sampling instants, interpolated from the stored record
    auto state_at = [&](double t) -> PhaseVector {
        const auto& r = res.record;
        std::size_t lo = 0, hi = r.t.size() - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (r.t[mid] <= t ? lo : hi) = mid;
        }
        const double w = (t - r.t[lo]) / (r.t[hi] - r.t[lo]);
        auto lerp = [&](const std::vector<double>& v) {
            return v[lo] + w * (v[hi] - v[lo]);
        };
        return {lerp(r.x), lerp(r.px), lerp(r.y), lerp(r.py)};
    };
    drift.centre_start = fuzzy_centre(state_at(drift.sample_t_start), drift.beta_start);
    drift.centre_end = fuzzy_centre(state_at(drift.sample_t_end), drift.beta_end);
    drift.drift_x = drift.centre_end.xbar - drift.centre_start.xbar;
    drift.drift_y = drift.centre_end.ybar - drift.centre_start.ybar;
    const double norm = std::hypot(drift.drift_x, drift.drift_y);
    drift.transversality = norm > 0.0 ? drift.drift_x / norm : 0.0;
    drift.transversal = std::fabs(drift.transversality) <= 0.1;
    return {std::move(res), drift};
}

struct SqueezeFactors {
    double lambda_x = 0.0, lambda_y = 0.0;
    Mat4 linear;          // force-independent part from matrix propagation
    PhaseVector offset;   // response of the zero initial state
};

/// Per-axis position scalings of the forced affine map q -> M q + d. The
/// linear part comes from the composed stage matrices, the offset from a
/// zero-state forced run; realised ratios include the offset when the start
/// coordinate is nonzero.
inline SqueezeFactors forced_squeeze_factors(const std::vector<Stage>& stages,
                                             const PhaseVector& q0,
                                             const ForceSpec& force,
                                             const ToleranceSpec& tol = {}) {
    SqueezeFactors f;
    const ProtocolResult unforced = run_protocol(stages, PhaseVector{}, std::nullopt, tol);
    f.linear = unforced.composed;
    const ProtocolResult zero_state = run_protocol_forced(stages, PhaseVector{}, force, tol);
    f.offset = zero_state.final_state;
    const auto mapped = f.linear.apply(q0.to_array());
    const double xT = mapped[0] + f.offset.x;
    const double yT = mapped[2] + f.offset.y;
    f.lambda_x = q0.x != 0.0 ? xT / q0.x : f.linear.at(0, 0);
    f.lambda_y = q0.y != 0.0 ? yT / q0.y : f.linear.at(2, 2);
    return f;
}

} // namespace magdyn
