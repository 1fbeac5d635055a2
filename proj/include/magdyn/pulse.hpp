#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "magdyn/errors.hpp"
#include "magdyn/theta.hpp"

namespace magdyn {

/// Which ODE coefficient the pulse supplies. SquaredBeta pulses describe a
/// magnetic field beta(t): the oscillatory coefficient is beta^2 and the
/// planar rotation rate is beta. DirectBeta pulses supply the elastic
/// coefficient k(t) itself (the inverse-design convention); they carry no
/// rotational part.
enum class Convention { SquaredBeta, DirectBeta };

inline const char* to_string(Convention c) {
    return c == Convention::SquaredBeta ? "squared-beta" : "direct-beta";
}

struct Biharmonic {
    double beta0 = 0.0, beta1 = 0.0, beta2 = 0.0;
    double omega1 = 0.0, omega2 = 0.0;

    double value(double t) const {
        return beta0 + beta1 * std::sin(omega1 * t) + beta2 * std::sin(omega2 * t);
    }
};

/// Constant pulse stores the ODE coefficient k directly, so k = w^2 gives
/// the harmonic rotation matrix regardless of the convention flag.
struct Constant {
    double k = 0.0;
};

/// Uniformly sampled coefficient with local cubic (Catmull-Rom) interpolation,
/// C1 across the samples.
struct Tabulated {
    std::vector<double> samples;

    double value_on(double t, double t_start, double t_end) const {
        const std::size_t n = samples.size();
        if (n == 1) return samples[0];
        const double u = (t - t_start) / (t_end - t_start) * static_cast<double>(n - 1);
        const double fi = std::floor(u);
        std::ptrdiff_t i = static_cast<std::ptrdiff_t>(fi);
        if (i < 0) i = 0;
        if (i > static_cast<std::ptrdiff_t>(n) - 2) i = static_cast<std::ptrdiff_t>(n) - 2;
        const double s = u - static_cast<double>(i);
        auto at = [&](std::ptrdiff_t j) {
            if (j < 0) j = 0;
            if (j >= static_cast<std::ptrdiff_t>(n)) j = static_cast<std::ptrdiff_t>(n) - 1;
            return samples[static_cast<std::size_t>(j)];
        };
        const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
        return p1 + 0.5 * s * (p2 - p0 +
               s * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 +
               s * (3.0 * (p1 - p2) + p3 - p0)));
    }
};

struct MielnikExact {
    ThetaDesign theta;

    double value(double t) const { return beta_from_theta(theta, t); }
};

/// Time-dependent elastic coefficient on an interval.
struct Pulse {
    std::variant<Biharmonic, Constant, Tabulated, MielnikExact> kind;
    double t_start = 0.0;
    double t_end = 1.0;
    Convention convention = Convention::SquaredBeta;

    bool contains(double t0, double t1) const {
        const double eps = 1e-12 * std::max(1.0, std::fabs(t_end - t_start));
        return t0 >= t_start - eps && t1 <= t_end + eps && t1 > t0;
    }

    /// Raw pulse value: beta(t) for SquaredBeta kinds, k(t) for DirectBeta
    /// and Constant kinds.
    double value(double t) const {
        return std::visit(
            [&](const auto& k) -> double {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, Tabulated>)
                    return k.value_on(t, t_start, t_end);
                else if constexpr (std::is_same_v<T, Constant>)
                    return k.k;
                else
                    return k.value(t);
            },
            kind);
    }

    /// Oscillatory ODE coefficient k(t).
    double coefficient(double t) const {
        if (std::holds_alternative<Constant>(kind)) return std::get<Constant>(kind).k;
        const double v = value(t);
        return convention == Convention::SquaredBeta ? v * v : v;
    }

    /// Planar rotation rate. DirectBeta pulses evolve the two oscillatory
    /// subspaces only; a Constant coefficient k > 0 under SquaredBeta
    /// corresponds to the field beta = sqrt(k).
    double rotation_rate(double t) const {
        if (convention == Convention::DirectBeta) return 0.0;
        if (std::holds_alternative<Constant>(kind)) {
            const double k = std::get<Constant>(kind).k;
            return k > 0.0 ? std::sqrt(k) : 0.0;
        }
        return value(t);
    }

    std::string kind_name() const {
        switch (kind.index()) {
            case 0: return "biharmonic";
            case 1: return "constant";
            case 2: return "tabulated";
            default: return "mielnik";
        }
    }
};

inline Pulse make_biharmonic(double beta0, double beta1, double beta2,
                             double omega1, double omega2,
                             double t_start = 0.0, double t_end = 1.0) {
    return Pulse{Biharmonic{beta0, beta1, beta2, omega1, omega2}, t_start, t_end,
                 Convention::SquaredBeta};
}

inline Pulse make_constant(double k, double t_start, double t_end) {
    return Pulse{Constant{k}, t_start, t_end, Convention::SquaredBeta};
}

inline Pulse make_mielnik(const ThetaDesign& design) {
    return Pulse{MielnikExact{design}, -kHalfPi, kHalfPi, Convention::DirectBeta};
}

inline Pulse make_mielnik(double b, double c) { return make_mielnik(solve_theta(b, c)); }

} // namespace magdyn
