#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "magdyn/errors.hpp"

namespace magdyn {

/// Exact nonnegative rational with a unit numerator family in mind but kept
/// general; denominators of the correction series fit in 128 bits up to
/// n = 14.
struct Rational {
    long long num = 0;
    unsigned __int128 den = 1;

    double to_double() const {
        return static_cast<double>(num) / static_cast<double>(den);
    }

    std::string str() const {
        unsigned __int128 d = den;
        std::string ds;
        if (d == 0) ds = "0";
        while (d > 0) {
            ds.insert(ds.begin(), static_cast<char>('0' + static_cast<int>(d % 10)));
            d /= 10;
        }
        if (ds.empty()) ds = "1";
        return std::to_string(num) + "/" + ds;
    }

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

/// Coefficient of the r^{2n} term of the solenoid correction series:
/// 1 / (4^n n! (n+1)!), exact.
inline Rational correction_coefficient(int n) {
    if (n < 0) throw std::invalid_argument("correction_coefficient: n >= 0 required");
    if (n > 14) throw std::invalid_argument("correction_coefficient: n > 14 overflows");
    unsigned __int128 den = 1;
    for (int i = 0; i < n; ++i) den *= 4;
    for (int i = 2; i <= n; ++i) den *= static_cast<unsigned>(i);
    for (int i = 2; i <= n + 1; ++i) den *= static_cast<unsigned>(i);
    return Rational{1, den};
}

/// cgs constants; gamma is the Abraham-Lorentz time (2/3) e^2 / (m c^3).
struct PhysicalConstants {
    double c = 2.99792458e10;     // cm/s
    double hbar = 1.054571817e-27;  // erg s
    double e = 4.80320471e-10;    // esu
    double m = 1.6726e-24;        // g (proton default)

    double gamma() const { return (2.0 / 3.0) * e * e / (m * c * c * c); }

    static PhysicalConstants proton() { return {}; }
    static PhysicalConstants electron() {
        PhysicalConstants k;
        k.m = 9.1093837015e-28;
        return k;
    }
};

/// Time profile of the solenoid field in gauss, as a function of the
/// dimensionless time tau = t/T.
struct HarmonicProfileTerm {
    double amplitude = 0.0;  // gauss
    double omega = 0.0;      // radians per unit tau
};

struct FieldProfile {
    double constant = 0.0;                     // gauss
    std::vector<HarmonicProfileTerm> harmonics;
    std::vector<double> samples;               // one period, uniform in tau; optional

    bool tabulated() const { return !samples.empty(); }

    /// d-th tau-derivative, analytic for the harmonic part.
    double deriv(double tau, int d) const {
        double s = (d == 0) ? constant : 0.0;
        for (const auto& h : harmonics)
            s += h.amplitude * std::pow(h.omega, d) * std::sin(h.omega * tau + d * 1.5707963267948966);
        return s;
    }
};

struct CorrectionTerm {
    int n = 0;
    Rational coefficient;
    double magnitude = 0.0;       // (r/(cT))^{2n} coeff max|d^{2n}B/dtau^{2n}|
    double deriv_max = 0.0;       // max |d^{2n}B/dtau^{2n}| in gauss
};

struct CorrectionSeries {
    double r = 0.0, T = 0.0;
    std::vector<CorrectionTerm> terms;
    /// First neglected term: the truncation error of the series is of this
    /// order, since the wave-equation defect of the truncation equals
    /// 4(N+1)(N+2)/r^2 times this term.
    double next_term_magnitude = 0.0;
    double dalembert_factor = 0.0;  // 4(N+1)(N+2) of the last kept order
    bool recursion_ok = false;      // exact-rational check of the coefficient recurrence
};

namespace detail {

inline double profile_deriv_max(const FieldProfile& B, int d) {
    if (B.tabulated()) {
        const std::size_t n = B.samples.size();
        if (d == 0) {
            double mx = 0.0;
            for (double s : B.samples) mx = std::max(mx, std::fabs(s));
            return mx;
        }
        // spectral differentiation of one period of samples
        const double two_pi = 6.283185307179586;
        std::vector<double> re((n / 2) + 1, 0.0), im((n / 2) + 1, 0.0);
        for (std::size_t k = 1; k <= n / 2; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                const double ph = two_pi * static_cast<double>(k) * static_cast<double>(j) /
                                  static_cast<double>(n);
                re[k] += B.samples[j] * std::cos(ph);
                im[k] -= B.samples[j] * std::sin(ph);
            }
            const double scale = (2 * k == n) ? 1.0 : 2.0;
            re[k] *= scale / static_cast<double>(n);
            im[k] *= scale / static_cast<double>(n);
        }
        double mx = 0.0;
        for (int i = 0; i < 2048; ++i) {
            const double tau = i / 2048.0;
            double v = 0.0;
            for (std::size_t k = 1; k <= n / 2; ++k) {
                const double w = two_pi * static_cast<double>(k);
                const double ph = w * tau + d * 1.5707963267948966;
                v += std::pow(w, d) * (re[k] * std::cos(ph) + im[k] * std::sin(ph));
            }
            mx = std::max(mx, std::fabs(v));
        }
        return mx;
    }
    double mx = 0.0;
    for (int i = 0; i <= 2048; ++i)
        mx = std::max(mx, std::fabs(B.deriv(i / 2048.0, d)));
    return mx;
}

} // namespace detail

/// Per-term magnitudes of the wave-equation correction series
///   B(t,r) = sum_n coeff_n (r/(cT))^{2n} d^{2n}B/dtau^{2n}.
/// The coefficient recurrence coeff_{n+1} * 4(n+1)(n+2) = coeff_n is what the
/// d'Alembert operator enforces order by order; it is re-checked here in
/// exact rationals, which is also what rules out the odd 1/c powers.
inline CorrectionSeries field_with_corrections(const FieldProfile& B, double r_cm,
                                               double T_s, int n_terms,
                                               const PhysicalConstants& k = {}) {
    if (n_terms < 1) throw std::invalid_argument("field_with_corrections: n_terms >= 1");
    if (B.tabulated() && n_terms > 2)
        throw InsufficientSmoothness(
            "tabulated profiles support at most the n=2 correction (n_terms <= 2)");
    CorrectionSeries out;
    out.r = r_cm;
    out.T = T_s;
    const double ratio2 = (r_cm / (k.c * T_s)) * (r_cm / (k.c * T_s));
    out.recursion_ok = true;
    for (int n = 0; n < n_terms; ++n) {
        CorrectionTerm term;
        term.n = n;
        term.coefficient = correction_coefficient(n);
        term.deriv_max = detail::profile_deriv_max(B, 2 * n);
        term.magnitude = term.coefficient.to_double() * std::pow(ratio2, n) * term.deriv_max;
        out.terms.push_back(term);
        const Rational next = correction_coefficient(n + 1);
        const unsigned __int128 lhs =
            next.den;  // next = 1/den_next; recurrence: den_next = den_n * 4(n+1)(n+2)
        const unsigned __int128 rhs =
            term.coefficient.den * static_cast<unsigned>(4 * (n + 1) * (n + 2));
        if (lhs != rhs || next.num != 1 || term.coefficient.num != 1)
            out.recursion_ok = false;
    }
    const int last = n_terms - 1;
    out.dalembert_factor = 4.0 * (last + 1) * (last + 2);
    out.next_term_magnitude = correction_coefficient(last + 1).to_double() *
                              std::pow(ratio2, last + 1) *
                              detail::profile_deriv_max(B, 2 * (last + 1));
    return out;
}

/// Field of a uniformly charged rotating cylinder, B = (4 pi / c) omega (R sigma).
/// charge_per_belt is R*sigma in esu per cm of height.
inline double rotating_cylinder_field(double radius_cm, double omega_per_s,
                                      double charge_per_belt_esu,
                                      const PhysicalConstants& k = {}) {
    if (radius_cm <= 0.0 || omega_per_s < 0.0 || charge_per_belt_esu <= 0.0)
        throw std::invalid_argument("rotating_cylinder_field: positive inputs required");
    return 4.0 * 3.141592653589793 / k.c * omega_per_s * charge_per_belt_esu;
}

/// One row of the laboratory-scale table for operation time T.
struct ScalingRow {
    double T = 0.0;        // s
    double q = 0.0;        // cm
    double p = 0.0;        // g cm / s
    double v = 0.0;        // cm / s
    double B_max = 0.0;    // gauss
    double rad_ratio = 0.0;  // radiative vs oscillator force, ~ gamma/T
    double beta_max = 0.0; // dimensionless field max used for B_max
};

inline ScalingRow lab_scaling(double T_s, const PhysicalConstants& k,
                              double beta_max_dimless) {
    if (!(T_s > 0.0)) throw std::invalid_argument("lab_scaling: T > 0 required");
    ScalingRow row;
    row.T = T_s;
    row.q = std::sqrt(k.hbar * T_s / k.m);
    row.p = std::sqrt(k.hbar * k.m / T_s);
    row.v = row.p / k.m;
    row.B_max = 2.0 * k.m * k.c * beta_max_dimless / (k.e * T_s);
    row.rad_ratio = k.gamma() / T_s;
    row.beta_max = beta_max_dimless;
    return row;
}

} // namespace magdyn
