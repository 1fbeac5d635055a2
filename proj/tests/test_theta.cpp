#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "magdyn/pulse.hpp"
#include "magdyn/theta.hpp"
#include "magdyn/transfer.hpp"

using namespace magdyn;
using Catch::Approx;

namespace {

// handle with analytic derivatives for theta(t) = sin(2 w t)/w
struct HarmonicTheta {
    double w;
    double deriv(double t, int d) const {
        return std::pow(2.0 * w, d) / w * std::sin(2.0 * w * t + d * kHalfPi);
    }
};

// theta(t) = 2t, free evolution
struct LinearTheta {
    double deriv(double t, int d) const {
        if (d == 0) return 2.0 * t;
        if (d == 1) return 2.0;
        return 0.0;
    }
};

// theta(t) = sin(3t): zero at t=0 with slope 3, inadmissible
struct BadTheta {
    double deriv(double t, int d) const {
        return std::pow(3.0, d) * std::sin(3.0 * t + d * kHalfPi);
    }
};

} // namespace

TEST_CASE("solve_theta reproduces the exact-fraction solutions") {
    const ThetaDesign d1 = solve_theta(2.0, -3.0);
    CHECK(d1.a[0] == Approx(65.0 / 32.0).margin(1e-13));
    CHECK(d1.a[1] == Approx(0.0).margin(1e-13));
    CHECK(d1.a[2] == Approx(-1.0 / 48.0).margin(1e-13));
    CHECK(d1.a[3] == Approx(1.0 / 96.0).margin(1e-13));

    const ThetaDesign d2 = solve_theta(9.0 / 5.0, -7.0 / 2.0);
    CHECK(d2.a[0] == Approx(4283.0 / 2304.0).margin(1e-13));
    CHECK(d2.a[1] == Approx(115.0 / 2304.0).margin(1e-13));
    CHECK(d2.a[2] == Approx(-23.0 / 3840.0).margin(1e-13));
    CHECK(d2.a[3] == Approx(7.0 / 2304.0).margin(1e-13));

    const ThetaDesign d3 = solve_theta(2.0, -5.0);
    CHECK(d3.a[0] == Approx(129.0 / 64.0).margin(1e-13));
    CHECK(d3.a[1] == Approx(-1.0 / 64.0).margin(1e-13));
    CHECK(d3.a[2] == Approx(-1.0 / 64.0).margin(1e-13));
    CHECK(d3.a[3] == Approx(1.0 / 64.0).margin(1e-13));
}

TEST_CASE("solved designs satisfy the endpoint constraints") {
    for (auto [b, c] : {std::pair{2.0, -3.0}, {1.8, -3.5}, {2.0, -5.0}, {1.5, -7.0}}) {
        const ThetaDesign d = solve_theta(b, c);
        CHECK(d.deriv(kHalfPi, 0) == Approx(b).margin(1e-10));
        CHECK(d.deriv(0.0, 1) == Approx(2.0).margin(1e-10));
        CHECK(d.deriv(kHalfPi, 2) == Approx(-2.0 / b).margin(1e-10));
        CHECK(d.deriv(0.0, 3) == Approx(c).margin(1e-10));
        // odd by construction
        for (double t : {0.3, 0.9, 1.4})
            CHECK(d.deriv(-t, 0) == Approx(-d.deriv(t, 0)).margin(1e-14));
    }
}

TEST_CASE("solve_theta rejects b = 0 and solves for any nonzero pair") {
    CHECK_THROWS_AS(solve_theta(0.0, 1.0), ZeroB);
    // solvable even when the request pins b = 1 (higher harmonics kick in)
    const ThetaDesign d = solve_theta(1.0, 2.0);
    CHECK(d.deriv(kHalfPi, 0) == Approx(1.0).margin(1e-10));
    const double high = std::fabs(d.a[1]) + std::fabs(d.a[2]) + std::fabs(d.a[3]);
    CHECK(high > 1e-3);
}

TEST_CASE("beta_from_theta: harmonic generator gives a constant field") {
    for (double w : {0.5, 1.0, 3.0}) {
        const HarmonicTheta th{w};
        for (double t : {-1.2, -0.3, 0.0, 0.7, 1.5})
            CHECK(beta_from_theta(th, t) == Approx(w * w).margin(1e-10));
    }
}

TEST_CASE("beta_from_theta: linear generator gives free evolution") {
    const LinearTheta th;
    CHECK(beta_from_theta(th, 0.0) == Approx(0.0).margin(1e-12));
    CHECK(beta_from_theta(th, 0.5) == Approx(0.0).margin(1e-12));
}

TEST_CASE("beta_from_theta rejects inadmissible zeros") {
    const BadTheta th;
    CHECK_THROWS_AS(beta_from_theta(th, 1e-8), SingularTheta);
}

TEST_CASE("design fields vanish at the endpoints and start at -c/8") {
    for (auto [b, c] : {std::pair{2.0, -3.0}, {1.8, -3.5}, {2.0, -5.0}}) {
        const ExactPulse p = make_exact_pulse(b, c);
        CHECK(p.beta(kHalfPi) == Approx(0.0).margin(1e-8));
        CHECK(p.beta(-kHalfPi) == Approx(0.0).margin(1e-8));
        // regularised value at the t = 0 zero: -theta'''(0)/(4 theta'(0))
        CHECK(p.beta(0.0) == Approx(-c / 8.0).margin(1e-10));
    }
}

TEST_CASE("validate_design: squeezing pulses are positive, loop pulses mixed") {
    const ValidityReport squeeze = validate_design(make_exact_pulse(2.0, -3.0), 512);
    CHECK(squeeze.sign == SignProfile::AllPositive);
    CHECK(squeeze.zeros_admissible);
    REQUIRE(squeeze.zeros.size() == 1);
    CHECK(squeeze.zeros[0].t == Approx(0.0).margin(1e-9));
    CHECK(squeeze.zeros[0].slope == Approx(2.0).margin(1e-9));
    CHECK(squeeze.max_abs_beta == Approx(0.508725).margin(1e-4));
    CHECK(squeeze.symmetry_residual < 1e-9);

    const ValidityReport squeeze2 = validate_design(make_exact_pulse(1.8, -3.5), 512);
    CHECK(squeeze2.sign == SignProfile::AllPositive);
    CHECK(squeeze2.max_abs_beta == Approx(0.4375).margin(1e-4));

    const ValidityReport loop = validate_design(make_exact_pulse(2.0, -5.0), 512);
    CHECK(loop.sign == SignProfile::Mixed);
    CHECK(loop.min_beta == Approx(-0.127513).margin(1e-4));
}

TEST_CASE("harmonic generator zero at pi/2 is admissible") {
    // theta = sin(2t) vanishes at pi/2 with theta' = 2 cos(pi) = -2
    const HarmonicTheta th{1.0};
    CHECK(beta_from_theta(th, kHalfPi) == Approx(1.0).margin(1e-9));
    CHECK_NOTHROW(beta_from_theta(th, kHalfPi + 1e-8));
}

TEST_CASE("anticommutator reconstruction identity along the flow") {
    const ToleranceSpec tol{1e-4, false, 1e12};
    for (auto [b, c] : {std::pair{2.0, -3.0}, {1.8, -3.5}, {2.0, -5.0}}) {
        const ThetaDesign d = solve_theta(b, c);
        Pulse p = make_mielnik(d);
        for (double t : {0.2, 0.5, 0.9, 1.2, kHalfPi}) {
            const TransferMatrix m = integrate_anticommutator(p, 0.0, t, tol);
            const double half_slope = 0.5 * d.deriv(t, 1);
            CHECK(m.h.h11 == Approx(half_slope).margin(1e-6));
            CHECK(m.h.h22 == Approx(half_slope).margin(1e-6));
            CHECK(m.h.h11 == Approx(m.h.h22).margin(1e-8));  // Toeplitz along the flow
            CHECK(std::fabs(m.h.det() - 1.0) < 1e-8);
            const double th = d.deriv(t, 0);
            if (std::fabs(th) > 1e-3) {
                const double expect_h21 = (half_slope * half_slope - 1.0) / th;
                CHECK(m.h.h21 == Approx(expect_h21).margin(1e-6));
                CHECK(m.h.h12 == Approx(th).margin(1e-6));
            }
        }
        // endpoint squeeze structure [[0, b], [-1/b, 0]]
        const TransferMatrix e = integrate_anticommutator(p, 0.0, kHalfPi, tol);
        CHECK(e.h.h11 == Approx(0.0).margin(1e-6));
        CHECK(e.h.h22 == Approx(0.0).margin(1e-6));
        CHECK(e.h.h12 == Approx(b).margin(1e-6));
        CHECK(e.h.h21 == Approx(-1.0 / b).margin(1e-6));
    }
}

TEST_CASE("left flow over the full symmetric interval matches the endpoint matrix") {
    for (auto [b, c] : {std::pair{2.0, -3.0}, {1.8, -3.5}}) {
        Pulse p = make_mielnik(b, c);
        const TransferMatrix m = integrate_transfer(p, -kHalfPi, kHalfPi);
        CHECK(m.h.h11 == Approx(0.0).margin(1e-7));
        CHECK(m.h.h12 == Approx(b).margin(1e-7));
        CHECK(m.h.h21 == Approx(-1.0 / b).margin(1e-7));
        CHECK(m.h.h22 == Approx(0.0).margin(1e-7));
    }
}
