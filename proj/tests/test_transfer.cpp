#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "magdyn/pulse.hpp"
#include "magdyn/transfer.hpp"

using namespace magdyn;
using Catch::Approx;

namespace {
constexpr double kPi = 3.141592653589793;
constexpr double kTwoPi = 2.0 * kPi;
}

TEST_CASE("constant coefficient reproduces the harmonic rotation matrix") {
    const double w = 1.7;
    Pulse p = make_constant(w * w, 0.0, 5.0);
    for (double t : {0.3, 1.0, 2.5}) {
        const TransferMatrix m = integrate_transfer(p, 0.0, t);
        CHECK(m.h.h11 == Approx(std::cos(w * t)).margin(1e-10));
        CHECK(m.h.h12 == Approx(std::sin(w * t) / w).margin(1e-10));
        CHECK(m.h.h21 == Approx(-w * std::sin(w * t)).margin(1e-10));
        CHECK(m.h.h22 == Approx(std::cos(w * t)).margin(1e-10));
    }
    // conventions agree for Constant: the coefficient is stored directly
    Pulse pd = p;
    pd.convention = Convention::DirectBeta;
    const TransferMatrix a = integrate_transfer(p, 0.0, 1.0);
    const TransferMatrix b = integrate_transfer(pd, 0.0, 1.0);
    CHECK(a.h.h11 == b.h.h11);
    CHECK(a.h.h21 == b.h.h21);
}

TEST_CASE("zero coefficient gives the free shear") {
    Pulse p = make_constant(0.0, 0.0, 10.0);
    const TransferMatrix m = integrate_transfer(p, 0.0, 7.25);
    CHECK(m.h.h11 == Approx(1.0).margin(1e-12));
    CHECK(m.h.h12 == Approx(7.25).margin(1e-12));
    CHECK(m.h.h21 == Approx(0.0).margin(1e-14));
    CHECK(m.h.h22 == Approx(1.0).margin(1e-12));
    CHECK(m.sigma == Approx(2.0).margin(1e-12));
}

TEST_CASE("stable biharmonic cell of the closed-loop example") {
    Pulse p = make_biharmonic(0.0, kPi / 4.0, -10.0, kTwoPi, 2.0 * kTwoPi);
    const TransferMatrix m = integrate_transfer(p, 0.0, 1.0);
    CHECK(std::fabs(m.sigma) < 2.0);
    // frozen fine-step value
    CHECK(m.sigma == Approx(1.0484590425611975).margin(1e-7));
    CHECK(std::fabs(m.h.det() - 1.0) < 1e-8);
    // eigenvalues on the unit circle
    CHECK(std::abs(m.lambda_plus) == Approx(1.0).margin(1e-8));
    CHECK(std::abs(m.lambda_plus * m.lambda_minus - 1.0) < 1e-8);
}

TEST_CASE("separatrix point cell sits on the threshold band") {
    Pulse p = make_biharmonic(0.0, -593.0 / 50.0, -0.4, kTwoPi, 2.0 * kTwoPi);
    const TransferMatrix m = integrate_transfer(p, 0.0, 1.0);
    // frozen fine-step values
    CHECK(m.sigma == Approx(1.999740213785779).margin(1e-7));
    CHECK(m.h.h11 == Approx(0.999870107).margin(1e-6));
    CHECK(m.h.h12 == Approx(0.445180365).margin(1e-6));
    CHECK(m.h.h21 == Approx(-5.83514823e-4).margin(1e-6));
}

TEST_CASE("strong-squeeze cell entries (frozen fine-step values)") {
    Pulse p = make_biharmonic(0.0, -10.3, -6.9, kTwoPi, 2.0 * kTwoPi);
    const TransferMatrix m = integrate_transfer(p, 0.0, 1.0, {1e-4, false, 1e12});
    CHECK(m.h.h11 == Approx(3.92946505).margin(2e-6));
    CHECK(m.h.h12 == Approx(0.75307745).margin(2e-6));
    CHECK(m.h.h21 == Approx(19.17557818).margin(2e-5));
    CHECK(m.h.h22 == Approx(m.h.h11).margin(1e-8));  // Toeplitz across the window
    CHECK(std::fabs(m.h.det() - 1.0) < 1e-8);
}

TEST_CASE("interval outside the pulse definition is rejected") {
    Pulse p = make_biharmonic(0.0, 1.0, 0.0, kTwoPi, 2.0 * kTwoPi);
    CHECK_THROWS_AS(integrate_transfer(p, -0.5, 0.5), IntervalOutsidePulse);
    CHECK_THROWS_AS(integrate_transfer(p, 0.5, 0.25), IntervalOutsidePulse);
}

TEST_CASE("overflow guard reports runaway growth") {
    // strongly unstable coefficient
    Pulse p = make_constant(-400.0, 0.0, 10.0);
    CHECK_THROWS_AS(integrate_transfer(p, 0.0, 10.0, {1e-4, false, 1e12}),
                    NonFiniteState);
}

TEST_CASE("Richardson monitor reports a small estimate on smooth pulses") {
    Pulse p = make_biharmonic(0.0, 2.0, 1.0, kTwoPi, 2.0 * kTwoPi);
    const TransferMatrix m = integrate_transfer(p, 0.0, 1.0, {1e-4, true, 1e12});
    CHECK(m.err_estimate < 1e-10);
    CHECK(m.err_estimate >= 0.0);
}

TEST_CASE("symplecticity and eigenvalue reciprocity over random pulses") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> amp(-15.0, 15.0);
    for (int i = 0; i < 200; ++i) {
        Pulse p = make_biharmonic(0.0, amp(rng), amp(rng), kTwoPi, 2.0 * kTwoPi);
        const auto samples = integrate_transfer_sampled(p, 0.0, 1.0, 9, {1e-3, false, 1e12});
        for (const auto& m : samples) {
            CHECK(std::fabs(m.h.det() - 1.0) <= 1e-8);
            CHECK(std::abs(m.lambda_plus * m.lambda_minus - 1.0) <= 1e-8);
            if (std::fabs(m.sigma) < 2.0)
                CHECK(std::abs(m.lambda_plus) == Approx(1.0).margin(1e-8));
        }
    }
}

TEST_CASE("rotation phase: constant field") {
    Pulse p = make_biharmonic(0.75, 0.0, 0.0, kTwoPi, 2.0 * kTwoPi, 0.0, 4.0);
    CHECK(rotation_phase(p, 0.0, 4.0) == Approx(3.0).margin(1e-10));
    // constant coefficient k = w^2 rotates at rate w
    Pulse pc = make_constant(4.0, 0.0, 3.0);
    CHECK(rotation_phase(pc, 0.0, 1.5) == Approx(3.0).margin(1e-10));
}

TEST_CASE("rotation phase: full periods integrate to zero") {
    Pulse p = make_biharmonic(0.0, 3.7, 3.7, kTwoPi, 2.0 * kTwoPi);
    CHECK(std::fabs(rotation_phase(p, 0.0, 1.0)) <= 1e-10);
}

TEST_CASE("rotation phase: half-period closed form") {
    // beta0=1, beta1=1, w1=2pi over [0,1/2]: phi = 1/2 + 1/pi
    Pulse p = make_biharmonic(1.0, 1.0, 0.0, kTwoPi, 2.0 * kTwoPi);
    CHECK(rotation_phase(p, 0.0, 0.5) == Approx(0.5 + 1.0 / kPi).epsilon(1e-12));
}

TEST_CASE("direct-beta pulses carry no rotational part") {
    Pulse p = make_mielnik(2.0, -3.0);
    CHECK(rotation_phase(p, -kHalfPi, kHalfPi) == 0.0);
}

TEST_CASE("anticommutator flow of a constant coefficient doubles the angle") {
    // dh/dt = Lambda h + h Lambda with constant Lambda gives exp(2 Lambda t)
    const double k = 2.25, w = 1.5;
    Pulse p{Constant{k}, 0.0, 2.0, Convention::DirectBeta};
    const TransferMatrix m = integrate_anticommutator(p, 0.0, 0.7);
    CHECK(m.h.h11 == Approx(std::cos(2.0 * w * 0.7)).margin(1e-9));
    CHECK(m.h.h12 == Approx(std::sin(2.0 * w * 0.7) / w).margin(1e-9));
    CHECK(m.h.h21 == Approx(-w * std::sin(2.0 * w * 0.7)).margin(1e-9));
}
