#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "magdyn/phase.hpp"
#include "magdyn/planar.hpp"
#include "magdyn/trajectory.hpp"

using namespace magdyn;
using Catch::Approx;

namespace {
constexpr double kPi = 3.141592653589793;
constexpr double kTwoPi = 2.0 * kPi;
}

TEST_CASE("angular momentum basics") {
    CHECK(angular_momentum({1, 0, 0, 1}) == 1.0);
    CHECK(angular_momentum({0, 0, 0, 0}) == 0.0);
    CHECK(angular_momentum({2, 3, 5, 7}) == Approx(2 * 7 - 5 * 3));
}

TEST_CASE("fuzzy centre: origin, direct substitution, zero-field error") {
    const FuzzyCentre o = fuzzy_centre({0, 0, 0, 0}, 0.8);
    CHECK(o.xbar == 0.0);
    CHECK(o.ybar == 0.0);

    // q=(1,0,0,0), beta=1/2: w_c = 1, vy = -1/2 -> centre (1/2, 0)
    const FuzzyCentre c = fuzzy_centre({1, 0, 0, 0}, 0.5);
    CHECK(c.xbar == Approx(0.5).margin(1e-15));
    CHECK(c.ybar == Approx(0.0).margin(1e-15));

    CHECK_THROWS_AS(fuzzy_centre({1, 0, 0, 0}, 1e-13), ZeroField);
}

TEST_CASE("fuzzy centre of a cyclotron orbit stays at the origin") {
    // constant field beta, launch from (r,0) with the matching angular
    // velocity: q0 = (r, 0, 0, -beta r), orbit period pi/beta
    const double beta = 0.9, r = 2.5;
    Pulse p = make_constant(beta * beta, 0.0, 50.0);
    const PhaseVector q0{r, 0.0, 0.0, -beta * r};
    const TrajectoryRecord rec =
        propagate_trajectory(p, q0, 0.0, kPi / beta, 101, std::nullopt, {1e-4, false, 1e12});
    for (std::size_t i = 0; i < rec.size(); ++i) {
        const FuzzyCentre c = fuzzy_centre(rec.state(i), beta);
        CHECK(std::fabs(c.xbar) < 1e-6);
        CHECK(std::fabs(c.ybar) < 1e-6);
    }
    // and the orbit is closed after one cyclotron period
    const PhaseVector qf = rec.final_state();
    CHECK((qf - q0).norm() < 1e-6);
}

TEST_CASE("compose_planar: identity and quarter rotation") {
    const TransferMatrix id = TransferMatrix::from(Mat2::identity());
    const PlanarMap u0 = compose_planar(id, 0.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(u0.composed.at(i, j) == Approx(i == j ? 1.0 : 0.0).margin(1e-15));

    // positive quarter turn carries +x toward -y (cyclotron sense):
    // (x,px,y,py) -> (y,py,-x,-px)
    const PlanarMap uq = compose_planar(id, kPi / 2.0);
    const auto v = uq.composed.apply({1.0, 2.0, 3.0, 4.0});
    CHECK(v[0] == Approx(3.0).margin(1e-12));
    CHECK(v[1] == Approx(4.0).margin(1e-12));
    CHECK(v[2] == Approx(-1.0).margin(1e-12));
    CHECK(v[3] == Approx(-2.0).margin(1e-12));
}

TEST_CASE("compose_planar has unit determinant for random symplectic blocks") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 50; ++i) {
        Mat2 h{u(rng), u(rng), 0.0, 0.0};
        h.h21 = u(rng);
        // fix h22 so det = 1 (avoid h11 ~ 0)
        if (std::fabs(h.h11) < 0.1) h.h11 = 0.5;
        h.h22 = (1.0 + h.h12 * h.h21) / h.h11;
        const PlanarMap p = compose_planar(TransferMatrix::from(h), u(rng));
        CHECK(p.composed.det() == Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("free motion trajectory") {
    Pulse p = make_constant(0.0, 0.0, 2.0);
    const TrajectoryRecord rec = propagate_trajectory(p, {0, 1, 0, 0}, 0.0, 1.0, 11);
    const PhaseVector qf = rec.final_state();
    CHECK(qf.x == Approx(1.0).margin(1e-12));
    CHECK(qf.px == Approx(1.0).margin(1e-12));
    CHECK(qf.y == Approx(0.0).margin(1e-14));
    CHECK(qf.py == Approx(0.0).margin(1e-14));
}

TEST_CASE("closed-loop trajectory over six periods (frozen endpoint)") {
    Pulse p = make_biharmonic(0.0, kPi / 4.0, -10.0, kTwoPi, 2.0 * kTwoPi, 0.0, 6.0);
    const PhaseVector q0{10.0, -5.0, -20.0, 20.0};
    const TrajectoryRecord rec = propagate_trajectory(p, q0, 0.0, 6.0, 601);
    const PhaseVector qf = rec.final_state();
    CHECK(qf.x == Approx(9.98188979).margin(1e-5));
    CHECK(qf.px == Approx(6.4406974).margin(1e-5));
    CHECK(qf.y == Approx(-20.21339197).margin(1e-5));
    CHECK(qf.py == Approx(-3.02431121).margin(1e-5));
    // position returns to the start within 1e-2 of the orbit diameter
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (std::size_t i = 0; i < rec.size(); ++i) {
        xmin = std::min(xmin, rec.x[i]); xmax = std::max(xmax, rec.x[i]);
        ymin = std::min(ymin, rec.y[i]); ymax = std::max(ymax, rec.y[i]);
    }
    const double diameter = std::hypot(xmax - xmin, ymax - ymin);
    const double ret = std::hypot(qf.x - q0.x, qf.y - q0.y);
    CHECK(diameter == Approx(61.4679).margin(0.05));
    CHECK(ret / diameter < 1e-2);
}

TEST_CASE("fragmented-loop trajectory after two periods (frozen endpoint)") {
    Pulse p = make_biharmonic(0.0, -593.0 / 50.0, -0.4, kTwoPi, 2.0 * kTwoPi, 0.0, 2.0);
    const PhaseVector q0{0.0, -5.0, 0.0, 20.0};
    const TrajectoryRecord rec = propagate_trajectory(p, q0, 0.0, 2.0, 201);
    const PhaseVector qf = rec.final_state();
    CHECK(qf.x == Approx(-4.45122539).margin(1e-5));
    CHECK(qf.px == Approx(-4.99740231).margin(1e-5));
    CHECK(qf.y == Approx(17.80490157).margin(1e-5));
    CHECK(qf.py == Approx(19.98960923).margin(1e-5));
}

TEST_CASE("angular momentum is conserved along unforced trajectories") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> amp(-10.0, 10.0), q(-5.0, 5.0);
    for (int i = 0; i < 10; ++i) {
        Pulse p = make_biharmonic(0.0, amp(rng), amp(rng), kTwoPi, 2.0 * kTwoPi);
        const PhaseVector q0{q(rng), q(rng), q(rng), q(rng)};
        const TrajectoryRecord rec = propagate_trajectory(p, q0, 0.0, 1.0, 101);
        const double l0 = rec.lz.front();
        const double scale = std::max(1.0, std::fabs(l0));
        for (double l : rec.lz) CHECK(std::fabs(l - l0) / scale <= 1e-7);
    }
}

TEST_CASE("split evolution equals direct propagation") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> amp(-15.0, 15.0), qd(-3.0, 3.0);
    const ToleranceSpec fine{2e-5, false, 1e12};
    for (int i = 0; i < 10; ++i) {
        Pulse p = make_biharmonic(0.0, amp(rng), amp(rng), kTwoPi, 2.0 * kTwoPi);
        const PhaseVector q0{qd(rng), qd(rng), qd(rng), qd(rng)};
        const TrajectoryRecord rec = propagate_trajectory(p, q0, 0.0, 1.0, 2, std::nullopt, fine);
        const TransferMatrix h = integrate_transfer(p, 0.0, 1.0, fine);
        const double phi = rotation_phase(p, 0.0, 1.0);
        const auto split = compose_planar(h, phi).composed.apply(q0.to_array());
        const PhaseVector qf = rec.final_state();
        CHECK(std::fabs(qf.x - split[0]) <= 1e-6);
        CHECK(std::fabs(qf.px - split[1]) <= 1e-6);
        CHECK(std::fabs(qf.y - split[2]) <= 1e-6);
        CHECK(std::fabs(qf.py - split[3]) <= 1e-6);
    }
}

TEST_CASE("loop condition: near-identity map returns every state") {
    // constant coefficient k = w^2 has u(pi/w) = 1: the rotation by pi times
    // the central inversion of the oscillator blocks
    const double w = 2.0;
    Pulse p = make_constant(w * w, 0.0, 10.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> qd(-4.0, 4.0);
    const TransferMatrix h = integrate_transfer(p, 0.0, kPi / w);
    const double phi = rotation_phase(p, 0.0, kPi / w);
    const Mat4 u = compose_planar(h, phi).composed;
    double dev = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) dev = std::max(dev, std::fabs(u.at(i, j) - (i == j)));
    REQUIRE(dev < 1e-9);
    for (int i = 0; i < 10; ++i) {
        const PhaseVector q0{qd(rng), qd(rng), qd(rng), qd(rng)};
        const TrajectoryRecord rec = propagate_trajectory(p, q0, 0.0, kPi / w, 2);
        CHECK((rec.final_state() - q0).norm() <= 1e-8 * std::max(1.0, q0.norm()));
    }
}

TEST_CASE("propagation rejects non-finite growth") {
    Pulse p{Constant{-400.0}, 0.0, 20.0, Convention::DirectBeta};
    CHECK_THROWS_AS(propagate_trajectory(p, {1, 0, 0, 0}, 0.0, 20.0, 5), NonFiniteState);
}
