#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "specscales/odeflow.hpp"
#include "specscales/scenario.hpp"

using namespace specscales;

namespace {

AngularSystem free_inner(double lambda) {
    return {Scale::inner, {lambda, 1.0, false, false},
            {PotentialSpec::zero(), PotentialSpec::zero(), 1.0}};
}

}  // namespace

TEST_CASE("extended potentials at the boundary and interior") {
    const auto v0 = PotentialSpec::gaussian(-2.8, 1.0);
    CHECK(extended_V0(v0, 1.0) == 0.0);
    CHECK(extended_V0(v0, 0.0) == doctest::Approx(-2.8));
    CHECK(extended_V0(v0, 0.5) == doctest::Approx(v0.value(1.0)));

    const auto v1 = PotentialSpec::gaussian(-30.0, 1.0);
    CHECK(extended_V1eps(v1, 0.1, 1.0) == 0.0);
    CHECK(extended_V1eps(v1, 0.1, 0.5) ==
          doctest::Approx(0.01 * -30.0 * std::exp(-0.01)));
    CHECK(extended_V1eps(v1, 1.0, 0.5) == doctest::Approx(v1.value(1.0)));
}

TEST_CASE("equilibria of the angular flow") {
    CHECK_THROWS_AS(fixed_points(-0.5), std::invalid_argument);

    auto fp0 = fixed_points(0.0);
    CHECK(fp0[2].angle == 0.0);  // the radius-1 pair merges at lambda = 0
    CHECK(fp0[3].angle == 0.0);

    auto fp1 = fixed_points(1.0);
    CHECK(fp1[2].angle == doctest::Approx(-M_PI / 4.0));
    CHECK(fp1[3].angle == doctest::Approx(+M_PI / 4.0));

    const Scenario sc = scenario_preset(1);
    for (double lam : {0.0, 0.25, 1.0, 4.0}) {
        AngularSystem sys{Scale::inner, {lam, 0.1, true, true}, sc.pots};
        for (const auto& fp : fixed_points(lam)) {
            const AngularState d = sys.rhs(fp);
            CHECK(std::abs(d.angle) < 1e-14);
            CHECK(std::abs(d.radius) < 1e-14);
        }
    }
}

TEST_CASE("flow reduces to -sin(2 theta) on the radius-0 plane") {
    const Scenario sc = scenario_preset(2);
    AngularSystem sys{Scale::inner, {0.7, 0.1, true, true}, sc.pots};
    for (double th : {-1.2, -0.3, 0.0, 0.4, 1.5}) {
        double da, dr;
        sys.rhs(th, 0.0, da, dr);
        CHECK(da == doctest::Approx(-std::sin(2.0 * th)));
        CHECK(dr == 0.0);
    }
    // same reduction for the outer system at tau = 0 when the V0 term is off
    AngularSystem model_outer{Scale::outer, {0.7, 0.1, false, true}, sc.pots};
    double da, dr;
    model_outer.rhs(0.4, 0.0, da, dr);
    CHECK(da == doctest::Approx(-std::sin(0.8)));
}

TEST_CASE("model variants zero out the flagged potential terms") {
    const Scenario sc = scenario_preset(1);
    AngularSystem full{Scale::inner, {0.0, 0.1, true, true}, sc.pots};
    AngularSystem model{Scale::inner, {0.0, 0.1, true, false}, sc.pots};
    const double sup_v1 = sc.pots.v1.sup_negative_part();
    for (double eps : {0.1, 0.05, 0.025}) {
        full.params.epsilon = eps;
        for (double sg : {0.1, 0.5, 0.9}) {
            for (double th : {-0.7, 0.2}) {
                double da_f, dr_f, da_m, dr_m;
                full.rhs(th, sg, da_f, dr_f);
                model.rhs(th, sg, da_m, dr_m);
                // the difference is the scaled far-field term, at most sup|V1| eps^2
                CHECK(std::abs(da_f - da_m) <= sup_v1 * eps * eps + 1e-15);
                CHECK(dr_f == dr_m);
            }
        }
    }
}

TEST_CASE("radius equation matches its implicit closed form") {
    // from sigma = 1/2 at s = 1 (r + ln r parameterization), the radius at any
    // section satisfies s(section) = r + ln r exactly
    AngularSystem sys = free_inner(0.0);
    const std::vector<double> secs{0.6, 0.75, 0.9};
    const Trajectory traj =
        integrate(sys, {0.0, 0.5}, s_of_radius(0.5), Direction::forward, 0.95,
                  secs, StepControl{});
    for (double sec : secs) {
        const auto& ev = traj.event_at(sec);
        CHECK(ev.s == doctest::Approx(s_of_radius(sec)).epsilon(1e-9));
        CHECK(std::abs(ev.state.radius - sec) <= 1e-12);
    }
}

TEST_CASE("radius is strictly monotone and the lift stays valid") {
    const Scenario sc = scenario_preset(1);
    AngularSystem sys{Scale::inner, {1e-6, 0.1, true, true}, sc.pots};
    const Trajectory traj = integrate(sys, {-3.8e-6, 1e-6}, s_of_radius(1e-6),
                                      Direction::forward, 1.0 - 1e-6, {},
                                      StepControl{});
    REQUIRE(traj.hit_radius_stop);
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        CHECK(traj.samples[i].state.radius > traj.samples[i - 1].state.radius);
        CHECK(std::abs(traj.samples[i].state.angle -
                       traj.samples[i - 1].state.angle) < M_PI / 2.0);
    }
    CHECK(traj.samples.back().state.radius == doctest::Approx(1.0 - 1e-6));
}

TEST_CASE("a seed on the invariant angle line stays put") {
    AngularSystem sys = free_inner(0.0);
    // theta = 0 is invariant for the free flow at lambda = 0
    const Trajectory traj = integrate(sys, {0.0, 0.3}, s_of_radius(0.3),
                                      Direction::forward, 0.9, {}, StepControl{});
    CHECK(std::abs(traj.end_angle()) < 1e-12);
}

TEST_CASE("forward-backward round trip returns the start angle") {
    const Scenario sc = scenario_preset(3);
    AngularSystem sys{Scale::inner, {0.4, 0.1, true, true}, sc.pots};
    const StepControl ctl;
    const Trajectory fwd = integrate(sys, {0.25, 0.3}, s_of_radius(0.3),
                                     Direction::forward, 0.7, {}, ctl);
    REQUIRE(fwd.hit_radius_stop);
    const Trajectory bwd =
        integrate(sys, fwd.end_state(), fwd.samples.back().s, Direction::backward,
                  0.3, {}, ctl);
    REQUIRE(bwd.hit_radius_stop);
    CHECK(std::abs(bwd.end_angle() - 0.25) < 10.0 * ctl.rtol);
}

TEST_CASE("section angles converge as tolerances tighten") {
    const Scenario sc = scenario_preset(1);
    AngularSystem sys{Scale::inner, {0.3, 0.1, true, true}, sc.pots};
    auto angle_at = [&](double rtol) {
        StepControl ctl;
        ctl.rtol = rtol;
        ctl.atol = rtol * 1e-2;
        return integrate(sys, {-3.8e-6, 1e-6}, s_of_radius(1e-6),
                         Direction::forward, 0.9, {}, ctl)
            .end_angle();
    };
    const double ref = angle_at(1e-13);
    const double e6 = std::abs(angle_at(1e-6) - ref);
    const double e8 = std::abs(angle_at(1e-8) - ref);
    const double e10 = std::abs(angle_at(1e-10) - ref);
    CHECK(e8 < e6);
    CHECK(e10 < e8);
    CHECK(e10 < 1e-8);
}

TEST_CASE("integration guards") {
    AngularSystem sys = free_inner(0.25);
    StepControl tiny;
    tiny.max_steps = 5;
    CHECK_THROWS_AS(integrate(sys, {0.1, 0.2}, s_of_radius(0.2), Direction::forward,
                              0.9, {}, tiny),
                    FlowError);
    // sections must sit strictly between start and stop
    CHECK_THROWS_AS(integrate(sys, {0.1, 0.2}, s_of_radius(0.2), Direction::forward,
                              0.9, std::vector<double>{0.95}, StepControl{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(integrate(sys, {0.1, 0.2}, s_of_radius(0.2), Direction::backward,
                              0.9, {}, StepControl{}),
                    std::invalid_argument);
}

TEST_CASE("outer V0 term overflow is flagged") {
    CompositePotential pots{PotentialSpec::gaussian(-2.8, 1.0),
                            PotentialSpec::zero(), 1e-16};
    AngularSystem sys{Scale::outer, {0.5, 1e-16, true, false}, pots};
    double da, dr;
    CHECK_THROWS_AS(sys.rhs(0.1, 1e-3, da, dr), FlowError);
}
