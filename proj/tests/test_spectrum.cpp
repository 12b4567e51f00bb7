#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "specscales/scenario.hpp"
#include "specscales/spectrum.hpp"

using namespace specscales;

namespace {

const CompositePotential kPoschlTeller{PotentialSpec::sech2(-6.0, 1.0),
                                       PotentialSpec::zero(), 1.0};

}  // namespace

TEST_CASE("threshold sections") {
    const Thresholds th = make_thresholds(0.1, -0.45, 1.0);
    CHECK(th.r_eps == doctest::Approx(2.8183829312644537));
    CHECK(th.sigma_eps == doctest::Approx(0.7381).epsilon(1e-4));
    // rho_eps = eps * r_eps puts both sections at the same physical radius
    CHECK(th.rho_eps == doctest::Approx(0.1 * th.r_eps));
    CHECK(th.tau_eps == doctest::Approx(th.rho_eps / (1.0 + th.rho_eps)));
    CHECK(th.s_eps == doctest::Approx(th.r_eps + std::log(th.r_eps)));
    CHECK(th.t_eps == doctest::Approx(th.rho_eps + std::log(th.rho_eps)));
    // (4+gamma)(-alpha) > 2 + gamma/4 just fails at alpha = -0.45, gamma = 1
    CHECK_FALSE(th.footnote_ok);
    CHECK(make_thresholds(0.1, -0.49, 1.0).footnote_ok);

    CHECK_THROWS_AS(make_thresholds(0.1, -0.6), std::invalid_argument);
    CHECK_THROWS_AS(make_thresholds(0.1, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(make_thresholds(1.5, -0.45), std::invalid_argument);
}

TEST_CASE("winding count semantics") {
    // free operator: the endpoint settles just above the start angle
    const CountResult free_case = winding_count(-1e-6, std::atan(1e-3), 1e-6, "t");
    CHECK(free_case.m == 0);
    CHECK_FALSE(free_case.near_degenerate);

    // one completed turn with the settled fragment
    const CountResult one = winding_count(-3.8e-6, std::atan(1e-3) - M_PI, 1e-6, "t");
    CHECK(one.m == 1);

    // a span within 1e-3 of a half-integer is ambiguous
    const CountResult amb = winding_count(0.0, -M_PI / 2.0 + 1e-4, 1e-6, "t");
    CHECK(amb.near_degenerate);

    CHECK_THROWS_AS(winding_count(std::nan(""), 0.0, 1e-6, "t"), std::invalid_argument);
}

TEST_CASE("positive-eigenvalue counts for the benchmark operators") {
    struct Row {
        int id;
        int m_v0, m_v1, m_w;
    };
    // m(W) at epsilon = 0.1; the first pair has its smallest state pushed
    // into the continuum at this epsilon (see the sum-rule case below)
    const std::vector<Row> rows{{1, 1, 2, 2}, {2, 1, 3, 4}, {3, 1, 2, 3}};
    for (const auto& row : rows) {
        const Scenario sc = scenario_preset(row.id, 0.1);
        CHECK(count_positive_eigenvalues(sc.pots, OperatorKind::model_inner).m ==
              row.m_v0);
        CHECK(count_positive_eigenvalues(sc.pots, OperatorKind::model_outer).m ==
              row.m_v1);
        CHECK(count_positive_eigenvalues(sc.pots, OperatorKind::full).m == row.m_w);
    }
    CHECK(count_positive_eigenvalues(kPoschlTeller, OperatorKind::model_inner).m == 1);

    const CompositePotential zero{PotentialSpec::zero(), PotentialSpec::zero(), 0.1};
    CHECK(count_positive_eigenvalues(zero, OperatorKind::full).m == 0);
}

TEST_CASE("sum rule across epsilon") {
    // the additivity m(W) = m(V0) + m(V1) needs scale separation: the first
    // benchmark pair fails it at epsilon in {0.1, 0.05} and recovers by 0.025
    for (double eps : {0.1, 0.05}) {
        const SumRuleReport r1 = verify_sum_rule(scenario_preset(1, eps).pots);
        CHECK(r1.m_v0 == 1);
        CHECK(r1.m_v1 == 2);
        CHECK(r1.m_w == 2);
        CHECK_FALSE(r1.equal);
        const SumRuleReport r2 = verify_sum_rule(scenario_preset(2, eps).pots);
        CHECK(r2.equal);
        CHECK(r2.m_w == 4);
        const SumRuleReport r3 = verify_sum_rule(scenario_preset(3, eps).pots);
        CHECK(r3.equal);
        CHECK(r3.m_w == 3);
    }
    const SumRuleReport rec = verify_sum_rule(scenario_preset(1, 0.025).pots);
    CHECK(rec.m_w == 3);
    CHECK(rec.equal);
}

TEST_CASE("winding counts are monotone in the floor") {
    for (int id : {1, 2, 3}) {
        const Scenario sc = scenario_preset(id, 0.1);
        int prev = 1 << 20;
        for (int i = 1; i <= 16; ++i) {
            CountOptions opts;
            opts.eigen_floor = 4.0 * i / 16.0;
            opts.check_floor_stability = false;
            const int m =
                count_positive_eigenvalues(sc.pots, OperatorKind::model_inner, opts).m;
            CHECK(m <= prev);
            CHECK(m >= 0);
            prev = m;
        }
    }
}

TEST_CASE("branch shift moves the mismatch by exactly pi") {
    const Scenario sc = scenario_preset(1, 0.1);
    const Thresholds th = make_thresholds(0.1, -0.45);
    for (double mu : {0.5, 3.0, 11.0, 30.0}) {
        const double s0 = mismatch_sigma(mu, 0, sc.pots, th);
        const double s1 = mismatch_sigma(mu, 1, sc.pots, th);
        const double s2 = mismatch_sigma(mu, 2, sc.pots, th);
        CHECK(s1 - s0 == doctest::Approx(M_PI).epsilon(1e-14));
        CHECK(s2 - s1 == doctest::Approx(M_PI).epsilon(1e-14));
    }
    CHECK_THROWS_AS(mismatch_sigma(-1.0, 0, sc.pots, th), std::invalid_argument);
}

TEST_CASE("matching roots localize the small eigenvalues") {
    const Scenario sc = scenario_preset(1, 0.1);
    const Thresholds th = make_thresholds(0.1, -0.45);
    GapSearchOptions opts;
    opts.grid_n = 192;
    const GapSearchResult gap = find_gap_eigenvalues(sc.pots, th, opts);
    REQUIRE(gap.roots.size() == 2);
    CHECK(gap.mu_max == doctest::Approx(37.5));
    // frozen against the finite-difference spectrum of the full operator
    CHECK(gap.roots[0].mu_hat == doctest::Approx(6.87510).epsilon(2e-4));
    CHECK(gap.roots[1].mu_hat == doctest::Approx(24.96219).epsilon(2e-4));
    for (const auto& r : gap.roots) {
        CHECK(r.lambda_hat == doctest::Approx(0.01 * r.mu_hat));
        CHECK(r.residual < 1e-6);
        CHECK(r.slope_sign > 0.0);  // simple transversal crossings
        CHECK(r.mu_hi - r.mu_lo <= 1e-9);
    }
}

TEST_CASE("matching roots below the first uniform grid node are caught") {
    const Scenario sc = scenario_preset(3, 0.1);
    const Thresholds th = make_thresholds(0.1, -0.45);
    GapSearchOptions opts;
    opts.grid_n = 192;
    const GapSearchResult gap = find_gap_eigenvalues(sc.pots, th, opts);
    REQUIRE(gap.roots.size() == 3);
    CHECK(gap.roots[0].mu_hat == doctest::Approx(0.018112).epsilon(5e-3));
    CHECK(gap.roots[1].mu_hat == doctest::Approx(3.78250).epsilon(2e-4));
    CHECK(gap.roots[2].mu_hat == doctest::Approx(22.60160).epsilon(2e-4));
}

TEST_CASE("scaled eigenvalue ratios are stable under epsilon halving") {
    const Thresholds th1 = make_thresholds(0.1, -0.45);
    const Thresholds th2 = make_thresholds(0.05, -0.45);
    GapSearchOptions opts;
    opts.grid_n = 192;
    const auto g1 = find_gap_eigenvalues(scenario_preset(1, 0.1).pots, th1, opts);
    const auto g2 = find_gap_eigenvalues(scenario_preset(1, 0.05).pots, th2, opts);
    REQUIRE(g1.roots.size() == 2);
    REQUIRE(g2.roots.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        const double r1 = g1.roots[i].lambda_hat / (0.1 * 0.1);
        const double r2 = g2.roots[i].lambda_hat / (0.05 * 0.05);
        CHECK(std::abs(r2 - r1) / r1 < 0.20);
    }
}

TEST_CASE("shooting localizes the closed-form benchmark eigenvalue") {
    O1SearchOptions opts;
    opts.lambda_min = 0.5;
    opts.lambda_max = 1.5;
    opts.grid_n = 16;
    const auto roots = find_order_one_eigenvalues(kPoschlTeller, opts);
    REQUIRE(roots.size() == 1);
    CHECK(std::abs(roots[0].lambda - 1.0) < 1e-3);
    CHECK_FALSE(roots[0].near_range_edge);
    CHECK(roots[0].hi - roots[0].lo <= 1e-9);
}

TEST_CASE("shooting and matching agree on the full spectrum") {
    // every positive eigenvalue is a root of both formulations; the band
    // split only organizes reporting
    const Scenario sc = scenario_preset(1, 0.1);
    O1SearchOptions opts;
    opts.lambda_min = 0.01;
    opts.lambda_max = 0.5;
    opts.grid_n = 48;
    const auto roots = find_order_one_eigenvalues(sc.pots, opts);
    REQUIRE(roots.size() == 2);
    CHECK(roots[0].lambda == doctest::Approx(0.0687510).epsilon(1e-3));
    CHECK(roots[1].lambda == doctest::Approx(0.2496219).epsilon(1e-3));
}

TEST_CASE("model and full angles drift apart at the quadratic rate") {
    const Scenario sc = scenario_preset(1, 0.1);
    const double s0 = 0.5;  // fixed pre-plateau location
    double r = 1.0;
    for (int i = 0; i < 60; ++i) r = r - (r + std::log(r) - s0) / (1.0 + 1.0 / r);
    const double section = r / (1.0 + r);
    auto angle_gap = [&](double eps) {
        CompositePotential pots = sc.pots;
        pots.epsilon = eps;
        AngularSystem full{Scale::inner, {eps * eps * 1.0, eps, true, true}, pots};
        AngularSystem model{Scale::inner, {0.0, eps, true, false}, pots};
        StepControl tight;
        tight.rtol = 1e-12;
        tight.atol = 1e-14;
        const std::vector<double> secs{section};
        const double a = unstable_trajectory(full, section + 0.05, secs, tight)
                             .event_at(section)
                             .state.angle;
        const double b = unstable_trajectory(model, section + 0.05, secs, tight)
                             .event_at(section)
                             .state.angle;
        return std::abs(a - b);
    };
    const double d1 = angle_gap(0.1), d2 = angle_gap(0.05), d3 = angle_gap(0.025);
    // quadratic shrinkage, allowed to wander by a factor of two
    CHECK(d1 / d2 > 2.0);
    CHECK(d1 / d2 < 8.0);
    CHECK(d2 / d3 > 2.0);
    CHECK(d2 / d3 < 8.0);
}

TEST_CASE("parallel grid scans reproduce the serial reference bitwise") {
    const Scenario sc = scenario_preset(1, 0.1);
    const Thresholds th = make_thresholds(0.1, -0.45);
    std::vector<double> grid;
    for (int i = 1; i <= 24; ++i) grid.push_back(37.5 * i / 24.0);
    const MismatchCurve a = scan_mismatch(sc.pots, th, grid, {}, Exec::serial);
    const MismatchCurve b = scan_mismatch(sc.pots, th, grid, {}, Exec::parallel);
    REQUIRE(a.sigma0.size() == b.sigma0.size());
    for (std::size_t i = 0; i < a.sigma0.size(); ++i)
        CHECK(std::memcmp(&a.sigma0[i], &b.sigma0[i], sizeof(double)) == 0);
}

TEST_CASE("count results are stable under tolerance, seed, and section changes") {
    const Scenario sc = scenario_preset(2, 0.1);
    CountOptions base;
    base.check_floor_stability = false;
    const int m0 = count_positive_eigenvalues(sc.pots, OperatorKind::full, base).m;

    StepControl tighter;
    tighter.rtol = 5e-11;
    tighter.atol = 5e-13;
    CHECK(count_positive_eigenvalues(sc.pots, OperatorKind::full, base, tighter).m == m0);

    CountOptions seed = base;
    seed.manifold.delta_seed = 5e-7;
    CHECK(count_positive_eigenvalues(sc.pots, OperatorKind::full, seed).m == m0);

    CountOptions far = base;
    far.section_radius = 1.0 - 1e-7;
    CHECK(count_positive_eigenvalues(sc.pots, OperatorKind::full, far).m == m0);
}
