#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dicke2/dynamics.hpp"
#include "support/random_states.hpp"

using namespace dicke2;

TEST_SUITE_BEGIN("dynamics");

namespace {

ModelParams reference_params(double lambda) {
    return ModelParams::from_ratio(1.0, 1.0, 1.0, lambda, 0.3);
}

// Limit-cycle seed: S1 along (1,1,0)/sqrt(2), S2 along (1,0,-1)/sqrt(2),
// small real field seed.
MeanFieldState cycle_seed(const ModelParams& p, double delta_a = 1e-3) {
    const double r = std::numbers::sqrt2 / 2.0;
    MeanFieldState s;
    s.a = complexd(delta_a, 0.0);
    s.s1 = {r * 0.5 * p.n1, r * 0.5 * p.n1, 0.0};
    s.s2 = {r * 0.5 * p.n2, 0.0, -r * 0.5 * p.n2};
    return s;
}

}  // namespace

TEST_CASE("a stable fixed point stays put") {
    const ModelParams p = reference_params(2.0);
    const auto fps = all_fixed_points(p);
    const auto& fp = find_fixed_point(fps, PhaseLabel::xfi_sr_minus);
    const Trajectory traj = integrate(fp.state, p, 100.0, 500);
    for (const auto& s : traj.states) CHECK(distance(s, fp.state) <= 1e-8);
}

TEST_CASE("norm conservation over long horizons") {
    const ModelParams p = reference_params(2.0);
    const Trajectory traj = integrate(cycle_seed(p), p, 1000.0, 2000);
    CHECK(traj.max_norm_drift <= 1e-8);
}

TEST_CASE("field seed from -zFo-N relaxes into -xFi-SR") {
    const ModelParams p = reference_params(2.0);
    const auto fps = all_fixed_points(p);
    const MeanFieldState start =
        perturbed_fixed_point(find_fixed_point(fps, PhaseLabel::zfo_n_minus), complexd(1e-3, 0.0));
    const Trajectory traj = integrate(start, p, 500.0, 2000);
    const auto verdict = classify_attractor(traj, fps, p);
    REQUIRE(verdict.kind == AttractorVerdict::Kind::fixed_point);
    CHECK(*verdict.label == PhaseLabel::xfi_sr_minus);
    CHECK(distance(traj.states.back(),
                   find_fixed_point(fps, PhaseLabel::xfi_sr_minus).state) < 1e-4 * p.n1);
}

TEST_CASE("field seed from +zFi-N relaxes into +xFo-SR") {
    const ModelParams p = reference_params(2.0);
    const auto fps = all_fixed_points(p);
    const MeanFieldState start =
        perturbed_fixed_point(find_fixed_point(fps, PhaseLabel::zfi_n_plus), complexd(1e-3, 0.0));
    const Trajectory traj = integrate(start, p, 500.0, 2000);
    const auto verdict = classify_attractor(traj, fps, p);
    REQUIRE(verdict.kind == AttractorVerdict::Kind::fixed_point);
    CHECK(*verdict.label == PhaseLabel::xfo_sr_plus);
}

TEST_CASE("below threshold the inverted state decays to the low-energy one") {
    const ModelParams p = reference_params(1.0);
    const auto fps = all_fixed_points(p);
    const MeanFieldState start =
        perturbed_fixed_point(find_fixed_point(fps, PhaseLabel::zfo_n_plus), complexd(1e-3, 0.0));
    const Trajectory traj = integrate(start, p, 600.0, 2000);
    const auto verdict = classify_attractor(traj, fps, p);
    REQUIRE(verdict.kind == AttractorVerdict::Kind::fixed_point);
    CHECK(*verdict.label == PhaseLabel::zfo_n_minus);
}

TEST_CASE("competing superradiant pair sustains a spin limit cycle") {
    const ModelParams p = reference_params(2.0);
    const auto fps = all_fixed_points(p);
    const Trajectory traj = integrate(cycle_seed(p), p, 1200.0, 6000);
    const auto verdict = classify_attractor(traj, fps, p);
    REQUIRE(verdict.kind == AttractorVerdict::Kind::limit_cycle);
    CHECK(*verdict.amplitude > 1e-3 * p.n1);

    // The orbit encircles both -x superradiant points: its S1x range brackets
    // their S1x values.
    const double s1x_xfo = find_fixed_point(fps, PhaseLabel::xfo_sr_minus).state.s1.x;
    const double s1x_xfi = find_fixed_point(fps, PhaseLabel::xfi_sr_minus).state.s1.x;
    double lo = 1e300, hi = -1e300;
    const std::size_t first = traj.states.size() * 4 / 5;
    for (std::size_t i = first; i < traj.states.size(); ++i) {
        lo = std::min(lo, traj.states[i].s1.x);
        hi = std::max(hi, traj.states[i].s1.x);
    }
    CHECK(lo < std::min(s1x_xfo, s1x_xfi));
    CHECK(hi > std::max(s1x_xfo, s1x_xfi));

    // Meanwhile the field spirals onto an emergent focus: its trailing spread
    // collapses relative to the early window.
    auto field_variance = [&](std::size_t begin, std::size_t end) {
        complexd mean(0.0, 0.0);
        for (std::size_t i = begin; i < end; ++i) mean += traj.states[i].a;
        mean /= static_cast<double>(end - begin);
        double var = 0.0;
        for (std::size_t i = begin; i < end; ++i) var += std::norm(traj.states[i].a - mean);
        return var / static_cast<double>(end - begin);
    };
    const std::size_t window = traj.states.size() / 5;
    CHECK(field_variance(traj.states.size() - window, traj.states.size()) <
          0.1 * field_variance(0, window));
}

TEST_CASE("parity-conjugate initial states give parity-conjugate trajectories") {
    const ModelParams p = reference_params(2.0);
    const MeanFieldState seed = cycle_seed(p);
    const Trajectory traj = integrate(seed, p, 50.0, 500);
    const Trajectory mirror = integrate(parity_transform(seed), p, 50.0, 500);
    REQUIRE(traj.states.size() == mirror.states.size());
    for (std::size_t i = 0; i < traj.states.size(); ++i)
        CHECK(distance(parity_transform(traj.states[i]), mirror.states[i]) <= 1e-8);
}

TEST_CASE("closed system conserves the energy") {
    ModelParams p = reference_params(1.5);
    p.kappa = 0.0;
    const MeanFieldState seed = cycle_seed(p, 0.1);
    const Trajectory traj = integrate(seed, p, 100.0, 1000);
    const double e0 = traj.observables.front().energy;
    for (const auto& obs : traj.observables)
        CHECK(std::abs(obs.energy - e0) <= 1e-8 * std::max(1.0, std::abs(e0)));

    // With dissipation the energy is not conserved.
    const ModelParams open_p = reference_params(1.5);
    const Trajectory open_traj = integrate(cycle_seed(open_p, 0.1), open_p, 50.0, 500);
    double max_dev = 0.0;
    for (const auto& obs : open_traj.observables)
        max_dev = std::max(max_dev, std::abs(obs.energy - open_traj.observables.front().energy));
    CHECK(max_dev > 1e-3);
}

TEST_CASE("fixed-step halving shows at least 4th-order convergence") {
    const ModelParams p = reference_params(2.0);
    const MeanFieldState seed = cycle_seed(p);

    IntegrationControls tight;
    tight.rel_tol = 1e-13;
    tight.abs_tol = 1e-14;
    const MeanFieldState ref = integrate(seed, p, 10.0, 10, tight).states.back();

    auto fixed_run = [&](double h) {
        IntegrationControls c;
        c.adaptive = false;
        c.initial_step = h;
        c.norm_tol = 1e-3;  // drift monitoring is not under test here
        return integrate(seed, p, 10.0, 10, c).states.back();
    };
    const double err_h = distance(fixed_run(0.05), ref);
    const double err_h2 = distance(fixed_run(0.025), ref);
    CHECK(err_h / err_h2 >= 12.0);

    // Tolerance tightening also reduces the adaptive error.
    IntegrationControls loose;
    loose.rel_tol = 1e-6;
    loose.abs_tol = 1e-8;
    loose.norm_tol = 1e-4;
    IntegrationControls tighter;
    tighter.rel_tol = 1e-8;
    tighter.abs_tol = 1e-10;
    tighter.norm_tol = 1e-4;
    CHECK(distance(integrate(seed, p, 10.0, 10, tighter).states.back(), ref) <
          distance(integrate(seed, p, 10.0, 10, loose).states.back(), ref));
}

TEST_CASE("integrator error reporting") {
    const ModelParams p = reference_params(2.0);
    const MeanFieldState seed = cycle_seed(p);

    SUBCASE("step-size underflow reads as stiffness") {
        IntegrationControls c;
        c.rel_tol = 1e-14;
        c.abs_tol = 1e-16;
        c.initial_step = 0.5;
        c.min_step = 0.05;
        CHECK_THROWS_AS(integrate(seed, p, 10.0, 10, c), NumericalError);
    }
    SUBCASE("norm drift beyond 10x tolerance is an accuracy error") {
        IntegrationControls c;
        c.adaptive = false;
        c.initial_step = 0.2;
        c.norm_tol = 1e-10;
        CHECK_THROWS_AS(integrate(seed, p, 200.0, 100, c), NumericalError);
    }
    SUBCASE("bad sample times are rejected") {
        CHECK_THROWS_AS(integrate(seed, p, std::vector<double>{0.0}), DomainError);
        CHECK_THROWS_AS(integrate(seed, p, std::vector<double>{0.0, 1.0, 0.5}), DomainError);
        CHECK_THROWS_AS(integrate(seed, p, -1.0, 10), DomainError);
    }
}

TEST_CASE("limit-cycle detector on synthetic signals") {
    const double period = 6.28;
    std::vector<double> times, clean, damped;
    for (int i = 0; i <= 2000; ++i) {
        const double t = 50.0 * i / 2000.0;
        times.push_back(t);
        clean.push_back(0.3 * std::sin(2.0 * std::numbers::pi * t / period));
        damped.push_back(0.3 * std::sin(2.0 * std::numbers::pi * t / period) *
                         std::exp(-t / 15.0));
    }

    SUBCASE("pure sinusoid: period and amplitude within 1%") {
        const auto est = detect_limit_cycle(times, clean, 1e-3);
        REQUIRE(est.has_value());
        CHECK(std::abs(est->period - period) <= 0.01 * period);
        CHECK(std::abs(est->amplitude - 0.3) <= 0.01 * 0.3);
    }
    SUBCASE("decaying spiral is rejected") {
        CHECK(!detect_limit_cycle(times, damped, 1e-3).has_value());
    }
    SUBCASE("sub-threshold amplitude is rejected") {
        std::vector<double> faint = clean;
        for (double& v : faint) v *= 1e-4;
        CHECK(!detect_limit_cycle(times, faint, 1e-3).has_value());
    }
}

TEST_CASE("resting exactly on an unstable fixed point stays undecided") {
    const ModelParams p = reference_params(2.0);
    const auto fps = all_fixed_points(p);
    const auto& unstable = find_fixed_point(fps, PhaseLabel::zfo_n_plus);
    const Trajectory traj = integrate(unstable.state, p, 100.0, 500);
    const auto verdict = classify_attractor(traj, fps, p);
    CHECK(verdict.kind == AttractorVerdict::Kind::undecided);
}

TEST_CASE("perturbed_fixed_point basics") {
    const ModelParams p = reference_params(2.0);
    const auto fps = all_fixed_points(p);
    const auto& fp = find_fixed_point(fps, PhaseLabel::xfo_sr_plus);
    CHECK(distance(perturbed_fixed_point(fp, complexd(0.0, 0.0)), fp.state) == 0.0);
    const MeanFieldState moved = perturbed_fixed_point(fp, complexd(1e-3, 2e-3));
    CHECK(moved.a.real() - fp.state.a.real() == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(moved.a.imag() - fp.state.a.imag() == doctest::Approx(2e-3).epsilon(1e-12));
    CHECK(moved.s1.x == fp.state.s1.x);

    const auto& absent = find_fixed_point(all_fixed_points(reference_params(1.0)),
                                          PhaseLabel::xfo_sr_plus);
    CHECK_THROWS_AS(perturbed_fixed_point(absent, complexd(1e-3, 0.0)), DomainError);
}

TEST_SUITE_END();
