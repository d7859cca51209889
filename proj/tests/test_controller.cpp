#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hsc/controller.hpp"
#include "oracles.hpp"

using namespace hsc;

namespace {

ControllerConfig ref_config(std::size_t np = 20, double epsilon = 0.1) {
    ControllerConfig cfg;
    cfg.ts = 0.1;
    cfg.np = np;
    cfg.epsilon = epsilon;
    cfg.dynamics = discretize({1, 1}, {1, 1}, 0.1);
    cfg.adaptive = true;
    return cfg;
}

ControllerState state_of(ImpedanceState z, double theta_a, double theta_a_prev) {
    ControllerState st;
    st.z_a = z;
    st.gamma_prev = {0.0, 0.0};
    st.theta_a_hist = {theta_a, theta_a_prev};
    st.primed = true;
    return st;
}

HumanObservation obs_of(ImpedanceState z_h, double theta_h, double theta_h_prev) {
    HumanObservation o;
    o.z_h = z_h;
    o.theta_h_hist = {theta_h, theta_h_prev};
    o.primed = true;
    return o;
}

double achieved_stage_cost(const PlanResult& pr, const ControllerState& st,
                           const HumanObservation& ob, const ControllerConfig& cfg) {
    const double tau_h = intent_torque(ob.z_h, {ob.theta_h_hist[0], ob.theta_h_hist[1], cfg.ts});
    const double tau_a =
        intent_torque(pr.z_next, {st.theta_a_hist[0], st.theta_a_hist[1], cfg.ts});
    return stage_cost(tau_h, tau_a, cfg.epsilon);
}

}  // namespace

TEST_CASE("stage_cost hand values") {
    CHECK(stage_cost(0.5, -0.4, 0.1) == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(stage_cost(0, 0, 0) == 0.0);
    CHECK(stage_cost(0.5, 0.5, 0.1) == doctest::Approx(0.9).epsilon(1e-14));
}

TEST_CASE("horizon_cost sums stages") {
    const std::vector<double> z3(3, 0.0);
    CHECK(horizon_cost(z3, z3, z3) == 0.0);

    const std::vector<double> th{0.5, 0.5}, ta{-0.4, -0.4}, ep{0.1, 0.1};
    CHECK(horizon_cost(th, ta, ep) == doctest::Approx(1.8).epsilon(1e-14));

    const std::vector<double> th1{0.5}, ta1{-0.4}, ep1{0.1};
    CHECK(horizon_cost(th1, ta1, ep1) == doctest::Approx(stage_cost(0.5, -0.4, 0.1)));

    CHECK_THROWS_AS(horizon_cost(th, ta1, ep), LengthMismatch);
}

TEST_CASE("pointwise_target hand values") {
    CHECK(pointwise_target(0.5, 0.1) == doctest::Approx(-0.4).epsilon(1e-14));
    CHECK(stage_cost(0.5, pointwise_target(0.5, 0.1), 0.1) == doctest::Approx(0.9));
    CHECK(pointwise_target(0.05, 0.1) == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(stage_cost(0.05, pointwise_target(0.05, 0.1), 0.1) == doctest::Approx(0.0));
    CHECK(pointwise_target(0.0, 0.0) == 0.0);
}

TEST_CASE("pointwise_target achieves the global stage minimum") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> u(-1.4, 1.4);
    std::uniform_real_distribution<double> ue(0.0, 1.4);
    for (int trial = 0; trial < 10000; ++trial) {
        const double tau_h = u(rng);
        const double eps = ue(rng);
        const double t = pointwise_target(tau_h, eps);
        const double achieved = stage_cost(tau_h, t, eps);
        CHECK(std::abs(achieved - std::abs(eps - 2.0 * std::abs(tau_h))) < 1e-12);
    }
    // spot-check against a fine grid on a subset
    for (int trial = 0; trial < 50; ++trial) {
        const double tau_h = u(rng);
        const double eps = ue(rng);
        const double achieved = stage_cost(tau_h, pointwise_target(tau_h, eps), eps);
        double grid_min = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 60000; ++i)
            grid_min = std::min(grid_min, stage_cost(tau_h, -3.0 + 1e-4 * i, eps));
        CHECK(grid_min >= achieved - 1e-12);
        CHECK(grid_min <= achieved + 2e-4);
    }
}

TEST_CASE("plan keeps an already-optimal configuration at zero cost") {
    // tau_H = tau_A = 0.5 and epsilon = 2|tau_H|: both cost terms vanish.
    auto cfg = ref_config(20, 1.0);
    const auto st = state_of({0.01, 1.0}, 0.5, 0.5);
    const auto ob = obs_of({0.01, 1.0}, 0.5, 0.5);
    const auto pr = plan(st, ob, cfg);
    CHECK(pr.diag.predicted_cost < 1e-8);
    CHECK(achieved_stage_cost(pr, st, ob, cfg) < 1e-8);
    CHECK(pr.z_next.k == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("plan clamp path pins negative stiffness to exactly zero") {
    // Negative target but an aligned automation can only push positive: the
    // unconstrained stiffness goes negative and must clamp.
    auto cfg = ref_config(5, 0.1);
    const auto st = state_of({0.01, 1.0}, 0.5, 0.5);  // theta_a = +0.5 constant
    const auto ob = obs_of({0.01, 1.0}, 0.5, 0.5);    // tau_h = +0.5, target = -0.4 -> K_A < 0
    const auto pr = plan(st, ob, cfg);
    CHECK(pr.z_next.k == 0.0);
    CHECK(pr.diag.clamped_k);
    // gamma consistency: stepping with the returned action lands on the clamp
    const auto z_step = step_impedance(st.z_a, pr.action, cfg.dynamics);
    CHECK(std::abs(z_step.k) < 1e-12);
}

TEST_CASE("plan holds channels the cost cannot see") {
    // constant theta_a makes the damping columns vanish; B_A must not follow
    // the unstable open-loop update
    auto cfg = ref_config(20, 0.1);
    ControllerState st = state_of({0.01, 1.0}, -0.5, -0.5);
    const auto ob = obs_of({0.01, 1.0}, 0.5, 0.5);
    for (int k = 0; k < 300; ++k) {
        const auto pr = plan(st, ob, cfg);
        CHECK(pr.diag.held_b);
        st.z_a = pr.z_next;
        st.gamma_prev = pr.action;
    }
    CHECK(st.z_a.b == doctest::Approx(0.01).epsilon(1e-9));
    CHECK(st.z_a.k == doctest::Approx(0.8).epsilon(1e-9));
}

TEST_CASE("plan non-negativity invariant on random states") {
    std::mt19937 rng(53);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto cfg = ref_config(10);
    for (int trial = 0; trial < 200; ++trial) {
        cfg.epsilon = std::abs(u(rng));
        const auto st = state_of({2.0 * std::abs(u(rng)), 2.0 * std::abs(u(rng))}, u(rng), u(rng));
        const auto ob = obs_of({std::abs(u(rng)), 2.0 * std::abs(u(rng))}, u(rng), u(rng));
        const auto pr = plan(st, ob, cfg);
        CHECK(pr.z_next.b >= 0.0);
        CHECK(pr.z_next.k >= 0.0);
    }
}

TEST_CASE("plan np=1 matches the brute-force grid oracle") {
    std::mt19937 rng(61);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto cfg = ref_config(1);
    for (int trial = 0; trial < 3; ++trial) {
        cfg.epsilon = 0.05 + 0.4 * std::abs(u(rng));
        const double th_a = (0.2 + 0.8 * std::abs(u(rng))) * (u(rng) > 0 ? 1.0 : -1.0);
        const auto st = state_of({std::abs(u(rng)), 2.0 * std::abs(u(rng))}, th_a,
                                 th_a - 0.2 * u(rng));
        const auto ob = obs_of({0.05 * std::abs(u(rng)), 1.5 * std::abs(u(rng))}, u(rng), u(rng));
        const double tau_h =
            intent_torque(ob.z_h, {ob.theta_h_hist[0], ob.theta_h_hist[1], cfg.ts});

        const auto pr = plan(st, ob, cfg);
        const double plan_cost =
            hsc::testing::np1_cost_of_action(st, tau_h, cfg.epsilon, cfg.dynamics, pr.action);
        const double grid_min =
            hsc::testing::np1_brute_force_min(st, tau_h, cfg.epsilon, cfg.dynamics);
        CHECK(plan_cost <= grid_min + 1e-4);
    }
}

TEST_CASE("repeated planning converges the disagreement when the floor matches") {
    std::mt19937 rng(71);
    std::uniform_real_distribution<double> u(0.1, 1.5);
    for (int trial = 0; trial < 20; ++trial) {
        const double k_h = u(rng);
        const double theta = u(rng) * (trial % 2 ? 1.0 : -1.0);
        const double tau_h = k_h * theta;
        auto cfg = ref_config(10, 2.0 * std::abs(tau_h));

        ControllerState st = state_of({0.01, u(rng)}, theta, theta);
        const auto ob = obs_of({0.01, k_h}, theta, theta);
        double prev = std::numeric_limits<double>::infinity();
        double disagreement = prev;
        for (int k = 0; k < 50; ++k) {
            const auto pr = plan(st, ob, cfg);
            st.z_a = pr.z_next;
            st.gamma_prev = pr.action;
            const double tau_a = intent_torque(st.z_a, {theta, theta, cfg.ts});
            disagreement = std::abs(tau_h - tau_a);
            CHECK(disagreement <= prev + 1e-12);
            prev = disagreement;
        }
        CHECK(disagreement < 1e-3);
    }
}

TEST_CASE("plan_fixed holds the impedance exactly") {
    ControllerConfig cfg = ref_config();
    cfg.adaptive = false;
    ControllerState st = state_of({0.01, 1.0}, 0.5, 0.5);
    for (int k = 0; k < 100; ++k) {
        const auto pr = plan_fixed(st, cfg);
        st.z_a = pr.z_next;
        st.gamma_prev = pr.action;
    }
    CHECK(std::abs(st.z_a.b - 0.01) < 1e-10);
    CHECK(std::abs(st.z_a.k - 1.0) < 1e-10);
}

TEST_CASE("plan_fixed action values") {
    ControllerConfig cfg = ref_config();
    cfg.adaptive = false;

    const auto zero = plan_fixed(state_of({0, 0}, 0.1, 0.1), cfg);
    CHECK(zero.action.gamma_b == 0.0);
    CHECK(zero.action.gamma_k == 0.0);

    // with the reference parameters, holding K requires gamma_k = -K
    const auto hold = plan_fixed(state_of({0, 1.0}, 0.1, 0.1), cfg);
    CHECK(hold.action.gamma_k == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("plan preconditions") {
    auto cfg = ref_config();
    ControllerState st = state_of({0.01, 1.0}, 0.5, 0.5);
    const auto ob = obs_of({0.01, 1.0}, 0.5, 0.5);

    ControllerState unprimed = st;
    unprimed.primed = false;
    CHECK_THROWS_AS(plan(unprimed, ob, cfg), HistoryMissing);

    ControllerConfig fixed_cfg = cfg;
    fixed_cfg.adaptive = false;
    CHECK_THROWS_AS(plan(st, ob, fixed_cfg), ValidationError);
    CHECK_THROWS_AS(plan_fixed(st, cfg), ValidationError);

    ControllerConfig zero_np = cfg;
    zero_np.np = 0;
    CHECK_THROWS_AS(plan(st, ob, zero_np), HorizonZero);
}
