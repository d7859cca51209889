#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hsc/prediction.hpp"

using namespace hsc;

namespace {

const ImpedanceDynamicsParams kRef = discretize({1, 1}, {1, 1}, 0.1);

// Recursion oracle: evolve the impedance step by step and evaluate the intent
// torque against a fixed theta pair.
std::vector<double> recursion_torques(const ImpedanceState& z0,
                                      const std::vector<ControlAction>& gammas,
                                      const ImpedanceDynamicsParams& p, const ThetaPair& pair) {
    std::vector<double> out;
    ImpedanceState z = z0;
    for (const auto& g : gammas) {
        z = step_impedance(z, g, p);
        out.push_back(intent_torque(z, {pair.theta, pair.theta_prev, p.ts}));
    }
    return out;
}

}  // namespace

TEST_CASE("theta_vector") {
    const auto v1 = theta_vector({0.5, 0.4, 0.1});
    CHECK(v1.dtheta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(v1.theta == 0.5);

    const auto v2 = theta_vector({0.3, 0.3, 0.05});
    CHECK(v2.dtheta == 0.0);
    CHECK(v2.theta == 0.3);

    const auto v3 = theta_vector({0.0, 0.1, 0.1});
    CHECK(v3.dtheta == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(v3.theta == 0.0);

    CHECK_THROWS_AS(theta_vector({1, 1, 0}), ValidationError);
}

TEST_CASE("intent_torque") {
    CHECK(intent_torque({0.01, 1.0}, {0.5, 0.4, 0.1}) == doctest::Approx(0.51).epsilon(1e-12));
    CHECK(intent_torque({0, 0}, {0.9, -0.2, 0.1}) == 0.0);
    CHECK(intent_torque({1.0, 0.0}, {0.4, 0.4, 0.1}) == 0.0);
}

TEST_CASE("phi_row hand values") {
    const auto r1 = phi_row({0.01, 1.0}, kRef);
    CHECK(r1.c0 == doctest::Approx(1.2222222222).epsilon(1e-10));
    CHECK(r1.c1 == doctest::Approx(-0.1111111111).epsilon(1e-10));

    const auto r2 = phi_row({0, 0}, kRef);
    CHECK(r2.c0 == 0.0);
    CHECK(r2.c1 == 0.0);

    const auto r3 = phi_row({0.0, 1.0}, kRef);
    CHECK(r3.c0 == doctest::Approx(10.0 / 9.0).epsilon(1e-12));
    CHECK(r3.c1 == 0.0);
}

TEST_CASE("psi_row hand values") {
    const auto r1 = psi_row({0.09, 0.9}, kRef);
    CHECK(r1.c0 == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(r1.c1 == doctest::Approx(-0.1).epsilon(1e-12));

    const auto r2 = psi_row({0, 0}, kRef);
    CHECK(r2.c0 == 0.0);
    CHECK(r2.c1 == 0.0);

    const auto r3 = psi_row({0.0, 1.0}, kRef);
    CHECK(r3.c0 == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
    CHECK(r3.c1 == 0.0);
}

TEST_CASE("phi+psi reduce to the stepped impedance's torque") {
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 300; ++trial) {
        const Diag2 alpha{0.4 * u(rng), 0.4 * u(rng)};
        const Diag2 beta{1.0 + std::abs(u(rng)), 1.0 + std::abs(u(rng))};
        const auto p = discretize(alpha, beta, 0.1);
        const ImpedanceState z_prev{std::abs(u(rng)), std::abs(u(rng))};
        const ControlAction g{u(rng), u(rng)};
        const IntentSample sample{u(rng), u(rng), p.ts};

        const auto phi = phi_row(z_prev, p);
        const auto psi = psi_row(g, p);
        const double via_rows = (phi.c0 + psi.c0) * sample.theta +
                                (phi.c1 + psi.c1) * sample.theta_prev;
        const double via_step = intent_torque(step_impedance(z_prev, g, p), sample);
        CHECK(std::abs(via_rows - via_step) < 1e-12);
    }
}

TEST_CASE("propagate_torque base case equals the delta dot") {
    const auto phi = phi_row({0.01, 1.0}, kRef);
    const auto psi = psi_row({0.5, -0.4}, kRef);
    const ThetaPair pair{0.5, 0.4};
    const double t0 = propagate_torque(phi, psi, {}, kRef, pair);
    const double direct = (phi.c0 + psi.c0) * pair.theta + (phi.c1 + psi.c1) * pair.theta_prev;
    CHECK(t0 == doctest::Approx(direct).epsilon(1e-14));
    // and the base case is the stepped impedance's intent torque
    const double oracle =
        intent_torque(step_impedance({0.01, 1.0}, {0.5, -0.4}, kRef), {0.5, 0.4, 0.1});
    CHECK(std::abs(t0 - oracle) < 1e-12);
}

TEST_CASE("propagate_torque with zero psis applies channelwise powers") {
    // distinct alpha entries per channel so a scalar-power bug would show
    const auto p = discretize({0.8, -0.5}, {1.0, 2.0}, 0.1);
    const ImpedanceState z_prev{0.7, 1.1};
    const ControlAction g{0.3, -0.6};
    const ThetaPair pair{0.9, 0.4};

    const std::vector<PsiRow> zeros(2);
    const double via_prop =
        propagate_torque(phi_row(z_prev, p), psi_row(g, p), zeros, p, pair);

    ImpedanceState z = step_impedance(z_prev, g, p);
    z = step_impedance(z, {0, 0}, p);
    z = step_impedance(z, {0, 0}, p);
    const double via_steps = intent_torque(z, {pair.theta, pair.theta_prev, p.ts});
    CHECK(std::abs(via_prop - via_steps) < 1e-12);
}

TEST_CASE("propagate_torque pure action term") {
    const PsiRow psi1 = psi_row({0.2, 0.7}, kRef);
    const ThetaPair pair{0.6, 0.1};
    const std::vector<PsiRow> psis{psi1};
    const double t = propagate_torque({0, 0}, {0, 0}, psis, kRef, pair);
    CHECK(t == doctest::Approx(psi1.c0 * pair.theta + psi1.c1 * pair.theta_prev).epsilon(1e-14));
}

TEST_CASE("prediction system: zero actions reproduce the offset") {
    const auto sys = build_prediction_system({0.4, 1.2}, {0.1, -0.3}, ThetaPair{0.5, 0.45}, kRef, 6);
    const std::vector<double> g(12, 0.0);
    const auto pred = sys.predict(g);
    for (std::size_t i = 0; i < 6; ++i) CHECK(pred[i] == doctest::Approx(sys.offset[i]));
}

TEST_CASE("prediction system np=1 coefficients match the symbolic expansion") {
    const ImpedanceState z{0.3, 0.9};
    const ControlAction gp{0.2, 0.1};
    const ThetaPair pair{0.5, 0.38};
    const auto sys = build_prediction_system(z, gp, pair, kRef, 1);
    REQUIRE(sys.a_matrix.rows() == 1);
    REQUIRE(sys.a_matrix.cols() == 2);
    CHECK(sys.a_matrix(0, 0) ==
          doctest::Approx(kRef.beta_tilde.b * (pair.theta - pair.theta_prev) / kRef.ts)
              .epsilon(1e-12));
    CHECK(sys.a_matrix(0, 1) == doctest::Approx(kRef.beta_tilde.k * pair.theta).epsilon(1e-12));
}

TEST_CASE("prediction system matches the step recursion oracle") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const bool ref_dyn = trial % 2 == 0;
        const auto p = ref_dyn ? kRef : discretize({0.6, -0.4}, {1.5, 0.8}, 0.1);
        const std::size_t np = 1 + static_cast<std::size_t>(rng() % 20);
        const ImpedanceState z0{2.0 * std::abs(u(rng)), 2.0 * std::abs(u(rng))};
        const ControlAction gamma_prev{2.0 * u(rng), 2.0 * u(rng)};
        const ThetaPair pair{u(rng), u(rng)};

        std::vector<ControlAction> gammas(np);
        std::vector<double> g(2 * np);
        for (std::size_t i = 0; i < np; ++i) {
            gammas[i] = {3.0 * u(rng), 3.0 * u(rng)};
            g[2 * i] = gammas[i].gamma_b;
            g[2 * i + 1] = gammas[i].gamma_k;
        }

        const auto sys = build_prediction_system(z0, gamma_prev, pair, p, np);
        const auto pred = sys.predict(g);
        const auto oracle = recursion_torques(z0, gammas, p, pair);
        for (std::size_t i = 0; i < np; ++i) CHECK(std::abs(pred[i] - oracle[i]) < 1e-10);
    }
}

TEST_CASE("scheduled theta pairs match a time-varying recursion") {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t np = 8;
    const ImpedanceState z0{0.4, 1.0};
    const ControlAction gamma_prev{0.3, -0.2};

    std::vector<double> thetas(np + 1);  // thetas[0] = theta(k), then future
    for (auto& t : thetas) t = u(rng);
    std::vector<ThetaPair> pairs(np);
    for (std::size_t n = 0; n < np; ++n) pairs[n] = {thetas[n + 1], thetas[n]};

    std::vector<ControlAction> gammas(np);
    std::vector<double> g(2 * np);
    for (std::size_t i = 0; i < np; ++i) {
        gammas[i] = {2.0 * u(rng), 2.0 * u(rng)};
        g[2 * i] = gammas[i].gamma_b;
        g[2 * i + 1] = gammas[i].gamma_k;
    }

    const auto sys = build_prediction_system(z0, gamma_prev, pairs, kRef);
    const auto pred = sys.predict(g);

    ImpedanceState z = z0;
    for (std::size_t n = 0; n < np; ++n) {
        z = step_impedance(z, gammas[n], kRef);
        const double tau = intent_torque(z, {pairs[n].theta, pairs[n].theta_prev, kRef.ts});
        CHECK(std::abs(pred[n] - tau) < 1e-10);
    }
}

TEST_CASE("causality: lower block-triangular action structure") {
    const auto sys = build_prediction_system({0.2, 0.8}, {0.1, 0.4}, ThetaPair{0.7, 0.6}, kRef, 5);
    for (std::size_t n = 0; n < 5; ++n)
        for (std::size_t j = 2 * (n + 1); j < 10; ++j) CHECK(sys.a_matrix(n, j) == 0.0);
}

TEST_CASE("linearity: doubling the actions doubles prediction minus offset") {
    const auto sys = build_prediction_system({0.2, 0.8}, {0.1, 0.4}, ThetaPair{0.7, 0.6}, kRef, 4);
    std::vector<double> g(8);
    for (std::size_t i = 0; i < 8; ++i) g[i] = 0.25 * static_cast<double>(i) - 1.0;
    std::vector<double> g2(g);
    for (double& v : g2) v *= 2.0;
    const auto p1 = sys.predict(g);
    const auto p2 = sys.predict(g2);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(p2[i] - sys.offset[i] == doctest::Approx(2.0 * (p1[i] - sys.offset[i])).epsilon(1e-13));
}

TEST_CASE("horizon of zero is rejected") {
    CHECK_THROWS_AS(build_prediction_system({0, 0}, {0, 0}, ThetaPair{0, 0}, kRef, 0), HorizonZero);
}
