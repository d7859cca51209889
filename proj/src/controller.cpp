#include "hsc/controller.hpp"

#include <cmath>

#include "hsc/linalg.hpp"

namespace hsc {

namespace {

constexpr double kDeadColumnTol = 1e-12;  // relative to the largest column norm

double column_norm(const DenseMatrix& a, std::size_t j) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

// Solve the stacked system with some entries of g pinned to given values.
std::vector<double> solve_with_fixed(const DenseMatrix& a, std::span<const double> rhs,
                                     const std::vector<bool>& fixed,
                                     const std::vector<double>& fixed_vals) {
    const std::size_t n = a.cols();
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < n; ++j)
        if (!fixed[j]) free_cols.push_back(j);

    std::vector<double> rhs2(rhs.begin(), rhs.end());
    for (std::size_t j = 0; j < n; ++j) {
        if (!fixed[j] || fixed_vals[j] == 0.0) continue;
        for (std::size_t i = 0; i < a.rows(); ++i) rhs2[i] -= a(i, j) * fixed_vals[j];
    }

    std::vector<double> g(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        if (fixed[j]) g[j] = fixed_vals[j];
    if (free_cols.empty()) return g;

    DenseMatrix ar(a.rows(), free_cols.size());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t jj = 0; jj < free_cols.size(); ++jj) ar(i, jj) = a(i, free_cols[jj]);
    const std::vector<double> gf = lstsq(ar, rhs2);
    for (std::size_t jj = 0; jj < free_cols.size(); ++jj) g[free_cols[jj]] = gf[jj];
    return g;
}

}  // namespace

double stage_cost(double tau_h, double tau_a, double epsilon) {
    return std::abs(std::abs(tau_h + tau_a) - epsilon) + std::abs(tau_h - tau_a);
}

double horizon_cost(std::span<const double> tau_h, std::span<const double> tau_a,
                    std::span<const double> epsilon) {
    if (tau_h.size() != tau_a.size() || tau_h.size() != epsilon.size())
        throw LengthMismatch("horizon_cost: sequence lengths differ");
    double sum = 0.0;
    for (std::size_t i = 0; i < tau_h.size(); ++i)
        sum += stage_cost(tau_h[i], tau_a[i], epsilon[i]);
    return sum;
}

double pointwise_target(double tau_h, double epsilon) {
    const double sign = tau_h >= 0.0 ? 1.0 : -1.0;
    return sign * epsilon - tau_h;
}

PlanResult plan(const ControllerState& state, const HumanObservation& obs,
                const ControllerConfig& cfg, std::span<const double> future_theta_a) {
    if (!cfg.adaptive) throw ValidationError("plan: controller is configured fixed");
    if (!state.primed || !obs.primed) throw HistoryMissing("plan: intent histories not populated");
    if (cfg.np < 1) throw HorizonZero("plan: horizon must be >= 1");
    const ImpedanceDynamicsParams& p = cfg.dynamics;

    // Zero-order hold of the measured human over the horizon.
    const double tau_h =
        intent_torque(obs.z_h, {obs.theta_h_hist[0], obs.theta_h_hist[1], cfg.ts});
    const double target = pointwise_target(tau_h, cfg.epsilon);

    PredictionSystem sys;
    if (cfg.horizon_theta == HorizonTheta::scheduled && future_theta_a.size() == cfg.np) {
        std::vector<ThetaPair> pairs(cfg.np);
        pairs[0] = {future_theta_a[0], state.theta_a_hist[0]};
        for (std::size_t n = 1; n < cfg.np; ++n)
            pairs[n] = {future_theta_a[n], future_theta_a[n - 1]};
        sys = build_prediction_system(state.z_a, state.gamma_prev, pairs, p);
    } else {
        sys = build_prediction_system(state.z_a, state.gamma_prev,
                                      {state.theta_a_hist[0], state.theta_a_hist[1]}, p, cfg.np);
    }

    std::vector<double> rhs(cfg.np);
    for (std::size_t i = 0; i < cfg.np; ++i) rhs[i] = target - sys.offset[i];

    // Channels whose prediction columns vanish (constant or zero intent) are
    // invisible to the cost; their impedance would otherwise follow the
    // unstable open-loop update, so hold it instead.
    double max_norm = 0.0;
    std::vector<double> norms(2 * cfg.np);
    for (std::size_t j = 0; j < 2 * cfg.np; ++j) {
        norms[j] = column_norm(sys.a_matrix, j);
        max_norm = std::max(max_norm, norms[j]);
    }
    const bool hold_b = norms[0] <= kDeadColumnTol * max_norm;
    const bool hold_k = norms[1] <= kDeadColumnTol * max_norm;

    // Componentwise gamma_for_target, so one degenerate channel does not
    // block the other.
    const auto gamma_b_for = [&](double b_target) {
        return (b_target - p.alpha_tilde.b * state.z_a.b) / p.beta_tilde.b;
    };
    const auto gamma_k_for = [&](double k_target) {
        return (k_target - p.alpha_tilde.k * state.z_a.k) / p.beta_tilde.k;
    };

    std::vector<bool> fixed(2 * cfg.np, false);
    std::vector<double> fixed_vals(2 * cfg.np, 0.0);
    if (hold_b && p.beta_tilde.b != 0.0) {
        fixed[0] = true;
        fixed_vals[0] = gamma_b_for(state.z_a.b);
    }
    if (hold_k && p.beta_tilde.k != 0.0) {
        fixed[1] = true;
        fixed_vals[1] = gamma_k_for(state.z_a.k);
    }

    std::vector<double> g = solve_with_fixed(sys.a_matrix, rhs, fixed, fixed_vals);

    // Clamp policy: pin negative impedance components of the applied step to
    // exactly zero and re-solve the remaining actions. Two channels, so this
    // terminates in at most two rounds.
    bool pinned_b = false;
    bool pinned_k = false;
    ImpedanceState z_next = step_impedance(state.z_a, {g[0], g[1]}, p);
    for (int round = 0; round < 2; ++round) {
        bool repinned = false;
        if (z_next.b < 0.0 && !pinned_b) {
            if (p.beta_tilde.b == 0.0)
                throw DegenerateBeta("plan: cannot clamp a channel with zero beta_tilde");
            pinned_b = true;
            repinned = true;
            fixed[0] = true;
            fixed_vals[0] = gamma_b_for(0.0);
        }
        if (z_next.k < 0.0 && !pinned_k) {
            if (p.beta_tilde.k == 0.0)
                throw DegenerateBeta("plan: cannot clamp a channel with zero beta_tilde");
            pinned_k = true;
            repinned = true;
            fixed[1] = true;
            fixed_vals[1] = gamma_k_for(0.0);
        }
        if (!repinned) break;
        g = solve_with_fixed(sys.a_matrix, rhs, fixed, fixed_vals);
        z_next = step_impedance(state.z_a, {g[0], g[1]}, p);
    }
    if (pinned_b) z_next.b = 0.0;
    if (pinned_k) z_next.k = 0.0;

    for (double v : g)
        if (!std::isfinite(v)) throw SingularSystem("plan: solver produced non-finite actions");

    PlanResult out;
    out.action = {g[0], g[1]};
    out.z_next = z_next;
    out.diag.clamped_b = pinned_b;
    out.diag.clamped_k = pinned_k;
    out.diag.held_b = hold_b;
    out.diag.held_k = hold_k;

    const std::vector<double> pred = sys.predict(g);
    double cost = 0.0;
    for (double tau_a : pred) {
        if (cfg.squared_cost) {
            const double s = std::abs(tau_h + tau_a) - cfg.epsilon;
            const double d = tau_h - tau_a;
            cost += s * s + d * d;
        } else {
            cost += stage_cost(tau_h, tau_a, cfg.epsilon);
        }
    }
    out.diag.predicted_cost = cost;
    out.diag.first_step = {std::abs(std::abs(tau_h + pred[0]) - cfg.epsilon),
                           std::abs(tau_h - pred[0])};
    return out;
}

PlanResult plan_fixed(const ControllerState& state, const ControllerConfig& cfg) {
    if (cfg.adaptive) throw ValidationError("plan_fixed: controller is configured adaptive");
    PlanResult out;
    out.action = gamma_for_target(state.z_a, state.z_a, cfg.dynamics);
    out.z_next = state.z_a;
    return out;
}

}  // namespace hsc
