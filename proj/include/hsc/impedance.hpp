#pragma once

#include "hsc/errors.hpp"

namespace hsc {

/// Damping/stiffness pair for one agent. Values applied to the plant must be
/// non-negative; pre-clamp internals may go negative.
struct ImpedanceState {
    double b = 0.0;  // N*m*s/rad
    double k = 0.0;  // N*m/rad

    bool operator==(const ImpedanceState&) const = default;
};

/// Control action driving the impedance dynamics (one channel per component).
struct ControlAction {
    double gamma_b = 0.0;
    double gamma_k = 0.0;

    bool operator==(const ControlAction&) const = default;
};

/// Diagonal 2x2 over the (damping, stiffness) channels.
struct Diag2 {
    double b = 0.0;
    double k = 0.0;

    bool operator==(const Diag2&) const = default;
};

/// Continuous- and discrete-time coefficients of the impedance dynamics.
/// alpha_tilde = (I - ts*alpha)^-1 and beta_tilde = alpha_tilde*ts*beta hold
/// exactly by construction.
struct ImpedanceDynamicsParams {
    Diag2 alpha;
    Diag2 beta;
    Diag2 alpha_tilde;
    Diag2 beta_tilde;
    double ts = 0.0;  // s

    bool operator==(const ImpedanceDynamicsParams&) const = default;
};

/// Builds the discrete coefficients from the continuous ones.
ImpedanceDynamicsParams discretize(const Diag2& alpha, const Diag2& beta, double ts);

/// One discrete update: z(k+1) = alpha_tilde*z(k) + beta_tilde*gamma(k+1).
/// The result may be negative; clamping is controller policy.
ImpedanceState step_impedance(const ImpedanceState& z, const ControlAction& gamma_next,
                              const ImpedanceDynamicsParams& p);

/// Continuous rate: dz/dt = alpha*z + beta*gamma, componentwise.
ImpedanceState continuous_derivative(const ImpedanceState& z, const ControlAction& gamma,
                                     const Diag2& alpha, const Diag2& beta);

/// Algebraic inverse of step_impedance: the action that lands exactly on
/// z_target in one step.
ControlAction gamma_for_target(const ImpedanceState& z, const ImpedanceState& z_target,
                               const ImpedanceDynamicsParams& p);

}  // namespace hsc
