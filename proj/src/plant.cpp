#include "hsc/plant.hpp"

#include <cmath>

namespace hsc {

double equivalent_inertia(const PlantParams& params) {
    return params.j_sw + params.j_h + params.j_a;
}

double coupling_torque(const ImpedanceState& z, double theta_intent, double dtheta_intent,
                       const PlantState& state) {
    return z.k * (theta_intent - state.theta_s) + z.b * (dtheta_intent - state.dtheta_s);
}

PlantDerivative plant_derivative(const PlantState& state, const PlantInputs& inputs,
                                 const PlantParams& params) {
    const double j_eq = equivalent_inertia(params);
    if (j_eq == 0.0) throw ZeroInertia("plant_derivative: equivalent inertia is zero");
    const double tau_h =
        coupling_torque(inputs.human.z, inputs.human.theta, inputs.human.dtheta, state);
    const double tau_a = coupling_torque(inputs.automation.z, inputs.automation.theta,
                                         inputs.automation.dtheta, state);
    const double ddtheta =
        (tau_h + tau_a + inputs.tau_v - params.b_sw * state.dtheta_s) / j_eq;
    return {state.dtheta_s, ddtheta};
}

PlantState rk4_step(const PlantState& state, const PlantInputs& inputs, const PlantParams& params,
                    double dt) {
    if (!(dt > 0.0)) throw ValidationError("rk4_step: dt must be positive");
    const auto k1 = plant_derivative(state, inputs, params);
    const PlantState s2{state.theta_s + 0.5 * dt * k1.dtheta_s,
                        state.dtheta_s + 0.5 * dt * k1.ddtheta_s};
    const auto k2 = plant_derivative(s2, inputs, params);
    const PlantState s3{state.theta_s + 0.5 * dt * k2.dtheta_s,
                        state.dtheta_s + 0.5 * dt * k2.ddtheta_s};
    const auto k3 = plant_derivative(s3, inputs, params);
    const PlantState s4{state.theta_s + dt * k3.dtheta_s, state.dtheta_s + dt * k3.ddtheta_s};
    const auto k4 = plant_derivative(s4, inputs, params);

    PlantState out{
        state.theta_s +
            dt / 6.0 * (k1.dtheta_s + 2.0 * k2.dtheta_s + 2.0 * k3.dtheta_s + k4.dtheta_s),
        state.dtheta_s +
            dt / 6.0 * (k1.ddtheta_s + 2.0 * k2.ddtheta_s + 2.0 * k3.ddtheta_s + k4.ddtheta_s)};
    if (!std::isfinite(out.theta_s) || !std::isfinite(out.dtheta_s))
        throw NonFiniteState("rk4_step: state diverged to NaN/Inf");
    return out;
}

double static_equilibrium(const PlantInputs& inputs) {
    const double k_sum = inputs.human.z.k + inputs.automation.z.k;
    if (k_sum == 0.0) throw NoStiffness("static_equilibrium: K_H + K_A is zero");
    return (inputs.human.z.k * inputs.human.theta + inputs.automation.z.k * inputs.automation.theta +
            inputs.tau_v) /
           k_sum;
}

}  // namespace hsc
