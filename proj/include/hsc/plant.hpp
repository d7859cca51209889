#pragma once

#include "hsc/errors.hpp"
#include "hsc/impedance.hpp"

namespace hsc {

/// Steering-wheel angle and rate.
struct PlantState {
    double theta_s = 0.0;   // rad
    double dtheta_s = 0.0;  // rad/s

    bool operator==(const PlantState&) const = default;
};

struct PlantParams {
    double j_sw = 0.0;  // steering wheel inertia, N*m*s^2/rad
    double j_h = 0.0;   // human hand inertia
    double j_a = 0.0;   // automation motor inertia
    double b_sw = 0.0;  // steering column damping, N*m*s/rad

    bool operator==(const PlantParams&) const = default;
};

/// One agent as seen by the plant: an impedance plus the intent it is
/// pulling toward.
struct AgentInput {
    ImpedanceState z;
    double theta = 0.0;   // intent angle, rad
    double dtheta = 0.0;  // intent rate, rad/s

    bool operator==(const AgentInput&) const = default;
};

struct PlantInputs {
    AgentInput human;
    AgentInput automation;
    double tau_v = 0.0;  // road feedback torque, N*m

    bool operator==(const PlantInputs&) const = default;
};

struct PlantDerivative {
    double dtheta_s = 0.0;
    double ddtheta_s = 0.0;
};

/// J_eq = J_SW + J_H + J_A
double equivalent_inertia(const PlantParams& params);

/// Torque an agent exerts on the wheel through its impedance:
/// K*(theta_intent - theta_s) + B*(dtheta_intent - dtheta_s).
double coupling_torque(const ImpedanceState& z, double theta_intent, double dtheta_intent,
                       const PlantState& state);

/// J_eq*dd(theta_s) + B_SW*d(theta_s) = tau_H + tau_A + tau_V, solved for the
/// accelerations.
PlantDerivative plant_derivative(const PlantState& state, const PlantInputs& inputs,
                                 const PlantParams& params);

/// Classical RK4 advance with inputs held constant over dt.
PlantState rk4_step(const PlantState& state, const PlantInputs& inputs, const PlantParams& params,
                    double dt);

/// Wheel angle with everything at rest: (K_H*th_H + K_A*th_A + tau_V)/(K_H + K_A).
double static_equilibrium(const PlantInputs& inputs);

}  // namespace hsc
