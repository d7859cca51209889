#pragma once

#include <array>
#include <span>
#include <vector>

#include "hsc/impedance.hpp"
#include "hsc/prediction.hpp"

namespace hsc {

enum class HorizonTheta { frozen, scheduled };

struct ControllerConfig {
    double ts = 0.1;
    std::size_t np = 20;
    double epsilon = 0.1;  // safety torque floor for this tick, N*m
    ImpedanceDynamicsParams dynamics;
    bool adaptive = true;
    HorizonTheta horizon_theta = HorizonTheta::frozen;
    // When true, diagnostics report squared cost terms instead of the
    // default absolute-value reading. The planner's target is unchanged.
    bool squared_cost = false;
};

struct CostBreakdown {
    double safety = 0.0;
    double disagreement = 0.0;
};

struct ControllerState {
    ImpedanceState z_a;
    ControlAction gamma_prev;
    std::array<double, 2> theta_a_hist{};  // {theta(k), theta(k-1)}
    CostBreakdown cost_breakdown;
    bool primed = false;
};

struct HumanObservation {
    ImpedanceState z_h;
    std::array<double, 2> theta_h_hist{};
    bool primed = false;
};

struct PlanDiagnostics {
    double predicted_cost = 0.0;
    CostBreakdown first_step;
    bool clamped_b = false;
    bool clamped_k = false;
    bool held_b = false;
    bool held_k = false;
};

struct PlanResult {
    ControlAction action;    // gamma(k+1), the only action applied
    ImpedanceState z_next;   // clamped automation impedance
    PlanDiagnostics diag;
};

/// Per-step cost: | |tau_h + tau_a| - epsilon | + |tau_h - tau_a|.
double stage_cost(double tau_h, double tau_a, double epsilon);

/// Sum of stage costs over matching sequences.
double horizon_cost(std::span<const double> tau_h, std::span<const double> tau_a,
                    std::span<const double> epsilon);

/// The safety-exact endpoint nearest the agreement ideal: the tau_a in
/// {epsilon - tau_h, -epsilon - tau_h} closest to tau_h (ties toward
/// sgn(tau_h)*epsilon - tau_h). Achieves the global stage-cost minimum
/// |epsilon - 2*|tau_h||.
double pointwise_target(double tau_h, double epsilon);

/// One receding-horizon step. future_theta_a (length np) supplies the
/// automation intent over the horizon for the scheduled mode; ignored when
/// the config says frozen.
PlanResult plan(const ControllerState& state, const HumanObservation& obs,
                const ControllerConfig& cfg, std::span<const double> future_theta_a = {});

/// Fixed-impedance baseline: the action that holds z_a exactly.
PlanResult plan_fixed(const ControllerState& state, const ControllerConfig& cfg);

}  // namespace hsc
