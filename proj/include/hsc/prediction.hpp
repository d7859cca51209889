#pragma once

#include <span>
#include <vector>

#include "hsc/impedance.hpp"
#include "hsc/linalg.hpp"

namespace hsc {

/// An intent angle at the current and previous control step, enough to form
/// the backward-difference rate.
struct IntentSample {
    double theta = 0.0;       // rad, step k
    double theta_prev = 0.0;  // rad, step k-1
    double ts = 0.0;          // s

    bool operator==(const IntentSample&) const = default;
};

struct ThetaVector {
    double dtheta = 0.0;  // backward difference rate
    double theta = 0.0;
};

/// Row coefficients multiplying [theta(k); theta(k-1)]. The two public row
/// types mirror the torque decomposition into an impedance-carried part and
/// an action-carried part.
struct PhiRow {
    double c0 = 0.0;
    double c1 = 0.0;
};

struct PsiRow {
    double c0 = 0.0;
    double c1 = 0.0;
};

struct ThetaPair {
    double theta = 0.0;       // theta(k)
    double theta_prev = 0.0;  // theta(k-1)
};

/// Stacked affine map from horizon control actions to predicted torques:
/// predictions = a_matrix * g + offset, with g laid out as
/// [gamma_b(k+1), gamma_k(k+1), ..., gamma_b(k+Np), gamma_k(k+Np)] and rows
/// ordered ascending in time (k+1 first).
struct PredictionSystem {
    DenseMatrix a_matrix;        // Np x 2*Np, lower block-triangular
    std::vector<double> offset;  // length Np
    ThetaPair theta_pair;

    std::size_t horizon() const { return offset.size(); }
    std::vector<double> predict(std::span<const double> g) const;
};

ThetaVector theta_vector(const IntentSample& sample);

/// tau = B*(theta - theta_prev)/ts + K*theta
double intent_torque(const ImpedanceState& z, const IntentSample& sample);

/// Impedance-carried row built from the previous-step impedance.
PhiRow phi_row(const ImpedanceState& z_prev, const ImpedanceDynamicsParams& p);

/// Action-carried row built from the step's control action.
PsiRow psi_row(const ControlAction& gamma, const ImpedanceDynamicsParams& p);

/// Torque n steps ahead with the theta pair frozen:
/// (alpha_tilde^n * delta + alpha_tilde^(n-1)*psi[0] + ... + psi[n-1]) . pair,
/// where delta = phi + psi of the current step and the diagonal powers act
/// channelwise (damping entries scale B-derived terms, stiffness entries
/// K-derived terms).
double propagate_torque(const PhiRow& phi, const PsiRow& psi, std::span<const PsiRow> psis,
                        const ImpedanceDynamicsParams& p, const ThetaPair& pair);

/// Builds the horizon map from the controller-visible state (current
/// impedance and the action that produced it), frozen theta pair.
PredictionSystem build_prediction_system(const ImpedanceState& z_a, const ControlAction& gamma_k,
                                         const ThetaPair& pair, const ImpedanceDynamicsParams& p,
                                         std::size_t np);

/// Same map with a per-step theta pair (pairs[n-1] applies to the torque at
/// k+n); used by the scheduled-intent horizon mode.
PredictionSystem build_prediction_system(const ImpedanceState& z_a, const ControlAction& gamma_k,
                                         std::span<const ThetaPair> pairs,
                                         const ImpedanceDynamicsParams& p);

}  // namespace hsc
