#include "hsc/impedance.hpp"

#include <cmath>

namespace hsc {

ImpedanceDynamicsParams discretize(const Diag2& alpha, const Diag2& beta, double ts) {
    if (!(ts > 0.0)) throw ValidationError("discretize: ts must be positive");
    const double db = 1.0 - ts * alpha.b;
    const double dk = 1.0 - ts * alpha.k;
    if (db == 0.0 || dk == 0.0)
        throw SingularDiscretization("discretize: I - ts*alpha is singular");
    ImpedanceDynamicsParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.alpha_tilde = {1.0 / db, 1.0 / dk};
    p.beta_tilde = {p.alpha_tilde.b * ts * beta.b, p.alpha_tilde.k * ts * beta.k};
    p.ts = ts;
    return p;
}

ImpedanceState step_impedance(const ImpedanceState& z, const ControlAction& gamma_next,
                              const ImpedanceDynamicsParams& p) {
    return {p.alpha_tilde.b * z.b + p.beta_tilde.b * gamma_next.gamma_b,
            p.alpha_tilde.k * z.k + p.beta_tilde.k * gamma_next.gamma_k};
}

ImpedanceState continuous_derivative(const ImpedanceState& z, const ControlAction& gamma,
                                     const Diag2& alpha, const Diag2& beta) {
    return {alpha.b * z.b + beta.b * gamma.gamma_b, alpha.k * z.k + beta.k * gamma.gamma_k};
}

ControlAction gamma_for_target(const ImpedanceState& z, const ImpedanceState& z_target,
                               const ImpedanceDynamicsParams& p) {
    if (p.beta_tilde.b == 0.0 || p.beta_tilde.k == 0.0)
        throw DegenerateBeta("gamma_for_target: beta_tilde has a zero component");
    return {(z_target.b - p.alpha_tilde.b * z.b) / p.beta_tilde.b,
            (z_target.k - p.alpha_tilde.k * z.k) / p.beta_tilde.k};
}

}  // namespace hsc
