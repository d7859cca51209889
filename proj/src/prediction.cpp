#include "hsc/prediction.hpp"

#include <cmath>

namespace hsc {

namespace {

// Internal row representation split by dynamics channel: pb carries the
// B-derived term (already divided by ts), pk the K-derived term. The public
// (c0, c1) coefficients are c0 = pb + pk, c1 = -pb, and the split is
// recoverable as pb = -c1, pk = c0 + c1, which is what lets the diagonal
// alpha_tilde powers act on the right entries.
struct ChannelRow {
    double pb = 0.0;
    double pk = 0.0;

    double dot(const ThetaPair& pair) const {
        return pb * (pair.theta - pair.theta_prev) + pk * pair.theta;
    }
};

ChannelRow split(double c0, double c1) { return {-c1, c0 + c1}; }

ChannelRow scale(const Diag2& d, const ChannelRow& r) { return {d.b * r.pb, d.k * r.pk}; }

}  // namespace

ThetaVector theta_vector(const IntentSample& sample) {
    if (!(sample.ts > 0.0)) throw ValidationError("theta_vector: ts must be positive");
    return {(sample.theta - sample.theta_prev) / sample.ts, sample.theta};
}

double intent_torque(const ImpedanceState& z, const IntentSample& sample) {
    const ThetaVector v = theta_vector(sample);
    return z.b * v.dtheta + z.k * v.theta;
}

PhiRow phi_row(const ImpedanceState& z_prev, const ImpedanceDynamicsParams& p) {
    if (!(p.ts > 0.0)) throw ValidationError("phi_row: ts must be positive");
    const double pb = p.alpha_tilde.b * z_prev.b / p.ts;
    const double pk = p.alpha_tilde.k * z_prev.k;
    return {pb + pk, -pb};
}

PsiRow psi_row(const ControlAction& gamma, const ImpedanceDynamicsParams& p) {
    if (!(p.ts > 0.0)) throw ValidationError("psi_row: ts must be positive");
    const double pb = p.beta_tilde.b * gamma.gamma_b / p.ts;
    const double pk = p.beta_tilde.k * gamma.gamma_k;
    return {pb + pk, -pb};
}

double propagate_torque(const PhiRow& phi, const PsiRow& psi, std::span<const PsiRow> psis,
                        const ImpedanceDynamicsParams& p, const ThetaPair& pair) {
    ChannelRow row = split(phi.c0 + psi.c0, phi.c1 + psi.c1);
    for (const PsiRow& next : psis) {
        row = scale(p.alpha_tilde, row);
        const ChannelRow add = split(next.c0, next.c1);
        row.pb += add.pb;
        row.pk += add.pk;
    }
    return row.dot(pair);
}

std::vector<double> PredictionSystem::predict(std::span<const double> g) const {
    std::vector<double> out = a_matrix.multiply(g);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += offset[i];
    return out;
}

PredictionSystem build_prediction_system(const ImpedanceState& z_a, const ControlAction& gamma_k,
                                         const ThetaPair& pair, const ImpedanceDynamicsParams& p,
                                         std::size_t np) {
    if (np < 1) throw HorizonZero("build_prediction_system: horizon must be >= 1");
    std::vector<ThetaPair> pairs(np, pair);
    return build_prediction_system(z_a, gamma_k, pairs, p);
}

PredictionSystem build_prediction_system(const ImpedanceState& z_a, const ControlAction& gamma_k,
                                         std::span<const ThetaPair> pairs,
                                         const ImpedanceDynamicsParams& p) {
    const std::size_t np = pairs.size();
    if (np < 1) throw HorizonZero("build_prediction_system: horizon must be >= 1");

    // Recover the step-(k-1) impedance and assemble delta(k) = Phi(k) + Psi(k)
    // the way the prediction stack defines it. The sum reconstructs the
    // current impedance row exactly.
    const ImpedanceState z_prev{(z_a.b - p.beta_tilde.b * gamma_k.gamma_b) / p.alpha_tilde.b,
                                (z_a.k - p.beta_tilde.k * gamma_k.gamma_k) / p.alpha_tilde.k};
    const PhiRow phi = phi_row(z_prev, p);
    const PsiRow psi = psi_row(gamma_k, p);
    ChannelRow delta = split(phi.c0 + psi.c0, phi.c1 + psi.c1);

    PredictionSystem sys;
    sys.a_matrix = DenseMatrix(np, 2 * np);
    sys.offset.resize(np);
    sys.theta_pair = pairs[0];

    // Row n (1-based): alpha_tilde^n delta + sum_i alpha_tilde^(n-i) Psi(k+i),
    // dotted with that row's theta pair. Unknowns enter through the Psi rows,
    // so the coefficient of gamma_b(k+i) is alpha_b^(n-i)*beta_b*dtheta and of
    // gamma_k(k+i) is alpha_k^(n-i)*beta_k*theta.
    ChannelRow hom = delta;
    for (std::size_t n = 1; n <= np; ++n) {
        hom = scale(p.alpha_tilde, hom);
        const ThetaPair& pr = pairs[n - 1];
        const double dth = (pr.theta - pr.theta_prev) / p.ts;
        sys.offset[n - 1] = hom.pb * (pr.theta - pr.theta_prev) + hom.pk * pr.theta;

        double pow_b = 1.0;
        double pow_k = 1.0;
        for (std::size_t i = n; i >= 1; --i) {
            sys.a_matrix(n - 1, 2 * (i - 1)) = pow_b * p.beta_tilde.b * dth;
            sys.a_matrix(n - 1, 2 * (i - 1) + 1) = pow_k * p.beta_tilde.k * pr.theta;
            pow_b *= p.alpha_tilde.b;
            pow_k *= p.alpha_tilde.k;
        }
    }
    return sys;
}

}  // namespace hsc
