#pragma once

#include "robcred/common.hpp"
#include "robcred/quantile_models.hpp"

namespace robcred {

// The (m1, m2, m3) constants factor the risk parameter out of the robust
// structural formulas: for scale-shape pairs mu_R(theta) = theta * m1 and
// v_R(theta) = theta^2 * m3; for the log-location pairs the factor is
// e^theta / e^{2 theta}. m2 is the robust second-moment constant, so
// m2 - m1^2 is the winsorized conditional-variance factor.
struct MConstants {
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
    RobustMethod method = RobustMethod::Winsorized;
};

enum class PairTag { ExpGamma, ParetoGamma, LognormalNormal, LogLogisticNormal };

const char* pair_name(PairTag tag);

struct ModelPair {
    PairTag tag;
    PriorModel prior;
    double shape = 0.0;  // Pareto t, lognormal sigma', log-logistic sigma

    static ModelPair exp_gamma(double alpha, double beta);
    static ModelPair pareto_gamma(double t, double alpha, double beta);
    static ModelPair lognormal_normal(double sigma, double mu, double v2);
    static ModelPair loglogistic_normal(double sigma, double mu, double v2);

    bool scale_shape() const {
        return tag == PairTag::ExpGamma || tag == PairTag::ParetoGamma;
    }
    // conditional model at unit risk parameter (scale 1 / location 0)
    ConditionalModel unit_model() const;
    // conditional model at risk parameter theta
    ConditionalModel at(double theta) const;
};

struct StructuralParams {
    double mu = 0.0;  // collective premium
    double v = 0.0;   // expectation of process variance
    double a = 0.0;   // variance of hypothetical means
    double k = 0.0;   // credibility coefficient v/a
    RobustMethod method = RobustMethod::Winsorized;
    PairTag pair = PairTag::ExpGamma;
};

// Closed-form m-constants where the family admits them (all of Exponential,
// Pareto, Lognormal; Log-logistic uses numeric \int (w/(1-w))^{k sigma} dw
// pieces), m3 for the trimmed method always by quadrature. Results are cached
// per (pair family, shape, spec, method).
MConstants m_constants(const ModelPair& pair, const WinsorSpec& spec,
                       RobustMethod method);

StructuralParams structural_params(const ModelPair& pair, const WinsorSpec& spec,
                                   RobustMethod method);

double credibility_factor(const StructuralParams& params, double n);

// Z * robust_mean + (1-Z) * mu; robust_mean must come from the same spec and
// method as params.
double credibility_premium(const StructuralParams& params, double robust_mean,
                           double n);

struct NonrobustLimit {
    double Z = 0.0;
    double collective = 0.0;
};

// Classical (p = q = 0) credibility factor and collective premium for the pair.
NonrobustLimit nonrobust_limit(const ModelPair& pair, double n);

}  // namespace robcred
