#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robcred/common.hpp"
#include "robcred/quantile_models.hpp"

namespace robcred {

// Population trimmed / winsorized k-th moment of a conditional model,
// evaluated by direct quadrature of the quantile function:
//   T: (1-p-q)^{-1} \int_p^{1-q} H(w)^k dw
//   W: p H(p)^k + \int_p^{1-q} H(w)^k dw + q H(1-q)^k
// Endpoint weights are p and q for every k (the measure-theoretic winsorized
// moment; this is the convention all closed forms downstream rely on).
double pop_robust_moment(const ConditionalModel& model, const WinsorSpec& spec,
                         int k, RobustMethod method);

// Population robust mean (first moment), same conventions.
double pop_robust_mean(const ConditionalModel& model, const WinsorSpec& spec,
                       RobustMethod method);

// Sample estimators over order statistics; [x] is the floor.
//   T: mean of X_([np]+1) ... X_(n-[nq])
//   W: (1/n)([np] X_([np]+1) + sum_{[np]+1}^{n-[nq]} X_(i) + [nq] X_(n-[nq]))
double sample_trimmed_mean(std::vector<double> xs, const WinsorSpec& spec);
double sample_winsorized_mean(std::vector<double> xs, const WinsorSpec& spec);

// Same, but over data that is already sorted ascending (no copy).
double sorted_trimmed_mean(const std::vector<double>& sorted, const WinsorSpec& spec);
double sorted_winsorized_mean(const std::vector<double>& sorted, const WinsorSpec& spec);

double sample_robust_mean(std::vector<double> xs, const WinsorSpec& spec,
                          RobustMethod method);

struct AxiomCheck {
    std::string name;
    bool pass = false;
    double worst_violation = 0.0;
};

struct AxiomReport {
    AxiomCheck monotonicity;
    AxiomCheck positive_homogeneity;
    AxiomCheck translation_invariance;
    bool all_pass() const {
        return monotonicity.pass && positive_homogeneity.pass &&
               translation_invariance.pass;
    }
};

// Property-tests the winsorized-mean risk measure over randomized scale
// models, constants and stochastically dominated pairs. Requires
// 0 < p < 1-q < 1.
AxiomReport check_coherence_axioms(const WinsorSpec& spec, int trials,
                                   std::uint64_t seed);

struct SubadditivityResult {
    double rho_sum;            // rho(X+Y), X,Y iid N(0,1) comonotone-free sum
    double rho_x_plus_rho_y;   // rho(X) + rho(Y)
};

// Winsorized mean of N(0, sqrt(2)) versus twice that of N(0,1), in closed
// form via exact normal quantiles. For 0 < p < 1-q < 0.5 the sum side is
// strictly larger, so subadditivity fails.
SubadditivityResult subadditivity_counterexample(const WinsorSpec& spec);

// Closed-form population winsorized mean of Normal(mu, sd):
//   mu + sd * (p z_p + pdf(z_p) - pdf(z_{1-q}) + q z_{1-q}),  z_w = Phi^{-1}(w)
double winsorized_normal_mean(double mu, double sd, const WinsorSpec& spec);

}  // namespace robcred
