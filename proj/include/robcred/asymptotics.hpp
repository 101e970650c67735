#pragma once

#include <cstdint>
#include <string>

#include "robcred/common.hpp"
#include "robcred/quantile_models.hpp"

namespace robcred {

struct VarianceResult {
    double value = 0.0;
    std::string method;      // which formula produced it
    double quad_error = 0.0; // estimated quadrature error bound
};

// Asymptotic (process) variance of the trimmed mean,
//   v_T = (1-p-q)^{-2} \iint_{[p,1-q]^2} (min{u,v}-uv) H'(u) H'(v) du dv,
// evaluated by nested Gauss-Legendre quadrature with node doubling. The
// kernel's symmetry folds the square onto the triangle u <= v; the inner
// integral is reduced by parts to an integral of H, and both integrals run
// in the power-mapped variable 1 - x = s^M (M = 24) to absorb the
// right-edge blow-up of H and H' (present at q = 0 and nearly so for tiny
// q). Tail probabilities are propagated as 1 - x throughout, never as x.
VarianceResult process_variance_trimmed(const ConditionalModel& model,
                                        const WinsorSpec& spec);

// Asymptotic variance of the winsorized mean, closed assembly
//   v_W = Var(X_W) + 2[mu_W (A-B) + B H(1-q) - A H(p)] - (A-B)^2 + A^2/p + B^2/q
// with A = p^2 H'(p), B = q^2 H'(1-q) and the conventions A = A^2/p = 0 at
// p = 0 and B = B^2/q = 0 at q = 0 (the limits, valid whenever
// p^2 H'(p) -> 0; only the Normal family violates the prerequisite).
VarianceResult process_variance_winsorized_closed(const ConditionalModel& model,
                                                  const WinsorSpec& spec);

// Independent oracle for v_W: the influence-integral form
//   v_W = \int_0^1 alpha(u)^2 du,
//   alpha(u) = (1-u)^{-1} { \int_{max(u,p)}^{1-q} H'(w)(1-w) dw
//              + 1{u <= p} p(1-p) H'(p) + 1{u <= 1-q} q^2 H'(1-q) },
// alpha = 0 beyond 1-q. Evaluated by nested adaptive quadrature with the
// outer integral split at the kinks u = p and u = 1-q.
VarianceResult process_variance_winsorized_oracle(const ConditionalModel& model,
                                                  const WinsorSpec& spec);

// v_T or v_W (closed) depending on method.
double process_variance(const ConditionalModel& model, const WinsorSpec& spec,
                        RobustMethod method);

// Endpoint constants with their p,q -> 0 limit conventions.
double endpoint_A(const ConditionalModel& model, double p);
double endpoint_B(const ConditionalModel& model, double q);

// Shared assembly of the closed winsorized-variance formula from its
// components; also consumed by the parametric closed forms and the empirical
// plug-in estimator.
double assemble_winsorized_variance(double var_xw, double mu_w, double h_p,
                                    double h_1q, double A, double B, double p,
                                    double q);

struct NormalityReport {
    double empirical_mean = 0.0;
    double empirical_variance = 0.0;
    int n = 0;
    int reps = 0;
    bool degenerate = false;
};

// Monte Carlo check of sqrt(n)(R_hat - mu_R)/sqrt(v_R) ~ N(0,1): simulates
// `reps` samples of size n and reports the mean and variance of the
// standardized statistic. Replications are seeded independently, so results
// are worker-count invariant.
NormalityReport asymptotic_normality_test(const ConditionalModel& model,
                                          const WinsorSpec& spec,
                                          RobustMethod method, int n, int reps,
                                          std::uint64_t seed);

}  // namespace robcred
