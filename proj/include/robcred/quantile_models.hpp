#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robcred/common.hpp"

namespace robcred {

enum class Family { Exponential, Pareto, Lognormal, LogLogistic, Normal };

const char* family_name(Family f);

// A loss distribution conditional on its risk parameter, exposed through the
// distribution function F, the quantile function H = F^{-1} and its
// derivative H'. Sampling is inverse-transform only.
//
// Parameterizations:
//   Exponential(theta):       F(x) = 1 - exp(-x/theta),            theta > 0 (scale)
//   Pareto(t, theta):         F(x) = 1 - (theta/(x+theta))^t,      t > 2, theta > 0
//   Lognormal(theta, sigma):  log X ~ N(theta, sigma^2),           sigma > 0
//   LogLogistic(theta, sigma):F(x) = 1/(1+exp(-(log x-theta)/sigma)), 0 < sigma < 1
//   Normal(mu, sd):           X ~ N(mu, sd^2)   (risk-measure counterexample only)
struct ConditionalModel {
    Family family;
    double a;  // theta (or mu for Normal)
    double b;  // t / sigma / sd; unused for Exponential

    static ConditionalModel exponential(double theta);
    static ConditionalModel pareto(double t, double theta);
    static ConditionalModel lognormal(double theta, double sigma);
    static ConditionalModel loglogistic(double theta, double sigma);
    static ConditionalModel normal(double mu, double sd);

    double cdf(double x) const;
    double quantile(double w) const;
    double quantile_deriv(double w) const;

    // H and H' evaluated at w = 1 - omw from the tail probability omw itself.
    // Near w = 1 the forward forms lose all relative precision (1 - w rounds
    // away the tail), so quadratures that substitute 1 - w = s^M must call
    // these instead of forming w.
    double quantile_tail(double omw) const;
    double quantile_deriv_tail(double omw) const;

    // true if the left support endpoint is finite and H(0+) has a finite limit
    bool bounded_below() const { return family != Family::Normal; }

    double mean() const;
    double variance() const;
};

// Parses CLI model strings: "exp:theta=2", "pareto:t=3,theta=1",
// "lognormal:theta=4,sigma=0.45", "loglogistic:theta=4,sigma=0.45",
// "normal:mu=0,sd=1".
ConditionalModel parse_model(const std::string& spec);

struct PriorModel {
    enum class Kind { Gamma, Normal };
    Kind kind;
    double a;  // Gamma shape alpha / Normal mean mu
    double b;  // Gamma rate beta / Normal variance v^2

    static PriorModel gamma(double alpha, double beta);
    static PriorModel normal(double mu, double v2);
};

std::vector<double> sample(const ConditionalModel& m, Rng& rng, std::size_t count);
double sample_prior(const PriorModel& prior, Rng& rng);

}  // namespace robcred
