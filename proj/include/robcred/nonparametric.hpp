#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "robcred/common.hpp"

namespace robcred {

struct GroupSample {
    std::string id;
    std::vector<double> losses;
};

// effective count after robustification: n - [np] - [nq] for trimming,
// n for winsorizing (observations are modified, not deleted)
std::size_t effective_count(std::size_t n, const WinsorSpec& spec, RobustMethod method);

double group_robust_mean(const GroupSample& group, const WinsorSpec& spec,
                         RobustMethod method);

// Empirical plug-in estimate of the asymptotic robust-mean variance from one
// group's losses. Trimmed: the order-statistic-difference double sum over the
// retained index range (indices capped at n-1; the boundary terms it drops
// carry an identically zero kernel). Winsorized: each population component of
// the closed formula replaced by its sample version (empirical winsorized
// moments, order-statistic quantiles with the midpoint rule at integer np,
// A_hat = ([np]^2/n)(x_([np]+1) - x_([np])), B_hat analogous).
double group_process_variance(const GroupSample& group, const WinsorSpec& spec,
                              RobustMethod method);

struct GroupEstimate {
    std::string id;
    std::size_t n = 0;       // raw observation count
    std::size_t n_eff = 0;   // effective count
    double mu = 0.0;         // per-group robust mean
    double v = 0.0;          // per-group process-variance estimate
    double Z = 0.0;
    double premium = 0.0;
};

struct PortfolioEstimates {
    double mu = 0.0;
    double v = 0.0;
    double a_raw = 0.0;   // may be negative before clamping
    double a = 0.0;       // clamped at 0
    bool a_clamped = false;
    std::vector<GroupEstimate> groups;
    double total_premium = 0.0;  // sum over groups of n_i * premium_i
};

// Portfolio structural estimates:
//   mu = sum n_i' mu_i / sum n_i'
//   v  = sum n_i' v_i / sum (n_i' - 1)
//   a  = [sum n_i' (mu_i - mu)^2 - (r-1) v] / [N - N^{-1} sum n_i'^2],  N = sum n_i'
// a <= 0 is clamped to zero (flagged); every Z is then 0 and premiums collapse
// to the collective mean. Z_i = n_i/(n_i + v/a) uses the raw group count.
PortfolioEstimates portfolio_structurals(const std::vector<GroupSample>& groups,
                                         const WinsorSpec& spec,
                                         RobustMethod method);

}  // namespace robcred
