#include "robcred/nonparametric.hpp"

#include <algorithm>
#include <cmath>

#include "robcred/asymptotics.hpp"
#include "robcred/risk_measures.hpp"

namespace robcred {

namespace {

std::size_t floor_prop(std::size_t n, double x) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * x + 1e-9));
}

bool is_integer_prop(std::size_t n, double x) {
    const double v = static_cast<double>(n) * x;
    return std::fabs(v - std::round(v)) < 1e-9;
}

std::size_t ceil_prop(std::size_t n, double x) {
    const double v = static_cast<double>(n) * x;
    if (is_integer_prop(n, x)) return static_cast<std::size_t>(std::round(v));
    return static_cast<std::size_t>(std::ceil(v));
}

double trimmed_variance_estimate(const std::vector<double>& x, const WinsorSpec& spec) {
    // x sorted ascending, 0-based; the formula's x_(j) is x[j-1]
    const std::size_t n = x.size();
    const std::size_t lo = floor_prop(n, spec.p), hi = floor_prop(n, spec.q);
    if (lo + hi >= n)
        throw std::invalid_argument("trimmed variance: no observations retained");
    const std::size_t jmax = std::min(n - hi, n - 1);  // j = n terms have zero kernel
    const double nn = static_cast<double>(n);

    double s = 0.0;
    for (std::size_t j = lo + 1; j <= jmax; ++j) {
        const double dj = x[j] - x[j - 1];
        const double ju = static_cast<double>(j) / nn;
        for (std::size_t i = lo + 1; i <= jmax; ++i) {
            const double iu = static_cast<double>(i) / nn;
            s += (std::min(ju, iu) - ju * iu) * dj * (x[i] - x[i - 1]);
        }
    }
    const double denom = static_cast<double>(n - lo - hi);
    return s * nn * nn / (denom * denom);
}

double winsorized_variance_estimate(const std::vector<double>& x, const WinsorSpec& spec) {
    const std::size_t n = x.size();
    const std::size_t lo = floor_prop(n, spec.p), hi = floor_prop(n, spec.q);
    if (lo + hi >= n)
        throw std::invalid_argument("winsorized variance: no observations retained");
    const double nn = static_cast<double>(n);

    const double mu = sorted_winsorized_mean(x, spec);
    double m2 = static_cast<double>(lo) * x[lo] * x[lo] +
                static_cast<double>(hi) * x[n - 1 - hi] * x[n - 1 - hi];
    for (std::size_t i = lo; i < n - hi; ++i) m2 += x[i] * x[i];
    const double var = m2 / nn - mu * mu;

    double A = 0.0, h_p = 0.0;
    if (spec.p > 0.0 && lo >= 1) {
        const std::size_t cp = ceil_prop(n, spec.p);  // 1-based index of x_(ceil(np))
        if (cp + 1 > n)
            throw std::invalid_argument("winsorized variance: p too large for n");
        A = (static_cast<double>(lo) * static_cast<double>(lo) / nn) *
            (x[cp] - x[cp - 1]);
        h_p = is_integer_prop(n, spec.p) ? 0.5 * (x[lo - 1] + x[lo]) : x[cp - 1];
    }
    double B = 0.0, h_1q = 0.0;
    if (spec.q > 0.0) {
        const std::size_t cq = ceil_prop(n, 1.0 - spec.q);  // 1-based
        if (hi >= 1) {
            if (cq < 2)
                throw std::invalid_argument("winsorized variance: q too large for n");
            B = (static_cast<double>(hi) * static_cast<double>(hi) / nn) *
                (x[cq - 1] - x[cq - 2]);
        }
        if (is_integer_prop(n, spec.q)) {
            const std::size_t m = n - hi;  // x_(n - nq), 1-based
            h_1q = (m < n) ? 0.5 * (x[m - 1] + x[m]) : x[m - 1];
        } else {
            h_1q = x[cq - 1];
        }
    }
    return assemble_winsorized_variance(var, mu, h_p, h_1q, A, B, spec.p, spec.q);
}

}  // namespace

std::size_t effective_count(std::size_t n, const WinsorSpec& spec, RobustMethod method) {
    if (method == RobustMethod::Winsorized) return n;
    const std::size_t lo = floor_prop(n, spec.p), hi = floor_prop(n, spec.q);
    if (lo + hi >= n) throw std::invalid_argument("no observations retained");
    return n - lo - hi;
}

double group_robust_mean(const GroupSample& group, const WinsorSpec& spec,
                         RobustMethod method) {
    return sample_robust_mean(group.losses, spec, method);
}

double group_process_variance(const GroupSample& group, const WinsorSpec& spec,
                              RobustMethod method) {
    if (group.losses.size() < 3)
        throw std::invalid_argument("process variance needs at least 3 observations");
    std::vector<double> x = group.losses;
    std::sort(x.begin(), x.end());
    return method == RobustMethod::Trimmed ? trimmed_variance_estimate(x, spec)
                                           : winsorized_variance_estimate(x, spec);
}

PortfolioEstimates portfolio_structurals(const std::vector<GroupSample>& groups,
                                         const WinsorSpec& spec,
                                         RobustMethod method) {
    const std::size_t r = groups.size();
    if (r < 2)
        throw std::invalid_argument(
            "portfolio estimates need at least 2 groups for the between-group variance");

    PortfolioEstimates est;
    est.groups.reserve(r);
    double sum_neff = 0.0, sum_neff_sq = 0.0, sum_mu = 0.0, sum_v = 0.0,
           sum_nm1 = 0.0;
    for (const auto& g : groups) {
        GroupEstimate ge;
        ge.id = g.id;
        ge.n = g.losses.size();
        ge.n_eff = effective_count(ge.n, spec, method);
        std::vector<double> x = g.losses;
        std::sort(x.begin(), x.end());
        ge.mu = method == RobustMethod::Trimmed ? sorted_trimmed_mean(x, spec)
                                                : sorted_winsorized_mean(x, spec);
        ge.v = method == RobustMethod::Trimmed ? trimmed_variance_estimate(x, spec)
                                               : winsorized_variance_estimate(x, spec);
        const double ne = static_cast<double>(ge.n_eff);
        sum_neff += ne;
        sum_neff_sq += ne * ne;
        sum_mu += ne * ge.mu;
        sum_v += ne * ge.v;
        sum_nm1 += ne - 1.0;
        est.groups.push_back(std::move(ge));
    }

    est.mu = sum_mu / sum_neff;
    est.v = sum_v / sum_nm1;

    const double N = sum_neff;
    const double denom = N - sum_neff_sq / N;
    if (!(denom > 0.0))
        throw std::invalid_argument(
            "between-group variance undefined: effective observations all in one group");
    double between = 0.0;
    for (const auto& ge : est.groups) {
        const double d = ge.mu - est.mu;
        between += static_cast<double>(ge.n_eff) * d * d;
    }
    est.a_raw = (between - (static_cast<double>(r) - 1.0) * est.v) / denom;
    if (est.a_raw <= 0.0) {
        est.a = 0.0;
        est.a_clamped = true;
    } else {
        est.a = est.a_raw;
    }

    const double k = est.a_clamped ? 0.0 : est.v / est.a;
    est.total_premium = 0.0;
    for (auto& ge : est.groups) {
        ge.Z = est.a_clamped ? 0.0
                             : static_cast<double>(ge.n) /
                                   (static_cast<double>(ge.n) + k);
        ge.premium = ge.Z * ge.mu + (1.0 - ge.Z) * est.mu;
        est.total_premium += static_cast<double>(ge.n) * ge.premium;
    }
    return est;
}

}  // namespace robcred
