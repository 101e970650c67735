#include "robcred/asymptotics.hpp"

#include <cmath>
#include <vector>

#include "robcred/parallel.hpp"
#include "robcred/quadrature.hpp"
#include "robcred/risk_measures.hpp"

namespace robcred {

VarianceResult process_variance_trimmed(const ConditionalModel& model,
                                        const WinsorSpec& spec) {
    const double p = spec.p, q = spec.q;
    const double norm = 1.0 / ((1.0 - p - q) * (1.0 - p - q));
    // Both integrals run in the power-mapped variable 1 - x = s^M, which
    // absorbs the right-edge blow-up of H and H' (present at q = 0 and
    // nearly so for tiny q). The folded integrand behaves like
    // (1-v)^{-alpha} with alpha < 1 whenever the variance exists; M = 24
    // keeps the mapped integrand bounded through alpha up to 23/24.
    constexpr double M = 24.0;
    auto powM = [](double s) {
        const double s2 = s * s, s4 = s2 * s2, s8 = s4 * s4;
        return s8 * s8 * s8;
    };
    auto jacM = [](double s) {
        const double s2 = s * s, s4 = s2 * s2, s8 = s4 * s4;
        return 24.0 * s8 * s8 * s4 * s2 * s;
    };
    const double s_hi = std::pow(1.0 - p, 1.0 / M);
    const double s_lo = q > 0.0 ? std::pow(q, 1.0 / M) : 0.0;
    const double h_p = p > 0.0 ? model.quantile(p) : 0.0;

    double prev = 0.0, cur = 0.0, change = 0.0;
    bool have_prev = false;
    for (int n = 16; n <= 4096; n *= 2) {
        const auto& [xs, ws] = gauss_legendre_rule(n);
        // K(v) = \int_p^v u H'(u) du = v H(v) - p H(p) - \int_p^v H(u) du,
        // the last integral by the same-order rule in u = 1 - r^M. All tail
        // quantities are carried as 1 - x, never as x itself: for s below
        // eps^{1/M} the rounded 1 - s^M is exactly 1, yet the mapped
        // integrand is nowhere near zero there.
        auto inner_k = [&](double omv, double hv) {
            const double r_v = std::pow(omv, 1.0 / M);
            const double c = 0.5 * (s_hi - r_v), mid = 0.5 * (s_hi + r_v);
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                const double r = mid + c * xs[i];
                const double omu = powM(r);
                if (omu <= 0.0) continue;  // r^M below DBL_MIN
                acc += ws[i] * jacM(r) * model.quantile_tail(omu);
            }
            return (hv - omv * hv) - p * h_p - c * acc;
        };

        double outer = 0.0;
        const double c = 0.5 * (s_hi - s_lo), mid = 0.5 * (s_hi + s_lo);
        for (int i = 0; i < n; ++i) {
            const double s = mid + c * xs[i];
            const double omv = powM(s);
            if (omv <= 0.0) continue;  // s^M below DBL_MIN
            outer += ws[i] * jacM(s) * 2.0 * omv *
                     model.quantile_deriv_tail(omv) *
                     inner_k(omv, model.quantile_tail(omv));
        }
        cur = norm * outer * c;
        if (have_prev) {
            change = std::fabs(cur - prev);
            if (change <= 1e-8 * std::max(1e-300, std::fabs(cur)))
                return {std::max(cur, 0.0), "trimmed-fold-gl", change};
        }
        prev = cur;
        have_prev = true;
    }
    throw NonConvergenceError(
        "trimmed-variance quadrature did not reach 1e-8 within 4096 nodes/axis",
        cur, change);
}

double endpoint_A(const ConditionalModel& model, double p) {
    if (p == 0.0) {
        if (!model.bounded_below())
            throw std::domain_error(
                "endpoint constant A undefined at p=0: quantile diverges at 0");
        return 0.0;
    }
    return p * p * model.quantile_deriv(p);
}

double endpoint_B(const ConditionalModel& model, double q) {
    if (q == 0.0) return 0.0;
    return q * q * model.quantile_deriv(1.0 - q);
}

double assemble_winsorized_variance(double var_xw, double mu_w, double h_p,
                                    double h_1q, double A, double B, double p,
                                    double q) {
    double v = var_xw + 2.0 * (mu_w * (A - B) + B * h_1q - A * h_p) -
               (A - B) * (A - B);
    if (p > 0.0) v += A * A / p;
    if (q > 0.0) v += B * B / q;
    return v;
}

VarianceResult process_variance_winsorized_closed(const ConditionalModel& model,
                                                  const WinsorSpec& spec) {
    const double p = spec.p, q = spec.q;
    const double mu_w = pop_robust_moment(model, spec, 1, RobustMethod::Winsorized);
    const double ex2 = pop_robust_moment(model, spec, 2, RobustMethod::Winsorized);
    const double A = endpoint_A(model, p);
    const double B = endpoint_B(model, q);
    const double h_p = p > 0.0 ? model.quantile(p) : 0.0;
    const double h_1q = q > 0.0 ? model.quantile(1.0 - q) : 0.0;
    double v = assemble_winsorized_variance(ex2 - mu_w * mu_w, mu_w, h_p, h_1q,
                                            A, B, p, q);
    const double err = 1e-9 * std::max(1.0, std::fabs(v));
    if (v < 0.0 && v > -err) v = 0.0;
    return {v, "winsorized-closed", err};
}

VarianceResult process_variance_winsorized_oracle(const ConditionalModel& model,
                                                  const WinsorSpec& spec) {
    const double p = spec.p, q = spec.q;
    const double hi = 1.0 - q;

    // \int_{max(u,p)}^{1-q} H'(w)(1-w) dw recast in z = 1-w so the u -> 1
    // evaluations (needed when q = 0) see the tail probability exactly:
    //   = \int_q^{min(1-u, 1-p)} H'(1-z) z dz.
    // Near z = 1 (i.e. w -> 0) the forward form is the precise one, hence
    // the mixed tail callback.
    auto tail_integral_omu = [&](double omu) {
        const double z_hi = std::min(omu, 1.0 - p);
        if (z_hi <= q) return 0.0;
        return integrate01_tail(
            [&](double z) { return model.quantile_deriv_tail(z) * z; },
            [&](double omz) { return model.quantile_deriv(omz) * (1.0 - omz); },
            q, z_hi, 1e-11);
    };
    const double term_p = p > 0.0 ? p * (1.0 - p) * model.quantile_deriv(p) : 0.0;
    const double term_q = q > 0.0 ? q * q * model.quantile_deriv(hi) : 0.0;

    auto alpha_tail = [&](double omu) {
        if (omu <= q) return 0.0;
        double num = tail_integral_omu(omu) + term_q;
        if (omu >= 1.0 - p) num += term_p;
        return num / omu;
    };
    auto alpha_sq = [&](double u) {
        const double a = alpha_tail(1.0 - u);
        return a * a;
    };
    auto alpha_sq_tail = [&](double omu) {
        const double a = alpha_tail(omu);
        return a * a;
    };

    double total = 0.0, err = 0.0;
    if (p > 0.0) {
        double e1 = 0.0;
        total += adaptive_integrate(alpha_sq, 0.0, p, 1e-9, &e1);
        err += e1;
    }
    total += integrate01_tail(alpha_sq, alpha_sq_tail, p, hi, 1e-9);
    return {std::max(total, 0.0), "winsorized-oracle", err + 1e-9 * std::max(1.0, total)};
}

double process_variance(const ConditionalModel& model, const WinsorSpec& spec,
                        RobustMethod method) {
    return method == RobustMethod::Trimmed
               ? process_variance_trimmed(model, spec).value
               : process_variance_winsorized_closed(model, spec).value;
}

NormalityReport asymptotic_normality_test(const ConditionalModel& model,
                                          const WinsorSpec& spec,
                                          RobustMethod method, int n, int reps,
                                          std::uint64_t seed) {
    NormalityReport rep;
    rep.n = n;
    rep.reps = reps;
    const double mu = pop_robust_mean(model, spec, method);
    const double v = process_variance(model, spec, method);
    if (!(v > 1e-12)) {
        rep.degenerate = true;
        return rep;
    }
    const double sd = std::sqrt(v);
    const double root_n = std::sqrt(static_cast<double>(n));

    std::vector<double> stat(reps);
    parallel_for(static_cast<std::size_t>(reps), [&](std::size_t r) {
        Rng rng(mix_seed(seed, 0xA5ULL, r));
        auto xs = sample(model, rng, static_cast<std::size_t>(n));
        const double est = sample_robust_mean(std::move(xs), spec, method);
        stat[r] = root_n * (est - mu) / sd;
    });

    double m = 0.0;
    for (double s : stat) m += s;
    m /= reps;
    double var = 0.0;
    for (double s : stat) var += (s - m) * (s - m);
    var /= (reps - 1);
    rep.empirical_mean = m;
    rep.empirical_variance = var;
    return rep;
}

}  // namespace robcred
