#include "robcred/risk_measures.hpp"

#include <algorithm>
#include <cmath>

#include "robcred/normal.hpp"
#include "robcred/quadrature.hpp"

namespace robcred {

namespace {

// Raw k-th tail moment must exist before the q = 0 integral can converge.
void check_moment_exists(const ConditionalModel& m, const WinsorSpec& spec, int k) {
    if (spec.q > 0.0) return;
    if (m.family == Family::Pareto && !(m.b > k))
        throw std::domain_error("pareto: k-th moment needs shape t > k");
    if (m.family == Family::LogLogistic && !(k * m.b < 1.0))
        throw std::domain_error("loglogistic: k-th moment needs k*sigma < 1");
}

double quantile_power_integral(const ConditionalModel& m, double lo, double hi,
                               int k) {
    return integrate01_tail(
        [&](double w) { return std::pow(m.quantile(w), k); },
        [&](double omw) { return std::pow(m.quantile_tail(omw), k); }, lo, hi,
        1e-11);
}

}  // namespace

double pop_robust_moment(const ConditionalModel& model, const WinsorSpec& spec,
                         int k, RobustMethod method) {
    if (k < 1) throw std::invalid_argument("pop_robust_moment: k >= 1 required");
    check_moment_exists(model, spec, k);
    const double p = spec.p, q = spec.q;
    const double body = quantile_power_integral(model, p, 1.0 - q, k);
    if (method == RobustMethod::Trimmed) return body / (1.0 - p - q);

    double lower = 0.0;
    if (p > 0.0) {
        lower = p * std::pow(model.quantile(p), k);
    } else if (!model.bounded_below()) {
        throw std::domain_error(
            "winsorized moment undefined at p=0: quantile diverges at the left endpoint");
    }
    const double upper = q > 0.0 ? q * std::pow(model.quantile(1.0 - q), k) : 0.0;
    return lower + body + upper;
}

double pop_robust_mean(const ConditionalModel& model, const WinsorSpec& spec,
                       RobustMethod method) {
    return pop_robust_moment(model, spec, 1, method);
}

namespace {

// floor(n*x) with a guard against values like 100*0.05 landing a hair above
// the exact integer
std::size_t floor_prop(std::size_t n, double x) {
    return static_cast<std::size_t>(std::floor(static_cast<double>(n) * x + 1e-9));
}

}  // namespace

double sorted_trimmed_mean(const std::vector<double>& sorted, const WinsorSpec& spec) {
    const std::size_t n = sorted.size();
    const std::size_t lo = floor_prop(n, spec.p), hi = floor_prop(n, spec.q);
    if (lo + hi >= n)
        throw std::invalid_argument("trimmed mean: no observations retained");
    double s = 0.0;
    for (std::size_t i = lo; i < n - hi; ++i) s += sorted[i];
    return s / static_cast<double>(n - lo - hi);
}

double sorted_winsorized_mean(const std::vector<double>& sorted, const WinsorSpec& spec) {
    const std::size_t n = sorted.size();
    const std::size_t lo = floor_prop(n, spec.p), hi = floor_prop(n, spec.q);
    if (lo + hi >= n)
        throw std::invalid_argument("winsorized mean: no observations retained");
    double s = static_cast<double>(lo) * sorted[lo] +
               static_cast<double>(hi) * sorted[n - 1 - hi];
    for (std::size_t i = lo; i < n - hi; ++i) s += sorted[i];
    return s / static_cast<double>(n);
}

double sample_trimmed_mean(std::vector<double> xs, const WinsorSpec& spec) {
    if (xs.empty()) throw std::invalid_argument("trimmed mean: empty sample");
    std::sort(xs.begin(), xs.end());
    return sorted_trimmed_mean(xs, spec);
}

double sample_winsorized_mean(std::vector<double> xs, const WinsorSpec& spec) {
    if (xs.empty()) throw std::invalid_argument("winsorized mean: empty sample");
    std::sort(xs.begin(), xs.end());
    return sorted_winsorized_mean(xs, spec);
}

double sample_robust_mean(std::vector<double> xs, const WinsorSpec& spec,
                          RobustMethod method) {
    return method == RobustMethod::Trimmed ? sample_trimmed_mean(std::move(xs), spec)
                                           : sample_winsorized_mean(std::move(xs), spec);
}

double winsorized_normal_mean(double mu, double sd, const WinsorSpec& spec) {
    const double p = spec.p, q = spec.q;
    double g = -norm_pdf(norm_quantile(1.0 - q)) + q * norm_quantile(1.0 - q);
    if (p > 0.0) g += p * norm_quantile(p) + norm_pdf(norm_quantile(p));
    return mu + sd * g;
}

namespace {

double rel_gap(double lhs, double rhs) {
    return std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs));
}

}  // namespace

AxiomReport check_coherence_axioms(const WinsorSpec& spec, int trials,
                                   std::uint64_t seed) {
    if (!(spec.p > 0.0 && 1.0 - spec.q < 1.0))
        throw std::invalid_argument("coherence checks need 0 < p < 1-q < 1");

    AxiomReport rep;
    rep.monotonicity.name = "monotonicity";
    rep.positive_homogeneity.name = "positive homogeneity";
    rep.translation_invariance.name = "translation invariance";
    double worst_mono = 0.0, worst_hom = 0.0, worst_trans = 0.0;

    Rng rng(mix_seed(seed, 0x636f6865ULL));
    for (int t = 0; t < trials; ++t) {
        const double theta = 0.2 + 5.0 * rng.uniform();
        const double scale_up = 1.0 + 4.0 * rng.uniform();
        const double c = 0.1 + 9.9 * rng.uniform();
        const double shift = -5.0 + 10.0 * rng.uniform();

        // monotonicity via quantile dominance: Exp(theta) <=st Exp(theta')
        const auto x = ConditionalModel::exponential(theta);
        const auto y = ConditionalModel::exponential(theta * scale_up);
        const double rx = pop_robust_mean(x, spec, RobustMethod::Winsorized);
        const double ry = pop_robust_mean(y, spec, RobustMethod::Winsorized);
        worst_mono = std::max(worst_mono, (rx - ry) / std::max(1.0, std::fabs(ry)));

        // positive homogeneity on the same scale family: cX ~ Exp(c*theta)
        const auto cx = ConditionalModel::exponential(c * theta);
        worst_hom = std::max(
            worst_hom, rel_gap(pop_robust_mean(cx, spec, RobustMethod::Winsorized),
                               c * rx));

        // translation invariance on normals, closed form
        const double mu = -2.0 + 4.0 * rng.uniform(), sd = 0.5 + 2.0 * rng.uniform();
        const double rn = winsorized_normal_mean(mu, sd, spec);
        const double rns = winsorized_normal_mean(mu + shift, sd, spec);
        worst_trans = std::max(worst_trans, rel_gap(rns, rn + shift));
        // homogeneity on normals as well (exact)
        worst_hom = std::max(
            worst_hom, rel_gap(winsorized_normal_mean(c * mu, c * sd, spec), c * rn));
    }

    const double tol = 1e-10;
    rep.monotonicity.worst_violation = std::max(0.0, worst_mono);
    rep.monotonicity.pass = worst_mono <= tol;
    rep.positive_homogeneity.worst_violation = worst_hom;
    rep.positive_homogeneity.pass = worst_hom <= tol;
    rep.translation_invariance.worst_violation = worst_trans;
    rep.translation_invariance.pass = worst_trans <= tol;
    return rep;
}

SubadditivityResult subadditivity_counterexample(const WinsorSpec& spec) {
    if (!(spec.p > 0.0 && 1.0 - spec.q < 0.5))
        throw std::invalid_argument(
            "subadditivity counterexample needs 0 < p < 1-q < 0.5");
    SubadditivityResult r;
    r.rho_x_plus_rho_y = 2.0 * winsorized_normal_mean(0.0, 1.0, spec);
    r.rho_sum = winsorized_normal_mean(0.0, std::sqrt(2.0), spec);
    return r;
}

}  // namespace robcred
