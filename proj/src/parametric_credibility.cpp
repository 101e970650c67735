#include "robcred/parametric_credibility.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "robcred/asymptotics.hpp"
#include "robcred/normal.hpp"
#include "robcred/quadrature.hpp"
#include "robcred/risk_measures.hpp"

namespace robcred {

const char* pair_name(PairTag tag) {
    switch (tag) {
        case PairTag::ExpGamma: return "exp-gamma";
        case PairTag::ParetoGamma: return "pareto-gamma";
        case PairTag::LognormalNormal: return "lognormal-normal";
        case PairTag::LogLogisticNormal: return "loglogistic-normal";
    }
    return "?";
}

ModelPair ModelPair::exp_gamma(double alpha, double beta) {
    return {PairTag::ExpGamma, PriorModel::gamma(alpha, beta), 0.0};
}

ModelPair ModelPair::pareto_gamma(double t, double alpha, double beta) {
    if (!(t > 2.0)) throw std::invalid_argument("pareto-gamma: t > 2 required");
    return {PairTag::ParetoGamma, PriorModel::gamma(alpha, beta), t};
}

ModelPair ModelPair::lognormal_normal(double sigma, double mu, double v2) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("lognormal-normal: sigma > 0 required");
    return {PairTag::LognormalNormal, PriorModel::normal(mu, v2), sigma};
}

ModelPair ModelPair::loglogistic_normal(double sigma, double mu, double v2) {
    if (!(sigma > 0.0 && sigma < 1.0))
        throw std::invalid_argument("loglogistic-normal: 0 < sigma < 1 required");
    return {PairTag::LogLogisticNormal, PriorModel::normal(mu, v2), sigma};
}

ConditionalModel ModelPair::unit_model() const { return at(scale_shape() ? 1.0 : 0.0); }

ConditionalModel ModelPair::at(double theta) const {
    switch (tag) {
        case PairTag::ExpGamma: return ConditionalModel::exponential(theta);
        case PairTag::ParetoGamma: return ConditionalModel::pareto(shape, theta);
        case PairTag::LognormalNormal: return ConditionalModel::lognormal(theta, shape);
        case PairTag::LogLogisticNormal:
            return ConditionalModel::loglogistic(theta, shape);
    }
    throw std::logic_error("unreachable");
}

namespace {

// ---- closed unit-scale robust moment constants per family -----------------

struct WinsorizedMoments {
    double m1T = 0.0;
    double m1W = 0.0;
    double m2W = 0.0;
};

WinsorizedMoments exp_moments(const WinsorSpec& s) {
    const double p = s.p, q = s.q;
    const double lp = std::log1p(-p);
    const double qterm1 = q > 0.0 ? q * (1.0 - std::log(q)) : 0.0;
    WinsorizedMoments m;
    m.m1T = ((1.0 - p) * (1.0 - lp) - qterm1) / (1.0 - p - q);
    m.m1W = 1.0 - p - q - lp;
    m.m2W = lp * lp + 2.0 * (1.0 - p) * (1.0 - lp) - 2.0 * qterm1;
    return m;
}

WinsorizedMoments pareto_moments(double t, const WinsorSpec& s) {
    const double p = s.p, q = s.q;
    const double X = std::pow(1.0 - p, -1.0 / t);
    const double r1 = t / (t - 1.0), r2 = t / (t - 2.0);
    WinsorizedMoments m;
    double q_t = 0.0, q_w = 0.0, q_2 = 0.0;
    if (q > 0.0) {
        const double Y = std::pow(q, -1.0 / t);
        q_t = q * (r1 * Y - 1.0);
        q_w = q_t - q * (Y - 1.0);
        q_2 = q * (Y - 1.0) * (Y - 1.0) - r2 * std::pow(q, (t - 2.0) / t) +
              2.0 * r1 * std::pow(q, (t - 1.0) / t) - q;
    }
    m.m1T = ((1.0 - p) * (r1 * X - 1.0) - q_t) / (1.0 - p - q);
    m.m1W = p * (X - 1.0) + (1.0 - p) * (r1 * X - 1.0) - q_w;
    m.m2W = p * (X - 1.0) * (X - 1.0) + r2 * std::pow(1.0 - p, (t - 2.0) / t) -
            2.0 * r1 * std::pow(1.0 - p, (t - 1.0) / t) + (1.0 - p) + q_2;
    return m;
}

// \int_0^a e^{k sigma Phi^{-1}(w)} dw = e^{k^2 sigma^2 / 2} Phi(Phi^{-1}(a) - k sigma)
double lognormal_partial_moment(double sigma, double a, int k) {
    if (a <= 0.0) return 0.0;
    const double ks = k * sigma;
    if (a >= 1.0) return std::exp(0.5 * ks * ks);
    return std::exp(0.5 * ks * ks) * norm_cdf(norm_quantile(a) - ks);
}

WinsorizedMoments lognormal_moments(double sigma, const WinsorSpec& s) {
    const double p = s.p, q = s.q;
    const double i1 = lognormal_partial_moment(sigma, 1.0 - q, 1) -
                      lognormal_partial_moment(sigma, p, 1);
    const double i2 = lognormal_partial_moment(sigma, 1.0 - q, 2) -
                      lognormal_partial_moment(sigma, p, 2);
    double e_p = 0.0, e_q = 0.0;
    if (p > 0.0) e_p = std::exp(sigma * norm_quantile(p));
    if (q > 0.0) e_q = std::exp(sigma * norm_quantile(1.0 - q));
    WinsorizedMoments m;
    m.m1T = i1 / (1.0 - p - q);
    m.m1W = p * e_p + i1 + q * e_q;
    m.m2W = p * e_p * e_p + i2 + q * e_q * e_q;
    return m;
}

WinsorizedMoments loglogistic_moments(double sigma, const WinsorSpec& s) {
    const double p = s.p, q = s.q;
    if (q == 0.0 && !(2.0 * sigma < 1.0))
        throw std::domain_error(
            "loglogistic: winsorized second moment at q=0 needs sigma < 0.5");
    auto J = [&](double ks) {
        return integrate01_tail(
            [&](double w) { return std::pow(w / (1.0 - w), ks); },
            [&](double omw) { return std::pow((1.0 - omw) / omw, ks); },
            p, 1.0 - q, 1e-11);
    };
    const double j1 = J(sigma), j2 = J(2.0 * sigma);
    double e_p = 0.0, e_q = 0.0;
    if (p > 0.0) e_p = std::pow(p / (1.0 - p), sigma);
    if (q > 0.0) e_q = std::pow((1.0 - q) / q, sigma);
    WinsorizedMoments m;
    m.m1T = j1 / (1.0 - p - q);
    m.m1W = p * e_p + j1 + q * e_q;
    m.m2W = p * e_p * e_p + j2 + q * e_q * e_q;
    return m;
}

WinsorizedMoments unit_moments(const ModelPair& pair, const WinsorSpec& spec) {
    switch (pair.tag) {
        case PairTag::ExpGamma: return exp_moments(spec);
        case PairTag::ParetoGamma: return pareto_moments(pair.shape, spec);
        case PairTag::LognormalNormal: return lognormal_moments(pair.shape, spec);
        case PairTag::LogLogisticNormal:
            return loglogistic_moments(pair.shape, spec);
    }
    throw std::logic_error("unreachable");
}

// full-data (p = q = 0) variance constant, the m3 limit
double full_variance_constant(const ModelPair& pair) {
    return pair.unit_model().variance();
}

using CacheKey = std::tuple<int, double, double, double, int>;

}  // namespace

MConstants m_constants(const ModelPair& pair, const WinsorSpec& spec,
                       RobustMethod method) {
    static std::map<CacheKey, MConstants> cache;
    static std::mutex mtx;
    const CacheKey key{static_cast<int>(pair.tag), pair.shape, spec.p, spec.q,
                       static_cast<int>(method)};
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }

    const auto mom = unit_moments(pair, spec);
    const auto unit = pair.unit_model();
    MConstants out;
    out.method = method;
    if (method == RobustMethod::Winsorized) {
        out.m1 = mom.m1W;
        out.m2 = mom.m2W;
        if (spec.p == 0.0 && spec.q == 0.0) {
            out.m3 = mom.m2W - mom.m1W * mom.m1W;
        } else {
            const double A = endpoint_A(unit, spec.p);
            const double B = endpoint_B(unit, spec.q);
            const double h_p = spec.p > 0.0 ? unit.quantile(spec.p) : 0.0;
            const double h_1q = spec.q > 0.0 ? unit.quantile(1.0 - spec.q) : 0.0;
            out.m3 = assemble_winsorized_variance(mom.m2W - mom.m1W * mom.m1W,
                                                  mom.m1W, h_p, h_1q, A, B,
                                                  spec.p, spec.q);
        }
    } else {
        out.m1 = mom.m1T;
        out.m2 = pop_robust_moment(unit, spec, 2, RobustMethod::Trimmed);
        out.m3 = (spec.p == 0.0 && spec.q == 0.0)
                     ? full_variance_constant(pair)
                     : process_variance_trimmed(unit, spec).value;
    }

    std::lock_guard<std::mutex> lock(mtx);
    return cache.emplace(key, out).first->second;
}

StructuralParams structural_params(const ModelPair& pair, const WinsorSpec& spec,
                                   RobustMethod method) {
    const auto m = m_constants(pair, spec, method);
    StructuralParams out;
    out.method = method;
    out.pair = pair.tag;
    if (pair.scale_shape()) {
        const double alpha = pair.prior.a, beta = pair.prior.b;
        out.mu = alpha / beta * m.m1;
        out.a = alpha / (beta * beta) * m.m1 * m.m1;
        out.v = alpha * (alpha + 1.0) / (beta * beta) * m.m3;
    } else {
        const double mu0 = pair.prior.a, v2 = pair.prior.b;
        const double e1 = std::exp(mu0 + 0.5 * v2);
        const double e2 = std::exp(2.0 * mu0 + 2.0 * v2);
        out.mu = e1 * m.m1;
        out.a = (e2 - std::exp(2.0 * mu0 + v2)) * m.m1 * m.m1;
        out.v = e2 * m.m3;
    }
    if (!(out.a > 0.0))
        throw std::domain_error("structural params: a = 0, credibility k undefined");
    out.k = out.v / out.a;
    return out;
}

double credibility_factor(const StructuralParams& params, double n) {
    if (!(n >= 1.0)) throw std::invalid_argument("credibility factor: n >= 1 required");
    return n / (n + params.k);
}

double credibility_premium(const StructuralParams& params, double robust_mean,
                           double n) {
    const double z = credibility_factor(params, n);
    return z * robust_mean + (1.0 - z) * params.mu;
}

NonrobustLimit nonrobust_limit(const ModelPair& pair, double n) {
    double k0 = 0.0, collective = 0.0;
    switch (pair.tag) {
        case PairTag::ExpGamma: {
            const double alpha = pair.prior.a, beta = pair.prior.b;
            k0 = alpha + 1.0;
            collective = alpha / beta;
            break;
        }
        case PairTag::ParetoGamma: {
            const double alpha = pair.prior.a, beta = pair.prior.b, t = pair.shape;
            k0 = (alpha + 1.0) * t / (t - 2.0);
            collective = alpha / (beta * (t - 1.0));
            break;
        }
        case PairTag::LognormalNormal: {
            const double mu0 = pair.prior.a, v2 = pair.prior.b, s2 = pair.shape * pair.shape;
            k0 = std::exp(v2) * std::expm1(s2) / std::expm1(v2);
            collective = std::exp(mu0 + 0.5 * v2 + 0.5 * s2);
            break;
        }
        case PairTag::LogLogisticNormal: {
            const double mu0 = pair.prior.a, v2 = pair.prior.b, s = pair.shape;
            if (!(s < 0.5))
                throw std::domain_error(
                    "loglogistic-normal limit needs sigma < 0.5 for the variance");
            const double m1 = M_PI * s / std::sin(M_PI * s);
            const double m2 = 2.0 * M_PI * s / std::sin(2.0 * M_PI * s);
            k0 = std::exp(v2) * (m2 - m1 * m1) / (std::expm1(v2) * m1 * m1);
            collective = std::exp(mu0 + 0.5 * v2) * m1;
            break;
        }
    }
    NonrobustLimit lim;
    lim.collective = collective;
    lim.Z = n / (n + k0);
    return lim;
}

}  // namespace robcred
