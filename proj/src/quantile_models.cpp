#include "robcred/quantile_models.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "robcred/normal.hpp"

namespace robcred {

const char* family_name(Family f) {
    switch (f) {
        case Family::Exponential: return "exponential";
        case Family::Pareto: return "pareto";
        case Family::Lognormal: return "lognormal";
        case Family::LogLogistic: return "loglogistic";
        case Family::Normal: return "normal";
    }
    return "?";
}

ConditionalModel ConditionalModel::exponential(double theta) {
    if (!(theta > 0.0)) throw std::invalid_argument("exponential: theta > 0 required");
    return {Family::Exponential, theta, 0.0};
}

ConditionalModel ConditionalModel::pareto(double t, double theta) {
    if (!(t > 2.0)) throw std::invalid_argument("pareto: shape t > 2 required");
    if (!(theta > 0.0)) throw std::invalid_argument("pareto: theta > 0 required");
    return {Family::Pareto, theta, t};
}

ConditionalModel ConditionalModel::lognormal(double theta, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("lognormal: sigma > 0 required");
    return {Family::Lognormal, theta, sigma};
}

ConditionalModel ConditionalModel::loglogistic(double theta, double sigma) {
    if (!(sigma > 0.0 && sigma < 1.0))
        throw std::invalid_argument("loglogistic: 0 < sigma < 1 required");
    return {Family::LogLogistic, theta, sigma};
}

ConditionalModel ConditionalModel::normal(double mu, double sd) {
    if (!(sd > 0.0)) throw std::invalid_argument("normal: sd > 0 required");
    return {Family::Normal, mu, sd};
}

double ConditionalModel::cdf(double x) const {
    switch (family) {
        case Family::Exponential:
            return x <= 0.0 ? 0.0 : -std::expm1(-x / a);
        case Family::Pareto:
            return x <= 0.0 ? 0.0 : 1.0 - std::pow(a / (x + a), b);
        case Family::Lognormal:
            return x <= 0.0 ? 0.0 : norm_cdf((std::log(x) - a) / b);
        case Family::LogLogistic: {
            if (x <= 0.0) return 0.0;
            const double z = (std::log(x) - a) / b;
            return 1.0 / (1.0 + std::exp(-z));
        }
        case Family::Normal:
            return norm_cdf((x - a) / b);
    }
    return 0.0;
}

double ConditionalModel::quantile(double w) const {
    if (!(w > 0.0 && w < 1.0))
        throw std::domain_error("quantile: w must lie in (0,1)");
    switch (family) {
        case Family::Exponential:
            return -a * std::log1p(-w);
        case Family::Pareto:
            return a * (std::pow(1.0 - w, -1.0 / b) - 1.0);
        case Family::Lognormal:
            return std::exp(a + b * norm_quantile(w));
        case Family::LogLogistic:
            return std::exp(a) * std::pow(w / (1.0 - w), b);
        case Family::Normal:
            return a + b * norm_quantile(w);
    }
    return 0.0;
}

double ConditionalModel::quantile_deriv(double w) const {
    if (!(w > 0.0 && w < 1.0))
        throw std::domain_error("quantile_deriv: w must lie in (0,1)");
    switch (family) {
        case Family::Exponential:
            return a / (1.0 - w);
        case Family::Pareto:
            return a * std::pow(1.0 - w, -(b + 1.0) / b) / b;
        case Family::Lognormal: {
            const double z = norm_quantile(w);
            return b * std::exp(a + b * z) / norm_pdf(z);
        }
        case Family::LogLogistic:
            return std::exp(a) * b * std::pow(w, b - 1.0) /
                   std::pow(1.0 - w, b + 1.0);
        case Family::Normal:
            return b / norm_pdf(norm_quantile(w));
    }
    return 0.0;
}

double ConditionalModel::quantile_tail(double omw) const {
    if (!(omw > 0.0 && omw < 1.0))
        throw std::domain_error("quantile_tail: 1-w must lie in (0,1)");
    switch (family) {
        case Family::Exponential:
            return -a * std::log(omw);
        case Family::Pareto:
            return a * (std::pow(omw, -1.0 / b) - 1.0);
        case Family::Lognormal:
            // Phi^{-1}(1-omw) = -Phi^{-1}(omw); the lower branch of the
            // inverse CDF keeps full relative accuracy for tiny omw
            return std::exp(a - b * norm_quantile(omw));
        case Family::LogLogistic:
            return std::exp(a) * std::pow((1.0 - omw) / omw, b);
        case Family::Normal:
            return a - b * norm_quantile(omw);
    }
    return 0.0;
}

double ConditionalModel::quantile_deriv_tail(double omw) const {
    if (!(omw > 0.0 && omw < 1.0))
        throw std::domain_error("quantile_deriv_tail: 1-w must lie in (0,1)");
    switch (family) {
        case Family::Exponential:
            return a / omw;
        case Family::Pareto:
            return a * std::pow(omw, -(b + 1.0) / b) / b;
        case Family::Lognormal: {
            const double z = -norm_quantile(omw);
            return b * std::exp(a + b * z) / norm_pdf(z);
        }
        case Family::LogLogistic:
            return std::exp(a) * b * std::pow(1.0 - omw, b - 1.0) /
                   std::pow(omw, b + 1.0);
        case Family::Normal:
            return b / norm_pdf(norm_quantile(omw));
    }
    return 0.0;
}

double ConditionalModel::mean() const {
    switch (family) {
        case Family::Exponential: return a;
        case Family::Pareto: return a / (b - 1.0);
        case Family::Lognormal: return std::exp(a + 0.5 * b * b);
        case Family::LogLogistic: {
            // E X = e^theta * B(1+sigma, 1-sigma) = e^theta * pi*sigma/sin(pi*sigma)
            return std::exp(a) * M_PI * b / std::sin(M_PI * b);
        }
        case Family::Normal: return a;
    }
    return 0.0;
}

double ConditionalModel::variance() const {
    switch (family) {
        case Family::Exponential: return a * a;
        case Family::Pareto:
            return a * a * b / ((b - 1.0) * (b - 1.0) * (b - 2.0));
        case Family::Lognormal: {
            const double s2 = b * b;
            return std::exp(2.0 * a + s2) * std::expm1(s2);
        }
        case Family::LogLogistic: {
            if (!(b < 0.5))
                throw std::domain_error("loglogistic: variance requires sigma < 0.5");
            const double m1 = M_PI * b / std::sin(M_PI * b);
            const double m2 = 2.0 * M_PI * b / std::sin(2.0 * M_PI * b);
            return std::exp(2.0 * a) * (m2 - m1 * m1);
        }
        case Family::Normal: return b * b;
    }
    return 0.0;
}

namespace {

std::map<std::string, double> parse_kv(const std::string& s) {
    std::map<std::string, double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("model spec: expected key=value, got '" + item + "'");
        std::string key = item.substr(0, eq);
        try {
            out[key] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("model spec: bad number in '" + item + "'");
        }
    }
    return out;
}

double need(const std::map<std::string, double>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end())
        throw std::invalid_argument("model spec: missing parameter '" + key + "'");
    return it->second;
}

}  // namespace

ConditionalModel parse_model(const std::string& spec) {
    auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("model spec: expected 'family:params', got '" + spec + "'");
    const std::string fam = spec.substr(0, colon);
    const auto kv = parse_kv(spec.substr(colon + 1));
    if (fam == "exp") return ConditionalModel::exponential(need(kv, "theta"));
    if (fam == "pareto") return ConditionalModel::pareto(need(kv, "t"), need(kv, "theta"));
    if (fam == "lognormal")
        return ConditionalModel::lognormal(need(kv, "theta"), need(kv, "sigma"));
    if (fam == "loglogistic")
        return ConditionalModel::loglogistic(need(kv, "theta"), need(kv, "sigma"));
    if (fam == "normal") return ConditionalModel::normal(need(kv, "mu"), need(kv, "sd"));
    throw std::invalid_argument("model spec: unknown family '" + fam + "'");
}

PriorModel PriorModel::gamma(double alpha, double beta) {
    if (!(alpha > 0.0 && beta > 0.0))
        throw std::invalid_argument("gamma prior: alpha, beta > 0 required");
    return {Kind::Gamma, alpha, beta};
}

PriorModel PriorModel::normal(double mu, double v2) {
    if (!(v2 > 0.0)) throw std::invalid_argument("normal prior: v^2 > 0 required");
    return {Kind::Normal, mu, v2};
}

std::vector<double> sample(const ConditionalModel& m, Rng& rng, std::size_t count) {
    std::vector<double> out(count);
    for (auto& x : out) x = m.quantile(rng.uniform());
    return out;
}

double sample_prior(const PriorModel& prior, Rng& rng) {
    if (prior.kind == PriorModel::Kind::Normal)
        return prior.a + std::sqrt(prior.b) * norm_quantile(rng.uniform());

    const double alpha = prior.a, beta = prior.b;
    const double rounded = std::round(alpha);
    if (std::fabs(alpha - rounded) < 1e-12 && rounded >= 1.0) {
        // integer shape: sum of inverse-transform exponentials
        double s = 0.0;
        for (int i = 0; i < static_cast<int>(rounded); ++i)
            s += -std::log1p(-rng.uniform());
        return s / beta;
    }
    // Marsaglia-Tsang; normal/uniform primitives are the deterministic ones above
    double boost_factor = 1.0;
    double al = alpha;
    if (al < 1.0) {
        boost_factor = std::pow(rng.uniform(), 1.0 / al);
        al += 1.0;
    }
    const double d = al - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = norm_quantile(rng.uniform());
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x ||
            std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
            return boost_factor * d * v / beta;
    }
}

}  // namespace robcred
