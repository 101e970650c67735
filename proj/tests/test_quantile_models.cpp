#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "robcred/quantile_models.hpp"

using namespace robcred;

namespace {

const std::vector<ConditionalModel> all_models{
    ConditionalModel::exponential(2.0),
    ConditionalModel::pareto(3.0, 1.5),
    ConditionalModel::lognormal(0.4, 0.45),
    ConditionalModel::loglogistic(0.2, 0.45),
    ConditionalModel::normal(1.0, 2.0),
};

}  // namespace

TEST_CASE("quantile and cdf are inverse") {
    for (const auto& m : all_models) {
        for (double w : {0.001, 0.05, 0.3, 0.5, 0.77, 0.95, 0.999}) {
            const double x = m.quantile(w);
            CHECK(m.cdf(x) == doctest::Approx(w).epsilon(1e-10));
        }
    }
}

TEST_CASE("quantile derivative matches finite differences") {
    for (const auto& m : all_models) {
        for (double w : {0.05, 0.3, 0.5, 0.77, 0.95}) {
            const double h = 1e-6;
            const double fd = (m.quantile(w + h) - m.quantile(w - h)) / (2.0 * h);
            CHECK(m.quantile_deriv(w) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("moments of the unit-parameter families") {
    CHECK(ConditionalModel::exponential(2.0).mean() == doctest::Approx(2.0));
    CHECK(ConditionalModel::exponential(2.0).variance() == doctest::Approx(4.0));
    // Pareto(t, theta): mean theta/(t-1), var t theta^2/((t-1)^2 (t-2))
    CHECK(ConditionalModel::pareto(3.0, 1.0).mean() == doctest::Approx(0.5));
    CHECK(ConditionalModel::pareto(3.0, 1.0).variance() == doctest::Approx(0.75));
    const double s2 = 0.45 * 0.45;
    CHECK(ConditionalModel::lognormal(0.0, 0.45).mean() ==
          doctest::Approx(std::exp(s2 / 2)));
    CHECK(ConditionalModel::lognormal(0.0, 0.45).variance() ==
          doctest::Approx(std::exp(s2) * (std::exp(s2) - 1.0)));
    // log-logistic: E X^k = pi k sigma / sin(pi k sigma) at location 0
    const double m1 = M_PI * 0.45 / std::sin(M_PI * 0.45);
    const double m2 = M_PI * 0.9 / std::sin(M_PI * 0.9);
    CHECK(ConditionalModel::loglogistic(0.0, 0.45).mean() == doctest::Approx(m1));
    CHECK(ConditionalModel::loglogistic(0.0, 0.45).variance() ==
          doctest::Approx(m2 - m1 * m1));
    CHECK(ConditionalModel::normal(1.0, 2.0).mean() == doctest::Approx(1.0));
    CHECK(ConditionalModel::normal(1.0, 2.0).variance() == doctest::Approx(4.0));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(ConditionalModel::exponential(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ConditionalModel::pareto(2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ConditionalModel::lognormal(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ConditionalModel::loglogistic(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(WinsorSpec(0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(WinsorSpec(-0.1, 0.0), std::invalid_argument);
}

TEST_CASE("model string parsing") {
    const auto e = parse_model("exp:theta=2");
    CHECK(e.family == Family::Exponential);
    CHECK(e.a == doctest::Approx(2.0));
    const auto p = parse_model("pareto:t=3,theta=1");
    CHECK(p.family == Family::Pareto);
    CHECK(p.b == doctest::Approx(3.0));
    CHECK(p.a == doctest::Approx(1.0));
    const auto l = parse_model("lognormal:theta=4,sigma=0.45");
    CHECK(l.family == Family::Lognormal);
    const auto ll = parse_model("loglogistic:theta=4,sigma=0.45");
    CHECK(ll.family == Family::LogLogistic);
    const auto n = parse_model("normal:mu=0,sd=1");
    CHECK(n.family == Family::Normal);
    CHECK_THROWS_AS(parse_model("weibull:k=2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_model("exp:rate=2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_model("exp"), std::invalid_argument);
}

TEST_CASE("sampling matches the distribution (KS)") {
    const auto m = ConditionalModel::exponential(1.5);
    Rng rng(mix_seed(7, 1));
    auto xs = sample(m, rng, 4000);
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double F = m.cdf(xs[i]);
        ks = std::max(ks, std::fabs(F - static_cast<double>(i + 1) / n));
        ks = std::max(ks, std::fabs(F - static_cast<double>(i) / n));
    }
    // 1% critical value 1.63/sqrt(n) ~ 0.0258
    CHECK(ks < 0.0258);
}

TEST_CASE("sampling is deterministic in the seed") {
    const auto m = ConditionalModel::pareto(3.0, 1.0);
    Rng a(mix_seed(11, 2)), b(mix_seed(11, 2)), c(mix_seed(11, 3));
    const auto xa = sample(m, a, 50);
    const auto xb = sample(m, b, 50);
    const auto xc = sample(m, c, 50);
    CHECK(xa == xb);
    CHECK(xa != xc);
}

TEST_CASE("prior sampling moments") {
    // Gamma(4, 2): mean 2, variance 1; Normal(4, 1): mean 4, variance 1
    Rng rng(mix_seed(13, 5));
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    const auto g = PriorModel::gamma(4.0, 2.0);
    for (int i = 0; i < n; ++i) {
        const double x = sample_prior(g, rng);
        s += x;
        s2 += x * x;
    }
    double mean = s / n, var = s2 / n - mean * mean;
    CHECK(mean == doctest::Approx(2.0).epsilon(0.02));
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));

    // non-integer shape path
    const auto g2 = PriorModel::gamma(2.5, 1.0);
    s = s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sample_prior(g2, rng);
        s += x;
        s2 += x * x;
    }
    mean = s / n;
    var = s2 / n - mean * mean;
    CHECK(mean == doctest::Approx(2.5).epsilon(0.02));
    CHECK(var == doctest::Approx(2.5).epsilon(0.05));

    const auto nm = PriorModel::normal(4.0, 1.0);
    s = s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = sample_prior(nm, rng);
        s += x;
        s2 += x * x;
    }
    mean = s / n;
    var = s2 / n - mean * mean;
    CHECK(mean == doctest::Approx(4.0).epsilon(0.01));
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}
