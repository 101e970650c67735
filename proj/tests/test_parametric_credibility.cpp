#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "robcred/parametric_credibility.hpp"
#include "robcred/risk_measures.hpp"

using namespace robcred;

TEST_CASE("exponential m-constants, closed values") {
    const auto pair = ModelPair::exp_gamma(4.0, 2.0);
    // no trimming: plain moments of Exp(1)
    const auto none = m_constants(pair, WinsorSpec(0.0, 0.0), RobustMethod::Winsorized);
    CHECK(none.m1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(none.m2 == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(none.m3 == doctest::Approx(1.0).epsilon(1e-9));

    // m1_W = 1 - p - q - log(1-p); m3_W(0, q) = 1 - q
    for (double q : {0.01, 0.05, 0.1, 0.2}) {
        const auto m = m_constants(pair, WinsorSpec(0.0, q), RobustMethod::Winsorized);
        CHECK(m.m1 == doctest::Approx(1.0 - q).epsilon(1e-10));
        CHECK(m.m3 == doctest::Approx(1.0 - q).epsilon(1e-8));
    }
    const auto mp = m_constants(pair, WinsorSpec(0.05, 0.1), RobustMethod::Winsorized);
    CHECK(mp.m1 == doctest::Approx(1.0 - 0.05 - 0.1 - std::log(0.95)).epsilon(1e-10));
    CHECK(mp.m3 == doctest::Approx(0.9026315789473684).epsilon(1e-8));

    // m1_T = [(1-p)(1-log(1-p)) - q(1-log q)]/(1-p-q)
    const auto mt = m_constants(pair, WinsorSpec(0.05, 0.1), RobustMethod::Trimmed);
    const double m1t =
        (0.95 * (1.0 - std::log(0.95)) - 0.1 * (1.0 - std::log(0.1))) / 0.85;
    CHECK(mt.m1 == doctest::Approx(m1t).epsilon(1e-10));
}

TEST_CASE("pareto and lognormal m1 against direct quadrature") {
    const auto exp1 = ConditionalModel::exponential(1.0);
    (void)exp1;
    for (const auto& pair :
         {ModelPair::pareto_gamma(3.0, 4.0, 2.0),
          ModelPair::lognormal_normal(0.45, 0.0, 1.0),
          ModelPair::loglogistic_normal(0.45, 0.0, 1.0)}) {
        const auto unit = pair.unit_model();
        for (const auto& spec : {WinsorSpec(0.0, 0.05), WinsorSpec(0.05, 0.1)}) {
            for (RobustMethod method :
                 {RobustMethod::Trimmed, RobustMethod::Winsorized}) {
                const auto m = m_constants(pair, spec, method);
                CHECK(m.m1 ==
                      doctest::Approx(pop_robust_mean(unit, spec, method))
                          .epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("structural parameters of the exponential-gamma pair") {
    const auto pair = ModelPair::exp_gamma(4.0, 2.0);
    const auto sp = structural_params(pair, WinsorSpec(0.0, 0.0),
                                      RobustMethod::Winsorized);
    CHECK(sp.mu == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(sp.v == doctest::Approx(5.0).epsilon(1e-8));
    CHECK(sp.a == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sp.k == doctest::Approx(5.0).epsilon(1e-8));
    CHECK(credibility_factor(sp, 100.0) == doctest::Approx(100.0 / 105.0));
    CHECK(credibility_premium(sp, 2.5, 100.0) ==
          doctest::Approx((100.0 / 105.0) * 2.5 + (5.0 / 105.0) * 2.0));
}

TEST_CASE("nonrobust limits") {
    const auto eg = nonrobust_limit(ModelPair::exp_gamma(4.0, 2.0), 100.0);
    CHECK(eg.Z == doctest::Approx(100.0 / 105.0).epsilon(1e-12));
    CHECK(eg.collective == doctest::Approx(2.0).epsilon(1e-12));

    // pareto-gamma: k0 = (alpha+1) t/(t-2), mu = alpha/(beta (t-1))
    const auto pg = nonrobust_limit(ModelPair::pareto_gamma(3.0, 4.0, 2.0), 50.0);
    CHECK(pg.Z == doctest::Approx(50.0 / (50.0 + 15.0)).epsilon(1e-12));
    CHECK(pg.collective == doctest::Approx(1.0).epsilon(1e-12));

    // lognormal-normal: k0 = e^{v^2}(e^{s^2}-1)/(e^{v^2}-1)
    const double s2 = 0.45 * 0.45;
    const auto ln = nonrobust_limit(ModelPair::lognormal_normal(0.45, 4.0, 1.0), 10.0);
    const double k0 = std::exp(1.0) * (std::exp(s2) - 1.0) / (std::exp(1.0) - 1.0);
    CHECK(ln.Z == doctest::Approx(10.0 / (10.0 + k0)).epsilon(1e-10));
    CHECK(ln.collective == doctest::Approx(std::exp(4.0 + 0.5 + s2 / 2)).epsilon(1e-10));
}

TEST_CASE("structural parameters agree with the m-constant limits") {
    // k at (p,q) -> 0 approaches the classical credibility coefficient. The
    // approach rate is family-specific: the winsorized second-moment
    // deviation scales like q^{1-2/t} for Pareto(t) (q^{1/3} at t = 3) and
    // like q^{1-2*sigma} for the log-logistic (q^{0.1} at sigma = 0.45), so
    // those pairs are still measurably away from the limit at q = 1e-8 and
    // get tolerances matched to the rate.
    struct Row {
        ModelPair pair;
        double tol_z;
        double tol_mu;
    };
    const Row rows[] = {
        {ModelPair::exp_gamma(4.0, 2.0), 1e-4, 1e-4},
        {ModelPair::pareto_gamma(3.0, 4.0, 2.0), 5e-3, 1e-4},
        {ModelPair::lognormal_normal(0.45, 4.0, 1.0), 1e-4, 1e-4},
        {ModelPair::loglogistic_normal(0.45, 4.0, 1.0), 2e-2, 1e-4},
    };
    for (const auto& row : rows) {
        const auto sp = structural_params(row.pair, WinsorSpec(1e-8, 1e-8),
                                          RobustMethod::Winsorized);
        const auto lim = nonrobust_limit(row.pair, 100.0);
        const double Z = credibility_factor(sp, 100.0);
        CHECK(Z == doctest::Approx(lim.Z).epsilon(row.tol_z));
        CHECK(sp.mu == doctest::Approx(lim.collective).epsilon(row.tol_mu));
    }
}

TEST_CASE("beta-invariance of k for scale-shape pairs") {
    for (const auto& spec : {WinsorSpec(0.0, 0.05), WinsorSpec(0.05, 0.1),
                             WinsorSpec(0.0, 0.0)}) {
        for (RobustMethod method :
             {RobustMethod::Trimmed, RobustMethod::Winsorized}) {
            const auto a = structural_params(ModelPair::exp_gamma(4.0, 2.0), spec, method);
            const auto b = structural_params(ModelPair::exp_gamma(4.0, 7.0), spec, method);
            CHECK(a.k == doctest::Approx(b.k).epsilon(1e-12));
            const auto c =
                structural_params(ModelPair::pareto_gamma(3.0, 4.0, 2.0), spec, method);
            const auto d =
                structural_params(ModelPair::pareto_gamma(3.0, 4.0, 5.0), spec, method);
            CHECK(c.k == doctest::Approx(d.k).epsilon(1e-12));
        }
    }
}

TEST_CASE("location-invariance of k for log-location pairs") {
    for (const auto& spec : {WinsorSpec(0.0, 0.05), WinsorSpec(0.05, 0.1)}) {
        for (RobustMethod method :
             {RobustMethod::Trimmed, RobustMethod::Winsorized}) {
            const auto a = structural_params(
                ModelPair::lognormal_normal(0.45, 4.0, 1.0), spec, method);
            const auto b = structural_params(
                ModelPair::lognormal_normal(0.45, 1.5, 1.0), spec, method);
            CHECK(a.k == doctest::Approx(b.k).epsilon(1e-12));
        }
    }
}

TEST_CASE("trimmed and winsorized coincide at p = q = 0") {
    for (const auto& pair :
         {ModelPair::exp_gamma(4.0, 2.0), ModelPair::pareto_gamma(3.0, 4.0, 2.0)}) {
        const auto t = structural_params(pair, WinsorSpec(0.0, 0.0), RobustMethod::Trimmed);
        const auto w =
            structural_params(pair, WinsorSpec(0.0, 0.0), RobustMethod::Winsorized);
        CHECK(t.mu == doctest::Approx(w.mu).epsilon(1e-8));
        CHECK(t.v == doctest::Approx(w.v).epsilon(1e-7));
        CHECK(t.a == doctest::Approx(w.a).epsilon(1e-8));
    }
}
