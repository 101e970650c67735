#include "robcred/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "robcred/nonparametric.hpp"
#include "robcred/parallel.hpp"

namespace robcred {

ConditionalModel ThetaMapped::at(double theta) const {
    switch (family) {
        case Family::Exponential:
            return ConditionalModel::exponential(coef * theta);
        case Family::Pareto:
            return ConditionalModel::pareto(shape, coef * theta);
        case Family::Lognormal:
            return ConditionalModel::lognormal(coef * theta, shape);
        case Family::LogLogistic:
            return ConditionalModel::loglogistic(coef * theta, shape);
        case Family::Normal:
            break;
    }
    throw std::invalid_argument("study: unsupported conditional family");
}

std::vector<double> contaminated_sample(const ContaminationConfig& cfg,
                                        double theta, std::size_t count, Rng& rng) {
    const auto central = cfg.central.at(theta);
    const auto contaminant = cfg.contaminant.at(theta);
    std::vector<double> out(count);
    for (auto& x : out) {
        const double route = rng.uniform();
        const double u = rng.uniform();
        x = (route < cfg.epsilon ? contaminant : central).quantile(u);
    }
    return out;
}

ModelPair central_truth_pair(const PriorModel& prior, const ThetaMapped& central) {
    if (prior.kind == PriorModel::Kind::Gamma) {
        // scale = coef * theta, theta ~ Gamma(alpha, beta)  =>  scale ~ Gamma(alpha, beta/coef)
        if (central.family == Family::Exponential)
            return ModelPair::exp_gamma(prior.a, prior.b / central.coef);
        if (central.family == Family::Pareto)
            return ModelPair::pareto_gamma(central.shape, prior.a,
                                           prior.b / central.coef);
        throw std::invalid_argument(
            "study: gamma prior requires an exponential or pareto central model");
    }
    // location = coef * theta, theta ~ N(mu, v^2)  =>  location ~ N(coef mu, coef^2 v^2)
    if (central.family == Family::Lognormal)
        return ModelPair::lognormal_normal(central.shape, central.coef * prior.a,
                                           central.coef * central.coef * prior.b);
    if (central.family == Family::LogLogistic)
        return ModelPair::loglogistic_normal(central.shape, central.coef * prior.a,
                                             central.coef * central.coef * prior.b);
    throw std::invalid_argument(
        "study: normal prior requires a lognormal or log-logistic central model");
}

namespace {

struct CellSums {
    double mu = 0.0, v = 0.0, a = 0.0, k = 0.0;
};

struct RepResult {
    // per cell: the four ratios for this repetition; k valid iff !clamped
    std::vector<CellSums> cells;
    std::vector<bool> clamped;
};

}  // namespace

RatioReport run_study(const StudyConfig& cfg) {
    if (cfg.n < 1 || cfg.N < 2 || cfg.reps < 1 || cfg.q_grid.empty() ||
        cfg.epsilon_grid.empty())
        throw std::invalid_argument("study: invalid configuration");
    for (double q : cfg.q_grid) (void)WinsorSpec(cfg.p, q);

    RatioReport report;
    report.config = cfg;
    const auto truth_pair = central_truth_pair(cfg.prior, cfg.contamination.central);
    report.truth = structural_params(truth_pair, WinsorSpec(0.0, 0.0),
                                     RobustMethod::Winsorized);

    const std::size_t n_eps = cfg.epsilon_grid.size();
    const std::size_t n_cells_per_eps = cfg.q_grid.size() * 2;
    const std::size_t n_cells = n_eps * n_cells_per_eps;

    // tasks are (rep, epsilon) pairs; each writes its own slot
    std::vector<RepResult> results(static_cast<std::size_t>(cfg.reps) * n_eps);
    parallel_for(results.size(), [&](std::size_t task) {
        const std::size_t rep = task / n_eps;
        const std::size_t e = task % n_eps;

        Rng theta_rng(mix_seed(cfg.seed, 0x74686574ULL, rep));
        std::vector<double> thetas(static_cast<std::size_t>(cfg.n));
        for (auto& th : thetas) th = sample_prior(cfg.prior, theta_rng);

        ContaminationConfig mix = cfg.contamination;
        mix.epsilon = cfg.epsilon_grid[e];
        std::vector<GroupSample> groups(thetas.size());
        for (std::size_t i = 0; i < thetas.size(); ++i) {
            // stream keyed by (rep, risk) only: identical across epsilon cells
            Rng loss_rng(mix_seed(cfg.seed, 0x6c6f7373ULL, rep, i));
            groups[i].losses = contaminated_sample(
                mix, thetas[i], static_cast<std::size_t>(cfg.N), loss_rng);
        }

        RepResult rr;
        rr.cells.resize(n_cells_per_eps);
        rr.clamped.resize(n_cells_per_eps, false);
        std::size_t c = 0;
        for (double q : cfg.q_grid) {
            const WinsorSpec spec(cfg.p, q);
            for (RobustMethod method :
                 {RobustMethod::Trimmed, RobustMethod::Winsorized}) {
                const auto est = portfolio_structurals(groups, spec, method);
                auto& cell = rr.cells[c];
                cell.mu = est.mu / report.truth.mu;
                cell.v = est.v / report.truth.v;
                cell.a = est.a_raw / report.truth.a;
                if (est.a_clamped) {
                    rr.clamped[c] = true;
                } else {
                    cell.k = (est.v / est.a) / report.truth.k;
                }
                ++c;
            }
        }
        results[task] = std::move(rr);
    });

    // fixed-order reduction over repetitions
    report.cells.resize(n_cells);
    for (std::size_t e = 0; e < n_eps; ++e) {
        for (std::size_t c = 0; c < n_cells_per_eps; ++c) {
            RatioCell& cell = report.cells[e * n_cells_per_eps + c];
            cell.epsilon = cfg.epsilon_grid[e];
            cell.q = cfg.q_grid[c / 2];
            cell.method = (c % 2 == 0) ? RobustMethod::Trimmed
                                       : RobustMethod::Winsorized;

            std::vector<double> mu, v, a, k;
            for (int rep = 0; rep < cfg.reps; ++rep) {
                const auto& rr = results[static_cast<std::size_t>(rep) * n_eps + e];
                mu.push_back(rr.cells[c].mu);
                v.push_back(rr.cells[c].v);
                a.push_back(rr.cells[c].a);
                if (rr.clamped[c])
                    ++cell.clamped_reps;
                else
                    k.push_back(rr.cells[c].k);
            }
            auto mean_se = [](const std::vector<double>& xs, double& m, double& se) {
                if (xs.empty()) {
                    m = se = 0.0;
                    return;
                }
                m = 0.0;
                for (double x : xs) m += x;
                m /= static_cast<double>(xs.size());
                if (xs.size() < 2) {
                    se = 0.0;
                    return;
                }
                double s2 = 0.0;
                for (double x : xs) s2 += (x - m) * (x - m);
                s2 /= static_cast<double>(xs.size() - 1);
                se = std::sqrt(s2 / static_cast<double>(xs.size()));
            };
            mean_se(mu, cell.mu_ratio, cell.mu_se);
            mean_se(v, cell.v_ratio, cell.v_se);
            mean_se(a, cell.a_ratio, cell.a_se);
            mean_se(k, cell.k_ratio, cell.k_se);
        }
    }
    return report;
}

namespace {

std::string fmt_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

const char* param_names[] = {"mu", "v", "a", "k"};

}  // namespace

std::string emit_table_csv(const RatioReport& report) {
    std::ostringstream out;
    out << "epsilon,q,method,parameter,ratio,se,clamped_reps\n";
    for (const auto& cell : report.cells) {
        const double ratios[] = {cell.mu_ratio, cell.v_ratio, cell.a_ratio,
                                 cell.k_ratio};
        const double ses[] = {cell.mu_se, cell.v_se, cell.a_se, cell.k_se};
        for (int i = 0; i < 4; ++i) {
            out << fmt_full(cell.epsilon) << ',' << fmt_full(cell.q) << ','
                << method_name(cell.method) << ',' << param_names[i] << ','
                << fmt_full(ratios[i]) << ',' << fmt_full(ses[i]) << ','
                << cell.clamped_reps << '\n';
        }
    }
    return out.str();
}

std::string emit_table_aligned(const RatioReport& report) {
    const auto& qs = report.config.q_grid;
    std::ostringstream out;
    const int w = 10;

    auto pad = [&](const std::string& s) {
        std::string r = s;
        if (r.size() < static_cast<std::size_t>(w)) r.insert(0, w - r.size(), ' ');
        return r;
    };

    out << "ratios of empirical structural parameters to the non-robust"
           " central-model truth\n";
    out << std::string(14, ' ');
    for (const char* m : {"T", "W"})
        for (double q : qs) out << pad(std::string(m) + " q=" + fmt6(q));
    out << '\n';

    for (const auto* cellref = report.cells.data();
         cellref < report.cells.data() + report.cells.size();
         cellref += 2 * qs.size()) {
        const double eps = cellref->epsilon;
        out << "eps=" << fmt6(eps) << '\n';
        for (int par = 0; par < 4; ++par) {
            out << "  " << param_names[par]
                << std::string(12 - std::string(param_names[par]).size(), ' ');
            for (std::size_t m = 0; m < 2; ++m) {
                for (std::size_t qi = 0; qi < qs.size(); ++qi) {
                    const auto& cell = cellref[qi * 2 + m];
                    const double ratios[] = {cell.mu_ratio, cell.v_ratio,
                                             cell.a_ratio, cell.k_ratio};
                    std::string s = fmt6(ratios[par]);
                    if (par == 3 && cell.clamped_reps > 0)
                        s += "*";
                    out << pad(s);
                }
            }
            out << '\n';
        }
    }
    out << "(* k averaged over repetitions with a > 0 only)\n";
    return out.str();
}

StudyConfig study_preset_exp_pareto() {
    StudyConfig cfg;
    cfg.prior = PriorModel::gamma(4.0, 2.0);
    cfg.contamination.central = {Family::Exponential, 0.5, 0.0};
    cfg.contamination.contaminant = {Family::Pareto, 1.0, 3.0};
    return cfg;
}

StudyConfig study_preset_lognormal_loglogistic() {
    StudyConfig cfg;
    cfg.prior = PriorModel::normal(4.0, 1.0);
    cfg.contamination.central = {Family::Lognormal, 1.0, 0.45};
    cfg.contamination.contaminant = {Family::LogLogistic, 1.0, 0.45};
    return cfg;
}

void apply_scale(StudyConfig& cfg, const std::string& scale) {
    if (scale == "desk") {
        cfg.n = 200;
        cfg.N = 100;
        cfg.reps = 10;
    } else if (scale == "paper") {
        cfg.n = 1000;
        cfg.N = 100;
        cfg.reps = 10;
    } else {
        throw std::invalid_argument("unknown scale '" + scale + "' (desk|paper)");
    }
}

}  // namespace robcred
