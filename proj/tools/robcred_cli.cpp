#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "robcred/asymptotics.hpp"
#include "robcred/config.hpp"
#include "robcred/csvio.hpp"
#include "robcred/nonparametric.hpp"
#include "robcred/parametric_credibility.hpp"
#include "robcred/risk_measures.hpp"
#include "robcred/simulation.hpp"

namespace {

using namespace robcred;

std::string fmt6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

std::string fmt_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

RobustMethod parse_method(const std::string& s) {
    if (s == "trimmed" || s == "T") return RobustMethod::Trimmed;
    if (s == "winsorized" || s == "W") return RobustMethod::Winsorized;
    throw std::invalid_argument("unknown method '" + s + "' (trimmed|winsorized)");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open output file '" + path + "'");
    out << text;
}

// ---- structural ----

struct StructuralArgs {
    std::string pair;
    double alpha = 4.0, beta = 2.0;   // gamma prior
    double mu0 = 4.0, v2 = 1.0;       // normal prior
    double t = 3.0, sigma = 0.45;     // conditional shape
    double p = 0.0, q = 0.0;
    std::string method = "winsorized";
    double n = 100.0;
};

int cmd_structural(const StructuralArgs& a) {
    ModelPair pair = [&] {
        if (a.pair == "exp-gamma") return ModelPair::exp_gamma(a.alpha, a.beta);
        if (a.pair == "pareto-gamma")
            return ModelPair::pareto_gamma(a.t, a.alpha, a.beta);
        if (a.pair == "lognormal-normal")
            return ModelPair::lognormal_normal(a.sigma, a.mu0, a.v2);
        if (a.pair == "loglogistic-normal")
            return ModelPair::loglogistic_normal(a.sigma, a.mu0, a.v2);
        throw std::invalid_argument(
            "unknown pair '" + a.pair +
            "' (exp-gamma|pareto-gamma|lognormal-normal|loglogistic-normal)");
    }();

    const WinsorSpec spec(a.p, a.q);
    const RobustMethod method = parse_method(a.method);
    const auto m = m_constants(pair, spec, method);
    const auto sp = structural_params(pair, spec, method);
    const double Z = credibility_factor(sp, a.n);

    std::cout << "pair        " << pair_name(pair.tag) << "\n"
              << "method      " << method_name(method) << "\n"
              << "p           " << fmt6(a.p) << "\n"
              << "q           " << fmt6(a.q) << "\n"
              << "m1          " << fmt6(m.m1) << "\n"
              << "m2          " << fmt6(m.m2) << "\n"
              << "m3          " << fmt6(m.m3) << "\n"
              << "mu          " << fmt6(sp.mu) << "\n"
              << "v           " << fmt6(sp.v) << "\n"
              << "a           " << fmt6(sp.a) << "\n"
              << "k           " << fmt6(sp.k) << "\n"
              << "n           " << fmt6(a.n) << "\n"
              << "Z           " << fmt6(Z) << "\n";
    return 0;
}

// ---- simulate ----

struct SimulateArgs {
    std::string config;
    std::string preset;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    std::string scale;
};

int cmd_simulate(const SimulateArgs& a) {
    StudyConfig cfg;
    if (!a.config.empty()) {
        cfg = study_config_from(parse_config_file(a.config));
    } else if (a.preset == "exp-pareto") {
        cfg = study_preset_exp_pareto();
    } else if (a.preset == "lognormal-loglogistic") {
        cfg = study_preset_lognormal_loglogistic();
    } else if (a.preset.empty()) {
        throw std::invalid_argument("simulate needs a config file or --preset");
    } else {
        throw std::invalid_argument("unknown preset '" + a.preset +
                                    "' (exp-pareto|lognormal-loglogistic)");
    }
    if (!a.scale.empty()) apply_scale(cfg, a.scale);
    if (a.seed_set) cfg.seed = a.seed;

    const auto report = run_study(cfg);
    const std::string csv = emit_table_csv(report);
    const std::string aligned = emit_table_aligned(report);
    if (a.out.empty()) {
        std::cout << aligned << "\n" << csv;
    } else {
        write_text(a.out + ".csv", csv);
        write_text(a.out + ".txt", aligned);
        std::cout << "wrote " << a.out << ".csv and " << a.out << ".txt\n";
    }
    return 0;
}

// ---- empirical ----

struct EmpiricalArgs {
    std::string csv;
    std::string group_col = "group";
    std::string loss_col = "loss";
    double p = 0.0;
    std::vector<double> qs{0.0};
    std::string method = "winsorized";
    std::string out;
};

std::string empirical_csv(const std::vector<GroupSample>& groups, double p,
                          const std::vector<double>& qs, RobustMethod method) {
    std::ostringstream out;
    out << "q,group,n,n_eff,group_mean,group_variance,Z,premium,"
           "portfolio_mean,portfolio_v,portfolio_a,a_clamped,total_premium\n";
    for (double q : qs) {
        const auto est = portfolio_structurals(groups, WinsorSpec(p, q), method);
        for (const auto& g : est.groups) {
            out << fmt_full(q) << ',' << g.id << ',' << g.n << ',' << g.n_eff
                << ',' << fmt_full(g.mu) << ',' << fmt_full(g.v) << ','
                << fmt_full(g.Z) << ',' << fmt_full(g.premium) << ','
                << fmt_full(est.mu) << ',' << fmt_full(est.v) << ','
                << fmt_full(est.a) << ',' << (est.a_clamped ? 1 : 0) << ','
                << fmt_full(est.total_premium) << '\n';
        }
    }
    return out.str();
}

std::string empirical_table(const std::vector<GroupSample>& groups, double p,
                            const std::vector<double>& qs, RobustMethod method) {
    std::vector<PortfolioEstimates> ests;
    for (double q : qs)
        ests.push_back(portfolio_structurals(groups, WinsorSpec(p, q), method));

    const int w = 12;
    auto pad = [&](const std::string& s) {
        std::string r = s;
        if (r.size() < static_cast<std::size_t>(w)) r.insert(0, w - r.size(), ' ');
        return r;
    };
    std::ostringstream out;
    out << "premium per claim by group, " << method_name(method)
        << " mean, p=" << fmt6(p) << "\n";
    out << pad("group") << pad("n");
    for (double q : qs) out << pad("q=" + fmt6(q));
    out << '\n';
    for (std::size_t i = 0; i < groups.size(); ++i) {
        out << pad(ests[0].groups[i].id)
            << pad(std::to_string(ests[0].groups[i].n));
        for (const auto& est : ests) out << pad(fmt6(est.groups[i].premium));
        out << '\n';
    }
    out << pad("total") << pad("");
    for (const auto& est : ests) out << pad(fmt6(est.total_premium));
    out << '\n';
    for (const char* row : {"mu", "v", "a", "Z-clamped"}) {
        out << pad(row) << pad("");
        for (const auto& est : ests) {
            if (std::string(row) == "mu") out << pad(fmt6(est.mu));
            else if (std::string(row) == "v") out << pad(fmt6(est.v));
            else if (std::string(row) == "a") out << pad(fmt6(est.a));
            else out << pad(est.a_clamped ? "yes" : "no");
        }
        out << '\n';
    }
    return out.str();
}

int cmd_empirical(const EmpiricalArgs& a) {
    const auto groups = read_claims_csv_file(a.csv, a.group_col, a.loss_col);
    if (groups.size() < 2)
        throw DataError("need at least 2 groups, found " +
                        std::to_string(groups.size()));
    const RobustMethod method = parse_method(a.method);
    for (double q : a.qs) (void)WinsorSpec(a.p, q);

    const std::string table = empirical_table(groups, a.p, a.qs, method);
    const std::string csv = empirical_csv(groups, a.p, a.qs, method);
    if (a.out.empty()) {
        std::cout << table << "\n" << csv;
    } else {
        write_text(a.out, csv);
        std::cout << table;
    }
    return 0;
}

// ---- coherence ----

int cmd_coherence(double p, double q, int trials, std::uint64_t seed) {
    const WinsorSpec spec(p, q);
    const auto report = check_coherence_axioms(spec, trials, seed);
    auto show = [](const AxiomCheck& c) {
        std::cout << c.name << "  " << (c.pass ? "pass" : "FAIL")
                  << "  worst violation " << fmt6(c.worst_violation) << '\n';
    };
    show(report.monotonicity);
    show(report.positive_homogeneity);
    show(report.translation_invariance);
    if (p > 0.0 && 1.0 - q < 0.5) {
        const auto sub = subadditivity_counterexample(spec);
        std::cout << "subadditivity counterexample: rho(X+Y)="
                  << fmt6(sub.rho_sum) << " > rho(X)+rho(Y)="
                  << fmt6(sub.rho_x_plus_rho_y) << " violated by "
                  << fmt6(sub.rho_sum - sub.rho_x_plus_rho_y) << '\n';
    }
    return report.all_pass() ? 0 : 2;
}

// ---- variance ----

int cmd_variance(const std::string& model_str, double p, double q,
                 const std::string& method_str) {
    const auto model = parse_model(model_str);
    const WinsorSpec spec(p, q);
    const RobustMethod method = parse_method(method_str);
    if (method == RobustMethod::Trimmed) {
        const auto r = process_variance_trimmed(model, spec);
        std::cout << "v_T (" << r.method << ")  " << fmt6(r.value)
                  << "  est.err " << fmt6(r.quad_error) << '\n';
    } else {
        const auto closed = process_variance_winsorized_closed(model, spec);
        const auto oracle = process_variance_winsorized_oracle(model, spec);
        std::cout << "v_W closed (" << closed.method << ")  "
                  << fmt6(closed.value) << '\n';
        std::cout << "v_W oracle (" << oracle.method << ")  "
                  << fmt6(oracle.value) << "  est.err "
                  << fmt6(oracle.quad_error) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"robust credibility premium estimation"};
    app.require_subcommand(1);

    StructuralArgs sa;
    auto* structural =
        app.add_subcommand("structural", "parametric structural parameters");
    structural->add_option("--pair", sa.pair, "model pair")->required();
    structural->add_option("--alpha", sa.alpha, "gamma prior shape");
    structural->add_option("--beta", sa.beta, "gamma prior rate");
    structural->add_option("--mu", sa.mu0, "normal prior mean");
    structural->add_option("--v2", sa.v2, "normal prior variance");
    structural->add_option("--t", sa.t, "pareto tail index");
    structural->add_option("--sigma", sa.sigma, "log-scale shape");
    structural->add_option("--p", sa.p, "lower proportion");
    structural->add_option("--q", sa.q, "upper proportion");
    structural->add_option("--method", sa.method, "trimmed|winsorized");
    structural->add_option("--n", sa.n, "observation count for Z");

    SimulateArgs ma;
    auto* simulate = app.add_subcommand("simulate", "contamination study");
    simulate->add_option("config", ma.config, "study config file");
    simulate->add_option("--preset", ma.preset,
                         "exp-pareto|lognormal-loglogistic");
    auto* seed_opt = simulate->add_option("--seed", ma.seed, "seed override");
    simulate->add_option("--out", ma.out, "output base path (.csv/.txt)");
    simulate->add_option("--scale", ma.scale, "desk|paper");

    EmpiricalArgs ea;
    auto* empirical =
        app.add_subcommand("empirical", "grouped-claims premium table");
    empirical->add_option("csv", ea.csv, "claims CSV file")->required();
    empirical->add_option("--group-col", ea.group_col, "group column name");
    empirical->add_option("--loss-col", ea.loss_col, "loss column name");
    empirical->add_option("--p", ea.p, "lower proportion");
    empirical->add_option("--q", ea.qs, "upper proportion(s)")->delimiter(',');
    empirical->add_option("--method", ea.method, "trimmed|winsorized");
    empirical->add_option("--out", ea.out, "CSV output path");

    double cp = 0.05, cq = 0.05;
    int trials = 100;
    std::uint64_t cseed = 0;
    auto* coherence = app.add_subcommand("coherence", "risk-measure axiom checks");
    coherence->add_option("--p", cp, "lower proportion");
    coherence->add_option("--q", cq, "upper proportion");
    coherence->add_option("--trials", trials, "randomized cases");
    coherence->add_option("--seed", cseed, "seed");

    std::string vmodel, vmethod = "winsorized";
    double vp = 0.0, vq = 0.0;
    auto* variance = app.add_subcommand("variance", "asymptotic robust-mean variance");
    variance->add_option("--model", vmodel, "model string, e.g. exp:theta=2")
        ->required();
    variance->add_option("--p", vp, "lower proportion");
    variance->add_option("--q", vq, "upper proportion");
    variance->add_option("--method", vmethod, "trimmed|winsorized");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*structural) return cmd_structural(sa);
        if (*simulate) {
            ma.seed_set = seed_opt->count() > 0;
            return cmd_simulate(ma);
        }
        if (*empirical) return cmd_empirical(ea);
        if (*coherence) return cmd_coherence(cp, cq, trials, cseed);
        if (*variance) return cmd_variance(vmodel, vp, vq, vmethod);
    } catch (const NonConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
