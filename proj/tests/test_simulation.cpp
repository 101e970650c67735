#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>
#include <string>

#include "robcred/config.hpp"
#include "robcred/simulation.hpp"

using namespace robcred;

namespace {

StudyConfig small_config() {
    StudyConfig cfg = study_preset_exp_pareto();
    cfg.n = 40;
    cfg.N = 50;
    cfg.reps = 3;
    cfg.q_grid = {0.0, 0.05};
    cfg.epsilon_grid = {0.0, 0.05};
    cfg.seed = 12345;
    return cfg;
}

}  // namespace

TEST_CASE("study output is deterministic") {
    const auto a = run_study(small_config());
    const auto b = run_study(small_config());
    REQUIRE(a.cells.size() == b.cells.size());
    CHECK(emit_table_csv(a) == emit_table_csv(b));
    CHECK(emit_table_aligned(a) == emit_table_aligned(b));
}

TEST_CASE("cells are ordered by (epsilon, q, method)") {
    const auto r = run_study(small_config());
    REQUIRE(r.cells.size() == 8);
    CHECK(r.cells[0].epsilon == 0.0);
    CHECK(r.cells[0].q == 0.0);
    CHECK(r.cells[0].method == RobustMethod::Trimmed);
    CHECK(r.cells[1].method == RobustMethod::Winsorized);
    CHECK(r.cells[2].q == 0.05);
    CHECK(r.cells[4].epsilon == 0.05);
}

TEST_CASE("contamination streams are nested across epsilon") {
    ContaminationConfig base = study_preset_exp_pareto().contamination;
    base.epsilon = 0.0;
    ContaminationConfig mixed = base;
    mixed.epsilon = 0.10;
    Rng a(mix_seed(5, 1)), b(mix_seed(5, 1));
    const auto clean = contaminated_sample(base, 4.0, 500, a);
    const auto dirty = contaminated_sample(mixed, 4.0, 500, b);
    int changed = 0;
    for (std::size_t i = 0; i < clean.size(); ++i)
        if (clean[i] != dirty[i]) ++changed;
    // about 10% of draws are rerouted to the contaminant; the rest coincide
    CHECK(changed > 20);
    CHECK(changed < 90);
}

TEST_CASE("central truth pair absorbs the theta coefficient") {
    // Exp(theta/2) with theta ~ Gamma(4,2) is the exponential-gamma pair with
    // rate 4: collective mean alpha/beta = 1
    const auto cfg = study_preset_exp_pareto();
    const auto pair = central_truth_pair(cfg.prior, cfg.contamination.central);
    const auto sp = structural_params(pair, WinsorSpec(0.0, 0.0),
                                      RobustMethod::Winsorized);
    CHECK(sp.mu == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(sp.v == doctest::Approx(1.25).epsilon(1e-8));
    CHECK(sp.a == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(sp.k == doctest::Approx(5.0).epsilon(1e-8));
}

TEST_CASE("uncontaminated ratios sit near one at q = 0") {
    StudyConfig cfg = small_config();
    cfg.n = 150;
    cfg.q_grid = {0.0};
    cfg.epsilon_grid = {0.0};
    cfg.reps = 5;
    const auto r = run_study(cfg);
    REQUIRE(r.cells.size() == 2);
    for (const auto& cell : r.cells) {
        CHECK(cell.mu_ratio == doctest::Approx(1.0).epsilon(0.10));
        CHECK(cell.v_ratio == doctest::Approx(1.0).epsilon(0.20));
        CHECK(cell.a_ratio == doctest::Approx(1.0).epsilon(0.35));
    }
}

TEST_CASE("csv emission shape and round-trip") {
    const auto r = run_study(small_config());
    const std::string csv = emit_table_csv(r);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "epsilon,q,method,parameter,ratio,se,clamped_reps");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == static_cast<int>(r.cells.size()) * 4);
}

TEST_CASE("study config from sectioned text") {
    const std::string text =
        "[prior]\nfamily = gamma\nalpha = 4\nbeta = 2\n"
        "[central]\nfamily = exp\ncoef = 0.5\n"
        "[contaminant]\nfamily = pareto\ncoef = 1\nt = 3\n"
        "[grids]\nq = 0, 0.05\nepsilon = 0, 0.1\n"
        "[run]\nn = 40\nN = 50\nreps = 3\nseed = 12345\np = 0\n";
    std::istringstream in(text);
    const auto cfg = study_config_from(parse_config(in));
    CHECK(cfg.prior.kind == PriorModel::Kind::Gamma);
    CHECK(cfg.n == 40);
    CHECK(cfg.N == 50);
    CHECK(cfg.reps == 3);
    CHECK(cfg.seed == 12345);
    CHECK(cfg.q_grid == std::vector<double>{0.0, 0.05});
    CHECK(cfg.epsilon_grid == std::vector<double>{0.0, 0.1});
    CHECK(cfg.contamination.central.family == Family::Exponential);
    CHECK(cfg.contamination.contaminant.shape == doctest::Approx(3.0));
}

TEST_CASE("config diagnostics carry line numbers") {
    std::istringstream bad("[prior]\nfamily = gamma\nalpha 4\n");
    try {
        parse_config(bad);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        CHECK(e.line_number == 3);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    std::istringstream dup("[a]\nx = 1\nx = 2\n");
    CHECK_THROWS_AS(parse_config(dup), DataError);
    std::istringstream orphan("x = 1\n");
    CHECK_THROWS_AS(parse_config(orphan), DataError);
}

TEST_CASE("scale presets") {
    StudyConfig cfg = study_preset_exp_pareto();
    apply_scale(cfg, "desk");
    CHECK(cfg.n == 200);
    apply_scale(cfg, "paper");
    CHECK(cfg.n == 1000);
    CHECK_THROWS_AS(apply_scale(cfg, "huge"), std::invalid_argument);
}
