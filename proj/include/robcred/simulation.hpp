#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robcred/common.hpp"
#include "robcred/parametric_credibility.hpp"
#include "robcred/quantile_models.hpp"

namespace robcred {

// A conditional-family template whose primary parameter (scale, or log-scale
// location) is coef * theta; shape carries t or sigma where applicable.
struct ThetaMapped {
    Family family = Family::Exponential;
    double coef = 1.0;
    double shape = 0.0;

    ConditionalModel at(double theta) const;
};

struct ContaminationConfig {
    double epsilon = 0.0;
    ThetaMapped central;
    ThetaMapped contaminant;
};

struct StudyConfig {
    PriorModel prior = PriorModel::gamma(4.0, 2.0);
    ContaminationConfig contamination;
    int n = 200;   // risk parameters per repetition
    int N = 100;   // losses per risk
    std::vector<double> q_grid{0.0, 0.01, 0.05, 0.10, 0.20};
    std::vector<double> epsilon_grid{0.0, 0.01, 0.03, 0.06, 0.10};
    double p = 0.0;
    int reps = 10;
    std::uint64_t seed = 0;
};

struct RatioCell {
    double epsilon = 0.0;
    double q = 0.0;
    RobustMethod method = RobustMethod::Trimmed;
    double mu_ratio = 0.0, v_ratio = 0.0, a_ratio = 0.0, k_ratio = 0.0;
    double mu_se = 0.0, v_se = 0.0, a_se = 0.0, k_se = 0.0;
    int clamped_reps = 0;  // repetitions with a_hat <= 0, excluded from k averaging
};

struct RatioReport {
    StudyConfig config;
    StructuralParams truth;  // non-robust central-model structural parameters
    std::vector<RatioCell> cells;  // ordered by (epsilon, q, method)
};

// Draws `count` losses at risk level theta from the epsilon-mixture. Each
// draw consumes one routing uniform (compared against epsilon) and one loss
// uniform, so replaying the same stream under a different epsilon yields
// nested contamination sets and otherwise identical losses.
std::vector<double> contaminated_sample(const ContaminationConfig& cfg,
                                        double theta, std::size_t count, Rng& rng);

// The parametric pair whose conditional model is the central template at the
// prior's risk parameter (absorbing coef into the prior).
ModelPair central_truth_pair(const PriorModel& prior, const ThetaMapped& central);

// Runs the contamination study: per repetition draws n risk parameters (held
// fixed across the grid), per risk N mixture losses (shared across q and
// method cells; coupled across epsilon cells by common random numbers), then
// estimates the empirical structural parameters per (epsilon, q, method) and
// reports their ratios against the non-robust central-model truth.
// Bit-identical output for a fixed config regardless of worker count.
RatioReport run_study(const StudyConfig& cfg);

std::string emit_table_csv(const RatioReport& report);
std::string emit_table_aligned(const RatioReport& report);

// Shipped study presets: Gamma(4,2) prior with Exponential(theta/2) central and
// Pareto(theta, 3) contaminant; Normal(4,1) prior with Lognormal(theta, 0.45)
// central and LogLogistic(theta, 0.45) contaminant.
StudyConfig study_preset_exp_pareto();
StudyConfig study_preset_lognormal_loglogistic();

// scale presets: "desk" (n=200) or "paper" (n=1000)
void apply_scale(StudyConfig& cfg, const std::string& scale);

}  // namespace robcred
