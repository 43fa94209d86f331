#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vallearn/distributions.hpp"
#include "vallearn/hypothesis.hpp"
#include "vallearn/instances.hpp"
#include "vallearn/valuation.hpp"

namespace vallearn {

// Result of measuring a hypothesis against the target on M fresh draws.
// Per-draw ratio: target/predicted when predicted <= target and > 0;
// 1 when both are zero; +inf otherwise (the draw is then also counted
// into violation_mass, since underestimation is part of the contract).
struct FactorReport {
    double alpha_hat = 1.0;       // (1 - eps)-quantile of the ratios
    double violation_mass = 0.0;  // fraction with predicted > target or 0 < target
    std::size_t M = 0;
    double eps = 0.0;
};

FactorReport empirical_factor(const std::function<double(const ItemSet&)>& predicted,
                              const std::function<double(const ItemSet&)>& target,
                              const Distribution& dist, double eps, std::size_t M,
                              std::uint64_t seed);

struct LearnerSpec {
    std::string klass;   // xos | subadditive | oxs-r-leaves | xos-r-trees |
                         // unit-demand | oxs-const-trees
    double R = 1.0;      // structure bound for the R-parameterized classes
    double eta = 0.5;    // xos-r-trees accuracy knob
    double eps = 0.5;    // learner slack added to R
    double delta = 0.25; // only drives the default sample size
};

struct ExperimentConfig {
    std::string experiment_id = "experiment";
    // Target: either fixed, or regenerated per seed from target_class.
    std::optional<Valuation> target;
    std::string target_class;
    GenParams target_params;
    std::uint32_t n = 0;  // required when target is not fixed
    LearnerSpec learner;
    std::optional<Distribution> dist;  // default: uniform over subsets
    std::size_t m = 0;     // training draws; 0 = default_sample_size
    std::size_t M = 1000;  // evaluation draws
    double eps = 0.1;      // evaluation quantile mass
    std::vector<std::uint64_t> seeds = {0};
};

struct ExperimentReport {
    std::string experiment_id;
    std::uint64_t seed = 0;
    std::size_t m = 0;
    std::size_t M = 0;
    double eps = 0.0;
    double alpha_hat = 1.0;
    double violation_mass = 0.0;
    double wall_ms = 0.0;
};

// One full train-and-measure pass per seed: draw m training sets, fit the
// configured learner, then score alpha_hat on M fresh draws.  Rejects
// malformed configs with messages naming the offending field.
std::vector<ExperimentReport> run_pmac_experiment(const ExperimentConfig& config);

std::string report_csv_header();
std::string to_csv_row(const ExperimentReport& report);

// Hardness demonstration: hide a uniform half B of a sparse intersection
// family, train the Xos learner on draws that are uniform over the whole
// family, and measure the factor on the members of B never drawn during
// training.  Family members are near-disjoint, so unseen members earn a
// factor around sqrt(n)/(2 log2 n) regardless of the training effort.
struct AdversarialDemoReport {
    std::uint32_t n = 0;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    IntersectionFamily::Audit audit;
    std::size_t train_draws = 0;
    std::size_t hidden_members = 0;  // |B|
    std::size_t unseen_total = 0;
    std::size_t unseen_hidden = 0;
    std::vector<double> unseen_ratios;  // target/predicted per unseen member of B
    double median_factor = 0.0;
    double floor_factor = 0.0;  // sqrt(n) / (2 log2 n)
    double wall_ms = 0.0;
};

AdversarialDemoReport adversarial_demo(std::uint32_t n, std::size_t k, std::uint64_t seed,
                                       std::size_t train_draws = 0);

}  // namespace vallearn
