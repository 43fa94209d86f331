#include "vallearn/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "vallearn/error.hpp"
#include "vallearn/learners.hpp"
#include "vallearn/rng.hpp"

namespace vallearn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Approximation ratio of one draw.  Small relative slack so that exact
// fits are not flagged over float noise.
double draw_ratio(double predicted, double target, bool& violation) {
    const double slack = 1e-9 * std::max(1.0, target);
    violation = false;
    if (predicted > target + slack) {
        violation = true;
        return kInf;
    }
    if (predicted <= 0.0) {
        if (target > 0.0) {
            violation = true;
            return kInf;
        }
        return 1.0;
    }
    return std::max(1.0, target / predicted);
}

double quantile_of_sorted(const std::vector<double>& sorted, double eps) {
    std::size_t idx = static_cast<std::size_t>(
        std::ceil((1.0 - eps) * static_cast<double>(sorted.size())));
    if (idx > 0) --idx;
    if (idx >= sorted.size()) idx = sorted.size() - 1;
    return sorted[idx];
}

Hypothesis fit(const LearnerSpec& spec, const std::vector<Sample>& samples, std::uint32_t n,
               Rng& coins) {
    if (spec.klass == "xos") return pmac_xos(samples, n, spec.eps, coins);
    if (spec.klass == "subadditive") return pmac_subadditive(samples, n, spec.eps, coins);
    if (spec.klass == "oxs-r-leaves")
        return pmac_oxs_r_leaves(samples, n, spec.R, spec.eps, coins);
    if (spec.klass == "xos-r-trees")
        return pmac_xos_r_trees(samples, n, spec.R, spec.eta, spec.eps, coins);
    if (spec.klass == "unit-demand") return unit_demand_learn(samples, n);
    if (spec.klass == "oxs-const-trees")
        return pac_oxs_const_trees(samples, n, static_cast<std::uint32_t>(spec.R));
    throw Error("learner.klass '" + spec.klass +
                "' is not one of xos, subadditive, oxs-r-leaves, xos-r-trees, "
                "unit-demand, oxs-const-trees");
}

void validate(const ExperimentConfig& config) {
    if (config.M == 0) throw Error("M must be positive");
    if (!(config.eps >= 0.0 && config.eps < 1.0)) throw Error("eps must lie in [0, 1)");
    if (config.seeds.empty()) throw Error("seeds must be nonempty");
    if (!config.target && config.target_class.empty())
        throw Error("either target or target_class must be set");
    if (!config.target && config.n == 0)
        throw Error("n must be positive when target_class is used");
    const LearnerSpec& l = config.learner;
    if (l.klass.empty()) throw Error("learner.klass must be set");
    if (!(l.eps > 0.0)) throw Error("learner.eps must be positive");
    if (!(l.delta > 0.0 && l.delta < 1.0)) throw Error("learner.delta must lie in (0, 1)");
    if ((l.klass == "oxs-r-leaves" || l.klass == "xos-r-trees" ||
         l.klass == "oxs-const-trees") &&
        !(l.R >= 1.0))
        throw Error("learner.R must be >= 1 for class " + l.klass);
    if (l.klass == "xos-r-trees" && !(l.eta > 0.0)) throw Error("learner.eta must be positive");
}

std::string fmt(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

FactorReport empirical_factor(const std::function<double(const ItemSet&)>& predicted,
                              const std::function<double(const ItemSet&)>& target,
                              const Distribution& dist, double eps, std::size_t M,
                              std::uint64_t seed) {
    if (M == 0) throw Error("M must be positive");
    if (!(eps >= 0.0 && eps < 1.0)) throw Error("eps must lie in [0, 1)");
    Rng rng(seed);
    std::vector<double> ratios;
    ratios.reserve(M);
    std::size_t violations = 0;
    for (std::size_t i = 0; i < M; ++i) {
        ItemSet s = dist.sample(rng);
        bool violated = false;
        ratios.push_back(draw_ratio(predicted(s), target(s), violated));
        if (violated) ++violations;
    }
    std::sort(ratios.begin(), ratios.end());
    FactorReport report;
    report.alpha_hat = quantile_of_sorted(ratios, eps);
    report.violation_mass = static_cast<double>(violations) / static_cast<double>(M);
    report.M = M;
    report.eps = eps;
    return report;
}

std::vector<ExperimentReport> run_pmac_experiment(const ExperimentConfig& config) {
    validate(config);
    std::vector<ExperimentReport> reports;
    reports.reserve(config.seeds.size());
    for (std::uint64_t seed : config.seeds) {
        const auto t0 = std::chrono::steady_clock::now();
        Rng root(seed);

        Valuation target = config.target
                               ? *config.target
                               : gen_random(config.target_class, config.n, config.target_params,
                                            root.fork(0x7a).seed());
        const std::uint32_t n = target.ground_size();
        Distribution dist = config.dist ? *config.dist : Distribution::uniform_subsets(n);
        if (dist.ground_size() != n)
            throw Error("dist ground size " + std::to_string(dist.ground_size()) +
                        " does not match target n " + std::to_string(n));

        std::size_t m = config.m ? config.m
                                 : default_sample_size(n, config.learner.eps,
                                                       config.learner.delta);
        Rng train = root.fork(0x11);
        std::vector<Sample> samples;
        samples.reserve(m);
        for (std::size_t i = 0; i < m; ++i) {
            ItemSet s = dist.sample(train);
            double v = target.eval(s);
            samples.push_back({std::move(s), v});
        }

        Rng coins = root.fork(0x22);
        Hypothesis hyp = fit(config.learner, samples, n, coins);

        FactorReport factor = empirical_factor(
            [&hyp](const ItemSet& s) { return predict(hyp, s); },
            [&target](const ItemSet& s) { return target.eval(s); }, dist, config.eps, config.M,
            root.fork(0x33).seed());

        const auto t1 = std::chrono::steady_clock::now();
        ExperimentReport report;
        report.experiment_id = config.experiment_id;
        report.seed = seed;
        report.m = m;
        report.M = config.M;
        report.eps = config.eps;
        report.alpha_hat = factor.alpha_hat;
        report.violation_mass = factor.violation_mass;
        report.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        reports.push_back(std::move(report));
    }
    return reports;
}

std::string report_csv_header() {
    return "experiment_id,seed,m,M,eps,alpha_hat,violation_mass,wall_ms";
}

std::string to_csv_row(const ExperimentReport& report) {
    std::string row = report.experiment_id;
    row += ',' + std::to_string(report.seed);
    row += ',' + std::to_string(report.m);
    row += ',' + std::to_string(report.M);
    row += ',' + fmt(report.eps);
    row += ',' + fmt(report.alpha_hat);
    row += ',' + fmt(report.violation_mass);
    row += ',' + fmt(report.wall_ms);
    return row;
}

AdversarialDemoReport adversarial_demo(std::uint32_t n, std::size_t k, std::uint64_t seed,
                                       std::size_t train_draws) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng root(seed);
    IntersectionFamily family = gen_intersection_family(n, k, root.fork(0xfa).seed());

    // Hide a uniform half of the family.
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng half = root.fork(0xb0);
    for (std::size_t i = 0; i + 1 < k; ++i) {
        std::size_t j = i + static_cast<std::size_t>(half.below(k - i));
        std::swap(order[i], order[j]);
    }
    std::vector<std::size_t> hidden(order.begin(), order.begin() + k / 2);
    std::sort(hidden.begin(), hidden.end());
    Valuation target = build_fB(family, hidden);

    AdversarialDemoReport report;
    report.n = n;
    report.k = k;
    report.seed = seed;
    report.audit = family.audit;
    report.hidden_members = hidden.size();
    report.train_draws = train_draws ? train_draws : k;

    // Training samples: uniform over the whole family, values from f_B.
    Rng draw = root.fork(0xd1);
    std::vector<bool> seen(k, false);
    std::vector<Sample> samples;
    samples.reserve(report.train_draws);
    for (std::size_t i = 0; i < report.train_draws; ++i) {
        std::size_t idx = static_cast<std::size_t>(draw.below(k));
        seen[idx] = true;
        samples.push_back({family.sets[idx], target.eval(family.sets[idx])});
    }

    Rng coins = root.fork(0xc0);
    RootedLinearHypothesis hyp = pmac_xos(samples, n, 0.5, coins);

    // Score only the hidden members the training draws never touched.
    std::vector<bool> is_hidden(k, false);
    for (std::size_t idx : hidden) is_hidden[idx] = true;
    for (std::size_t idx = 0; idx < k; ++idx) {
        if (seen[idx]) continue;
        ++report.unseen_total;
        if (!is_hidden[idx]) continue;
        ++report.unseen_hidden;
        bool violated = false;
        report.unseen_ratios.push_back(
            draw_ratio(hyp.predict(family.sets[idx]), target.eval(family.sets[idx]), violated));
    }

    if (!report.unseen_ratios.empty()) {
        std::vector<double> sorted = report.unseen_ratios;
        std::sort(sorted.begin(), sorted.end());
        report.median_factor = sorted[(sorted.size() - 1) / 2];
    }
    report.floor_factor = std::sqrt(static_cast<double>(n)) /
                          (2.0 * std::log2(static_cast<double>(n)));

    const auto t1 = std::chrono::steady_clock::now();
    report.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return report;
}

}  // namespace vallearn
