#include "vallearn/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vallearn/error.hpp"

namespace vallearn {
namespace {

void require_samples(const std::vector<Sample>& samples, std::uint32_t n, const char* who) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].set.ground_size() != n)
            throw Error(std::string(who) + ": sample " + std::to_string(i) +
                        " has ground size " + std::to_string(samples[i].set.ground_size()) +
                        ", expected " + std::to_string(n));
        if (!(samples[i].value >= 0.0) || !std::isfinite(samples[i].value))
            throw Error(std::string(who) + ": sample " + std::to_string(i) +
                        " has invalid value " + std::to_string(samples[i].value));
    }
}

}  // namespace

std::size_t default_sample_size(std::uint32_t n, double eps, double delta) {
    if (!(eps > 0.0) || !(delta > 0.0))
        throw Error("default_sample_size: eps and delta must be positive");
    const double arg = std::max(std::exp(1.0), n / (delta * eps));
    return static_cast<std::size_t>(std::ceil(16.0 * n / eps * std::log(arg)));
}

ItemSet null_subcube(const std::vector<Sample>& samples, std::uint32_t n) {
    require_samples(samples, n, "null_subcube");
    ItemSet u0(n);
    for (const auto& s : samples)
        if (s.value == 0.0) u0 = u0.set_union(s.set);
    return u0;
}

std::vector<LabeledPoint> build_separator_examples(const std::vector<Sample>& positives,
                                                   std::uint32_t n, double R, double eps,
                                                   double p, const Featurizer& featurizer,
                                                   Rng& coins) {
    require_samples(positives, n, "build_separator_examples");
    std::vector<LabeledPoint> points;
    points.reserve(positives.size());
    for (const auto& s : positives) {
        if (s.value <= 0.0)
            throw Error("build_separator_examples: zero-valued sample; split those off first");
        LabeledPoint pt;
        pt.x = featurizer.features(s.set);
        const double vp = std::pow(s.value, p);
        if (coins.coin() > 0) {
            pt.x.push_back(vp);
            pt.label = +1;
        } else {
            pt.x.push_back((R + eps) * vp);
            pt.label = -1;
        }
        points.push_back(std::move(pt));
    }
    return points;
}

RootedLinearHypothesis pmac_linear_learn(const std::vector<Sample>& samples, std::uint32_t n,
                                         double R, double eps, double p,
                                         const Featurizer& featurizer, Rng& coins) {
    require_samples(samples, n, "pmac_linear_learn");
    if (!(R >= 1.0)) throw Error("pmac_linear_learn: R must be >= 1");
    if (!(eps > 0.0)) throw Error("pmac_linear_learn: eps must be positive");
    if (!(p >= 1.0)) throw Error("pmac_linear_learn: p must be >= 1");

    std::vector<Sample> positives;
    positives.reserve(samples.size());
    for (const auto& s : samples)
        if (s.value > 0.0) positives.push_back(s);
    ItemSet u0 = null_subcube(samples, n);

    SeparatorProblem problem;
    problem.dim = featurizer.feature_count(n);
    problem.zero_coords = featurizer.features_touching(u0, n);
    problem.points = build_separator_examples(positives, n, R, eps, p, featurizer, coins);

    SeparatorSolution sep = solve_consistent_separator(problem);
    if (!sep.feasible)
        throw Error("pmac_linear_learn: no consistent separator; the target does not fit the "
                    "promised class with R=" + std::to_string(R) + ", p=" + std::to_string(p));

    RootedLinearHypothesis hyp;
    hyp.n = n;
    hyp.featurizer = featurizer;
    hyp.w = std::move(sep.w);
    hyp.z = sep.z;
    hyp.p = p;
    hyp.r_eps = R + eps;
    hyp.outer_scale = 1.0;
    hyp.u0 = std::move(u0);
    return hyp;
}

RootedLinearHypothesis pmac_xos(const std::vector<Sample>& samples, std::uint32_t n, double eps,
                                Rng& coins) {
    return pmac_linear_learn(samples, n, static_cast<double>(n), eps, 2.0, Featurizer::raw(),
                             coins);
}

RootedLinearHypothesis pmac_subadditive(const std::vector<Sample>& samples, std::uint32_t n,
                                        double eps, Rng& coins) {
    const double ln_n = std::log(std::max<std::uint32_t>(n, 2));
    const double R = std::max(1.0, n * ln_n * ln_n);
    return pmac_linear_learn(samples, n, R, eps, 2.0, Featurizer::raw(), coins);
}

RootedLinearHypothesis pmac_oxs_r_leaves(const std::vector<Sample>& samples, std::uint32_t n,
                                         double R, double eps, Rng& coins) {
    return pmac_linear_learn(samples, n, R, eps, 1.0, Featurizer::raw(), coins);
}

RootedLinearHypothesis pmac_xos_r_trees(const std::vector<Sample>& samples, std::uint32_t n,
                                        double R, double eta, double eps, Rng& coins) {
    if (!(eta > 0.0)) throw Error("pmac_xos_r_trees: eta must be positive");
    const auto L = static_cast<std::uint32_t>(std::ceil(1.0 / eta));
    if (L > 32) throw Error("pmac_xos_r_trees: eta is too small (needs degree > 32)");
    return pmac_linear_learn(samples, n, R, eps, static_cast<double>(L),
                             Featurizer::subsets(L), coins);
}

UnitDemandHypothesis unit_demand_learn(const std::vector<Sample>& samples, std::uint32_t n) {
    require_samples(samples, n, "unit_demand_learn");
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> values(n, inf);
    for (const auto& s : samples)
        for (std::uint32_t i : s.set.indices()) values[i] = std::min(values[i], s.value);
    for (double& v : values)
        if (v == inf) v = 0.0;
    return UnitDemandHypothesis{std::move(values)};
}

MetaUnitDemandHypothesis pac_oxs_const_trees(const std::vector<Sample>& samples, std::uint32_t n,
                                             std::uint32_t R) {
    require_samples(samples, n, "pac_oxs_const_trees");
    MetaIndex index(n, R);
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> values(index.count(), inf);
    for (const auto& s : samples)
        for (std::size_t id : index.ids_within(s.set))
            values[id] = std::min(values[id], s.value);
    for (double& v : values)
        if (v == inf) v = 0.0;
    return MetaUnitDemandHypothesis{std::move(index), std::move(values)};
}

}  // namespace vallearn
