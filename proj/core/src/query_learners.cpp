#include "vallearn/query_learners.hpp"

#include <cmath>
#include <limits>

#include "vallearn/error.hpp"

namespace vallearn {

ClassTag class_tag_from_string(const std::string& tag) {
    if (tag == "oxs-r-trees") return ClassTag::OxsRTrees;
    if (tag == "oxs-r-leaves") return ClassTag::OxsRLeaves;
    if (tag == "xos-r-trees") return ClassTag::XosRTrees;
    if (tag == "xos-r-leaves") return ClassTag::XosRLeaves;
    throw Error("class tag: unknown value '" + tag +
                "' (expected oxs-r-trees, oxs-r-leaves, xos-r-trees or xos-r-leaves)");
}

std::string to_string(ClassTag tag) {
    switch (tag) {
        case ClassTag::OxsRTrees: return "oxs-r-trees";
        case ClassTag::OxsRLeaves: return "oxs-r-leaves";
        case ClassTag::XosRTrees: return "xos-r-trees";
        case ClassTag::XosRLeaves: return "xos-r-leaves";
    }
    return "?";
}

ItemBasedHypothesis vq_learn_item_based(const ValueOracle& oracle, ClassTag tag, double R) {
    if (!(R >= 1.0)) throw Error("vq_learn_item_based: R must be >= 1");
    const std::uint32_t n = oracle.ground_size();
    std::vector<double> singles(n);
    for (std::uint32_t i = 0; i < n; ++i)
        singles[i] = oracle.value(ItemSet::singleton(n, i));

    ItemBasedHypothesis hyp;
    hyp.r = R;
    hyp.item_values = std::move(singles);
    // Scaled sum when the class bounds sum-of-singletons by R * f*
    // (few-leaves trees summed, or few SUM trees maxed); max otherwise.
    if (tag == ClassTag::OxsRLeaves || tag == ClassTag::XosRTrees)
        hyp.form = ItemBasedHypothesis::Form::ScaledSum;
    else
        hyp.form = ItemBasedHypothesis::Form::Max;
    return hyp;
}

VqCheckResult vq_hypothesis_check(const Valuation& target, const Hypothesis& hyp, double R) {
    const std::uint32_t n = target.ground_size();
    if (n > 16) throw Error("vq_hypothesis_check: requires n <= 16");
    constexpr double kSlack = 1e-9;
    const double inf = std::numeric_limits<double>::infinity();

    VqCheckResult result;
    result.worst_set = ItemSet(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
        ItemSet s = ItemSet::from_mask(n, mask);
        const double truth = target.eval(s);
        const double guess = predict(hyp, s);
        double ratio;
        if (guess > truth + kSlack) {
            ratio = inf;
        } else if (guess > 0.0) {
            ratio = truth / guess;
        } else {
            ratio = truth > kSlack ? inf : 1.0;
        }
        if (ratio > result.worst_ratio ||
            (guess > truth + kSlack && !result.overestimate)) {
            result.worst_ratio = ratio;
            result.worst_set = s;
            result.target_value = truth;
            result.predicted = guess;
            result.overestimate = guess > truth + kSlack;
        }
        if (guess > truth + kSlack || truth > R * guess + kSlack) result.pass = false;
    }
    return result;
}

}  // namespace vallearn
