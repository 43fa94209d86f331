#pragma once

#include <cstdint>
#include <string>

#include "vallearn/hypothesis.hpp"
#include "vallearn/valuation.hpp"

namespace vallearn {

// Value-query access to a target valuation, with a query counter so tests
// can pin exactly how many lookups a learner spends.
class ValueOracle {
public:
    explicit ValueOracle(Valuation target) : target_(std::move(target)) {}

    std::uint32_t ground_size() const { return target_.ground_size(); }
    double value(const ItemSet& s) const {
        ++queries_;
        return target_.eval(s);
    }
    std::size_t query_count() const { return queries_; }

private:
    Valuation target_;
    mutable std::size_t queries_ = 0;
};

// Structure promises accepted by the singleton-query learners:
//   oxs-r-trees    Oxs with at most R MAX trees
//   oxs-r-leaves   Oxs whose MAX trees have at most R leaves each
//   xos-r-trees    Xos with at most R SUM trees
//   xos-r-leaves   Xos whose SUM trees have at most R leaves each
enum class ClassTag { OxsRTrees, OxsRLeaves, XosRTrees, XosRLeaves };

ClassTag class_tag_from_string(const std::string& tag);
std::string to_string(ClassTag tag);

// Queries the n singletons and returns the hypothesis form whose factor-R
// sandwich f <= f* <= R f is provable for the promised class: the scaled
// sum (1/R) * sum of singleton values for oxs-r-leaves / xos-r-trees, and
// the plain max for oxs-r-trees / xos-r-leaves.
ItemBasedHypothesis vq_learn_item_based(const ValueOracle& oracle, ClassTag tag, double R);

struct VqCheckResult {
    bool pass = true;
    ItemSet worst_set{0};
    double worst_ratio = 1.0;  // f* / predicted, +inf when predicted = 0 < f*
    double target_value = 0.0;
    double predicted = 0.0;
    bool overestimate = false;  // predicted > f* somewhere
};

// Exhaustively verifies predict(S) <= f*(S) <= R * predict(S) over all
// subsets (n <= 16) and reports the subset with the worst ratio.
VqCheckResult vq_hypothesis_check(const Valuation& target, const Hypothesis& hyp, double R);

}  // namespace vallearn
