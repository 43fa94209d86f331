#pragma once

#include <cstdint>
#include <vector>

#include "vallearn/hypothesis.hpp"
#include "vallearn/linsep.hpp"
#include "vallearn/rng.hpp"

namespace vallearn {

struct Sample {
    ItemSet set;
    double value = 0.0;
};

// ceil((16 n / eps) * ln(n / (delta * eps))), the default training size
// for the separator-based learners; callers may pass any m instead.
std::size_t default_sample_size(std::uint32_t n, double eps, double delta);

// Union of the zero-valued sample sets: predictions inside this subcube
// can safely be 0.
ItemSet null_subcube(const std::vector<Sample>& samples, std::uint32_t n);

// One labeled point per positive sample: a fair coin picks between
// (phi(S), value^p) labeled +1 and (phi(S), (R+eps) * value^p) labeled -1.
// Coins consume `coins` in sample order.
std::vector<LabeledPoint> build_separator_examples(const std::vector<Sample>& positives,
                                                   std::uint32_t n, double R, double eps,
                                                   double p, const Featurizer& featurizer,
                                                   Rng& coins);

// Reduction to a consistent linear separator: split off the zero samples,
// force weights touching their union to zero, label the rest by coin, and
// read the hypothesis off the separator.  Throws if no consistent
// separator exists (the target then lies outside the promised class).
//
// Heads-samples end up with value < (R+eps)^(1/p) * predict(S); tails with
// predict(S) < value; zero samples predict exactly 0.
RootedLinearHypothesis pmac_linear_learn(const std::vector<Sample>& samples, std::uint32_t n,
                                         double R, double eps, double p,
                                         const Featurizer& featurizer, Rng& coins);

// Class presets for pmac_linear_learn.
RootedLinearHypothesis pmac_xos(const std::vector<Sample>& samples, std::uint32_t n, double eps,
                                Rng& coins);
RootedLinearHypothesis pmac_subadditive(const std::vector<Sample>& samples, std::uint32_t n,
                                        double eps, Rng& coins);
// For Oxs targets whose MAX trees have at most R leaves each.
RootedLinearHypothesis pmac_oxs_r_leaves(const std::vector<Sample>& samples, std::uint32_t n,
                                         double R, double eps, Rng& coins);
// For Xos targets with at most R SUM trees: degree-L subset features with
// L = ceil(1/eta) tighten the factor to (R+eps)^(1/L) at the price of
// O(n^L) features.
RootedLinearHypothesis pmac_xos_r_trees(const std::vector<Sample>& samples, std::uint32_t n,
                                        double R, double eta, double eps, Rng& coins);

// Min rule: item value = smallest sample value among sets containing the
// item (0 if uncovered); predict by unit demand.  Exactly consistent on
// unit-demand targets; per-sample factor R on R-bounded Xos/Oxs targets.
UnitDemandHypothesis unit_demand_learn(const std::vector<Sample>& samples, std::uint32_t n);

// Min rule over meta-items (subsets of size <= R): exact for Oxs targets
// with at most R MAX trees, since their value is determined by the best
// size-<=R subset.  The meta universe must stay <= 1e6 subsets.
MetaUnitDemandHypothesis pac_oxs_const_trees(const std::vector<Sample>& samples, std::uint32_t n,
                                             std::uint32_t R);

}  // namespace vallearn
