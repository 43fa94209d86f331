#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "vallearn/convert.hpp"
#include "vallearn/item_set.hpp"

namespace vallearn {

// Feature map for the separator-based learners.  Raw is the item
// indicator vector; Subsets(L) has one indicator per nonempty subset of
// size <= L (coordinate is 1 iff the subset is contained in S), ordered
// by size then lexicographically.
struct Featurizer {
    enum class Kind { Raw, Subsets };
    Kind kind = Kind::Raw;
    std::uint32_t degree = 1;

    static Featurizer raw() { return {Kind::Raw, 1}; }
    static Featurizer subsets(std::uint32_t degree) { return {Kind::Subsets, degree}; }

    std::size_t feature_count(std::uint32_t n) const;
    std::vector<double> features(const ItemSet& s) const;
    // Dot product w · features(s) without materializing the dense vector.
    double dot(const std::vector<double>& w, const ItemSet& s) const;
    // Feature indices whose subset intersects `touched`.
    std::vector<std::size_t> features_touching(const ItemSet& touched, std::uint32_t n) const;

    bool operator==(const Featurizer&) const = default;
};

// Dense indicator over all nonempty subsets of size <= L; the Subsets(L)
// feature map as a standalone vector.  Feature count must stay <= 1e6.
std::vector<double> expand_features(const ItemSet& s, std::uint32_t L);

// Hypothesis of the separator-based learners:
//   predict(S) = outer_scale * (w · phi(S) / (r_eps * z)) ^ (1/p),
// and exactly 0 on any S inside the zero subcube u0.
struct RootedLinearHypothesis {
    std::uint32_t n = 0;
    Featurizer featurizer;
    std::vector<double> w;
    double z = 1.0;
    double p = 1.0;
    double r_eps = 1.0;
    double outer_scale = 1.0;
    ItemSet u0{0};

    double predict(const ItemSet& s) const;
};

// predict(S) = max over i in S of item_values[i]; 0 on the empty set.
struct UnitDemandHypothesis {
    std::vector<double> item_values;

    double predict(const ItemSet& s) const;
};

// Hypotheses built from singleton values only: either the scaled sum
// (1/r) * sum of item values, or the plain max.
struct ItemBasedHypothesis {
    enum class Form { ScaledSum, Max };
    Form form = Form::Max;
    double r = 1.0;
    std::vector<double> item_values;

    double predict(const ItemSet& s) const;
};

// predict(S) = max over subsets T of S with |T| <= index.max_size() of the
// learned value of T's meta-item (0 when unseen).
struct MetaUnitDemandHypothesis {
    MetaIndex index;
    std::vector<double> values;

    double predict(const ItemSet& s) const;
};

using Hypothesis = std::variant<RootedLinearHypothesis, UnitDemandHypothesis,
                                ItemBasedHypothesis, MetaUnitDemandHypothesis>;

double predict(const Hypothesis& h, const ItemSet& s);

}  // namespace vallearn
