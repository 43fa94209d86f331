#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "vallearn/valuation.hpp"

namespace vallearn {

// Oxs trees realizing f(S) = min(budget, |S ∩ rset|): min(budget, |rset|)
// identical MAX trees, each holding every element of rset at weight 1.
Valuation build_oxs_budgeted(const ItemSet& rset, std::int64_t budget);

// Oxs trees realizing f(S) = min(beta + |S \ rset|, |S|, alpha) on a
// ground set of n items.  Three regimes:
//   n <= alpha        trees for min(beta, |S ∩ rset|) plus one singleton
//                     tree per element outside rset
//   alpha <= beta     trees for min(alpha, |S|)
//   otherwise         (alpha - beta) trees over the complement of rset
//                     plus beta trees over all items
Valuation build_oxs_goemans(const ItemSet& rset, std::int64_t alpha, std::int64_t beta,
                            std::uint32_t n);

// Equivalent Xos valuation: one SUM tree per way of taking at most one
// leaf from each MAX tree, distinct items only.  The enumeration size
// (product over trees of leaf count + 1) must stay <= 1e6.
Valuation oxs_to_xos(const Valuation& oxs);

// Canonical enumeration of the subsets of [n] with at most max_size
// elements: ordered by size, then lexicographically by indices.  Id 0 is
// the empty set.  Total count must stay <= 1e6.
class MetaIndex {
public:
    MetaIndex(std::uint32_t n, std::uint32_t max_size);

    std::uint32_t ground_size() const { return n_; }
    std::uint32_t max_size() const { return max_size_; }
    std::size_t count() const { return sets_.size(); }

    const std::vector<std::uint32_t>& set_of(std::size_t id) const { return sets_[id]; }
    std::size_t id_of(const std::vector<std::uint32_t>& sorted_items) const;

    // Ids of every subset of s with at most max_size elements.
    std::vector<std::size_t> ids_within(const ItemSet& s) const;

private:
    struct VecHash {
        std::size_t operator()(const std::vector<std::uint32_t>& v) const;
    };
    std::uint32_t n_;
    std::uint32_t max_size_;
    std::vector<std::vector<std::uint32_t>> sets_;
    std::unordered_map<std::vector<std::uint32_t>, std::size_t, VecHash> ids_;
};

// Unit-demand valuation over meta-items: one meta-item per subset of size
// at most R (= tree count of the input), weighted by the Oxs value of that
// subset.  Evaluating the unit-demand on the meta-items contained in S
// reproduces the Oxs value of S exactly.
struct MetaUnitDemand {
    MetaIndex index;
    std::vector<double> weights;  // by meta id

    double eval(const ItemSet& s) const;
};
MetaUnitDemand oxs_to_unit_demand_meta(const Valuation& oxs);

// Xos valuation equal to a monotone submodular Table valuation: one SUM
// tree of marginal gains per permutation of the items.  Requires n <= 7
// and a submodular input (checked; throws otherwise).
Valuation submodular_to_xos(const Valuation& table);

}  // namespace vallearn
