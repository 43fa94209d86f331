#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vallearn/valuation.hpp"

namespace vallearn {

// Family of k random subsets of [n] (n a power of two >= 1024) with
// calibrated sparsity: items join each set independently with probability
// 1/sqrt(n), any set outside [sqrt(n)/2, 2 sqrt(n)] or intersecting an
// earlier set in more than log2(n) items is resampled.  After 1e4 failed
// resamples generation aborts.
struct IntersectionFamily {
    std::uint32_t n = 0;
    std::vector<ItemSet> sets;

    struct Audit {
        std::vector<std::size_t> sizes;
        std::size_t max_pairwise_intersection = 0;
        double size_lo = 0.0;
        double size_hi = 0.0;
        std::size_t intersection_cap = 0;
        std::size_t resamples = 0;
    } audit;
};

IntersectionFamily gen_intersection_family(std::uint32_t n, std::size_t k, std::uint64_t seed);

// Xos valuation f_B(S) = max over the chosen member sets A of |S ∩ A|:
// one indicator SUM tree per index in `members`.
Valuation build_fB(const IntersectionFamily& family, const std::vector<std::size_t>& members);

// Matched pair of rank-style valuations over [n] that agree on symmetric
// statistics but separate on sets correlated with rset:
//   g23(S) = min(|S|, alpha)
//   gR(S)  = min(beta + |S \ rset|, |S|, alpha)
// with alpha = round(x sqrt(n) / 5), beta = round(x^2 / 5) and rset a
// uniform subset of size alpha.  Both come with Oxs-tree builds; requires
// x >= 4 sqrt(log2 n).
struct GoemansPair {
    Valuation g23;
    Valuation gR;
    Valuation g23_oxs;
    Valuation gR_oxs;
    ItemSet rset;
    std::int64_t alpha = 0;
    std::int64_t beta = 0;
};

GoemansPair gen_goemans_pair(std::uint32_t n, double x, std::uint64_t seed);

// Knobs for gen_random below; fields are ignored by kinds that do not use
// them.
struct GenParams {
    std::size_t trees = 3;
    std::size_t max_leaves = 0;  // 0 = no bound; else at most this many per tree
    double weight_lo = 0.0;
    double weight_hi = 10.0;
    bool integer_weights = false;
};

// Random valuation of the named kind ("linear", "unit_demand", "xos",
// "oxs", "table"); table values are built monotone by construction.
Valuation gen_random(const std::string& class_tag, std::uint32_t n, const GenParams& params,
                     std::uint64_t seed);

}  // namespace vallearn
