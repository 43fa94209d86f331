#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "vallearn/item_set.hpp"

namespace vallearn {

// Combinatorial valuation over a ground set of n items.  Weight-based
// variants keep dense per-item weight vectors; the two rank-style variants
// are closed-form; Table stores all 2^n values explicitly.
//
//   Linear        f(S) = sum of item weights in S
//   UnitDemand    f(S) = max item weight in S
//   Xos           f(S) = max over SUM trees of the tree's weight-sum on S
//   Oxs           f(S) = value of a max-weight matching of S's items to
//                        MAX trees (each tree takes at most one item)
//   Budgeted      f(S) = min(budget, |S ∩ R|)
//   GoemansRank   f(S) = min(beta + |S \ R|, |S|, alpha)
//   Table         f(S) = values[mask(S)]
//
// In Xos/Oxs trees a zero weight means the item is absent from the tree.

struct LinearPayload {
    std::vector<double> weights;
};
struct UnitDemandPayload {
    std::vector<double> weights;
};
struct XosPayload {
    std::vector<std::vector<double>> trees;
};
struct OxsPayload {
    std::vector<std::vector<double>> trees;
};
struct BudgetedPayload {
    ItemSet rset;
    std::int64_t budget = 0;
};
struct GoemansPayload {
    ItemSet rset;
    std::int64_t alpha = 0;
    std::int64_t beta = 0;
};
struct TablePayload {
    std::vector<double> values;  // indexed by subset mask, size 2^n
};

class Valuation {
public:
    enum class Kind { Linear, UnitDemand, Xos, Oxs, Budgeted, Goemans, Table };

    static Valuation linear(std::vector<double> weights);
    static Valuation unit_demand(std::vector<double> weights);
    static Valuation xos(std::uint32_t n, std::vector<std::vector<double>> trees);
    static Valuation oxs(std::uint32_t n, std::vector<std::vector<double>> trees);
    static Valuation budgeted_additive(ItemSet rset, std::int64_t budget);
    static Valuation goemans_rank(ItemSet rset, std::int64_t alpha, std::int64_t beta);
    static Valuation table(std::uint32_t n, std::vector<double> values);

    Kind kind() const { return kind_; }
    std::uint32_t ground_size() const { return n_; }
    std::string kind_name() const;

    double eval(const ItemSet& s) const;

    // Same valuation with every weight (or table entry) multiplied by c;
    // only defined for the weight-payload variants.
    Valuation scaled(double c) const;

    const LinearPayload& as_linear() const;
    const UnitDemandPayload& as_unit_demand() const;
    const XosPayload& as_xos() const;
    const OxsPayload& as_oxs() const;
    const BudgetedPayload& as_budgeted() const;
    const GoemansPayload& as_goemans() const;
    const TablePayload& as_table() const;

private:
    Valuation(Kind kind, std::uint32_t n) : kind_(kind), n_(n) {}

    Kind kind_;
    std::uint32_t n_;
    std::variant<LinearPayload, UnitDemandPayload, XosPayload, OxsPayload, BudgetedPayload,
                 GoemansPayload, TablePayload>
        payload_{LinearPayload{}};
};

// Exhaustive reference evaluator for Oxs: dynamic program over
// (next item, set of trees already holding an item), which walks every
// canonical assignment of S's items to trees-or-discard.  Exponential in
// the tree count; requires |S| <= 12 and at most 8 trees.
double eval_oxs_bruteforce(const Valuation& v, const ItemSet& s);

// All subsets maximizing f(S) - sum of prices over S.  Requires n <= 20;
// ties within 1e-9 of the best payoff are all returned, in mask order.
std::vector<ItemSet> demand_set(const Valuation& v, const std::vector<double>& prices);

}  // namespace vallearn
