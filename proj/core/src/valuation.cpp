#include "vallearn/valuation.hpp"

#include <algorithm>
#include <cmath>

#include "vallearn/error.hpp"
#include "vallearn/matching.hpp"

namespace vallearn {
namespace {

void require_weights(const std::vector<double>& w, const char* what) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!(w[i] >= 0.0) || !std::isfinite(w[i]))
            throw Error(std::string(what) + "[" + std::to_string(i) +
                        "]: weight must be finite and nonnegative (got " + std::to_string(w[i]) +
                        ")");
    }
}

void require_trees(const std::vector<std::vector<double>>& trees, std::uint32_t n,
                   const char* what) {
    for (std::size_t t = 0; t < trees.size(); ++t) {
        if (trees[t].size() != n)
            throw Error(std::string(what) + "[" + std::to_string(t) + "]: expected " +
                        std::to_string(n) + " weights, got " + std::to_string(trees[t].size()));
        require_weights(trees[t], what);
    }
}

double linear_eval(const std::vector<double>& w, const ItemSet& s) {
    double total = 0.0;
    for (std::uint32_t i : s.indices()) total += w[i];
    return total;
}

double unit_demand_eval(const std::vector<double>& w, const ItemSet& s) {
    double best = 0.0;
    for (std::uint32_t i : s.indices()) best = std::max(best, w[i]);
    return best;
}

double xos_eval(const XosPayload& p, const ItemSet& s) {
    double best = 0.0;
    for (const auto& tree : p.trees) {
        double sum = 0.0;
        for (std::uint32_t i : s.indices()) sum += tree[i];
        best = std::max(best, sum);
    }
    return best;
}

double oxs_eval(const OxsPayload& p, const ItemSet& s) {
    if (p.trees.empty() || s.empty()) return 0.0;
    std::vector<std::vector<double>> w(s.count(), std::vector<double>(p.trees.size()));
    for (std::size_t r = 0; r < s.count(); ++r) {
        std::uint32_t item = s.indices()[r];
        for (std::size_t t = 0; t < p.trees.size(); ++t) w[r][t] = p.trees[t][item];
    }
    return max_weight_bipartite_matching(w).total;
}

}  // namespace

Valuation Valuation::linear(std::vector<double> weights) {
    require_weights(weights, "weights");
    Valuation v(Kind::Linear, static_cast<std::uint32_t>(weights.size()));
    v.payload_ = LinearPayload{std::move(weights)};
    return v;
}

Valuation Valuation::unit_demand(std::vector<double> weights) {
    require_weights(weights, "weights");
    Valuation v(Kind::UnitDemand, static_cast<std::uint32_t>(weights.size()));
    v.payload_ = UnitDemandPayload{std::move(weights)};
    return v;
}

Valuation Valuation::xos(std::uint32_t n, std::vector<std::vector<double>> trees) {
    require_trees(trees, n, "trees");
    Valuation v(Kind::Xos, n);
    v.payload_ = XosPayload{std::move(trees)};
    return v;
}

Valuation Valuation::oxs(std::uint32_t n, std::vector<std::vector<double>> trees) {
    require_trees(trees, n, "trees");
    Valuation v(Kind::Oxs, n);
    v.payload_ = OxsPayload{std::move(trees)};
    return v;
}

Valuation Valuation::budgeted_additive(ItemSet rset, std::int64_t budget) {
    if (budget < 0) throw Error("budget: must be nonnegative");
    Valuation v(Kind::Budgeted, rset.ground_size());
    v.payload_ = BudgetedPayload{std::move(rset), budget};
    return v;
}

Valuation Valuation::goemans_rank(ItemSet rset, std::int64_t alpha, std::int64_t beta) {
    if (alpha < 0) throw Error("alpha: must be nonnegative");
    if (beta < 0) throw Error("beta: must be nonnegative");
    Valuation v(Kind::Goemans, rset.ground_size());
    v.payload_ = GoemansPayload{std::move(rset), alpha, beta};
    return v;
}

Valuation Valuation::table(std::uint32_t n, std::vector<double> values) {
    if (n > 20) throw Error("table: ground size must be <= 20");
    if (values.size() != (std::size_t(1) << n))
        throw Error("values: expected " + std::to_string(std::size_t(1) << n) +
                    " entries for n=" + std::to_string(n) + ", got " +
                    std::to_string(values.size()));
    require_weights(values, "values");
    if (values[0] != 0.0) throw Error("values[0]: the empty set must have value 0");
    Valuation v(Kind::Table, n);
    v.payload_ = TablePayload{std::move(values)};
    return v;
}

std::string Valuation::kind_name() const {
    switch (kind_) {
        case Kind::Linear: return "linear";
        case Kind::UnitDemand: return "unit_demand";
        case Kind::Xos: return "xos";
        case Kind::Oxs: return "oxs";
        case Kind::Budgeted: return "budgeted_additive";
        case Kind::Goemans: return "goemans_rank";
        case Kind::Table: return "table";
    }
    return "?";
}

double Valuation::eval(const ItemSet& s) const {
    if (s.ground_size() != n_)
        throw Error("eval: set ground size " + std::to_string(s.ground_size()) +
                    " does not match valuation ground size " + std::to_string(n_));
    switch (kind_) {
        case Kind::Linear: return linear_eval(std::get<LinearPayload>(payload_).weights, s);
        case Kind::UnitDemand:
            return unit_demand_eval(std::get<UnitDemandPayload>(payload_).weights, s);
        case Kind::Xos: return xos_eval(std::get<XosPayload>(payload_), s);
        case Kind::Oxs: return oxs_eval(std::get<OxsPayload>(payload_), s);
        case Kind::Budgeted: {
            const auto& p = std::get<BudgetedPayload>(payload_);
            auto inter = static_cast<std::int64_t>(s.intersection_count(p.rset));
            return static_cast<double>(std::min(p.budget, inter));
        }
        case Kind::Goemans: {
            const auto& p = std::get<GoemansPayload>(payload_);
            auto size = static_cast<std::int64_t>(s.count());
            auto outside = static_cast<std::int64_t>(size - s.intersection_count(p.rset));
            return static_cast<double>(std::min({p.beta + outside, size, p.alpha}));
        }
        case Kind::Table: {
            const auto& p = std::get<TablePayload>(payload_);
            return p.values[s.to_mask()];
        }
    }
    throw Error("eval: unknown valuation kind");
}

Valuation Valuation::scaled(double c) const {
    if (!(c >= 0.0) || !std::isfinite(c)) throw Error("scaled: factor must be >= 0");
    switch (kind_) {
        case Kind::Linear: {
            auto w = as_linear().weights;
            for (double& x : w) x *= c;
            return linear(std::move(w));
        }
        case Kind::UnitDemand: {
            auto w = as_unit_demand().weights;
            for (double& x : w) x *= c;
            return unit_demand(std::move(w));
        }
        case Kind::Xos: {
            auto trees = as_xos().trees;
            for (auto& t : trees)
                for (double& x : t) x *= c;
            return xos(n_, std::move(trees));
        }
        case Kind::Oxs: {
            auto trees = as_oxs().trees;
            for (auto& t : trees)
                for (double& x : t) x *= c;
            return oxs(n_, std::move(trees));
        }
        case Kind::Table: {
            auto vals = as_table().values;
            for (double& x : vals) x *= c;
            return table(n_, std::move(vals));
        }
        default:
            throw Error("scaled: " + kind_name() + " has no weight payload to scale");
    }
}

const LinearPayload& Valuation::as_linear() const {
    if (kind_ != Kind::Linear) throw Error("as_linear: valuation is " + kind_name());
    return std::get<LinearPayload>(payload_);
}
const UnitDemandPayload& Valuation::as_unit_demand() const {
    if (kind_ != Kind::UnitDemand) throw Error("as_unit_demand: valuation is " + kind_name());
    return std::get<UnitDemandPayload>(payload_);
}
const XosPayload& Valuation::as_xos() const {
    if (kind_ != Kind::Xos) throw Error("as_xos: valuation is " + kind_name());
    return std::get<XosPayload>(payload_);
}
const OxsPayload& Valuation::as_oxs() const {
    if (kind_ != Kind::Oxs) throw Error("as_oxs: valuation is " + kind_name());
    return std::get<OxsPayload>(payload_);
}
const BudgetedPayload& Valuation::as_budgeted() const {
    if (kind_ != Kind::Budgeted) throw Error("as_budgeted: valuation is " + kind_name());
    return std::get<BudgetedPayload>(payload_);
}
const GoemansPayload& Valuation::as_goemans() const {
    if (kind_ != Kind::Goemans) throw Error("as_goemans: valuation is " + kind_name());
    return std::get<GoemansPayload>(payload_);
}
const TablePayload& Valuation::as_table() const {
    if (kind_ != Kind::Table) throw Error("as_table: valuation is " + kind_name());
    return std::get<TablePayload>(payload_);
}

double eval_oxs_bruteforce(const Valuation& v, const ItemSet& s) {
    const auto& trees = v.as_oxs().trees;
    if (s.count() > 12) throw Error("eval_oxs_bruteforce: |S| must be <= 12");
    if (trees.size() > 8) throw Error("eval_oxs_bruteforce: tree count must be <= 8");
    const auto& items = s.indices();
    const std::size_t k = trees.size();
    if (k == 0 || items.empty()) return 0.0;

    // best[mask] = best value over assignments of the items seen so far
    // where `mask` is the set of trees already holding their (single
    // effective) item.  Each step either discards the next item or gives
    // it to a free tree.
    std::vector<double> best(std::size_t(1) << k, 0.0);
    for (std::uint32_t item : items) {
        std::vector<double> next = best;  // discard branch
        for (std::size_t mask = 0; mask < best.size(); ++mask) {
            for (std::size_t t = 0; t < k; ++t) {
                if (mask & (std::size_t(1) << t)) continue;
                double cand = best[mask] + trees[t][item];
                std::size_t to = mask | (std::size_t(1) << t);
                if (cand > next[to]) next[to] = cand;
            }
        }
        best.swap(next);
    }
    return *std::max_element(best.begin(), best.end());
}

std::vector<ItemSet> demand_set(const Valuation& v, const std::vector<double>& prices) {
    const std::uint32_t n = v.ground_size();
    if (n > 20) throw Error("demand_set: requires n <= 20");
    if (prices.size() != n)
        throw Error("prices: expected " + std::to_string(n) + " entries, got " +
                    std::to_string(prices.size()));
    double best = 0.0;  // empty set payoff
    std::vector<double> payoff(std::size_t(1) << n);
    for (std::uint64_t mask = 0; mask < payoff.size(); ++mask) {
        ItemSet s = ItemSet::from_mask(n, mask);
        double p = v.eval(s);
        for (std::uint32_t i : s.indices()) p -= prices[i];
        payoff[mask] = p;
        best = std::max(best, p);
    }
    std::vector<ItemSet> out;
    for (std::uint64_t mask = 0; mask < payoff.size(); ++mask)
        if (payoff[mask] >= best - 1e-9) out.push_back(ItemSet::from_mask(n, mask));
    return out;
}

}  // namespace vallearn
