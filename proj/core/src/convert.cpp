#include "vallearn/convert.hpp"

#include <algorithm>
#include <numeric>

#include "vallearn/error.hpp"
#include "vallearn/oracles.hpp"

namespace vallearn {
namespace {

std::vector<double> indicator(const ItemSet& s) {
    std::vector<double> w(s.ground_size(), 0.0);
    for (std::uint32_t i : s.indices()) w[i] = 1.0;
    return w;
}

}  // namespace

Valuation build_oxs_budgeted(const ItemSet& rset, std::int64_t budget) {
    if (budget < 0) throw Error("budget: must be nonnegative");
    auto copies = std::min<std::int64_t>(budget, static_cast<std::int64_t>(rset.count()));
    std::vector<std::vector<double>> trees(static_cast<std::size_t>(copies), indicator(rset));
    return Valuation::oxs(rset.ground_size(), std::move(trees));
}

Valuation build_oxs_goemans(const ItemSet& rset, std::int64_t alpha, std::int64_t beta,
                            std::uint32_t n) {
    if (rset.ground_size() != n)
        throw Error("rset: ground size " + std::to_string(rset.ground_size()) +
                    " does not match n=" + std::to_string(n));
    if (alpha < 0) throw Error("alpha: must be nonnegative");
    if (beta < 0) throw Error("beta: must be nonnegative");

    if (static_cast<std::int64_t>(n) <= alpha) {
        // The |S| term never binds below alpha, so the function splits into
        // a budgeted part on rset plus one free item per element outside.
        std::vector<std::vector<double>> trees = build_oxs_budgeted(rset, beta).as_oxs().trees;
        const ItemSet outside = rset.complement();
        for (std::uint32_t e : outside.indices()) {
            std::vector<double> t(n, 0.0);
            t[e] = 1.0;
            trees.push_back(std::move(t));
        }
        return Valuation::oxs(n, std::move(trees));
    }
    if (alpha <= beta) return build_oxs_budgeted(ItemSet::full(n), alpha);

    std::vector<std::vector<double>> trees;
    auto outside = indicator(rset.complement());
    auto all = indicator(ItemSet::full(n));
    for (std::int64_t t = 0; t < alpha - beta; ++t) trees.push_back(outside);
    for (std::int64_t t = 0; t < beta; ++t) trees.push_back(all);
    return Valuation::oxs(n, std::move(trees));
}

Valuation oxs_to_xos(const Valuation& oxs) {
    const auto& trees = oxs.as_oxs().trees;
    const std::uint32_t n = oxs.ground_size();

    std::vector<std::vector<std::uint32_t>> leaves(trees.size());
    double combos = 1.0;
    for (std::size_t t = 0; t < trees.size(); ++t) {
        for (std::uint32_t i = 0; i < n; ++i)
            if (trees[t][i] > 0.0) leaves[t].push_back(i);
        combos *= static_cast<double>(leaves[t].size() + 1);
        if (combos > 1e6)
            throw Error("oxs_to_xos: leaf-tuple enumeration exceeds 1e6 combinations");
    }

    std::vector<std::vector<double>> out;
    std::vector<double> current(n, 0.0);
    std::vector<char> used(n, 0);
    std::size_t picked = 0;

    // Depth-first over (leaf-or-skip) choices per tree; skipping items that
    // an earlier tree already claimed keeps each SUM tree a valid one-item-
    // per-tree selection.
    auto walk = [&](auto&& self, std::size_t t) -> void {
        if (t == trees.size()) {
            if (picked > 0) out.push_back(current);
            return;
        }
        self(self, t + 1);  // skip this tree
        for (std::uint32_t item : leaves[t]) {
            if (used[item]) continue;
            used[item] = 1;
            current[item] = trees[t][item];
            ++picked;
            self(self, t + 1);
            --picked;
            current[item] = 0.0;
            used[item] = 0;
        }
    };
    walk(walk, 0);
    return Valuation::xos(n, std::move(out));
}

std::size_t MetaIndex::VecHash::operator()(const std::vector<std::uint32_t>& v) const {
    std::size_t h = 0x9e3779b97f4a7c15ULL ^ v.size();
    for (std::uint32_t x : v) h = (h ^ x) * 0x100000001b3ULL;
    return h;
}

MetaIndex::MetaIndex(std::uint32_t n, std::uint32_t max_size) : n_(n), max_size_(max_size) {
    sets_.push_back({});
    for (std::uint32_t size = 1; size <= max_size && size <= n; ++size) {
        std::vector<std::uint32_t> combo(size);
        std::iota(combo.begin(), combo.end(), 0);
        for (;;) {
            sets_.push_back(combo);
            if (sets_.size() > 1000000)
                throw Error("MetaIndex: more than 1e6 subsets of size <= " +
                            std::to_string(max_size) + " over " + std::to_string(n) + " items");
            // next lexicographic combination
            std::int64_t pos = size - 1;
            while (pos >= 0 && combo[pos] == n - size + pos) --pos;
            if (pos < 0) break;
            ++combo[pos];
            for (std::size_t j = pos + 1; j < size; ++j) combo[j] = combo[j - 1] + 1;
        }
    }
    ids_.reserve(sets_.size());
    for (std::size_t id = 0; id < sets_.size(); ++id) ids_.emplace(sets_[id], id);
}

std::size_t MetaIndex::id_of(const std::vector<std::uint32_t>& sorted_items) const {
    auto it = ids_.find(sorted_items);
    if (it == ids_.end()) throw Error("MetaIndex: subset not in the index");
    return it->second;
}

std::vector<std::size_t> MetaIndex::ids_within(const ItemSet& s) const {
    const auto& items = s.indices();
    std::vector<std::size_t> out{0};  // empty set
    std::vector<std::uint32_t> combo;
    auto walk = [&](auto&& self, std::size_t from) -> void {
        if (combo.size() == max_size_) return;
        for (std::size_t i = from; i < items.size(); ++i) {
            combo.push_back(items[i]);
            out.push_back(id_of(combo));
            self(self, i + 1);
            combo.pop_back();
        }
    };
    if (max_size_ > 0) walk(walk, 0);
    return out;
}

double MetaUnitDemand::eval(const ItemSet& s) const {
    double best = 0.0;
    for (std::size_t id : index.ids_within(s)) best = std::max(best, weights[id]);
    return best;
}

MetaUnitDemand oxs_to_unit_demand_meta(const Valuation& oxs) {
    const auto R = static_cast<std::uint32_t>(oxs.as_oxs().trees.size());
    MetaIndex index(oxs.ground_size(), R);
    std::vector<double> weights(index.count());
    for (std::size_t id = 0; id < index.count(); ++id)
        weights[id] = oxs.eval(ItemSet::from_indices(oxs.ground_size(), index.set_of(id)));
    return MetaUnitDemand{std::move(index), std::move(weights)};
}

Valuation submodular_to_xos(const Valuation& table) {
    const std::uint32_t n = table.ground_size();
    (void)table.as_table();
    if (n > 7) throw Error("submodular_to_xos: requires n <= 7 (n! trees)");
    if (auto m = check_monotone(table))
        throw Error("submodular_to_xos: input is not monotone: " + m->message);
    if (auto sm = check_submodular(table))
        throw Error("submodular_to_xos: input is not submodular: " + sm->message);

    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<double>> trees;
    do {
        std::vector<double> w(n, 0.0);
        ItemSet prefix(n);
        double prev = 0.0;
        for (std::uint32_t item : perm) {
            prefix.insert(item);
            double cur = table.eval(prefix);
            w[item] = cur - prev;
            prev = cur;
        }
        trees.push_back(std::move(w));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return Valuation::xos(n, std::move(trees));
}

}  // namespace vallearn
