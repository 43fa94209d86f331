#include "vallearn/instances.hpp"

#include <algorithm>
#include <cmath>

#include "vallearn/convert.hpp"
#include "vallearn/error.hpp"
#include "vallearn/rng.hpp"

namespace vallearn {
namespace {

constexpr std::size_t kResampleCap = 10000;

ItemSet sample_sparse_set(std::uint32_t n, double include_prob, Rng& rng) {
    std::vector<std::uint32_t> items;
    for (std::uint32_t i = 0; i < n; ++i)
        if (rng.bernoulli(include_prob)) items.push_back(i);
    return ItemSet::from_indices(n, std::move(items));
}

}  // namespace

IntersectionFamily gen_intersection_family(std::uint32_t n, std::size_t k, std::uint64_t seed) {
    if (n < 1024 || (n & (n - 1)) != 0)
        throw Error("gen_intersection_family: n must be a power of two >= 1024");
    if (k < 2) throw Error("gen_intersection_family: k must be >= 2");

    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double lo = sqrt_n / 2.0, hi = 2.0 * sqrt_n;
    const auto cap = static_cast<std::size_t>(std::log2(static_cast<double>(n)));

    IntersectionFamily family;
    family.n = n;
    family.audit.size_lo = lo;
    family.audit.size_hi = hi;
    family.audit.intersection_cap = cap;

    Rng rng(seed);
    std::size_t resamples = 0;
    while (family.sets.size() < k) {
        ItemSet candidate = sample_sparse_set(n, 1.0 / sqrt_n, rng);
        const auto size = static_cast<double>(candidate.count());
        bool ok = size >= lo && size <= hi;
        for (std::size_t j = 0; ok && j < family.sets.size(); ++j)
            ok = candidate.intersection_count(family.sets[j]) <= cap;
        if (!ok) {
            if (++resamples > kResampleCap)
                throw Error("gen_intersection_family: exceeded " +
                            std::to_string(kResampleCap) + " resamples; parameters too tight");
            continue;
        }
        family.sets.push_back(std::move(candidate));
    }

    family.audit.resamples = resamples;
    for (const auto& s : family.sets) family.audit.sizes.push_back(s.count());
    for (std::size_t i = 0; i < family.sets.size(); ++i)
        for (std::size_t j = i + 1; j < family.sets.size(); ++j)
            family.audit.max_pairwise_intersection =
                std::max(family.audit.max_pairwise_intersection,
                         family.sets[i].intersection_count(family.sets[j]));
    return family;
}

Valuation build_fB(const IntersectionFamily& family, const std::vector<std::size_t>& members) {
    std::vector<std::vector<double>> trees;
    trees.reserve(members.size());
    for (std::size_t idx : members) {
        if (idx >= family.sets.size())
            throw Error("members: index " + std::to_string(idx) + " out of range [0," +
                        std::to_string(family.sets.size()) + ")");
        std::vector<double> tree(family.n, 0.0);
        for (std::uint32_t i : family.sets[idx].indices()) tree[i] = 1.0;
        trees.push_back(std::move(tree));
    }
    return Valuation::xos(family.n, std::move(trees));
}

GoemansPair gen_goemans_pair(std::uint32_t n, double x, std::uint64_t seed) {
    const double min_x = 4.0 * std::sqrt(std::log2(static_cast<double>(n)));
    if (!(x >= min_x))
        throw Error("gen_goemans_pair: x must be >= 4 sqrt(log2 n) = " + std::to_string(min_x));
    const auto alpha = static_cast<std::int64_t>(std::llround(x * std::sqrt(n) / 5.0));
    const auto beta = static_cast<std::int64_t>(std::llround(x * x / 5.0));
    if (alpha < 1 || alpha > n)
        throw Error("gen_goemans_pair: alpha = " + std::to_string(alpha) +
                    " falls outside [1, n]");

    Rng rng(seed);
    std::vector<std::uint32_t> pool(n);
    for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < static_cast<std::size_t>(alpha); ++i)
        std::swap(pool[i], pool[i + rng.below(n - i)]);
    pool.resize(static_cast<std::size_t>(alpha));
    ItemSet rset = ItemSet::from_indices(n, std::move(pool));

    GoemansPair pair{
        Valuation::budgeted_additive(ItemSet::full(n), alpha),
        Valuation::goemans_rank(rset, alpha, beta),
        build_oxs_budgeted(ItemSet::full(n), alpha),
        build_oxs_goemans(rset, alpha, beta, n),
        rset,
        alpha,
        beta,
    };
    return pair;
}

Valuation gen_random(const std::string& class_tag, std::uint32_t n, const GenParams& params,
                     std::uint64_t seed) {
    Rng rng(seed);
    auto weight = [&]() {
        double w = rng.uniform(params.weight_lo, params.weight_hi);
        return params.integer_weights ? std::round(w) : w;
    };
    auto weight_vector = [&]() {
        std::vector<double> w(n);
        for (auto& x : w) x = weight();
        return w;
    };
    auto sparse_tree = [&]() {
        std::vector<double> tree(n, 0.0);
        std::size_t leaves = params.max_leaves == 0
                                 ? n
                                 : std::min<std::size_t>(params.max_leaves, n);
        // choose `leaves` distinct items
        std::vector<std::uint32_t> pool(n);
        for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
        for (std::size_t i = 0; i < leaves; ++i)
            std::swap(pool[i], pool[i + rng.below(n - i)]);
        for (std::size_t i = 0; i < leaves; ++i) tree[pool[i]] = weight();
        return tree;
    };

    if (class_tag == "linear") return Valuation::linear(weight_vector());
    if (class_tag == "unit_demand") return Valuation::unit_demand(weight_vector());
    if (class_tag == "xos" || class_tag == "oxs") {
        std::vector<std::vector<double>> trees;
        for (std::size_t t = 0; t < params.trees; ++t) trees.push_back(sparse_tree());
        return class_tag == "xos" ? Valuation::xos(n, std::move(trees))
                                  : Valuation::oxs(n, std::move(trees));
    }
    if (class_tag == "table") {
        if (n > 16) throw Error("gen_random: table requires n <= 16");
        // Monotone by construction: each set adds a nonnegative increment
        // on top of the largest immediate subset.
        std::vector<double> values(std::size_t(1) << n, 0.0);
        for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
            double base = 0.0;
            for (std::uint32_t i = 0; i < n; ++i)
                if (mask & (1ULL << i)) base = std::max(base, values[mask & ~(1ULL << i)]);
            values[mask] = base + rng.uniform(0.0, params.weight_hi / n);
        }
        return Valuation::table(n, std::move(values));
    }
    throw Error("gen_random: unknown class tag '" + class_tag +
                "' (expected linear, unit_demand, xos, oxs or table)");
}

}  // namespace vallearn
