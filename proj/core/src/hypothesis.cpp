#include "vallearn/hypothesis.hpp"

#include <algorithm>
#include <cmath>

#include "vallearn/error.hpp"

namespace vallearn {
namespace {

// Binomials up to the 1e6 feature guard never overflow a double exactly
// (all values < 2^53 by the guard on totals).
double binom(std::uint32_t n, std::uint32_t k) {
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (std::uint32_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

std::size_t checked_feature_count(std::uint32_t n, std::uint32_t degree) {
    double total = 0.0;
    for (std::uint32_t j = 1; j <= degree && j <= n; ++j) {
        total += binom(n, j);
        if (total > 1e6) throw Error("features: more than 1e6 subset features requested");
    }
    return static_cast<std::size_t>(total);
}

// Lexicographic rank of a sorted size-k combination over [0, n).
std::size_t combo_rank(const std::vector<std::uint32_t>& combo, std::uint32_t n) {
    const std::uint32_t k = static_cast<std::uint32_t>(combo.size());
    std::size_t rank = 0;
    std::uint32_t prev = 0;
    for (std::uint32_t i = 0; i < k; ++i) {
        for (std::uint32_t v = prev; v < combo[i]; ++v)
            rank += static_cast<std::size_t>(binom(n - 1 - v, k - 1 - i));
        prev = combo[i] + 1;
    }
    return rank;
}

// Visit every nonempty subset of s.indices() with size <= degree, calling
// fn(combo) with the sorted member list.
template <typename Fn>
void for_each_subset(const ItemSet& s, std::uint32_t degree, Fn&& fn) {
    const auto& items = s.indices();
    std::vector<std::uint32_t> combo;
    auto walk = [&](auto&& self, std::size_t from) -> void {
        if (combo.size() == degree) return;
        for (std::size_t i = from; i < items.size(); ++i) {
            combo.push_back(items[i]);
            fn(combo);
            self(self, i + 1);
            combo.pop_back();
        }
    };
    walk(walk, 0);
}

}  // namespace

std::size_t Featurizer::feature_count(std::uint32_t n) const {
    if (kind == Kind::Raw) return n;
    return checked_feature_count(n, degree);
}

std::vector<double> Featurizer::features(const ItemSet& s) const {
    const std::uint32_t n = s.ground_size();
    if (kind == Kind::Raw) {
        std::vector<double> phi(n, 0.0);
        for (std::uint32_t i : s.indices()) phi[i] = 1.0;
        return phi;
    }
    std::vector<double> phi(feature_count(n), 0.0);
    std::size_t offset_cache[64];
    std::size_t off = 0;
    for (std::uint32_t j = 1; j <= degree; ++j) {
        offset_cache[j] = off;
        off += static_cast<std::size_t>(binom(n, j));
    }
    for_each_subset(s, degree, [&](const std::vector<std::uint32_t>& combo) {
        phi[offset_cache[combo.size()] + combo_rank(combo, n)] = 1.0;
    });
    return phi;
}

double Featurizer::dot(const std::vector<double>& w, const ItemSet& s) const {
    const std::uint32_t n = s.ground_size();
    if (kind == Kind::Raw) {
        double total = 0.0;
        for (std::uint32_t i : s.indices()) total += w[i];
        return total;
    }
    std::size_t offsets[64];
    std::size_t off = 0;
    for (std::uint32_t j = 1; j <= degree; ++j) {
        offsets[j] = off;
        off += static_cast<std::size_t>(binom(n, j));
    }
    double total = 0.0;
    for_each_subset(s, degree, [&](const std::vector<std::uint32_t>& combo) {
        total += w[offsets[combo.size()] + combo_rank(combo, n)];
    });
    return total;
}

std::vector<std::size_t> Featurizer::features_touching(const ItemSet& touched,
                                                       std::uint32_t n) const {
    std::vector<std::size_t> out;
    if (kind == Kind::Raw) {
        for (std::uint32_t i : touched.indices()) out.push_back(i);
        return out;
    }
    // Enumerate features in id order and keep those meeting `touched`.
    std::size_t id = 0;
    for (std::uint32_t size = 1; size <= degree && size <= n; ++size) {
        std::vector<std::uint32_t> combo(size);
        for (std::uint32_t i = 0; i < size; ++i) combo[i] = i;
        for (;;) {
            bool meets = false;
            for (std::uint32_t v : combo)
                if (touched.contains(v)) {
                    meets = true;
                    break;
                }
            if (meets) out.push_back(id);
            ++id;
            std::int64_t pos = size - 1;
            while (pos >= 0 && combo[pos] == n - size + pos) --pos;
            if (pos < 0) break;
            ++combo[pos];
            for (std::uint32_t j = pos + 1; j < size; ++j) combo[j] = combo[j - 1] + 1;
        }
    }
    return out;
}

std::vector<double> expand_features(const ItemSet& s, std::uint32_t L) {
    return Featurizer::subsets(L).features(s);
}

double RootedLinearHypothesis::predict(const ItemSet& s) const {
    if (s.is_subset_of(u0)) return 0.0;
    const double lin = featurizer.dot(w, s);
    if (lin <= 0.0) return 0.0;
    return outer_scale * std::pow(lin / (r_eps * z), 1.0 / p);
}

double UnitDemandHypothesis::predict(const ItemSet& s) const {
    double best = 0.0;
    for (std::uint32_t i : s.indices()) best = std::max(best, item_values[i]);
    return best;
}

double ItemBasedHypothesis::predict(const ItemSet& s) const {
    if (form == Form::Max) {
        double best = 0.0;
        for (std::uint32_t i : s.indices()) best = std::max(best, item_values[i]);
        return best;
    }
    double sum = 0.0;
    for (std::uint32_t i : s.indices()) sum += item_values[i];
    return sum / r;
}

double MetaUnitDemandHypothesis::predict(const ItemSet& s) const {
    double best = 0.0;
    for (std::size_t id : index.ids_within(s)) best = std::max(best, values[id]);
    return best;
}

double predict(const Hypothesis& h, const ItemSet& s) {
    return std::visit([&](const auto& hyp) { return hyp.predict(s); }, h);
}

}  // namespace vallearn
