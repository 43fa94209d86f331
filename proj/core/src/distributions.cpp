#include "vallearn/distributions.hpp"

#include <cmath>

#include "vallearn/error.hpp"

namespace vallearn {

Distribution Distribution::uniform_subsets(std::uint32_t n) {
    Distribution d;
    d.kind_ = Kind::Uniform;
    d.n_ = n;
    return d;
}

Distribution Distribution::product(std::vector<double> probs) {
    for (std::size_t i = 0; i < probs.size(); ++i)
        if (!(probs[i] >= 0.0 && probs[i] <= 1.0))
            throw Error("probs[" + std::to_string(i) + "]: must lie in [0,1]");
    Distribution d;
    d.kind_ = Kind::Product;
    d.n_ = static_cast<std::uint32_t>(probs.size());
    d.probs_ = std::move(probs);
    return d;
}

Distribution Distribution::uniform_over_family(std::vector<ItemSet> sets) {
    if (sets.empty()) throw Error("uniform_over_family: need at least one set");
    for (std::size_t i = 1; i < sets.size(); ++i)
        if (sets[i].ground_size() != sets[0].ground_size())
            throw Error("uniform_over_family: sets[" + std::to_string(i) +
                        "] ground size differs from sets[0]");
    Distribution d;
    d.kind_ = Kind::Family;
    d.n_ = sets[0].ground_size();
    d.family_ = std::move(sets);
    return d;
}

Distribution Distribution::mixture(std::vector<std::pair<double, Distribution>> components) {
    if (components.empty()) throw Error("mixture: need at least one component");
    Distribution d;
    d.kind_ = Kind::Mixture;
    d.n_ = components[0].second.ground_size();
    double total = 0.0;
    for (std::size_t i = 0; i < components.size(); ++i) {
        auto& [weight, comp] = components[i];
        if (!(weight > 0.0))
            throw Error("mixture: component " + std::to_string(i) + " weight must be positive");
        if (comp.ground_size() != d.n_)
            throw Error("mixture: component " + std::to_string(i) + " ground size differs");
        total += weight;
        d.weights_.push_back(weight);
        d.components_.push_back(std::move(comp));
    }
    for (double& w : d.weights_) w /= total;
    return d;
}

ItemSet Distribution::sample(Rng& rng) const {
    switch (kind_) {
        case Kind::Uniform: {
            std::vector<std::uint32_t> items;
            for (std::uint32_t i = 0; i < n_; ++i)
                if (rng.next_u64() & 1) items.push_back(i);
            return ItemSet::from_indices(n_, std::move(items));
        }
        case Kind::Product: {
            std::vector<std::uint32_t> items;
            for (std::uint32_t i = 0; i < n_; ++i)
                if (rng.bernoulli(probs_[i])) items.push_back(i);
            return ItemSet::from_indices(n_, std::move(items));
        }
        case Kind::Family:
            return family_[rng.below(family_.size())];
        case Kind::Mixture: {
            double u = rng.uniform01();
            for (std::size_t i = 0; i < weights_.size(); ++i) {
                if (u < weights_[i] || i + 1 == weights_.size())
                    return components_[i].sample(rng);
                u -= weights_[i];
            }
        }
    }
    throw Error("Distribution::sample: unknown kind");
}

}  // namespace vallearn
