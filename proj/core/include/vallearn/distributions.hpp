#pragma once

#include <cstdint>
#include <vector>

#include "vallearn/item_set.hpp"
#include "vallearn/rng.hpp"

namespace vallearn {

// Sampling distribution over subsets of [n].  Variants:
//   uniform_subsets    every subset equally likely
//   product            item i included independently with probs[i]
//   uniform_over_family one of the given sets, uniformly
//   mixture            pick a component by weight, then sample it
class Distribution {
public:
    static Distribution uniform_subsets(std::uint32_t n);
    static Distribution product(std::vector<double> probs);
    static Distribution uniform_over_family(std::vector<ItemSet> sets);
    static Distribution mixture(std::vector<std::pair<double, Distribution>> components);

    std::uint32_t ground_size() const { return n_; }
    ItemSet sample(Rng& rng) const;

private:
    enum class Kind { Uniform, Product, Family, Mixture };

    Distribution() = default;

    Kind kind_ = Kind::Uniform;
    std::uint32_t n_ = 0;
    std::vector<double> probs_;
    std::vector<ItemSet> family_;
    std::vector<double> weights_;
    std::vector<Distribution> components_;
};

}  // namespace vallearn
