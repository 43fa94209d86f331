#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "vallearn/distributions.hpp"
#include "vallearn/hypothesis.hpp"
#include "vallearn/linsep.hpp"
#include "vallearn/query_learners.hpp"
#include "vallearn/rng.hpp"
#include "vallearn/valuation.hpp"

namespace vallearn {

// Take-it-or-leave-it access to a hidden valuation: the only observable is
// whether a bundle sells at a quoted price (price <= value).  The target
// must be integral and bounded by H; both are validated up front —
// exhaustively for n <= 20, on singletons, the full set and 1000 seeded
// random sets otherwise.
class AgentOracle {
public:
    AgentOracle(Valuation target, std::int64_t H);

    std::uint32_t ground_size() const { return target_.ground_size(); }
    std::int64_t value_bound() const { return H_; }

    bool buy(const ItemSet& bundle, double price) const {
        ++rounds_;
        return price <= target_.eval(bundle);
    }
    std::size_t rounds() const { return rounds_; }

private:
    Valuation target_;
    std::int64_t H_;
    mutable std::size_t rounds_ = 0;
};

// Geometric price grid {(1+eta/3)^i : i = 0..N+1} with
// N = floor(log_{1+eta/3} H); exactly N+2 prices.  For every integer value
// v in [1, H] the grid has a price in (v/(1+eta/3), v] and one in
// (v, v*(1+eta/3)].
struct PriceGrid {
    double eta = 1.0;
    std::int64_t H = 1;
    std::vector<double> prices;

    static PriceGrid make(std::int64_t H, double eta);
};

// Labeled separator point for one pricing round: a sale yields
// (features(S), q^p) labeled +1, a pass yields
// (features(S), approx_beta * q^p) labeled -1.
LabeledPoint quote_and_label(const ItemSet& bundle, double price, bool bought,
                             double approx_beta, double p);

struct DecisionRecord {
    std::size_t round = 0;
    ItemSet set{0};
    double price = 0.0;
    bool bought = false;
    bool exploration = true;
};

struct PriceLearnConfig {
    double approx_beta = 1.0;  // class promise: w with w·x <= f*^p <= beta * w·x
    double p = 1.0;
    double eta = 1.0;   // grid resolution
    double eps = 0.25;  // PMAC miss mass (drives the default round count)
    double delta = 0.25;
    std::size_t rounds = 0;  // 0 = default_price_rounds
};

struct PriceLearnResult {
    RootedLinearHypothesis hyp;
    std::vector<DecisionRecord> log;
    std::size_t zero_rounds = 0;  // rounds that hit the no-sale-at-price-1 rule
};

// ceil(4 * (n log2 H / (eta eps)) * ln(n log2 H / (eta eps delta))).
std::size_t default_price_rounds(std::uint32_t n, std::int64_t H, double eta, double eps,
                                 double delta);

// Posted-price learner: each round draws a bundle from D and a uniformly
// random grid price, observes only the sale bit, and labels the round as
// above.  A pass at price 1 certifies value 0 (integrality) and feeds the
// zero-subcube instead of the separator.  The hypothesis deflates the
// separator estimate by 1/(1+eta/3):
//   predict(S) = (w · features(S) / (approx_beta * z))^(1/p) / (1+eta/3).
PriceLearnResult pmac_with_prices(const AgentOracle& agent, const Distribution& dist,
                                  const PriceLearnConfig& config, Rng& rng);

// Same learner interleaved with live pricing: with probability
// 1 - explore_prob the round quotes base_pricer(S) and is only logged;
// exploration rounds quote a random grid price and train the hypothesis.
PriceLearnResult mixed_pricing(const AgentOracle& agent, const Distribution& dist,
                               const std::function<double(const ItemSet&)>& base_pricer,
                               double explore_prob, const PriceLearnConfig& config, Rng& rng);

// Binary-search-by-doubling on one item with prices 1, 2, 4, ..., H
// (H a power of two): returns the largest selling price, or 0 when the
// item does not sell at 1.  The result v satisfies v <= f*({i}) <= 2v
// whenever f*({i}) >= 1.
std::int64_t probe_item_value(const AgentOracle& agent, std::uint32_t item, std::int64_t H);

// Item-based hypothesis (as in vq_learn_item_based) built from probed
// singleton values.  Probing is 2-approximate, so the sandwich holds with
// factor 2R: predict(S) <= f*(S) <= 2R * predict(S).
ItemBasedHypothesis vq_with_prices(const AgentOracle& agent, ClassTag tag, double R);

}  // namespace vallearn
