#include "vallearn/price_learning.hpp"

#include <algorithm>
#include <cmath>

#include "vallearn/error.hpp"

namespace vallearn {
namespace {

void require_integral_bounded(const Valuation& v, std::int64_t H, const ItemSet& s) {
    const double value = v.eval(s);
    if (std::fabs(value - std::round(value)) > 1e-9)
        throw Error("AgentOracle: target is not integral (f = " + std::to_string(value) +
                    " on a " + std::to_string(s.count()) + "-item set)");
    if (value > static_cast<double>(H) + 1e-9)
        throw Error("AgentOracle: target exceeds H = " + std::to_string(H) + " (f = " +
                    std::to_string(value) + ")");
}

RootedLinearHypothesis learn_from_rounds(std::uint32_t n,
                                         const std::vector<DecisionRecord>& rounds,
                                         const PriceLearnConfig& config,
                                         std::size_t* zero_rounds) {
    ItemSet u0(n);
    std::vector<LabeledPoint> points;
    for (const auto& rec : rounds) {
        if (!rec.exploration) continue;
        if (!rec.bought && rec.price == 1.0) {
            u0 = u0.set_union(rec.set);
            ++*zero_rounds;
            continue;
        }
        points.push_back(
            quote_and_label(rec.set, rec.price, rec.bought, config.approx_beta, config.p));
    }

    SeparatorProblem problem;
    problem.dim = n;
    problem.points = std::move(points);
    for (std::uint32_t i : u0.indices()) problem.zero_coords.push_back(i);

    SeparatorSolution sep = solve_consistent_separator(problem);
    if (!sep.feasible)
        throw Error("pmac_with_prices: no consistent separator; the target does not satisfy "
                    "the promised (approx_beta, p) linear form");

    RootedLinearHypothesis hyp;
    hyp.n = n;
    hyp.featurizer = Featurizer::raw();
    hyp.w = std::move(sep.w);
    hyp.z = sep.z;
    hyp.p = config.p;
    hyp.r_eps = config.approx_beta;
    hyp.outer_scale = 1.0 / (1.0 + config.eta / 3.0);
    hyp.u0 = std::move(u0);
    return hyp;
}

void require_config(const PriceLearnConfig& config) {
    if (!(config.approx_beta >= 1.0))
        throw Error("approx_beta: must be >= 1");
    if (!(config.p >= 1.0)) throw Error("p: must be >= 1");
    if (!(config.eta > 0.0)) throw Error("eta: must be positive");
    if (!(config.eps > 0.0) || !(config.delta > 0.0))
        throw Error("eps/delta: must be positive");
}

}  // namespace

AgentOracle::AgentOracle(Valuation target, std::int64_t H)
    : target_(std::move(target)), H_(H) {
    if (H_ < 1) throw Error("AgentOracle: H must be >= 1");
    const std::uint32_t n = target_.ground_size();
    if (n <= 20) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask)
            require_integral_bounded(target_, H_, ItemSet::from_mask(n, mask));
    } else {
        for (std::uint32_t i = 0; i < n; ++i)
            require_integral_bounded(target_, H_, ItemSet::singleton(n, i));
        require_integral_bounded(target_, H_, ItemSet::full(n));
        Rng spot(0x5eedf00dULL);
        for (int k = 0; k < 1000; ++k) {
            std::vector<std::uint32_t> items;
            for (std::uint32_t i = 0; i < n; ++i)
                if (spot.next_u64() & 1) items.push_back(i);
            require_integral_bounded(target_, H_, ItemSet::from_indices(n, std::move(items)));
        }
    }
}

PriceGrid PriceGrid::make(std::int64_t H, double eta) {
    if (H < 1) throw Error("PriceGrid: H must be >= 1");
    if (!(eta > 0.0)) throw Error("PriceGrid: eta must be positive");
    const double ratio = 1.0 + eta / 3.0;
    const auto N = static_cast<std::int64_t>(
        std::floor(std::log(static_cast<double>(H)) / std::log(ratio)));
    PriceGrid grid;
    grid.eta = eta;
    grid.H = H;
    grid.prices.reserve(static_cast<std::size_t>(N) + 2);
    double q = 1.0;
    for (std::int64_t i = 0; i <= N + 1; ++i) {
        grid.prices.push_back(q);
        q *= ratio;
    }
    return grid;
}

LabeledPoint quote_and_label(const ItemSet& bundle, double price, bool bought,
                             double approx_beta, double p) {
    LabeledPoint pt;
    pt.x.assign(bundle.ground_size() + 1, 0.0);
    for (std::uint32_t i : bundle.indices()) pt.x[i] = 1.0;
    const double qp = std::pow(price, p);
    if (bought) {
        pt.x[bundle.ground_size()] = qp;
        pt.label = +1;
    } else {
        pt.x[bundle.ground_size()] = approx_beta * qp;
        pt.label = -1;
    }
    return pt;
}

std::size_t default_price_rounds(std::uint32_t n, std::int64_t H, double eta, double eps,
                                 double delta) {
    if (!(eta > 0.0) || !(eps > 0.0) || !(delta > 0.0))
        throw Error("default_price_rounds: eta, eps, delta must be positive");
    const double base = n * std::log2(std::max<double>(2.0, static_cast<double>(H))) /
                        (eta * eps);
    const double arg = std::max(std::exp(1.0), base / delta);
    return static_cast<std::size_t>(std::ceil(4.0 * base * std::log(arg)));
}

PriceLearnResult pmac_with_prices(const AgentOracle& agent, const Distribution& dist,
                                  const PriceLearnConfig& config, Rng& rng) {
    return mixed_pricing(agent, dist, nullptr, 1.0, config, rng);
}

PriceLearnResult mixed_pricing(const AgentOracle& agent, const Distribution& dist,
                               const std::function<double(const ItemSet&)>& base_pricer,
                               double explore_prob, const PriceLearnConfig& config, Rng& rng) {
    require_config(config);
    if (!(explore_prob >= 0.0 && explore_prob <= 1.0))
        throw Error("explore_prob: must lie in [0,1]");
    if (explore_prob < 1.0 && !base_pricer)
        throw Error("mixed_pricing: base_pricer required when explore_prob < 1");
    const std::uint32_t n = agent.ground_size();
    if (dist.ground_size() != n)
        throw Error("mixed_pricing: distribution ground size " +
                    std::to_string(dist.ground_size()) + " does not match the agent's " +
                    std::to_string(n));

    const PriceGrid grid = PriceGrid::make(agent.value_bound(), config.eta);
    const std::size_t rounds = config.rounds > 0
                                   ? config.rounds
                                   : default_price_rounds(n, agent.value_bound(), config.eta,
                                                          config.eps, config.delta);

    Rng draw = rng.fork(0xd0);
    PriceLearnResult result;
    result.log.reserve(rounds);
    for (std::size_t t = 0; t < rounds; ++t) {
        DecisionRecord rec;
        rec.round = t;
        rec.set = dist.sample(draw);
        rec.exploration = explore_prob >= 1.0 || draw.bernoulli(explore_prob);
        rec.price = rec.exploration ? grid.prices[draw.below(grid.prices.size())]
                                    : base_pricer(rec.set);
        rec.bought = agent.buy(rec.set, rec.price);
        result.log.push_back(std::move(rec));
    }
    result.hyp = learn_from_rounds(n, result.log, config, &result.zero_rounds);
    return result;
}

std::int64_t probe_item_value(const AgentOracle& agent, std::uint32_t item, std::int64_t H) {
    if (H < 1 || (H & (H - 1)) != 0)
        throw Error("probe_item_value: H must be a positive power of two");
    ItemSet s = ItemSet::singleton(agent.ground_size(), item);
    std::int64_t best = 0;
    for (std::int64_t q = 1; q <= H; q *= 2) {
        if (!agent.buy(s, static_cast<double>(q))) break;
        best = q;
    }
    return best;
}

ItemBasedHypothesis vq_with_prices(const AgentOracle& agent, ClassTag tag, double R) {
    if (!(R >= 1.0)) throw Error("vq_with_prices: R must be >= 1");
    const std::uint32_t n = agent.ground_size();
    std::int64_t pow2 = 1;
    while (pow2 < agent.value_bound()) pow2 *= 2;
    std::vector<double> probed(n);
    for (std::uint32_t i = 0; i < n; ++i)
        probed[i] = static_cast<double>(probe_item_value(agent, i, pow2));

    ItemBasedHypothesis hyp;
    hyp.r = R;
    hyp.item_values = std::move(probed);
    hyp.form = (tag == ClassTag::OxsRLeaves || tag == ClassTag::XosRTrees)
                   ? ItemBasedHypothesis::Form::ScaledSum
                   : ItemBasedHypothesis::Form::Max;
    return hyp;
}

}  // namespace vallearn
