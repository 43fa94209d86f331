#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "vallearn/error.hpp"
#include "vallearn/instances.hpp"
#include "vallearn/json_io.hpp"

using namespace vallearn;
using test_util::make_set;
using nlohmann::json;

namespace {

void check_equal_everywhere(const Valuation& a, const Valuation& b) {
    REQUIRE_EQ(a.ground_size(), b.ground_size());
    REQUIRE_LE(a.ground_size(), 16);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << a.ground_size()); ++mask) {
        ItemSet s = ItemSet::from_mask(a.ground_size(), mask);
        CHECK_EQ(a.eval(s), doctest::Approx(b.eval(s)));
    }
}

}  // namespace

TEST_CASE("valuations of every kind survive a json round trip") {
    std::vector<Valuation> fixtures;
    fixtures.push_back(Valuation::linear({1.0, 0.0, 2.5}));
    fixtures.push_back(Valuation::unit_demand({4.0, 2.0}));
    fixtures.push_back(Valuation::xos(3, {{1.0, 2.0, 0.0}, {0.0, 1.0, 3.0}}));
    fixtures.push_back(Valuation::oxs(3, {{5.0, 4.0, 0.0}, {0.0, 3.0, 1.0}}));
    fixtures.push_back(Valuation::budgeted_additive(make_set(5, {0, 2, 4}), 2));
    fixtures.push_back(Valuation::goemans_rank(make_set(6, {0, 1, 2}), 4, 1));
    fixtures.push_back(Valuation::table(2, {0.0, 1.0, 2.0, 2.5}));

    for (const auto& v : fixtures) {
        json j = to_json(v);
        CHECK(j.contains("n"));
        CHECK(j.contains("kind"));
        CHECK(j.contains("payload"));
        Valuation back = valuation_from_json(j);
        CHECK_EQ(back.kind(), v.kind());
        check_equal_everywhere(v, back);

        // Serialized text parses to the same object too.
        Valuation reparsed = valuation_from_json(json::parse(j.dump()));
        check_equal_everywhere(v, reparsed);
    }
}

TEST_CASE("xos payload stores sparse item-weight pairs") {
    json j = to_json(Valuation::xos(4, {{0.0, 2.0, 0.0, 1.0}}));
    const json& trees = j["payload"]["trees"];
    REQUIRE_EQ(trees.size(), 1);
    // Only the two nonzero leaves appear.
    REQUIRE_EQ(trees[0].size(), 2);
    CHECK_EQ(trees[0][0][0].get<int>(), 1);
    CHECK_EQ(trees[0][0][1].get<double>(), doctest::Approx(2.0));
    CHECK_EQ(trees[0][1][0].get<int>(), 3);
}

TEST_CASE("malformed valuation json errors name the offending field") {
    CHECK_THROWS_WITH_AS(valuation_from_json(json::parse("[]")),
                         doctest::Contains("object"), Error);
    CHECK_THROWS_WITH_AS(valuation_from_json(json::parse(R"({"n": 2})")),
                         doctest::Contains("kind"), Error);
    CHECK_THROWS_WITH_AS(
        valuation_from_json(json::parse(R"({"n": 2, "kind": "cactus", "payload": {}})")),
        doctest::Contains("cactus"), Error);
    // Wrong weight count.
    CHECK_THROWS_WITH_AS(
        valuation_from_json(
            json::parse(R"({"n": 3, "kind": "linear", "payload": {"weights": [1, 2]}})")),
        doctest::Contains("weights"), Error);
    // Duplicate item inside one tree.
    CHECK_THROWS_AS(
        valuation_from_json(json::parse(
            R"({"n": 3, "kind": "oxs", "payload": {"trees": [[[0, 1.0], [0, 2.0]]]}})")),
        Error);
    // Item index out of range.
    CHECK_THROWS_AS(
        valuation_from_json(json::parse(
            R"({"n": 3, "kind": "xos", "payload": {"trees": [[[7, 1.0]]]}})")),
        Error);
}

TEST_CASE("hypotheses survive a json round trip") {
    std::vector<Hypothesis> fixtures;

    RootedLinearHypothesis rl;
    rl.n = 4;
    rl.featurizer = Featurizer::subsets(2);
    rl.w = std::vector<double>(rl.featurizer.feature_count(4), 0.25);
    rl.z = 2.0;
    rl.p = 2.0;
    rl.r_eps = 4.5;
    rl.outer_scale = 0.75;
    rl.u0 = make_set(4, {3});
    fixtures.emplace_back(rl);

    fixtures.emplace_back(UnitDemandHypothesis{{1.0, 5.0, 2.0, 0.0}});
    fixtures.emplace_back(
        ItemBasedHypothesis{ItemBasedHypothesis::Form::ScaledSum, 3.0, {1.0, 2.0, 3.0, 4.0}});

    MetaIndex index(4, 2);
    std::vector<double> values(index.count(), 0.0);
    values[index.id_of({1, 2})] = 6.0;
    fixtures.emplace_back(MetaUnitDemandHypothesis{index, values});

    for (const auto& h : fixtures) {
        Hypothesis back = hypothesis_from_json(json::parse(to_json(h).dump()));
        CHECK_EQ(back.index(), h.index());
        for (std::uint64_t mask = 0; mask < 16; ++mask) {
            ItemSet s = ItemSet::from_mask(4, mask);
            CHECK_EQ(predict(back, s), doctest::Approx(predict(h, s)));
        }
    }
}

TEST_CASE("malformed hypothesis json errors name the offending field") {
    CHECK_THROWS_WITH_AS(hypothesis_from_json(json::parse(R"({"type": "svm"})")),
                         doctest::Contains("svm"), Error);
    CHECK_THROWS_WITH_AS(
        hypothesis_from_json(json::parse(
            R"({"type": "rooted_linear", "n": 3, "featurizer": {"kind": "raw", "degree": 1},
                "w": [1, 2], "z": 1, "p": 1, "r_eps": 1, "outer_scale": 1, "u0": []})")),
        doctest::Contains("w"), Error);
    CHECK_THROWS_WITH_AS(
        hypothesis_from_json(json::parse(
            R"({"type": "item_based", "form": "median", "r": 1, "item_values": [1]})")),
        doctest::Contains("median"), Error);
    CHECK_THROWS_WITH_AS(
        hypothesis_from_json(json::parse(
            R"({"type": "meta_unit_demand", "n": 3, "max_size": 2, "values": [1, 2]})")),
        doctest::Contains("values"), Error);
}

TEST_CASE("samples round trip through jsonl") {
    std::vector<Sample> samples = {{make_set(4, {0, 2}), 3.5},
                                   {ItemSet(4), 0.0},
                                   {make_set(4, {1, 2, 3}), 7.0}};
    std::string text = to_jsonl(samples, 4);
    auto back = samples_from_jsonl(text, 4);
    REQUIRE_EQ(back.size(), samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK_EQ(back[i].set, samples[i].set);
        CHECK_EQ(back[i].value, samples[i].value);
    }

    // Hand-written input with blank lines.
    auto parsed = samples_from_jsonl("{\"set\": [1], \"value\": 2}\n\n{\"set\": [], \"value\": 0}\n", 3);
    REQUIRE_EQ(parsed.size(), 2);
    CHECK_EQ(parsed[0].set, make_set(3, {1}));
    CHECK_EQ(parsed[1].set, ItemSet(3));

    // Errors carry the line number.
    CHECK_THROWS_WITH_AS(samples_from_jsonl("{\"set\": [0], \"value\": 1}\nnot json\n", 3),
                         doctest::Contains("line 2"), Error);
    CHECK_THROWS_WITH_AS(samples_from_jsonl("{\"set\": [9], \"value\": 1}\n", 3),
                         doctest::Contains("line 1"), Error);
}

TEST_CASE("intersection families round trip with their audit") {
    auto family = gen_intersection_family(1024, 5, 2);
    json j = to_json(family);
    auto back = family_from_json(j);
    CHECK_EQ(back.n, family.n);
    REQUIRE_EQ(back.sets.size(), family.sets.size());
    for (std::size_t i = 0; i < family.sets.size(); ++i) CHECK_EQ(back.sets[i], family.sets[i]);
    CHECK_EQ(back.audit.sizes, family.audit.sizes);
    CHECK_EQ(back.audit.max_pairwise_intersection, family.audit.max_pairwise_intersection);
    CHECK_EQ(back.audit.intersection_cap, family.audit.intersection_cap);
    CHECK_EQ(back.audit.size_lo, doctest::Approx(family.audit.size_lo));
    CHECK_EQ(back.audit.size_hi, doctest::Approx(family.audit.size_hi));
    CHECK_EQ(back.audit.resamples, family.audit.resamples);
}

TEST_CASE("experiment reports serialize infinities as strings") {
    ExperimentReport rep;
    rep.experiment_id = "e1";
    rep.seed = 9;
    rep.m = 100;
    rep.M = 50;
    rep.eps = 0.1;
    rep.alpha_hat = std::numeric_limits<double>::infinity();
    rep.violation_mass = 0.25;
    rep.wall_ms = 3.0;

    json j = to_json(rep);
    CHECK(j["alpha_hat"].is_string());
    CHECK_EQ(j["alpha_hat"].get<std::string>(), "inf");

    ExperimentReport back = report_from_json(json::parse(j.dump()));
    CHECK_EQ(back.experiment_id, "e1");
    CHECK_EQ(back.seed, 9);
    CHECK_EQ(back.m, 100);
    CHECK_EQ(back.M, 50);
    CHECK(std::isinf(back.alpha_hat));
    CHECK_EQ(back.violation_mass, doctest::Approx(0.25));

    CHECK_THROWS_WITH_AS(report_from_json(json::parse(R"({"experiment_id": "x"})")),
                         doctest::Contains("seed"), Error);
}

TEST_CASE("adversarial demo reports expose the audit and ratios") {
    AdversarialDemoReport rep;
    rep.n = 1024;
    rep.k = 8;
    rep.seed = 1;
    rep.train_draws = 8;
    rep.hidden_members = 4;
    rep.unseen_total = 3;
    rep.unseen_hidden = 2;
    rep.unseen_ratios = {4.0, std::numeric_limits<double>::infinity()};
    rep.median_factor = std::numeric_limits<double>::infinity();
    rep.floor_factor = 1.6;

    json j = to_json(rep);
    CHECK_EQ(j["n"].get<std::uint32_t>(), 1024);
    CHECK_EQ(j["unseen_ratios"][0].get<double>(), doctest::Approx(4.0));
    CHECK_EQ(j["unseen_ratios"][1].get<std::string>(), "inf");
    CHECK_EQ(j["median_factor"].get<std::string>(), "inf");
    CHECK(j.contains("audit"));
}

TEST_CASE("distributions parse from json") {
    Rng rng(3);
    auto uniform = distribution_from_json(json::parse(R"({"type": "uniform_subsets"})"), 5);
    CHECK_EQ(uniform.ground_size(), 5);

    auto product = distribution_from_json(
        json::parse(R"({"type": "product", "probs": [1.0, 0.0, 1.0]})"), 3);
    CHECK_EQ(product.sample(rng), make_set(3, {0, 2}));

    auto family = distribution_from_json(
        json::parse(R"({"type": "family", "sets": [[0, 1]]})"), 3);
    CHECK_EQ(family.sample(rng), make_set(3, {0, 1}));

    auto mix = distribution_from_json(
        json::parse(
            R"({"type": "mixture", "components": [
                {"weight": 1.0, "dist": {"type": "family", "sets": [[2]]}}]})"),
        3);
    CHECK_EQ(mix.sample(rng), make_set(3, {2}));

    CHECK_THROWS_WITH_AS(distribution_from_json(json::parse(R"({"type": "zipf"})"), 3),
                         doctest::Contains("zipf"), Error);
    CHECK_THROWS_WITH_AS(
        distribution_from_json(json::parse(R"({"type": "product", "probs": [0.5]})"), 3),
        doctest::Contains("probs"), Error);
}

TEST_CASE("experiment configs parse from json") {
    json j = json::parse(R"({
        "experiment_id": "parse-check",
        "target_class": "oxs",
        "target_params": {"trees": 2, "integer_weights": true},
        "n": 6,
        "learner": {"klass": "oxs-r-leaves", "R": 3, "eps": 0.25},
        "dist": {"type": "uniform_subsets"},
        "m": 50,
        "M": 200,
        "eps": 0.2,
        "seeds": [4, 5]
    })");
    auto config = experiment_config_from_json(j);
    CHECK_EQ(config.experiment_id, "parse-check");
    CHECK_EQ(config.target_class, "oxs");
    CHECK_EQ(config.target_params.trees, 2);
    CHECK(config.target_params.integer_weights);
    CHECK_EQ(config.n, 6);
    CHECK_EQ(config.learner.klass, "oxs-r-leaves");
    CHECK_EQ(config.learner.R, doctest::Approx(3.0));
    CHECK_EQ(config.learner.eps, doctest::Approx(0.25));
    CHECK(config.dist.has_value());
    CHECK_EQ(config.m, 50);
    CHECK_EQ(config.M, 200);
    CHECK_EQ(config.eps, doctest::Approx(0.2));
    CHECK_EQ(config.seeds, std::vector<std::uint64_t>{4, 5});

    // A fixed target supplies n implicitly.
    json fixed = json::parse(R"({
        "target": {"n": 3, "kind": "linear", "payload": {"weights": [1, 2, 3]}},
        "learner": {"klass": "unit-demand"}
    })");
    auto fixed_config = experiment_config_from_json(fixed);
    REQUIRE(fixed_config.target.has_value());
    CHECK_EQ(fixed_config.n, 3);

    CHECK_THROWS_WITH_AS(experiment_config_from_json(json::parse(R"({"n": 4})")),
                         doctest::Contains("learner"), Error);
    // dist cannot be interpreted without n or a fixed target.
    CHECK_THROWS_WITH_AS(
        experiment_config_from_json(json::parse(
            R"({"learner": {"klass": "xos"}, "dist": {"type": "uniform_subsets"}})")),
        doctest::Contains("n"), Error);
}

TEST_CASE("decision logs print as csv") {
    CHECK_EQ(decision_csv_header(), "round,set,price,bought");

    DecisionRecord rec;
    rec.round = 3;
    rec.set = make_set(4, {0, 2});
    rec.price = 1.5;
    rec.bought = true;
    CHECK_EQ(to_csv_row(rec), "3,0;2,1.5,1");

    rec.round = 0;
    rec.set = ItemSet(4);
    rec.price = 1.0;
    rec.bought = false;
    CHECK_EQ(to_csv_row(rec), "0,,1,0");
}

TEST_CASE("text file helpers round trip and report failures") {
    const std::string path = "vallearn_test_io.txt";
    write_text_file(path, "line one\nline two\n");
    CHECK_EQ(read_text_file(path), "line one\nline two\n");
    std::remove(path.c_str());

    CHECK_THROWS_WITH_AS(read_text_file("definitely/not/a/file.txt"),
                         doctest::Contains("definitely/not/a/file.txt"), Error);
}
