#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "vallearn/convert.hpp"
#include "vallearn/error.hpp"
#include "vallearn/harness.hpp"
#include "vallearn/instances.hpp"
#include "vallearn/json_io.hpp"
#include "vallearn/learners.hpp"
#include "vallearn/oracles.hpp"
#include "vallearn/price_learning.hpp"
#include "vallearn/query_learners.hpp"
#include "vallearn/valuation.hpp"

namespace {

using nlohmann::json;
using namespace vallearn;

struct OutputOpts {
    std::string out;
    std::string format = "json";
};

void add_output_opts(CLI::App* cmd, OutputOpts& opts, const std::string& default_format = "json") {
    opts.format = default_format;
    cmd->add_option("--out", opts.out, "Write output to this file instead of stdout");
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
}

void emit(const OutputOpts& opts, std::string text) {
    if (text.empty() || text.back() != '\n') text += '\n';
    if (opts.out.empty())
        std::cout << text;
    else
        write_text_file(opts.out, text);
}

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string join_indices(const ItemSet& s) {
    std::string out;
    for (std::uint32_t item : s.indices()) {
        if (!out.empty()) out += ';';
        out += std::to_string(item);
    }
    return out;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::uint32_t> parse_index_list(const std::string& text) {
    std::vector<std::uint32_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            out.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
        } catch (const std::exception&) {
            throw Error("cannot parse item index '" + tok + "'");
        }
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.find_first_not_of(" \t") == std::string::npos) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw Error("cannot parse number '" + tok + "'");
        }
    }
    return out;
}

Valuation load_valuation(const std::string& path) {
    if (path.empty()) throw Error("--valuation is required");
    json j;
    try {
        j = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw Error(std::string("cannot parse ") + path + ": " + e.what());
    }
    return valuation_from_json(j);
}

// ---------------------------------------------------------------- gen --

struct GenOpts {
    std::string klass;
    std::uint32_t n = 8;
    std::uint64_t seed = 0;
    GenParams params;
    std::size_t k = 16;  // family size
    double x = 0.0;      // rank-pair scale; 0 = smallest admissible
    OutputOpts output;
};

void run_gen(const GenOpts& opts) {
    if (opts.output.format == "csv") throw Error("gen emits JSON only");
    json j;
    if (opts.klass == "family") {
        j = to_json(gen_intersection_family(opts.n, opts.k, opts.seed));
    } else if (opts.klass == "rank-pair") {
        double x = opts.x;
        if (x <= 0.0) x = 4.0 * std::sqrt(std::log2(static_cast<double>(opts.n)));
        GoemansPair pair = gen_goemans_pair(opts.n, x, opts.seed);
        j["n"] = opts.n;
        j["x"] = x;
        j["alpha"] = pair.alpha;
        j["beta"] = pair.beta;
        j["rset"] = pair.rset.indices();
        j["g23"] = to_json(pair.g23);
        j["gR"] = to_json(pair.gR);
        j["g23_oxs"] = to_json(pair.g23_oxs);
        j["gR_oxs"] = to_json(pair.gR_oxs);
    } else {
        j = to_json(gen_random(opts.klass, opts.n, opts.params, opts.seed));
    }
    emit(opts.output, j.dump(2));
}

// --------------------------------------------------------------- eval --

struct EvalOpts {
    std::string valuation_path;
    std::vector<std::string> sets;
    bool all = false;
    std::string prices;  // nonempty = report demand sets instead
    OutputOpts output;
};

void run_eval(const EvalOpts& opts) {
    Valuation v = load_valuation(opts.valuation_path);
    const std::uint32_t n = v.ground_size();

    std::vector<std::pair<ItemSet, double>> rows;
    if (!opts.prices.empty()) {
        std::vector<double> prices = parse_double_list(opts.prices);
        if (prices.size() != n)
            throw Error("--prices needs exactly n = " + std::to_string(n) + " entries, got " +
                        std::to_string(prices.size()));
        for (const ItemSet& s : demand_set(v, prices)) {
            double payoff = v.eval(s);
            for (std::uint32_t item : s.indices()) payoff -= prices[item];
            rows.emplace_back(s, payoff);
        }
    } else if (opts.all) {
        if (n > 20) throw Error("--all requires n <= 20, got n = " + std::to_string(n));
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            ItemSet s = ItemSet::from_mask(n, mask);
            rows.emplace_back(s, v.eval(s));
        }
    } else {
        if (opts.sets.empty()) throw Error("pass --set (repeatable), --all, or --prices");
        for (const std::string& text : opts.sets) {
            ItemSet s = ItemSet::from_indices(n, parse_index_list(text));
            rows.emplace_back(s, v.eval(s));
        }
    }

    if (opts.output.format == "csv") {
        std::string out = "set,value\n";
        for (const auto& [s, value] : rows)
            out += join_indices(s) + ',' + fmt_double(value) + '\n';
        emit(opts.output, out);
    } else {
        json j = json::array();
        for (const auto& [s, value] : rows) j.push_back({{"set", s.indices()}, {"value", value}});
        emit(opts.output, j.dump(2));
    }
}

// ------------------------------------------------------------- verify --

struct VerifyOpts {
    std::string valuation_path;
    std::string checks = "auto";
    OutputOpts output;
};

int run_verify(const VerifyOpts& opts) {
    Valuation v = load_valuation(opts.valuation_path);
    const std::uint32_t n = v.ground_size();

    std::vector<std::string> names;
    if (opts.checks == "auto") {
        if (n <= 16) names.push_back("monotone");
        if (n <= 14) names.push_back("subadditive");
        if (n <= 14) names.push_back("submodular");
        if (n <= 12) names.push_back("gs-triples");
        if (v.kind() == Valuation::Kind::Xos && n <= 6) names.push_back("xos-polyhedron");
        if (names.empty())
            throw Error("no exhaustive check applies at n = " + std::to_string(n));
    } else {
        std::stringstream ss(opts.checks);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (!tok.empty()) names.push_back(tok);
        }
    }

    struct Row {
        std::string check;
        bool pass;
        std::string message;
    };
    std::vector<Row> rows;
    for (const std::string& name : names) {
        std::optional<Violation> violation;
        if (name == "monotone")
            violation = check_monotone(v);
        else if (name == "subadditive")
            violation = check_subadditive(v);
        else if (name == "submodular")
            violation = check_submodular(v);
        else if (name == "gs-triples")
            violation = check_gs_triples(v);
        else if (name == "xos-polyhedron")
            violation = check_xos_polyhedron(v);
        else
            throw Error("check '" + name +
                        "' is not one of monotone, subadditive, submodular, gs-triples, "
                        "xos-polyhedron");
        rows.push_back({name, !violation, violation ? violation->message : std::string()});
    }

    bool all_pass = true;
    if (opts.output.format == "csv") {
        std::string out = "check,pass,message\n";
        for (const Row& row : rows) {
            out += row.check;
            out += row.pass ? ",1," : ",0,";
            out += csv_escape(row.message) + '\n';
            all_pass = all_pass && row.pass;
        }
        emit(opts.output, out);
    } else {
        json j = json::array();
        for (const Row& row : rows) {
            j.push_back({{"check", row.check}, {"pass", row.pass}, {"message", row.message}});
            all_pass = all_pass && row.pass;
        }
        emit(opts.output, j.dump(2));
    }
    return all_pass ? 0 : 1;
}

// -------------------------------------------------------------- learn --

struct LearnOpts {
    std::string samples_path;
    std::uint32_t n = 0;
    LearnerSpec learner;
    std::uint64_t seed = 0;
    OutputOpts output;
};

void run_learn(const LearnOpts& opts) {
    if (opts.output.format == "csv") throw Error("learn emits hypothesis JSON only");
    if (opts.n == 0) throw Error("--n is required");
    std::vector<Sample> samples = samples_from_jsonl(read_text_file(opts.samples_path), opts.n);
    Rng coins = Rng(opts.seed).fork(0x22);

    Hypothesis hyp = [&]() -> Hypothesis {
        const LearnerSpec& l = opts.learner;
        if (l.klass == "xos") return pmac_xos(samples, opts.n, l.eps, coins);
        if (l.klass == "subadditive") return pmac_subadditive(samples, opts.n, l.eps, coins);
        if (l.klass == "oxs-r-leaves")
            return pmac_oxs_r_leaves(samples, opts.n, l.R, l.eps, coins);
        if (l.klass == "xos-r-trees")
            return pmac_xos_r_trees(samples, opts.n, l.R, l.eta, l.eps, coins);
        if (l.klass == "unit-demand") return unit_demand_learn(samples, opts.n);
        if (l.klass == "oxs-const-trees")
            return pac_oxs_const_trees(samples, opts.n, static_cast<std::uint32_t>(l.R));
        throw Error("--class '" + l.klass +
                    "' is not one of xos, subadditive, oxs-r-leaves, xos-r-trees, "
                    "unit-demand, oxs-const-trees");
    }();

    json j = to_json(hyp);
    j["trained_on"] = samples.size();
    emit(opts.output, j.dump(2));
}

// ----------------------------------------------------------- vq-learn --

struct VqLearnOpts {
    std::string valuation_path;
    std::string class_tag = "oxs-r-trees";
    double R = 1.0;
    bool check = false;
    OutputOpts output;
};

int run_vq_learn(const VqLearnOpts& opts) {
    if (opts.output.format == "csv") throw Error("vq-learn emits JSON only");
    Valuation target = load_valuation(opts.valuation_path);
    ValueOracle oracle(target);
    ClassTag tag = class_tag_from_string(opts.class_tag);
    ItemBasedHypothesis hyp = vq_learn_item_based(oracle, tag, opts.R);

    json j;
    j["hypothesis"] = to_json(Hypothesis(hyp));
    j["queries"] = oracle.query_count();
    int rc = 0;
    if (opts.check) {
        VqCheckResult result = vq_hypothesis_check(target, Hypothesis(hyp), opts.R);
        j["check"] = {{"pass", result.pass},
                      {"worst_set", result.worst_set.indices()},
                      {"worst_ratio", std::isinf(result.worst_ratio)
                                          ? json("inf")
                                          : json(result.worst_ratio)},
                      {"target_value", result.target_value},
                      {"predicted", result.predicted},
                      {"overestimate", result.overestimate}};
        rc = result.pass ? 0 : 1;
    }
    emit(opts.output, j.dump(2));
    return rc;
}

// ---------------------------------------------------------- price-sim --

struct PriceSimOpts {
    std::string valuation_path;
    std::string mode = "pmac";
    std::int64_t H = 0;  // 0 = take the full-set value
    PriceLearnConfig config;
    double explore_prob = 1.0;
    std::string class_tag = "oxs-r-trees";  // vq mode
    double R = 1.0;                         // vq mode
    std::uint64_t seed = 0;
    std::string decision_log;
    OutputOpts output;
};

void run_price_sim(const PriceSimOpts& opts) {
    Valuation target = load_valuation(opts.valuation_path);
    const std::uint32_t n = target.ground_size();
    std::int64_t H = opts.H;
    if (H == 0) H = std::llround(target.eval(ItemSet::full(n)));
    if (H < 1) throw Error("--H must be >= 1 (target appears to be identically zero)");
    AgentOracle agent(target, H);

    json j;
    std::vector<DecisionRecord> log;
    if (opts.mode == "vq") {
        ItemBasedHypothesis hyp = vq_with_prices(agent, class_tag_from_string(opts.class_tag),
                                                 opts.R);
        j["hypothesis"] = to_json(Hypothesis(hyp));
        j["rounds_used"] = agent.rounds();
    } else if (opts.mode == "pmac") {
        Distribution dist = Distribution::uniform_subsets(n);
        Rng rng(opts.seed);
        PriceLearnResult result =
            opts.explore_prob >= 1.0
                ? pmac_with_prices(agent, dist, opts.config, rng)
                : mixed_pricing(
                      agent, dist,
                      [&](const ItemSet& s) {
                          // Posted price for exploitation rounds: half the
                          // current estimate, never below the grid floor.
                          return std::max(1.0, 0.5 * static_cast<double>(H));
                      },
                      opts.explore_prob, opts.config, rng);
        log = std::move(result.log);
        j["hypothesis"] = to_json(Hypothesis(result.hyp));
        j["rounds_used"] = agent.rounds();
        j["zero_rounds"] = result.zero_rounds;
        j["logged_rounds"] = log.size();
    } else {
        throw Error("--mode '" + opts.mode + "' is not one of pmac, vq");
    }

    std::string log_csv = decision_csv_header() + '\n';
    for (const DecisionRecord& record : log) log_csv += to_csv_row(record) + '\n';
    if (!opts.decision_log.empty()) write_text_file(opts.decision_log, log_csv);

    if (opts.output.format == "csv")
        emit(opts.output, log_csv);
    else
        emit(opts.output, j.dump(2));
}

// --------------------------------------------------------- experiment --

struct ExperimentOpts {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    OutputOpts output;
};

void run_experiment(const ExperimentOpts& opts) {
    json j;
    try {
        j = json::parse(read_text_file(opts.config_path));
    } catch (const json::parse_error& e) {
        throw Error(std::string("cannot parse ") + opts.config_path + ": " + e.what());
    }
    ExperimentConfig config = experiment_config_from_json(j);
    if (opts.seed_given) config.seeds = {opts.seed};

    std::vector<ExperimentReport> reports = run_pmac_experiment(config);
    if (opts.output.format == "csv") {
        std::string out = report_csv_header() + '\n';
        for (const ExperimentReport& report : reports) out += to_csv_row(report) + '\n';
        emit(opts.output, out);
    } else {
        json out = json::array();
        for (const ExperimentReport& report : reports) out.push_back(to_json(report));
        emit(opts.output, out.dump(2));
    }
}

// --------------------------------------------------- demo-lower-bound --

struct DemoOpts {
    std::uint32_t n = 65536;
    std::size_t k = 128;
    std::size_t train_draws = 0;
    std::uint64_t seed = 0;
    OutputOpts output;
};

void run_demo(const DemoOpts& opts) {
    AdversarialDemoReport report = adversarial_demo(opts.n, opts.k, opts.seed, opts.train_draws);
    if (opts.output.format == "csv") {
        std::size_t violations = 0;
        for (double r : report.unseen_ratios)
            if (std::isinf(r)) ++violations;
        ExperimentReport row;
        row.experiment_id = "demo-lower-bound";
        row.seed = report.seed;
        row.m = report.train_draws;
        row.M = report.unseen_hidden;
        row.eps = 0.5;
        row.alpha_hat = report.median_factor;
        row.violation_mass = report.unseen_hidden
                                 ? static_cast<double>(violations) /
                                       static_cast<double>(report.unseen_hidden)
                                 : 0.0;
        row.wall_ms = report.wall_ms;
        emit(opts.output, report_csv_header() + '\n' + to_csv_row(row) + '\n');
    } else {
        emit(opts.output, to_json(report).dump(2));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learn, evaluate and audit combinatorial valuation functions"};
    app.require_subcommand(1);

    GenOpts gen_opts;
    CLI::App* gen = app.add_subcommand("gen", "Generate valuations, families and rank pairs");
    gen->add_option("--class", gen_opts.klass,
                    "linear | unit_demand | xos | oxs | table | family | rank-pair")
        ->required();
    gen->add_option("--n", gen_opts.n, "Ground set size")->capture_default_str();
    gen->add_option("--seed", gen_opts.seed, "Random seed")->capture_default_str();
    gen->add_option("--trees", gen_opts.params.trees, "Tree count for xos/oxs")
        ->capture_default_str();
    gen->add_option("--max-leaves", gen_opts.params.max_leaves,
                    "Leaf bound per tree (0 = unbounded)");
    gen->add_option("--weight-lo", gen_opts.params.weight_lo, "Smallest item weight");
    gen->add_option("--weight-hi", gen_opts.params.weight_hi, "Largest item weight")
        ->capture_default_str();
    gen->add_flag("--integer-weights", gen_opts.params.integer_weights, "Round weights");
    gen->add_option("--k", gen_opts.k, "Family size (class family)")->capture_default_str();
    gen->add_option("--x", gen_opts.x, "Rank-pair scale (0 = minimum admissible)");
    add_output_opts(gen, gen_opts.output);
    gen->callback([&]() { run_gen(gen_opts); });

    EvalOpts eval_opts;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate a valuation on sets");
    eval->add_option("--valuation", eval_opts.valuation_path, "Valuation JSON file")->required();
    eval->add_option("--set", eval_opts.sets, "Comma-joined item indices (repeatable)");
    eval->add_flag("--all", eval_opts.all, "Evaluate every subset (n <= 20)");
    eval->add_option("--prices", eval_opts.prices,
                     "Comma-joined per-item prices: report profit-maximizing sets instead");
    add_output_opts(eval, eval_opts.output);
    eval->callback([&]() { run_eval(eval_opts); });

    VerifyOpts verify_opts;
    int verify_rc = 0;
    CLI::App* verify = app.add_subcommand("verify", "Run exhaustive structure checks");
    verify->add_option("--valuation", verify_opts.valuation_path, "Valuation JSON file")
        ->required();
    verify->add_option("--checks", verify_opts.checks,
                       "auto or comma list of monotone,subadditive,submodular,gs-triples,"
                       "xos-polyhedron")
        ->capture_default_str();
    add_output_opts(verify, verify_opts.output);
    verify->callback([&]() { verify_rc = run_verify(verify_opts); });

    LearnOpts learn_opts;
    CLI::App* learn = app.add_subcommand("learn", "Fit a hypothesis from JSONL samples");
    learn->add_option("--samples", learn_opts.samples_path, "JSONL training samples")->required();
    learn->add_option("--n", learn_opts.n, "Ground set size")->required();
    learn->add_option("--class", learn_opts.learner.klass,
                      "xos | subadditive | oxs-r-leaves | xos-r-trees | unit-demand | "
                      "oxs-const-trees")
        ->required();
    learn->add_option("--R", learn_opts.learner.R, "Structure bound for the R-classes")
        ->capture_default_str();
    learn->add_option("--eta", learn_opts.learner.eta, "xos-r-trees accuracy knob")
        ->capture_default_str();
    learn->add_option("--eps", learn_opts.learner.eps, "Slack added to the class factor")
        ->capture_default_str();
    learn->add_option("--seed", learn_opts.seed, "Random seed for the labeling coins")
        ->capture_default_str();
    add_output_opts(learn, learn_opts.output);
    learn->callback([&]() { run_learn(learn_opts); });

    VqLearnOpts vq_opts;
    int vq_rc = 0;
    CLI::App* vq = app.add_subcommand("vq-learn", "Learn from singleton value queries");
    vq->add_option("--valuation", vq_opts.valuation_path, "Valuation JSON file")->required();
    vq->add_option("--class-tag", vq_opts.class_tag,
                   "oxs-r-trees | oxs-r-leaves | xos-r-trees | xos-r-leaves")
        ->capture_default_str();
    vq->add_option("--R", vq_opts.R, "Structure bound R")->required();
    vq->add_flag("--check", vq_opts.check, "Exhaustively verify the factor-R sandwich (n <= 16)");
    add_output_opts(vq, vq_opts.output);
    vq->callback([&]() { vq_rc = run_vq_learn(vq_opts); });

    PriceSimOpts price_opts;
    CLI::App* price = app.add_subcommand("price-sim",
                                         "Learn from take-it-or-leave-it price experiments");
    price->add_option("--valuation", price_opts.valuation_path, "Valuation JSON file")
        ->required();
    price->add_option("--mode", price_opts.mode, "pmac | vq")->capture_default_str();
    price->add_option("--H", price_opts.H, "Value bound (0 = full-set value)");
    price->add_option("--beta", price_opts.config.approx_beta,
                      "Class promise: w·x <= value^p <= beta w·x")
        ->capture_default_str();
    price->add_option("--p", price_opts.config.p, "Root degree of the fitted form")
        ->capture_default_str();
    price->add_option("--eta", price_opts.config.eta, "Price grid resolution")
        ->capture_default_str();
    price->add_option("--eps", price_opts.config.eps, "Miss mass driving the round count")
        ->capture_default_str();
    price->add_option("--delta", price_opts.config.delta, "Failure probability knob")
        ->capture_default_str();
    price->add_option("--rounds", price_opts.config.rounds, "Round count (0 = default formula)");
    price->add_option("--explore-prob", price_opts.explore_prob,
                      "Fraction of rounds quoting random grid prices")
        ->capture_default_str();
    price->add_option("--class-tag", price_opts.class_tag, "Class promise for --mode vq")
        ->capture_default_str();
    price->add_option("--R", price_opts.R, "Structure bound for --mode vq")
        ->capture_default_str();
    price->add_option("--seed", price_opts.seed, "Random seed")->capture_default_str();
    price->add_option("--decision-log", price_opts.decision_log,
                      "Also write the round-by-round decision CSV here");
    add_output_opts(price, price_opts.output);
    price->callback([&]() { run_price_sim(price_opts); });

    ExperimentOpts exp_opts;
    CLI::App* experiment = app.add_subcommand("experiment", "Run a train-and-measure experiment");
    experiment->add_option("--config", exp_opts.config_path, "Experiment config JSON")
        ->required();
    CLI::Option* seed_opt =
        experiment->add_option("--seed", exp_opts.seed, "Override the config's seed list")
            ->capture_default_str();
    add_output_opts(experiment, exp_opts.output, "csv");
    experiment->callback([&]() {
        exp_opts.seed_given = seed_opt->count() > 0;
        run_experiment(exp_opts);
    });

    DemoOpts demo_opts;
    CLI::App* demo = app.add_subcommand(
        "demo-lower-bound", "Hidden-half family demonstration of the learning floor");
    demo->add_option("--n", demo_opts.n, "Ground set size (power of two >= 1024)")
        ->capture_default_str();
    demo->add_option("--k", demo_opts.k, "Family size")->capture_default_str();
    demo->add_option("--train-draws", demo_opts.train_draws, "Training draws (0 = k)");
    demo->add_option("--seed", demo_opts.seed, "Random seed")->capture_default_str();
    add_output_opts(demo, demo_opts.output);
    demo->callback([&]() { run_demo(demo_opts); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return verify_rc | vq_rc;
}
