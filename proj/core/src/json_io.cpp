#include "vallearn/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "vallearn/error.hpp"

namespace vallearn {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* field, const char* where) {
    auto it = j.find(field);
    if (it == j.end())
        throw Error(std::string(where) + " is missing required field '" + field + "'");
    return *it;
}

std::uint32_t read_n(const json& j, const char* where) {
    const json& jn = require(j, "n", where);
    if (!jn.is_number_unsigned() || jn.get<std::uint64_t>() == 0)
        throw Error(std::string(where) + " field 'n' must be a positive integer");
    return jn.get<std::uint32_t>();
}

std::vector<double> read_weights(const json& j, const char* field, const char* where) {
    const json& jw = require(j, field, where);
    if (!jw.is_array()) throw Error(std::string(where) + " field '" + field + "' must be an array");
    std::vector<double> out;
    out.reserve(jw.size());
    for (std::size_t i = 0; i < jw.size(); ++i) {
        if (!jw[i].is_number())
            throw Error(std::string(where) + " field '" + field + "' entry " + std::to_string(i) +
                        " must be a number");
        out.push_back(jw[i].get<double>());
    }
    return out;
}

std::vector<std::uint32_t> read_indices(const json& j, std::uint32_t n, const char* field,
                                        const char* where) {
    if (!j.is_array()) throw Error(std::string(where) + " field '" + field + "' must be an array");
    std::vector<std::uint32_t> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_unsigned())
            throw Error(std::string(where) + " field '" + field + "' entry " + std::to_string(i) +
                        " must be a nonnegative integer");
        std::uint64_t idx = j[i].get<std::uint64_t>();
        if (idx >= n)
            throw Error(std::string(where) + " field '" + field + "' entry " + std::to_string(i) +
                        " = " + std::to_string(idx) + " is out of range for n = " +
                        std::to_string(n));
        out.push_back(static_cast<std::uint32_t>(idx));
    }
    return out;
}

ItemSet read_item_set(const json& j, std::uint32_t n, const char* field, const char* where) {
    return ItemSet::from_indices(n, read_indices(j, n, field, where));
}

json trees_to_json(const std::vector<std::vector<double>>& trees) {
    json out = json::array();
    for (const auto& tree : trees) {
        json jt = json::array();
        for (std::size_t i = 0; i < tree.size(); ++i)
            if (tree[i] != 0.0) jt.push_back(json::array({i, tree[i]}));
        out.push_back(std::move(jt));
    }
    return out;
}

std::vector<std::vector<double>> trees_from_json(const json& j, std::uint32_t n,
                                                 const char* where) {
    const json& jt = require(j, "trees", where);
    if (!jt.is_array()) throw Error(std::string(where) + " field 'trees' must be an array");
    std::vector<std::vector<double>> trees;
    trees.reserve(jt.size());
    for (std::size_t t = 0; t < jt.size(); ++t) {
        const json& tree = jt[t];
        if (!tree.is_array())
            throw Error(std::string(where) + " tree " + std::to_string(t) + " must be an array");
        std::vector<double> weights(n, 0.0);
        for (std::size_t e = 0; e < tree.size(); ++e) {
            const json& entry = tree[e];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_unsigned() ||
                !entry[1].is_number())
                throw Error(std::string(where) + " tree " + std::to_string(t) + " entry " +
                            std::to_string(e) + " must be an [item, weight] pair");
            std::uint64_t item = entry[0].get<std::uint64_t>();
            if (item >= n)
                throw Error(std::string(where) + " tree " + std::to_string(t) + " entry " +
                            std::to_string(e) + " item " + std::to_string(item) +
                            " is out of range for n = " + std::to_string(n));
            if (weights[item] != 0.0)
                throw Error(std::string(where) + " tree " + std::to_string(t) +
                            " lists item " + std::to_string(item) + " twice");
            weights[item] = entry[1].get<double>();
        }
        trees.push_back(std::move(weights));
    }
    return trees;
}

std::int64_t read_int(const json& j, const char* field, const char* where) {
    const json& ji = require(j, field, where);
    if (!ji.is_number_integer())
        throw Error(std::string(where) + " field '" + field + "' must be an integer");
    return ji.get<std::int64_t>();
}

double read_double(const json& j, const char* field, const char* where) {
    const json& jd = require(j, field, where);
    if (jd.is_string()) {
        const std::string s = jd.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw Error(std::string(where) + " field '" + field + "' has non-numeric string '" + s +
                    "'");
    }
    if (!jd.is_number())
        throw Error(std::string(where) + " field '" + field + "' must be a number");
    return jd.get<double>();
}

// JSON has no inf literal; report fields that can overflow are written as
// the string "inf" instead of null.
json json_double(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return json(v);
}

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

}  // namespace

json to_json(const Valuation& v) {
    json j;
    j["n"] = v.ground_size();
    j["kind"] = v.kind_name();
    json payload;
    switch (v.kind()) {
        case Valuation::Kind::Linear:
            payload["weights"] = v.as_linear().weights;
            break;
        case Valuation::Kind::UnitDemand:
            payload["weights"] = v.as_unit_demand().weights;
            break;
        case Valuation::Kind::Xos:
            payload["trees"] = trees_to_json(v.as_xos().trees);
            break;
        case Valuation::Kind::Oxs:
            payload["trees"] = trees_to_json(v.as_oxs().trees);
            break;
        case Valuation::Kind::Budgeted:
            payload["rset"] = v.as_budgeted().rset.indices();
            payload["budget"] = v.as_budgeted().budget;
            break;
        case Valuation::Kind::Goemans:
            payload["rset"] = v.as_goemans().rset.indices();
            payload["alpha"] = v.as_goemans().alpha;
            payload["beta"] = v.as_goemans().beta;
            break;
        case Valuation::Kind::Table:
            payload["values"] = v.as_table().values;
            break;
    }
    j["payload"] = std::move(payload);
    return j;
}

Valuation valuation_from_json(const json& j) {
    const char* where = "valuation";
    if (!j.is_object()) throw Error("valuation must be a JSON object");
    std::uint32_t n = read_n(j, where);
    const json& jkind = require(j, "kind", where);
    if (!jkind.is_string()) throw Error("valuation field 'kind' must be a string");
    const std::string kind = jkind.get<std::string>();
    const json& payload = require(j, "payload", where);
    if (!payload.is_object()) throw Error("valuation field 'payload' must be an object");

    if (kind == "linear" || kind == "unit_demand") {
        std::vector<double> weights = read_weights(payload, "weights", where);
        if (weights.size() != n)
            throw Error("valuation field 'weights' has " + std::to_string(weights.size()) +
                        " entries, expected n = " + std::to_string(n));
        return kind == "linear" ? Valuation::linear(std::move(weights))
                                : Valuation::unit_demand(std::move(weights));
    }
    if (kind == "xos" || kind == "oxs") {
        auto trees = trees_from_json(payload, n, where);
        return kind == "xos" ? Valuation::xos(n, std::move(trees))
                             : Valuation::oxs(n, std::move(trees));
    }
    if (kind == "budgeted_additive") {
        ItemSet rset = read_item_set(require(payload, "rset", where), n, "rset", where);
        return Valuation::budgeted_additive(std::move(rset), read_int(payload, "budget", where));
    }
    if (kind == "goemans_rank") {
        ItemSet rset = read_item_set(require(payload, "rset", where), n, "rset", where);
        return Valuation::goemans_rank(std::move(rset), read_int(payload, "alpha", where),
                                       read_int(payload, "beta", where));
    }
    if (kind == "table") {
        return Valuation::table(n, read_weights(payload, "values", where));
    }
    throw Error("valuation kind '" + kind +
                "' is not one of linear, unit_demand, xos, oxs, budgeted_additive, "
                "goemans_rank, table");
}

namespace {

json featurizer_to_json(const Featurizer& f) {
    json j;
    j["kind"] = f.kind == Featurizer::Kind::Raw ? "raw" : "subsets";
    j["degree"] = f.degree;
    return j;
}

Featurizer featurizer_from_json(const json& j) {
    const char* where = "featurizer";
    const json& jkind = require(j, "kind", where);
    if (!jkind.is_string()) throw Error("featurizer field 'kind' must be a string");
    const std::string kind = jkind.get<std::string>();
    if (kind == "raw") return Featurizer::raw();
    if (kind == "subsets") {
        std::int64_t degree = read_int(j, "degree", where);
        if (degree < 1) throw Error("featurizer field 'degree' must be >= 1");
        return Featurizer::subsets(static_cast<std::uint32_t>(degree));
    }
    throw Error("featurizer kind '" + kind + "' is not one of raw, subsets");
}

}  // namespace

json to_json(const Hypothesis& h) {
    json j;
    if (const auto* rl = std::get_if<RootedLinearHypothesis>(&h)) {
        j["type"] = "rooted_linear";
        j["n"] = rl->n;
        j["featurizer"] = featurizer_to_json(rl->featurizer);
        j["w"] = rl->w;
        j["z"] = rl->z;
        j["p"] = rl->p;
        j["r_eps"] = rl->r_eps;
        j["outer_scale"] = rl->outer_scale;
        j["u0"] = rl->u0.indices();
    } else if (const auto* ud = std::get_if<UnitDemandHypothesis>(&h)) {
        j["type"] = "unit_demand";
        j["item_values"] = ud->item_values;
    } else if (const auto* ib = std::get_if<ItemBasedHypothesis>(&h)) {
        j["type"] = "item_based";
        j["form"] = ib->form == ItemBasedHypothesis::Form::ScaledSum ? "scaled_sum" : "max";
        j["r"] = ib->r;
        j["item_values"] = ib->item_values;
    } else if (const auto* mu = std::get_if<MetaUnitDemandHypothesis>(&h)) {
        j["type"] = "meta_unit_demand";
        j["n"] = mu->index.ground_size();
        j["max_size"] = mu->index.max_size();
        j["values"] = mu->values;
    }
    return j;
}

Hypothesis hypothesis_from_json(const json& j) {
    const char* where = "hypothesis";
    if (!j.is_object()) throw Error("hypothesis must be a JSON object");
    const json& jtype = require(j, "type", where);
    if (!jtype.is_string()) throw Error("hypothesis field 'type' must be a string");
    const std::string type = jtype.get<std::string>();

    if (type == "rooted_linear") {
        RootedLinearHypothesis h;
        h.n = read_n(j, where);
        h.featurizer = featurizer_from_json(require(j, "featurizer", where));
        h.w = read_weights(j, "w", where);
        if (h.w.size() != h.featurizer.feature_count(h.n))
            throw Error("hypothesis field 'w' has " + std::to_string(h.w.size()) +
                        " entries, expected " +
                        std::to_string(h.featurizer.feature_count(h.n)));
        h.z = read_double(j, "z", where);
        h.p = read_double(j, "p", where);
        h.r_eps = read_double(j, "r_eps", where);
        h.outer_scale = read_double(j, "outer_scale", where);
        h.u0 = read_item_set(require(j, "u0", where), h.n, "u0", where);
        return h;
    }
    if (type == "unit_demand") {
        UnitDemandHypothesis h;
        h.item_values = read_weights(j, "item_values", where);
        return h;
    }
    if (type == "item_based") {
        ItemBasedHypothesis h;
        const json& jform = require(j, "form", where);
        if (!jform.is_string()) throw Error("hypothesis field 'form' must be a string");
        const std::string form = jform.get<std::string>();
        if (form == "scaled_sum")
            h.form = ItemBasedHypothesis::Form::ScaledSum;
        else if (form == "max")
            h.form = ItemBasedHypothesis::Form::Max;
        else
            throw Error("hypothesis form '" + form + "' is not one of scaled_sum, max");
        h.r = read_double(j, "r", where);
        h.item_values = read_weights(j, "item_values", where);
        return h;
    }
    if (type == "meta_unit_demand") {
        std::uint32_t n = read_n(j, where);
        std::int64_t max_size = read_int(j, "max_size", where);
        if (max_size < 1) throw Error("hypothesis field 'max_size' must be >= 1");
        MetaUnitDemandHypothesis h{MetaIndex(n, static_cast<std::uint32_t>(max_size)), {}};
        h.values = read_weights(j, "values", where);
        if (h.values.size() != h.index.count())
            throw Error("hypothesis field 'values' has " + std::to_string(h.values.size()) +
                        " entries, expected " + std::to_string(h.index.count()));
        return h;
    }
    throw Error("hypothesis type '" + type +
                "' is not one of rooted_linear, unit_demand, item_based, meta_unit_demand");
}

std::string to_jsonl(const std::vector<Sample>& samples, std::uint32_t n) {
    std::string out;
    for (const Sample& s : samples) {
        if (s.set.ground_size() != n)
            throw Error("sample ground size " + std::to_string(s.set.ground_size()) +
                        " does not match n = " + std::to_string(n));
        json j;
        j["set"] = s.set.indices();
        j["value"] = s.value;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<Sample> samples_from_jsonl(const std::string& text, std::uint32_t n) {
    std::vector<Sample> samples;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw Error("samples line " + std::to_string(lineno) + ": " + e.what());
        }
        const char* where = "sample";
        try {
            ItemSet set = read_item_set(require(j, "set", where), n, "set", where);
            double value = read_double(j, "value", where);
            samples.push_back({std::move(set), value});
        } catch (const Error& e) {
            throw Error("samples line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return samples;
}

json to_json(const IntersectionFamily& family) {
    json j;
    j["n"] = family.n;
    json sets = json::array();
    for (const ItemSet& s : family.sets) sets.push_back(s.indices());
    j["sets"] = std::move(sets);
    json audit;
    audit["sizes"] = family.audit.sizes;
    audit["max_pairwise_intersection"] = family.audit.max_pairwise_intersection;
    audit["size_lo"] = family.audit.size_lo;
    audit["size_hi"] = family.audit.size_hi;
    audit["intersection_cap"] = family.audit.intersection_cap;
    audit["resamples"] = family.audit.resamples;
    j["audit"] = std::move(audit);
    return j;
}

IntersectionFamily family_from_json(const json& j) {
    const char* where = "family";
    if (!j.is_object()) throw Error("family must be a JSON object");
    IntersectionFamily family;
    family.n = read_n(j, where);
    const json& jsets = require(j, "sets", where);
    if (!jsets.is_array()) throw Error("family field 'sets' must be an array");
    for (const json& js : jsets)
        family.sets.push_back(read_item_set(js, family.n, "sets", where));
    if (auto it = j.find("audit"); it != j.end() && it->is_object()) {
        const json& audit = *it;
        if (auto s = audit.find("sizes"); s != audit.end())
            family.audit.sizes = s->get<std::vector<std::size_t>>();
        if (auto s = audit.find("max_pairwise_intersection"); s != audit.end())
            family.audit.max_pairwise_intersection = s->get<std::size_t>();
        if (auto s = audit.find("size_lo"); s != audit.end())
            family.audit.size_lo = s->get<double>();
        if (auto s = audit.find("size_hi"); s != audit.end())
            family.audit.size_hi = s->get<double>();
        if (auto s = audit.find("intersection_cap"); s != audit.end())
            family.audit.intersection_cap = s->get<std::size_t>();
        if (auto s = audit.find("resamples"); s != audit.end())
            family.audit.resamples = s->get<std::size_t>();
    }
    return family;
}

json to_json(const ExperimentReport& report) {
    json j;
    j["experiment_id"] = report.experiment_id;
    j["seed"] = report.seed;
    j["m"] = report.m;
    j["M"] = report.M;
    j["eps"] = report.eps;
    j["alpha_hat"] = json_double(report.alpha_hat);
    j["violation_mass"] = report.violation_mass;
    j["wall_ms"] = report.wall_ms;
    return j;
}

ExperimentReport report_from_json(const json& j) {
    const char* where = "report";
    if (!j.is_object()) throw Error("report must be a JSON object");
    ExperimentReport report;
    const json& jid = require(j, "experiment_id", where);
    if (!jid.is_string()) throw Error("report field 'experiment_id' must be a string");
    report.experiment_id = jid.get<std::string>();
    report.seed = require(j, "seed", where).get<std::uint64_t>();
    report.m = require(j, "m", where).get<std::size_t>();
    report.M = require(j, "M", where).get<std::size_t>();
    report.eps = read_double(j, "eps", where);
    report.alpha_hat = read_double(j, "alpha_hat", where);
    report.violation_mass = read_double(j, "violation_mass", where);
    report.wall_ms = read_double(j, "wall_ms", where);
    return report;
}

json to_json(const AdversarialDemoReport& report) {
    json j;
    j["n"] = report.n;
    j["k"] = report.k;
    j["seed"] = report.seed;
    json audit;
    audit["sizes"] = report.audit.sizes;
    audit["max_pairwise_intersection"] = report.audit.max_pairwise_intersection;
    audit["size_lo"] = report.audit.size_lo;
    audit["size_hi"] = report.audit.size_hi;
    audit["intersection_cap"] = report.audit.intersection_cap;
    audit["resamples"] = report.audit.resamples;
    j["audit"] = std::move(audit);
    j["train_draws"] = report.train_draws;
    j["hidden_members"] = report.hidden_members;
    j["unseen_total"] = report.unseen_total;
    j["unseen_hidden"] = report.unseen_hidden;
    json ratios = json::array();
    for (double r : report.unseen_ratios) ratios.push_back(json_double(r));
    j["unseen_ratios"] = std::move(ratios);
    j["median_factor"] = json_double(report.median_factor);
    j["floor_factor"] = report.floor_factor;
    j["wall_ms"] = report.wall_ms;
    return j;
}

Distribution distribution_from_json(const json& j, std::uint32_t n) {
    const char* where = "dist";
    if (!j.is_object()) throw Error("dist must be a JSON object");
    const json& jtype = require(j, "type", where);
    if (!jtype.is_string()) throw Error("dist field 'type' must be a string");
    const std::string type = jtype.get<std::string>();
    if (type == "uniform_subsets") return Distribution::uniform_subsets(n);
    if (type == "product") {
        std::vector<double> probs = read_weights(j, "probs", where);
        if (probs.size() != n)
            throw Error("dist field 'probs' has " + std::to_string(probs.size()) +
                        " entries, expected n = " + std::to_string(n));
        return Distribution::product(std::move(probs));
    }
    if (type == "family") {
        const json& jsets = require(j, "sets", where);
        if (!jsets.is_array()) throw Error("dist field 'sets' must be an array");
        std::vector<ItemSet> sets;
        for (const json& js : jsets) sets.push_back(read_item_set(js, n, "sets", where));
        return Distribution::uniform_over_family(std::move(sets));
    }
    if (type == "mixture") {
        const json& jc = require(j, "components", where);
        if (!jc.is_array()) throw Error("dist field 'components' must be an array");
        std::vector<std::pair<double, Distribution>> components;
        for (const json& comp : jc) {
            double weight = read_double(comp, "weight", "dist component");
            components.emplace_back(weight,
                                    distribution_from_json(require(comp, "dist", where), n));
        }
        return Distribution::mixture(std::move(components));
    }
    throw Error("dist type '" + type +
                "' is not one of uniform_subsets, product, family, mixture");
}

ExperimentConfig experiment_config_from_json(const json& j) {
    const char* where = "experiment config";
    if (!j.is_object()) throw Error("experiment config must be a JSON object");
    ExperimentConfig config;
    if (auto it = j.find("experiment_id"); it != j.end())
        config.experiment_id = it->get<std::string>();
    if (auto it = j.find("target"); it != j.end()) config.target = valuation_from_json(*it);
    if (auto it = j.find("target_class"); it != j.end())
        config.target_class = it->get<std::string>();
    if (auto it = j.find("target_params"); it != j.end()) {
        const json& p = *it;
        if (auto f = p.find("trees"); f != p.end()) config.target_params.trees = f->get<std::size_t>();
        if (auto f = p.find("max_leaves"); f != p.end())
            config.target_params.max_leaves = f->get<std::size_t>();
        if (auto f = p.find("weight_lo"); f != p.end())
            config.target_params.weight_lo = f->get<double>();
        if (auto f = p.find("weight_hi"); f != p.end())
            config.target_params.weight_hi = f->get<double>();
        if (auto f = p.find("integer_weights"); f != p.end())
            config.target_params.integer_weights = f->get<bool>();
    }
    if (auto it = j.find("n"); it != j.end()) config.n = it->get<std::uint32_t>();
    if (config.target && config.n == 0) config.n = config.target->ground_size();

    const json& jl = require(j, "learner", where);
    if (!jl.is_object()) throw Error("experiment config field 'learner' must be an object");
    config.learner.klass = require(jl, "klass", "learner").get<std::string>();
    if (auto it = jl.find("R"); it != jl.end()) config.learner.R = it->get<double>();
    if (auto it = jl.find("eta"); it != jl.end()) config.learner.eta = it->get<double>();
    if (auto it = jl.find("eps"); it != jl.end()) config.learner.eps = it->get<double>();
    if (auto it = jl.find("delta"); it != jl.end()) config.learner.delta = it->get<double>();

    if (auto it = j.find("dist"); it != j.end()) {
        if (config.n == 0) throw Error("experiment config needs 'n' (or a fixed target) before 'dist'");
        config.dist = distribution_from_json(*it, config.n);
    }
    if (auto it = j.find("m"); it != j.end()) config.m = it->get<std::size_t>();
    if (auto it = j.find("M"); it != j.end()) config.M = it->get<std::size_t>();
    if (auto it = j.find("eps"); it != j.end()) config.eps = it->get<double>();
    if (auto it = j.find("seeds"); it != j.end())
        config.seeds = it->get<std::vector<std::uint64_t>>();
    return config;
}

std::string decision_csv_header() { return "round,set,price,bought"; }

std::string to_csv_row(const DecisionRecord& record) {
    std::string set_field;
    bool first = true;
    for (std::uint32_t item : record.set.indices()) {
        if (!first) set_field += ';';
        set_field += std::to_string(item);
        first = false;
    }
    std::string row = std::to_string(record.round);
    row += ',' + set_field;
    row += ',' + fmt_double(record.price);
    row += ',';
    row += record.bought ? '1' : '0';
    return row;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file for reading: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open file for writing: " + path);
    out << content;
    if (!out) throw Error("failed while writing file: " + path);
}

}  // namespace vallearn
