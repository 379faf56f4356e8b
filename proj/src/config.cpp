#include "aglab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "aglab/errors.hpp"

namespace aglab {
namespace {

using nlohmann::json;

void only_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [key, value] : j.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
            throw ConfigError("unknown field '" + key + "' in " + where);
        }
    }
}

std::uint64_t as_uint(const json& j, const std::string& where) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
        throw ConfigError(where + " must be a nonnegative integer");
    }
    return j.get<std::uint64_t>();
}

std::string as_string(const json& j, const std::string& where) {
    if (!j.is_string()) throw ConfigError(where + " must be a string");
    return j.get<std::string>();
}

std::string scalar_text(const json& v, const std::string& where) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_unsigned() || v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_number_float()) {
        std::ostringstream os;
        os.precision(17);
        os << v.get<double>();
        return os.str();
    }
    throw ConfigError(where + " must be a number or string");
}

std::uint64_t parse_uint(const std::string& s, const std::string& where) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
        throw ConfigError(where + ": '" + s + "' is not a nonnegative integer");
    }
    try {
        return std::stoull(s);
    } catch (const std::out_of_range&) {
        throw ConfigError(where + ": '" + s + "' is out of range");
    }
}

}  // namespace

WindowFn parse_window(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "log2") return WindowFn::log2();
        if (s.rfind("root:", 0) == 0) return WindowFn::root(parse_uint(s.substr(5), "window"));
        if (s.rfind("constant:", 0) == 0) return WindowFn::constant(parse_uint(s.substr(9), "window"));
        throw ConfigError("unknown window '" + s + "'");
    }
    only_keys(j, {"kind", "degree", "size"}, "window");
    const auto kind = as_string(j.at("kind"), "window.kind");
    try {
        if (kind == "root") {
            only_keys(j, {"kind", "degree"}, "window");
            return WindowFn::root(j.contains("degree") ? as_uint(j["degree"], "window.degree") : 4);
        }
        if (kind == "constant") {
            only_keys(j, {"kind", "size"}, "window");
            return WindowFn::constant(as_uint(j.at("size"), "window.size"));
        }
        if (kind == "log2") {
            only_keys(j, {"kind"}, "window");
            return WindowFn::log2();
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unknown window kind '" + kind + "'");
}

json to_json(const WindowFn& f) {
    switch (f.kind()) {
        case WindowFn::Kind::Root:
            return {{"kind", "root"}, {"degree", f.parameter()}};
        case WindowFn::Kind::Constant:
            return {{"kind", "constant"}, {"size", f.parameter()}};
        case WindowFn::Kind::Log2:
            return {{"kind", "log2"}};
    }
    return nullptr;
}

std::vector<std::uint64_t> parse_n_grid(const std::string& text) {
    std::vector<std::uint64_t> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
                   item.end());
        if (item.empty()) throw ConfigError("empty entry in n-grid '" + text + "'");
        bool pow2 = false;
        if (item.rfind("pow2:", 0) == 0) {
            pow2 = true;
            item = item.substr(5);
        }
        std::uint64_t lo = 0;
        std::uint64_t hi = 0;
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            lo = hi = parse_uint(item, "n-grid");
        } else {
            lo = parse_uint(item.substr(0, dots), "n-grid");
            hi = parse_uint(item.substr(dots + 2), "n-grid");
        }
        if (lo > hi) throw ConfigError("empty range in n-grid '" + text + "'");
        if (pow2 && hi > 62) throw ConfigError("pow2 exponent above 62 in n-grid");
        if (hi - lo > 1'000'000) throw ConfigError("n-grid range too long");
        for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(pow2 ? std::uint64_t{1} << v : v);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    for (auto n : out) {
        if (n == 0) throw ConfigError("n-grid entries must be >= 1");
    }
    return out;
}

ExperimentConfig parse_config(const json& j) {
    only_keys(j,
              {"schema", "instance", "collection", "distribution", "universe", "algorithm", "n_grid", "trials",
               "seed", "method", "format"},
              "config");
    ExperimentConfig c;
    if (!j.contains("schema")) throw ConfigError("config needs \"schema\": 1");
    if (!j["schema"].is_number_integer() || j["schema"].get<int>() != 1) {
        throw ConfigError("unsupported config schema (expected 1)");
    }
    if (j.contains("instance")) {
        const auto& inst = j["instance"];
        if (inst.is_string()) {
            c.instance = inst.get<std::string>();
        } else {
            only_keys(inst, {"name", "params", "variant"}, "instance");
            c.instance = as_string(inst.at("name"), "instance.name");
            if (inst.contains("params")) {
                only_keys(inst["params"], {"distractors", "rate", "depth", "epsilon", "m"}, "instance.params");
                for (const auto& [k, v] : inst["params"].items()) {
                    c.instance_params.emplace_back(k, scalar_text(v, "instance.params." + k));
                }
            }
            if (inst.contains("variant")) c.variant = as_string(inst["variant"], "instance.variant");
        }
    }
    if (j.contains("collection")) c.collection = j["collection"];
    if (j.contains("distribution")) c.distribution = j["distribution"];
    if (j.contains("universe")) c.universe = j["universe"];
    if (c.instance && (c.collection || c.distribution)) {
        throw ConfigError("give either \"instance\" or \"collection\" + \"distribution\", not both");
    }
    if (c.collection.has_value() != c.distribution.has_value()) {
        throw ConfigError("\"collection\" and \"distribution\" go together");
    }
    if (c.universe && !c.collection) throw ConfigError("\"universe\" needs \"collection\"");
    if (j.contains("algorithm")) {
        const auto& a = j["algorithm"];
        if (a.is_string()) {
            c.algorithm = a.get<std::string>();
        } else {
            only_keys(a, {"name", "window", "generation_window"}, "algorithm");
            c.algorithm = as_string(a.at("name"), "algorithm.name");
            if (a.contains("window")) c.window = parse_window(a["window"]);
            if (a.contains("generation_window")) {
                c.generation_window = as_uint(a["generation_window"], "algorithm.generation_window");
            }
        }
    }
    if (j.contains("n_grid")) {
        const auto& g = j["n_grid"];
        if (g.is_string()) {
            c.n_grid = parse_n_grid(g.get<std::string>());
        } else if (g.is_array()) {
            for (const auto& v : g) {
                const auto n = as_uint(v, "n_grid entry");
                if (n == 0) throw ConfigError("n_grid entries must be >= 1");
                c.n_grid.push_back(n);
            }
        } else {
            throw ConfigError("n_grid must be a list or a string");
        }
    }
    if (j.contains("trials")) c.trials = as_uint(j["trials"], "trials");
    if (j.contains("seed")) c.seed = as_uint(j["seed"], "seed");
    if (j.contains("method")) {
        c.method = as_string(j["method"], "method");
        if (c.method != "auto" && c.method != "exact" && c.method != "mc") {
            throw ConfigError("method must be auto, exact or mc");
        }
    }
    if (j.contains("format")) {
        c.format = as_string(j["format"], "format");
        if (*c.format != "csv" && *c.format != "json") throw ConfigError("format must be csv or json");
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["schema"] = c.schema;
    if (c.instance) {
        json params = json::object();
        for (const auto& [k, v] : c.instance_params) params[k] = v;
        j["instance"] = {{"name", *c.instance}, {"params", params}};
        if (c.variant) j["instance"]["variant"] = *c.variant;
    }
    if (c.collection) j["collection"] = *c.collection;
    if (c.distribution) j["distribution"] = *c.distribution;
    if (c.universe) j["universe"] = *c.universe;
    if (c.algorithm) {
        j["algorithm"] = {{"name", *c.algorithm}};
        if (c.window) j["algorithm"]["window"] = to_json(*c.window);
        if (c.generation_window) j["algorithm"]["generation_window"] = *c.generation_window;
    }
    j["n_grid"] = c.n_grid;
    if (c.trials) j["trials"] = *c.trials;
    if (c.seed) j["seed"] = *c.seed;
    j["method"] = c.method;
    if (c.format) j["format"] = *c.format;
    return j;
}

// ---------------------------------------------------------------------------

Collection collection_by_name(const std::string& name, const json& params) {
    const json p = params.is_null() ? json::object() : params;
    auto get = [&](const char* key, std::uint64_t fallback) {
        return p.contains(key) ? as_uint(p[key], std::string("collection.params.") + key) : fallback;
    };
    try {
        if (name == "signature") {
            only_keys(p, {"distractors"}, "collection.params");
            return signature_collection(get("distractors", 6));
        }
        if (name == "prefix-labeled") {
            only_keys(p, {}, "collection.params");
            return prefix_labeled_collection();
        }
        if (name == "finite-intersection") {
            only_keys(p, {"m"}, "collection.params");
            return finite_intersection_collection(get("m", 0));
        }
        if (name == "residue") {
            only_keys(p, {"q"}, "collection.params");
            return residue_collection(get("q", 2));
        }
        if (name == "label-constant") {
            only_keys(p, {"labels", "offset"}, "collection.params");
            const auto offset = p.contains("offset") ? p["offset"].get<std::int64_t>() : 1;
            return label_constant_collection(UniverseSpec::pairs(get("labels", 4), offset));
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unknown collection '" + name + "'");
}

DistributionPtr distribution_from_json(const json& j, const Collection& C) {
    only_keys(j, {"name", "atoms", "seed"}, "distribution");
    const auto name = as_string(j.at("name"), "distribution.name");
    try {
        if (name == "finite") {
            if (!j.contains("atoms") || !j["atoms"].is_array()) throw ConfigError("finite distribution needs atoms");
            std::vector<Atom> atoms;
            for (const auto& a : j["atoms"]) {
                if (!a.is_array() || a.size() != 2) throw ConfigError("atoms are [index, probability] pairs");
                if (!a[1].is_number()) throw ConfigError("atom probability must be a number");
                atoms.push_back(Atom{UniverseIndex{as_uint(a[0], "atom index")}, a[1].get<double>()});
            }
            return finite_support(std::move(atoms));
        }
        if (name == "geometric") {
            if (C.universe().kind != UniverseKind::Naturals) {
                throw ConfigError("geometric distribution needs the naturals universe");
            }
            return geometric_base();
        }
        if (name == "labeled-geometric") {
            const auto& u = C.universe();
            if (u.kind != UniverseKind::PairNatFinite) throw ConfigError("labeled distribution needs a pair universe");
            const auto seed = j.contains("seed") ? as_uint(j["seed"], "distribution.seed") : 0;
            return labeled_distribution(geometric_base(), LabelSource::seeded(seed, u.label_count, u.label_offset), u);
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    throw ConfigError("unknown distribution '" + name + "'");
}

namespace {

UniverseSpec universe_from_json(const json& j) {
    only_keys(j, {"kind", "labels", "offset"}, "universe");
    const auto kind = as_string(j.at("kind"), "universe.kind");
    if (kind == "naturals") return UniverseSpec::naturals();
    if (kind == "pairs") {
        const auto offset = j.contains("offset") ? j["offset"].get<std::int64_t>() : 0;
        return UniverseSpec::pairs(as_uint(j.at("labels"), "universe.labels"), offset);
    }
    throw ConfigError("unknown universe kind '" + kind + "'");
}

Analytics scan_analytics(const Collection& C, const Distribution& D) {
    Analytics a;
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t i = 0;
    bool exact = true;
    std::optional<std::uint64_t> contained;
    for (const auto& L : C.window(64)) {
        ++i;
        try {
            const double e = D.mass_outside(*L);
            if (e < best - 1e-15) {
                best = e;
                a.best_index = i;
            }
        } catch (const Unsupported&) {
            exact = false;
        }
        if (!contained && D.contains_language(*L) == true) contained = i;
    }
    a.inf_error = exact ? best : 0.0;
    if (!exact) a.best_index.reset();
    const auto w = witness_index(C, D, kDefaultScanLimit);
    a.i_cd = w.value;
    if (contained && a.i_cd) a.gen = analytic_gen_constants(C, D, *contained, *a.i_cd);
    return a;
}

}  // namespace

Instance instance_from_config(const ExperimentConfig& c, const std::string& fallback_name) {
    if (c.collection) {
        const auto& cj = *c.collection;
        only_keys(cj, {"name", "params"}, "collection");
        Collection C = collection_by_name(as_string(cj.at("name"), "collection.name"),
                                          cj.contains("params") ? cj["params"] : json::object());
        if (c.universe && !(universe_from_json(*c.universe) == C.universe())) {
            throw ConfigError("universe does not match collection '" + C.name() + "'");
        }
        auto D = distribution_from_json(*c.distribution, C);
        Instance inst;
        inst.name = "custom(" + C.name() + ")";
        inst.universe = C.universe();
        inst.collection = C;
        Analytics a;
        try {
            a = scan_analytics(C, *D);
        } catch (const InvalidArgument& e) {
            throw ConfigError(e.what());
        }
        inst.variants.push_back(Variant{"D", D, a});
        inst.bound = [](std::uint64_t) { return std::numeric_limits<double>::quiet_NaN(); };
        inst.bound_kind = BoundKind::Upper;
        inst.notes.push_back("analytics scanned over the first 64 languages");
        return inst;
    }
    const std::string name = c.instance.value_or(fallback_name);
    try {
        return build_instance(name, c.instance_params);
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad instance parameter: ") + e.what());
    }
}

}  // namespace aglab
