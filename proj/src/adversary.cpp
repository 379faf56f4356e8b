#include "aglab/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "aglab/errors.hpp"

namespace aglab {
namespace {

constexpr std::uint64_t kCheckWindow = 64;
constexpr double kInfTolerance = 1e-9;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

// Minimum error over the first 64 languages, with the smallest minimizer.
std::pair<double, std::uint64_t> window_minimum(const Collection& C, const Distribution& D) {
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t arg = 0;
    std::uint64_t i = 0;
    for (const auto& L : C.window(kCheckWindow)) {
        ++i;
        const double e = D.mass_outside(*L);
        if (e < best - 1e-15) {
            best = e;
            arg = i;
        }
    }
    return {best, arg};
}

void check_inf(const Instance& inst, const Variant& v) {
    const auto [best, arg] = window_minimum(inst.collection, *v.dist);
    if (std::abs(best - v.analytics.inf_error) > kInfTolerance) {
        throw ConsistencyError(inst.name + "/" + v.label + ": analytic inf " +
                               std::to_string(v.analytics.inf_error) + " but window minimum " +
                               std::to_string(best));
    }
    if (v.analytics.best_index && *v.analytics.best_index != arg) {
        throw ConsistencyError(inst.name + "/" + v.label + ": analytic best index " +
                               std::to_string(*v.analytics.best_index) + " but window argmin " +
                               std::to_string(arg));
    }
}

std::uint64_t require_witness(const Collection& C, const Distribution& D, const std::string& where) {
    const auto w = witness_index(C, D, kDefaultScanLimit);
    if (!w.known()) throw ConsistencyError(where + ": i(C,D) unknown (" + w.reason + ")");
    return *w.value;
}

std::shared_ptr<const HeadTailLanguage> as_head_tail(const LanguagePtr& L) {
    auto p = std::dynamic_pointer_cast<const HeadTailLanguage>(L);
    if (!p) throw InvalidArgument(L->description() + " is not an arithmetic language");
    return p;
}

}  // namespace

// ---------------------------------------------------------------------------

Instance build_id_lower(std::uint64_t distractors) {
    Instance inst{"id-lower(d=" + std::to_string(distractors) + ")",
                  UniverseSpec::pairs(distractors + 2, 0),
                  signature_collection(distractors),
                  {},
                  std::nullopt,
                  [](std::uint64_t n) { return clamp01(std::pow(0.25, static_cast<double>(n) + 2.0)); },
                  BoundKind::Lower,
                  std::nullopt,
                  {},
                  {}};
    inst.universe = inst.collection.universe();
    auto d0 = finite_support({{kSignatureS0, 0.75}, {kSignatureS1, 0.25}});
    auto d1 = finite_support({{kSignatureS0, 0.25}, {kSignatureS1, 0.75}});
    inst.variants.push_back(Variant{"D0", d0, Analytics{0.25, 1, std::nullopt, std::nullopt}});
    inst.variants.push_back(Variant{"D1", d1, Analytics{0.25, 2, std::nullopt, std::nullopt}});
    for (const auto& v : inst.variants) check_inf(inst, v);
    return inst;
}

// ---------------------------------------------------------------------------

Instance build_slow_rate(const RateFunction& rate, std::uint64_t depth) {
    auto art = lemma512_construct(rate, depth);
    if (!art.checks.all()) throw ConstructionFailure("sequence construction failed its property checks");
    auto base = block_base_distribution(art);
    const auto universe = UniverseSpec::pairs(3, -1, "N x {-1,0,1}");

    Instance inst;
    inst.name = "slow-rate(" + art.rate_name + ", depth=" + std::to_string(depth) + ")";
    inst.universe = universe;
    inst.collection = prefix_labeled_collection();
    inst.bound = [rate](std::uint64_t n) { return clamp01(rate(n) / 8.0); };
    inst.bound_kind = BoundKind::LimsupLower;
    for (const auto& n : art.n) inst.checkpoints.push_back(*n.exact);

    RandomFamily family;
    family.label_count = 2;
    family.label_offset = 0;
    family.make = [base, universe](LabelSource z) { return labeled_distribution(base, std::move(z), universe); };
    // inf over the collection is 0 for every z. The full construction never
    // attains it; after truncation at `depth` the language following z on all
    // 2 sigma_depth covered positions does.
    family.analytics = Analytics{0.0, std::nullopt, std::nullopt, std::nullopt};
    inst.family = family;
    inst.notes.push_back("base truncated after " + std::to_string(depth) + " blocks (w <= " +
                         std::to_string(2 * *art.sigma.back().exact) + ")");
    if (art.c_exceeds_one) inst.notes.push_back("normalizing constant C exceeds 1");

    // Certify that inf is approached, not attained, on the covered blocks for
    // one realized z: each longer prefix of z strictly improves, and the prefix
    // of length 2 sigma_i has error at most 1 / n_i.
    const auto& block = static_cast<const BlockDistribution&>(*base);
    const auto z = LabelSource::seeded(0, 2, 0);
    const auto D = family.make(z);
    double previous = 1.0;
    for (std::size_t i = 1; i <= block.depth(); ++i) {
        const std::uint64_t len = block.block_end(i);
        if (len > (1u << 15)) break;
        std::vector<int> bits(len);
        for (std::uint64_t w = 1; w <= len; ++w) bits[w - 1] = static_cast<int>(z.query(w));
        const double e = D->mass_outside(*make_prefix_language(bits, 0));
        const double tail_limit = 1.0 / std::exp(art.n[i - 1].ln());
        if (!(e < previous) || e > tail_limit * (1 + 1e-12)) {
            throw ConsistencyError(inst.name + ": prefix of z with " + std::to_string(len) +
                                   " labels has error " + std::to_string(e));
        }
        previous = e;
    }
    inst.lemma = std::move(art);
    return inst;
}

// ---------------------------------------------------------------------------

Instance build_gen_nfl(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
    const auto labels = static_cast<std::uint64_t>(std::ceil(1.0 / epsilon - 1e-12));
    const auto universe = UniverseSpec::pairs(labels, 1, "N x {1.." + std::to_string(labels) + "}");

    Instance inst;
    inst.name = "nfl(eps=" + std::to_string(epsilon) + ")";
    inst.universe = universe;
    inst.collection = label_constant_collection(universe);
    inst.bound = [epsilon](std::uint64_t) { return 1.0 - epsilon; };
    inst.bound_kind = BoundKind::LimsupLower;

    auto base = geometric_base();
    RandomFamily family;
    family.label_count = labels;
    family.label_offset = 1;
    family.make = [base, universe](LabelSource z) { return labeled_distribution(base, std::move(z), universe); };
    family.analytics = Analytics{};
    inst.family = family;
    inst.notes.push_back(std::to_string(labels) + " labels");
    return inst;
}

// ---------------------------------------------------------------------------

Instance build_gen_lower(std::uint64_t m) {
    Instance inst;
    inst.name = "gen-lower(m=" + std::to_string(m) + ")";
    inst.collection = finite_intersection_collection(m);
    inst.universe = inst.collection.universe();
    if (m == 0) {
        inst.bound = [](std::uint64_t n) { return clamp01(std::exp(-2.0 * static_cast<double>(n))); };
    } else {
        inst.bound = [](std::uint64_t n) { return clamp01(std::exp(-2.0 * static_cast<double>(n)) / 4.0); };
        for (std::uint64_t n = 8 * m * m; n <= 8 * m * m + 4; ++n) inst.checkpoints.push_back(n);
    }
    inst.bound_kind = BoundKind::Lower;

    for (std::uint64_t b = 0; b < 2; ++b) {
        DistributionPtr D;
        if (m == 0) {
            // Half the mass on the string outside both languages, half spread over L_b.
            D = std::make_shared<AtomsWithTailDistribution>(std::vector<Atom>{{kReservedOutside, 0.5}},
                                                            as_head_tail(inst.collection.at(b + 1)), 0.5);
        } else {
            const double eps = 1.0 / (16.0 * static_cast<double>(m));
            const double each = (1.0 - eps) / static_cast<double>(m);
            std::vector<Atom> common;
            for (std::uint64_t s = 2; s <= m + 1; ++s) common.push_back({UniverseIndex{s}, each});
            auto tail = std::make_shared<HeadTailLanguage>(0, b == 0 ? "private tail of L" : "private tail of L'",
                                                           std::vector<std::uint64_t>{}, m + 2, 2, b);
            // Fix the tail mass so that the total is exactly one.
            double common_total = 0.0;
            for (const auto& a : common) common_total += a.probability;
            D = std::make_shared<AtomsWithTailDistribution>(std::move(common), tail, 1.0 - common_total);
        }
        Analytics a;
        a.inf_error = m == 0 ? 0.5 : 0.0;
        a.best_index = b + 1;
        a.i_cd = require_witness(inst.collection, *D, inst.name);
        a.gen = analytic_gen_constants(inst.collection, *D, b + 1, *a.i_cd);
        inst.variants.push_back(Variant{b == 0 ? "D0" : "D1", D, a});
    }
    for (const auto& v : inst.variants) check_inf(inst, v);
    return inst;
}

// ---------------------------------------------------------------------------

Instance build_gen_witness_demo() {
    auto odds = std::make_shared<HeadTailLanguage>(1, "odds", std::vector<std::uint64_t>{}, 1, 2, 1);
    auto evens = std::make_shared<HeadTailLanguage>(2, "evens", std::vector<std::uint64_t>{}, 2, 2, 0);

    Instance inst;
    inst.name = "gen-witness-demo";
    inst.collection = Collection::finite(UniverseSpec::naturals(), "{odds, evens}", {odds, evens});
    inst.universe = inst.collection.universe();
    auto D = std::make_shared<AtomsWithTailDistribution>(
        std::vector<Atom>{{UniverseIndex{1}, 0.2}, {UniverseIndex{3}, 0.1}}, evens, 0.7);
    Analytics a;
    // Odds miss the 0.7 on the evens, evens miss the atoms 1 and 3.
    a.best_index = 2;
    a.inf_error = 0.3;
    a.i_cd = require_witness(inst.collection, *D, inst.name);
    a.gen = analytic_gen_constants(inst.collection, *D, 2, *a.i_cd);
    const GenConstants g = *a.gen;
    inst.bound = [g](std::uint64_t n) { return g.bound(n); };
    inst.bound_kind = BoundKind::Upper;
    inst.variants.push_back(Variant{"D", D, a});
    check_inf(inst, inst.variants.back());
    return inst;
}

// ---------------------------------------------------------------------------

namespace {

const std::string* find_param(const std::vector<std::pair<std::string, std::string>>& params, const std::string& key) {
    for (const auto& [k, v] : params) {
        if (k == key) return &v;
    }
    return nullptr;
}

std::uint64_t uint_param(const std::vector<std::pair<std::string, std::string>>& params, const std::string& key,
                         std::uint64_t fallback) {
    const auto* v = find_param(params, key);
    if (!v) return fallback;
    std::size_t used = 0;
    const auto x = std::stoull(*v, &used);
    if (used != v->size()) throw InvalidArgument("parameter " + key + " is not an integer: " + *v);
    return x;
}

}  // namespace

Instance build_instance(const std::string& name, const std::vector<std::pair<std::string, std::string>>& params) {
    auto known = [&](std::initializer_list<const char*> keys) {
        for (const auto& [k, v] : params) {
            if (std::none_of(keys.begin(), keys.end(), [&](const char* key) { return k == key; })) {
                throw InvalidArgument("unknown parameter '" + k + "' for instance " + name);
            }
        }
    };
    if (name == "id-lower") {
        known({"distractors"});
        return build_id_lower(uint_param(params, "distractors", 6));
    }
    if (name == "slow-rate") {
        known({"rate", "depth"});
        const auto* rate = find_param(params, "rate");
        return build_slow_rate(RateFunction::parse(rate ? *rate : "inverse-sqrt"), uint_param(params, "depth", 4));
    }
    if (name == "nfl") {
        known({"epsilon"});
        const auto* eps = find_param(params, "epsilon");
        return build_gen_nfl(eps ? std::stod(*eps) : 0.25);
    }
    if (name == "gen-lower") {
        known({"m"});
        return build_gen_lower(uint_param(params, "m", 0));
    }
    if (name == "gen-witness-demo") {
        known({});
        return build_gen_witness_demo();
    }
    throw InvalidArgument("unknown instance '" + name + "'");
}

// ---------------------------------------------------------------------------

ReferenceIndex best_reference_index(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("n must be >= 1");
    const double x = static_cast<double>(n) * std::log(2.0);
    const auto limit = static_cast<std::uint64_t>(4.0 * std::ceil(std::log2(x * x + 1.0)));
    ReferenceIndex best;
    best.scanned = std::max<std::uint64_t>(limit, 1);
    best.value = -1.0;
    for (std::uint64_t i = 1; i <= best.scanned; ++i) {
        const double v = std::exp(static_cast<double>(n) * std::log1p(-std::ldexp(1.0, -static_cast<int>(i)))) /
                         static_cast<double>(i);
        if (v > best.value) {
            best.value = v;
            best.index = i;
        }
    }
    return best;
}

}  // namespace aglab
