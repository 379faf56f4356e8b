#include "aglab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "aglab/errors.hpp"

namespace aglab {
namespace {

// Compensated (Neumaier) accumulator.
struct Accumulator {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

// 2^{-j} vanishes in double precision past this rank.
constexpr std::uint64_t kGeometricHorizon = 1100;

std::vector<double> prefix_sums(const std::vector<Atom>& atoms) {
    std::vector<double> out;
    out.reserve(atoms.size());
    Accumulator acc;
    for (const auto& a : atoms) {
        acc.add(a.probability);
        out.push_back(acc.value());
    }
    return out;
}

std::vector<Atom> sorted_atoms(std::vector<Atom> atoms) {
    for (const auto& a : atoms) {
        if (a.index.k == 0) throw InvalidArgument("universe indices are 1-based");
        if (!(a.probability > 0.0) || !std::isfinite(a.probability)) {
            throw InvalidArgument("atom probabilities must be positive");
        }
    }
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.index < b.index; });
    for (std::size_t i = 1; i < atoms.size(); ++i) {
        if (atoms[i].index == atoms[i - 1].index) throw InvalidArgument("duplicate atom");
    }
    return atoms;
}

std::size_t pick(const std::vector<double>& cumulative, double u) {
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto i = static_cast<std::size_t>(it - cumulative.begin());
    return std::min(i, cumulative.size() - 1);
}

std::uint64_t geometric_rank(Rng& rng) {
    std::uint64_t j = 1;
    while (!rng.coin()) ++j;
    return j;
}

}  // namespace

double Distribution::cdf(UniverseIndex) const { throw Unsupported("no closed-form CDF for " + describe()); }

double Distribution::mass_outside(const Language& L) const {
    throw Unsupported("no exact error formula for " + L.description() + " under " + describe());
}

std::optional<bool> Distribution::contains_language(const Language&) const { return std::nullopt; }

// ---------------------------------------------------------------------------

FiniteSupportDistribution::FiniteSupportDistribution(std::vector<Atom> atoms)
    : atoms_(sorted_atoms(std::move(atoms))) {
    if (atoms_.empty()) throw InvalidArgument("finite support needs at least one atom");
    cumulative_ = prefix_sums(atoms_);
    if (std::abs(cumulative_.back() - 1.0) > 1e-12) {
        throw InvalidArgument("atom probabilities must sum to 1 (got " + std::to_string(cumulative_.back()) + ")");
    }
}

double FiniteSupportDistribution::pmf(UniverseIndex k) const {
    const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), k,
                                     [](const Atom& a, UniverseIndex key) { return a.index < key; });
    return it != atoms_.end() && it->index == k ? it->probability : 0.0;
}

UniverseIndex FiniteSupportDistribution::sample(Rng& rng) const {
    return atoms_[pick(cumulative_, rng.uniform() * cumulative_.back())].index;
}

double FiniteSupportDistribution::cdf(UniverseIndex k) const {
    Accumulator acc;
    for (const auto& a : atoms_) {
        if (a.index > k) break;
        acc.add(a.probability);
    }
    return acc.value();
}

double FiniteSupportDistribution::mass_outside(const Language& L) const {
    Accumulator acc;
    for (const auto& a : atoms_) {
        if (!L.member(a.index)) acc.add(a.probability);
    }
    return std::clamp(acc.value(), 0.0, 1.0);
}

std::string FiniteSupportDistribution::describe() const {
    std::ostringstream os;
    os << "finite{";
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i != 0) os << ", ";
        os << atoms_[i].index.k << ":" << atoms_[i].probability;
    }
    os << "}";
    return os.str();
}

// ---------------------------------------------------------------------------

double GeometricDistribution::pmf(UniverseIndex k) const {
    if (k.k == 0) return 0.0;
    return k.k > 2000 ? 0.0 : std::ldexp(1.0, -static_cast<int>(k.k));
}

UniverseIndex GeometricDistribution::sample(Rng& rng) const { return UniverseIndex{geometric_rank(rng)}; }

double GeometricDistribution::cdf(UniverseIndex k) const {
    return k.k > 2000 ? 1.0 : 1.0 - std::ldexp(1.0, -static_cast<int>(k.k));
}

double GeometricDistribution::mass_outside(const Language& L) const {
    Accumulator acc;
    for (std::uint64_t w = 1; w <= kGeometricHorizon; ++w) {
        if (!L.member(UniverseIndex{w})) acc.add(std::ldexp(1.0, -static_cast<int>(w)));
    }
    return std::clamp(acc.value(), 0.0, 1.0);
}

// ---------------------------------------------------------------------------

BlockDistribution::BlockDistribution(const LemmaArtifacts& art) {
    if (art.n.empty()) throw InvalidArgument("empty sequence artifacts");
    std::uint64_t end = 0;
    for (std::size_t i = 0; i < art.k.size(); ++i) {
        if (!art.k[i].exact) {
            throw InvalidArgument("block " + std::to_string(i + 1) + " has k_i = " + art.k[i].to_string() +
                                  ", beyond 64-bit range; construct with a smaller depth");
        }
        const std::uint64_t k = *art.k[i].exact;
        if (k > (std::numeric_limits<std::uint64_t>::max() / 4 - end) / 2) {
            throw InvalidArgument("blocks overflow 64-bit indices; construct with a smaller depth");
        }
        end += 2 * k;
        k_.push_back(k);
        block_end_.push_back(end);
        mass_.push_back(art.p[i]);
    }
    Accumulator acc;
    for (double m : mass_) {
        acc.add(m);
        cumulative_.push_back(acc.value());
    }
}

std::optional<std::size_t> BlockDistribution::block_of(std::uint64_t w) const {
    if (w == 0 || w > block_end_.back()) return std::nullopt;
    const auto it = std::lower_bound(block_end_.begin(), block_end_.end(), w);
    return static_cast<std::size_t>(it - block_end_.begin()) + 1;
}

double BlockDistribution::pmf(UniverseIndex k) const {
    const auto b = block_of(k.k);
    if (!b) return 0.0;
    return mass_[*b - 1] / (2.0 * static_cast<double>(k_[*b - 1]));
}

UniverseIndex BlockDistribution::sample(Rng& rng) const {
    const std::size_t b = pick(cumulative_, rng.uniform() * cumulative_.back());
    const std::uint64_t begin = b == 0 ? 1 : block_end_[b - 1] + 1;
    return UniverseIndex{begin + rng.below(2 * k_[b])};
}

double BlockDistribution::cdf(UniverseIndex k) const {
    const auto b = block_of(k.k);
    if (!b) return k.k == 0 ? 0.0 : 1.0;
    const double before = *b == 1 ? 0.0 : cumulative_[*b - 2];
    const std::uint64_t inside = k.k - block_begin(*b) + 1;
    return before + static_cast<double>(inside) * pmf(k);
}

std::string BlockDistribution::describe() const {
    return "block base (" + std::to_string(depth()) + " blocks, w <= " + std::to_string(block_end_.back()) + ")";
}

// ---------------------------------------------------------------------------

LabelSource LabelSource::explicit_prefix(std::vector<std::int64_t> labels) {
    if (labels.empty()) throw InvalidArgument("explicit label prefix is empty");
    LabelSource z;
    z.explicit_ = true;
    z.labels_ = std::move(labels);
    return z;
}

LabelSource LabelSource::seeded(std::uint64_t seed, std::uint64_t label_count, std::int64_t label_offset) {
    if (label_count == 0) throw InvalidArgument("label count must be >= 1");
    LabelSource z;
    z.explicit_ = false;
    z.seed_ = seed;
    z.label_count_ = label_count;
    z.label_offset_ = label_offset;
    return z;
}

std::int64_t LabelSource::query(std::uint64_t w) const {
    if (w == 0) throw InvalidArgument("label positions are 1-based");
    if (explicit_) {
        if (w > labels_.size()) {
            throw InvalidArgument("label position " + std::to_string(w) + " beyond the explicit prefix");
        }
        return labels_[w - 1];
    }
    const std::uint64_t x = derive_seed(seed_, w);
    const auto slot = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * label_count_) >> 64);
    return label_offset_ + static_cast<std::int64_t>(slot);
}

std::int64_t LabelSource::min_label() const {
    if (explicit_) return *std::min_element(labels_.begin(), labels_.end());
    return label_offset_;
}

std::int64_t LabelSource::max_label() const {
    if (explicit_) return *std::max_element(labels_.begin(), labels_.end());
    return label_offset_ + static_cast<std::int64_t>(label_count_) - 1;
}

// ---------------------------------------------------------------------------

LabeledDistribution::LabeledDistribution(DistributionPtr base, LabelSource z, UniverseSpec universe)
    : base_(std::move(base)), z_(std::move(z)), universe_(std::move(universe)) {
    if (!base_) throw InvalidArgument("labeled distribution needs a base");
    if (universe_.kind != UniverseKind::PairNatFinite) throw InvalidArgument("labels need a pair universe");
    if (!universe_.has_label(z_.min_label()) || !universe_.has_label(z_.max_label())) {
        throw InvalidArgument("label source range is not inside " + universe_.description);
    }
}

double LabeledDistribution::pmf(UniverseIndex k) const {
    const auto [w, y] = decode_pair(universe_, k);
    if (!base_->in_support(UniverseIndex{w})) return 0.0;
    return z_.query(w) == y ? base_->pmf(UniverseIndex{w}) : 0.0;
}

bool LabeledDistribution::in_support(UniverseIndex k) const {
    const auto [w, y] = decode_pair(universe_, k);
    return base_->in_support(UniverseIndex{w}) && z_.query(w) == y;
}

UniverseIndex LabeledDistribution::sample(Rng& rng) const {
    const std::uint64_t w = base_->sample(rng).k;
    return encode_pair(universe_, w, z_.query(w));
}

double LabeledDistribution::mass_outside(const Language& L) const {
    const auto* pattern = dynamic_cast<const PairPatternLanguage*>(&L);
    if (pattern == nullptr) return Distribution::mass_outside(L);
    const auto& tail = pattern->tail_labels();
    const auto lo = z_.min_label();
    const auto hi = z_.max_label();
    const bool tail_disjoint = std::none_of(tail.begin(), tail.end(), [&](auto y) { return y >= lo && y <= hi; });
    bool tail_covers = true;
    for (auto y = lo; y <= hi; ++y) tail_covers = tail_covers && std::binary_search(tail.begin(), tail.end(), y);
    if (!tail_disjoint && !tail_covers) return Distribution::mass_outside(L);

    const std::uint64_t prefix = pattern->prefix_length();
    Accumulator acc;
    for (std::uint64_t w = 1; w <= prefix; ++w) {
        const auto& labels = pattern->labels_at(w);
        if (!std::binary_search(labels.begin(), labels.end(), z_.query(w))) {
            acc.add(base_->pmf(UniverseIndex{w}));
        }
    }
    if (tail_disjoint) acc.add(1.0 - base_->cdf(UniverseIndex{prefix}));
    return std::clamp(acc.value(), 0.0, 1.0);
}

std::optional<bool> LabeledDistribution::contains_language(const Language& L) const {
    // supp(D_z) has one label per w, so a language holding two labels at
    // some w is never contained.
    if (const auto* pattern = dynamic_cast<const PairPatternLanguage*>(&L)) {
        if (pattern->tail_labels().size() > 1) return false;
        for (std::uint64_t w = 1; w <= pattern->prefix_length(); ++w) {
            if (pattern->labels_at(w).size() > 1) return false;
        }
    }
    return std::nullopt;
}

std::string LabeledDistribution::describe() const {
    return "labeled(" + base_->describe() + ", " + (z_.is_seeded() ? "seeded z" : "explicit z") + ")";
}

// ---------------------------------------------------------------------------

AtomsWithTailDistribution::AtomsWithTailDistribution(std::vector<Atom> atoms,
                                                     std::shared_ptr<const HeadTailLanguage> tail,
                                                     double tail_mass)
    : atoms_(sorted_atoms(std::move(atoms))), tail_(std::move(tail)), tail_mass_(tail_mass) {
    if (!tail_) throw InvalidArgument("tail language required");
    if (!(tail_mass_ > 0.0) || tail_mass_ > 1.0) throw InvalidArgument("tail mass must be in (0, 1]");
    for (const auto& a : atoms_) {
        if (tail_->member(a.index)) throw InvalidArgument("tail language overlaps an atom");
    }
    cumulative_ = prefix_sums(atoms_);
    const double total = (cumulative_.empty() ? 0.0 : cumulative_.back()) + tail_mass_;
    if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("atoms plus tail mass must sum to 1");
}

double AtomsWithTailDistribution::pmf(UniverseIndex k) const {
    const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), k,
                                     [](const Atom& a, UniverseIndex key) { return a.index < key; });
    if (it != atoms_.end() && it->index == k) return it->probability;
    if (!tail_->member(k)) return 0.0;
    const std::uint64_t rank = tail_->count_through(k);
    return rank > 2000 ? 0.0 : tail_mass_ * std::ldexp(1.0, -static_cast<int>(rank));
}

UniverseIndex AtomsWithTailDistribution::sample(Rng& rng) const {
    const double atom_total = cumulative_.empty() ? 0.0 : cumulative_.back();
    const double u = rng.uniform();
    if (u < atom_total) return atoms_[pick(cumulative_, u)].index;
    return tail_->nth_member(geometric_rank(rng));
}

double AtomsWithTailDistribution::mass_outside(const Language& L) const {
    Accumulator acc;
    for (const auto& a : atoms_) {
        if (!L.member(a.index)) acc.add(a.probability);
    }
    for (std::uint64_t j = 1; j <= kGeometricHorizon; ++j) {
        if (!L.member(tail_->nth_member(j))) acc.add(tail_mass_ * std::ldexp(1.0, -static_cast<int>(j)));
    }
    return std::clamp(acc.value(), 0.0, 1.0);
}

std::optional<bool> AtomsWithTailDistribution::contains_language(const Language& L) const {
    const auto* lang = dynamic_cast<const HeadTailLanguage*>(&L);
    if (lang == nullptr) return std::nullopt;
    auto covered = [this](std::uint64_t k) { return pmf(UniverseIndex{k}) > 0.0 || tail_->member(UniverseIndex{k}); };
    for (auto h : lang->head()) {
        if (!covered(h)) return false;
    }
    // Past every explicit element only the two arithmetic tails remain, and the
    // progression rL + j qL stays in one class mod qT iff qT divides qL.
    std::uint64_t beyond = tail_->tail_first();
    if (!atoms_.empty()) beyond = std::max(beyond, atoms_.back().index.k + 1);
    if (!tail_->head().empty()) beyond = std::max(beyond, tail_->head().back() + 1);
    for (std::uint64_t k = lang->tail_first(); k < beyond; k += lang->modulus()) {
        if (!covered(k)) return false;
    }
    if (lang->modulus() % tail_->modulus() != 0) return false;
    return lang->residue() % tail_->modulus() == tail_->residue();
}

std::string AtomsWithTailDistribution::describe() const {
    std::ostringstream os;
    os << "atoms{";
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i != 0) os << ", ";
        os << atoms_[i].index.k << ":" << atoms_[i].probability;
    }
    os << "} + " << tail_mass_ << " geometric over " << tail_->description();
    return os.str();
}

// ---------------------------------------------------------------------------

DistributionPtr finite_support(std::vector<Atom> atoms) {
    return std::make_shared<FiniteSupportDistribution>(std::move(atoms));
}

DistributionPtr geometric_base() { return std::make_shared<GeometricDistribution>(); }

DistributionPtr block_base_distribution(const LemmaArtifacts& art) {
    return std::make_shared<BlockDistribution>(art);
}

DistributionPtr labeled_distribution(DistributionPtr base, LabelSource z, const UniverseSpec& spec) {
    return std::make_shared<LabeledDistribution>(std::move(base), std::move(z), spec);
}

}  // namespace aglab
