#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aglab/languages.hpp"
#include "aglab/random.hpp"
#include "aglab/sequence.hpp"
#include "aglab/universe.hpp"

namespace aglab {

struct Atom {
    UniverseIndex index;
    double probability = 0.0;
};

enum class SupportKind { FiniteExplicit, Structured };

/// Distribution over universe indices. Immutable; sampling draws from a
/// caller-owned Rng.
class Distribution {
public:
    virtual ~Distribution() = default;

    virtual double pmf(UniverseIndex k) const = 0;
    virtual bool in_support(UniverseIndex k) const { return pmf(k) > 0.0; }
    virtual UniverseIndex sample(Rng& rng) const = 0;
    virtual SupportKind support_kind() const { return SupportKind::Structured; }

    // Atoms of a finite explicit support; empty for structured distributions.
    virtual std::span<const Atom> atoms() const { return {}; }

    // P[x <= k]. Throws Unsupported where no closed form is available.
    virtual double cdf(UniverseIndex k) const;

    // P[x not in L], exactly. Throws Unsupported where no closed form exists.
    virtual double mass_outside(const Language& L) const;

    // Certified answer to "L is a subset of supp(D)", when one is available.
    virtual std::optional<bool> contains_language(const Language& L) const;

    // True if k lies beyond a truncated construction (pmf reported as 0 there).
    virtual bool truncated_at(UniverseIndex) const { return false; }

    virtual std::string describe() const = 0;
};

using DistributionPtr = std::shared_ptr<const Distribution>;

/// Explicit finite support; inverse-CDF sampling over the atom list.
class FiniteSupportDistribution final : public Distribution {
public:
    explicit FiniteSupportDistribution(std::vector<Atom> atoms);

    double pmf(UniverseIndex k) const override;
    UniverseIndex sample(Rng& rng) const override;
    SupportKind support_kind() const override { return SupportKind::FiniteExplicit; }
    std::span<const Atom> atoms() const override { return atoms_; }
    double cdf(UniverseIndex k) const override;
    double mass_outside(const Language& L) const override;
    std::optional<bool> contains_language(const Language&) const override { return false; }
    std::string describe() const override;

private:
    std::vector<Atom> atoms_;       // sorted by index
    std::vector<double> cumulative_;
};

/// pmf(w) = 2^{-w} over N; sampled by counting fair coin flips.
class GeometricDistribution final : public Distribution {
public:
    double pmf(UniverseIndex k) const override;
    UniverseIndex sample(Rng& rng) const override;
    double cdf(UniverseIndex k) const override;
    double mass_outside(const Language& L) const override;
    std::optional<bool> contains_language(const Language&) const override { return true; }
    std::string describe() const override { return "geometric 2^-w"; }
};

/// Block distribution over N from the sequence construction: every w with
/// 2 sigma_{i-1} + 1 <= w <= 2 sigma_i has mass p_{k_i} / (2 k_i).
class BlockDistribution final : public Distribution {
public:
    explicit BlockDistribution(const LemmaArtifacts& art);

    double pmf(UniverseIndex k) const override;
    UniverseIndex sample(Rng& rng) const override;
    double cdf(UniverseIndex k) const override;
    bool truncated_at(UniverseIndex k) const override { return k.k > block_end_.back(); }
    std::optional<bool> contains_language(const Language&) const override { return false; }
    std::string describe() const override;

    // 1-based block containing w, or nullopt beyond the constructed depth.
    std::optional<std::size_t> block_of(std::uint64_t w) const;
    std::uint64_t block_begin(std::size_t i) const { return i == 1 ? 1 : block_end_[i - 2] + 1; }
    std::uint64_t block_end(std::size_t i) const { return block_end_[i - 1]; }
    std::size_t depth() const { return block_end_.size(); }
    double block_mass(std::size_t i) const { return mass_[i - 1]; }

private:
    std::vector<std::uint64_t> k_;
    std::vector<std::uint64_t> block_end_;  // 2 sigma_i
    std::vector<double> mass_;              // p_{k_i}
    std::vector<double> cumulative_;        // sum of mass_ through block i
};

/// Label sequence z over N: an explicit finite prefix, or lazily realized
/// uniform labels from a keyed counter PRNG.
class LabelSource {
public:
    static LabelSource explicit_prefix(std::vector<std::int64_t> labels);
    static LabelSource seeded(std::uint64_t seed, std::uint64_t label_count, std::int64_t label_offset);

    // Label z_w, w >= 1. Throws InvalidArgument beyond an explicit prefix.
    std::int64_t query(std::uint64_t w) const;

    bool is_seeded() const { return !explicit_; }
    std::int64_t min_label() const;
    std::int64_t max_label() const;

private:
    bool explicit_ = true;
    std::vector<std::int64_t> labels_;
    std::uint64_t seed_ = 0;
    std::uint64_t label_count_ = 1;
    std::int64_t label_offset_ = 0;
};

/// D_z: draw w from a base distribution over N and emit (w, z_w).
class LabeledDistribution final : public Distribution {
public:
    LabeledDistribution(DistributionPtr base, LabelSource z, UniverseSpec universe);

    double pmf(UniverseIndex k) const override;
    bool in_support(UniverseIndex k) const override;
    UniverseIndex sample(Rng& rng) const override;
    // Closed form for PairPatternLanguage whose tail labels are disjoint
    // from, or cover, the label range of z.
    double mass_outside(const Language& L) const override;
    std::optional<bool> contains_language(const Language& L) const override;
    std::string describe() const override;

    const Distribution& base() const { return *base_; }
    const LabelSource& labels() const { return z_; }
    const UniverseSpec& universe() const { return universe_; }

private:
    DistributionPtr base_;
    LabelSource z_;
    UniverseSpec universe_;
};

/// Explicit atoms plus `tail_mass` spread geometrically over the members of
/// `tail` in enumeration order (j-th member gets tail_mass * 2^{-j}).
/// The tail language must avoid every atom.
class AtomsWithTailDistribution final : public Distribution {
public:
    AtomsWithTailDistribution(std::vector<Atom> atoms, std::shared_ptr<const HeadTailLanguage> tail,
                              double tail_mass);

    double pmf(UniverseIndex k) const override;
    UniverseIndex sample(Rng& rng) const override;
    double mass_outside(const Language& L) const override;
    std::optional<bool> contains_language(const Language& L) const override;
    std::string describe() const override;

    std::span<const Atom> explicit_atoms() const { return atoms_; }
    double tail_mass() const { return tail_mass_; }

private:
    std::vector<Atom> atoms_;
    std::vector<double> cumulative_;
    std::shared_ptr<const HeadTailLanguage> tail_;
    double tail_mass_;
};

// Constructors named after their role.
DistributionPtr finite_support(std::vector<Atom> atoms);
DistributionPtr geometric_base();
DistributionPtr block_base_distribution(const LemmaArtifacts& art);
DistributionPtr labeled_distribution(DistributionPtr base, LabelSource z, const UniverseSpec& spec);

}  // namespace aglab
