#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aglab/universe.hpp"

namespace aglab {

/// An infinite subset of the universe, given by a total membership test and a
/// strictly increasing enumeration of its members.
class Language {
public:
    Language(int id, std::string description) : id_(id), description_(std::move(description)) {}
    virtual ~Language() = default;

    virtual bool member(UniverseIndex k) const = 0;

    // j-th smallest member, j >= 1.
    virtual UniverseIndex nth_member(std::uint64_t j) const = 0;

    // Number of members <= k. The default bisects over nth_member, which is
    // valid because nth_member(j) >= j.
    virtual std::uint64_t count_through(UniverseIndex k) const;

    UniverseIndex first_member() const { return nth_member(1); }

    // Smallest member strictly greater than k; k need not be a member.
    UniverseIndex next_member(UniverseIndex k) const { return nth_member(count_through(k) + 1); }

    int id() const { return id_; }
    const std::string& description() const { return description_; }

private:
    int id_;
    std::string description_;
};

using LanguagePtr = std::shared_ptr<const Language>;

/// Finite explicit head plus an arithmetic tail {k >= start : k = residue mod modulus}.
/// Covers residue classes, the finite-intersection pair and the full universe.
class HeadTailLanguage final : public Language {
public:
    HeadTailLanguage(int id, std::string description, std::vector<std::uint64_t> head,
                     std::uint64_t tail_start, std::uint64_t modulus, std::uint64_t residue);

    bool member(UniverseIndex k) const override;
    UniverseIndex nth_member(std::uint64_t j) const override;
    std::uint64_t count_through(UniverseIndex k) const override;

    const std::vector<std::uint64_t>& head() const { return head_; }
    std::uint64_t tail_first() const { return tail_first_; }
    std::uint64_t modulus() const { return modulus_; }
    std::uint64_t residue() const { return residue_; }

private:
    std::vector<std::uint64_t> head_;
    std::uint64_t modulus_;
    std::uint64_t residue_;
    std::uint64_t tail_first_;
};

/// Language over a pair universe N x labels: for w <= prefix.size() the
/// allowed labels are prefix[w-1], afterwards the fixed set `tail`.
class PairPatternLanguage final : public Language {
public:
    PairPatternLanguage(int id, std::string description, UniverseSpec universe,
                        std::vector<std::vector<std::int64_t>> prefix, std::vector<std::int64_t> tail);

    bool member(UniverseIndex k) const override;
    UniverseIndex nth_member(std::uint64_t j) const override;
    std::uint64_t count_through(UniverseIndex k) const override;

    const std::vector<std::int64_t>& labels_at(std::uint64_t w) const;
    std::uint64_t prefix_length() const { return prefix_.size(); }
    const std::vector<std::int64_t>& tail_labels() const { return tail_; }
    const UniverseSpec& universe() const { return universe_; }

private:
    UniverseSpec universe_;
    std::vector<std::vector<std::int64_t>> prefix_;
    std::vector<std::int64_t> tail_;
    std::vector<std::uint64_t> cumulative_;  // cumulative_[w] = members with first coordinate <= w
};

/// Ordered collection L_1, L_2, ...; finite, or countable via a generator.
class Collection {
public:
    using Generator = std::function<LanguagePtr(std::uint64_t)>;

    static Collection finite(UniverseSpec universe, std::string name, std::vector<LanguagePtr> languages);
    // The first `cached` languages are materialized up front.
    static Collection countable(UniverseSpec universe, std::string name, Generator generator,
                                std::uint64_t cached = 0);

    bool is_finite() const { return !generator_; }
    std::optional<std::uint64_t> size() const;

    // 1-based.
    LanguagePtr at(std::uint64_t i) const;

    // First `size` languages in enumeration order, truncated for finite collections.
    std::vector<LanguagePtr> window(std::uint64_t size) const;

    const UniverseSpec& universe() const { return universe_; }
    const std::string& name() const { return name_; }

private:
    UniverseSpec universe_;
    std::string name_;
    std::vector<LanguagePtr> languages_;
    Generator generator_;
};

UniverseIndex first_member(const Language& L);
UniverseIndex next_member(const Language& L, UniverseIndex k);
std::vector<LanguagePtr> window(const Collection& c, std::uint64_t size);

// Signature strings of signature_collection: s_0 = (1, 0) in L only and
// s_1 = (1, 1) in L' only.
inline constexpr UniverseIndex kSignatureS0{1};
inline constexpr UniverseIndex kSignatureS1{2};

/// L = {(1,0)} u {(w,0),(w,1) : w >= 2}, L' symmetric with (1,1), then
/// `distractors` pairwise-disjoint languages N x {2 + t}. Universe N x {0..d+1}.
Collection signature_collection(std::uint64_t distractors);

/// {L_I : I in {0,1}^{>=1}} over N x {-1,0,1}, enumerated by |I| then
/// lexicographically; L_I = {(j, I_j) : j <= |I|} u {(j, -1) : j > |I|}.
Collection prefix_labeled_collection();

// Enumeration position <-> bit string for prefix_labeled_collection.
std::vector<int> prefix_bits_for_position(std::uint64_t position);
std::uint64_t position_for_prefix_bits(const std::vector<int>& bits);
LanguagePtr make_prefix_language(const std::vector<int>& bits, int id);

/// Two languages over N sharing {2, ..., m+1}; L continues with even k >= m+2,
/// L' with odd k >= m+2. String 1 is in neither.
Collection finite_intersection_collection(std::uint64_t m);
inline constexpr UniverseIndex kReservedOutside{1};

/// L_i = {w : w = i mod q}, i = 0..q-1.
Collection residue_collection(std::uint64_t q);

/// L_y = N x {y} for every label of a pair universe.
Collection label_constant_collection(const UniverseSpec& universe);

}  // namespace aglab
