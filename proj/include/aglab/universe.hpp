#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <variant>

namespace aglab {

/// 1-based position k in the fixed enumeration u_1, u_2, ... of a universe.
struct UniverseIndex {
    std::uint64_t k = 1;

    constexpr auto operator<=>(const UniverseIndex&) const = default;
};

/// Payload of a pair universe N x {labels}.
struct LabeledPair {
    std::uint64_t w = 1;
    std::int64_t y = 0;

    constexpr auto operator<=>(const LabeledPair&) const = default;
};

/// Decoded string: a natural number or a (w, y) pair.
using UString = std::variant<std::uint64_t, LabeledPair>;

enum class UniverseKind { Naturals, PairNatFinite };

/// Countable universe with a bit-exact enumeration.
///
/// PairNatFinite(m, offset) enumerates N x {offset, ..., offset + m - 1}
/// row-major: k = (w - 1) * m + (y - offset) + 1, so block w occupies the
/// indices (w - 1) m + 1 ... w m in label order.
struct UniverseSpec {
    UniverseKind kind = UniverseKind::Naturals;
    std::uint64_t label_count = 1;
    std::int64_t label_offset = 0;
    std::string description;

    static UniverseSpec naturals();
    static UniverseSpec pairs(std::uint64_t label_count, std::int64_t label_offset,
                              std::string description = {});

    bool has_label(std::int64_t y) const;
    bool operator==(const UniverseSpec& other) const;
};

UString decode(const UniverseSpec& spec, UniverseIndex k);

// Throws InvalidArgument for payloads that do not belong to `spec`, and for
// indices that would not fit in 64 bits.
UniverseIndex encode(const UniverseSpec& spec, const UString& s);

// Shorthands for the pair universe.
LabeledPair decode_pair(const UniverseSpec& spec, UniverseIndex k);
UniverseIndex encode_pair(const UniverseSpec& spec, std::uint64_t w, std::int64_t y);

std::string to_string(const UString& s);

}  // namespace aglab
