#include "aglab/universe.hpp"

#include <limits>

#include "aglab/errors.hpp"

namespace aglab {

UniverseSpec UniverseSpec::naturals() {
    return UniverseSpec{UniverseKind::Naturals, 1, 0, "N"};
}

UniverseSpec UniverseSpec::pairs(std::uint64_t label_count, std::int64_t label_offset,
                                 std::string description) {
    if (label_count == 0) throw InvalidArgument("pair universe needs at least one label");
    if (description.empty()) {
        description = "N x {" + std::to_string(label_offset) + ".." +
                      std::to_string(label_offset + static_cast<std::int64_t>(label_count) - 1) + "}";
    }
    return UniverseSpec{UniverseKind::PairNatFinite, label_count, label_offset, std::move(description)};
}

bool UniverseSpec::has_label(std::int64_t y) const {
    if (kind != UniverseKind::PairNatFinite) return false;
    return y >= label_offset && y - label_offset < static_cast<std::int64_t>(label_count);
}

bool UniverseSpec::operator==(const UniverseSpec& other) const {
    if (kind != other.kind) return false;
    if (kind == UniverseKind::Naturals) return true;
    return label_count == other.label_count && label_offset == other.label_offset;
}

UString decode(const UniverseSpec& spec, UniverseIndex k) {
    if (k.k == 0) throw InvalidArgument("universe indices are 1-based");
    if (spec.kind == UniverseKind::Naturals) return k.k;
    return decode_pair(spec, k);
}

LabeledPair decode_pair(const UniverseSpec& spec, UniverseIndex k) {
    if (spec.kind != UniverseKind::PairNatFinite) throw InvalidArgument("not a pair universe");
    if (k.k == 0) throw InvalidArgument("universe indices are 1-based");
    const std::uint64_t m = spec.label_count;
    const std::uint64_t w = (k.k - 1) / m + 1;
    const auto y = spec.label_offset + static_cast<std::int64_t>((k.k - 1) % m);
    return LabeledPair{w, y};
}

UniverseIndex encode_pair(const UniverseSpec& spec, std::uint64_t w, std::int64_t y) {
    if (spec.kind != UniverseKind::PairNatFinite) throw InvalidArgument("not a pair universe");
    if (w < 1) throw InvalidArgument("pair first coordinate must be >= 1");
    if (!spec.has_label(y)) {
        throw InvalidArgument("label " + std::to_string(y) + " not in " + spec.description);
    }
    const std::uint64_t m = spec.label_count;
    if (w - 1 > (std::numeric_limits<std::uint64_t>::max() - m) / m) {
        throw InvalidArgument("pair index overflows 64 bits");
    }
    return UniverseIndex{(w - 1) * m + static_cast<std::uint64_t>(y - spec.label_offset) + 1};
}

UniverseIndex encode(const UniverseSpec& spec, const UString& s) {
    if (spec.kind == UniverseKind::Naturals) {
        const auto* v = std::get_if<std::uint64_t>(&s);
        if (v == nullptr) throw InvalidArgument("expected a natural number payload");
        if (*v < 1) throw InvalidArgument("naturals start at 1");
        return UniverseIndex{*v};
    }
    const auto* p = std::get_if<LabeledPair>(&s);
    if (p == nullptr) throw InvalidArgument("expected a (w, y) payload");
    return encode_pair(spec, p->w, p->y);
}

std::string to_string(const UString& s) {
    if (const auto* v = std::get_if<std::uint64_t>(&s)) return std::to_string(*v);
    const auto& p = std::get<LabeledPair>(s);
    return "(" + std::to_string(p.w) + "," + std::to_string(p.y) + ")";
}

}  // namespace aglab
