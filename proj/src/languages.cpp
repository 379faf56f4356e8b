#include "aglab/languages.hpp"

#include <algorithm>
#include <bit>
#include <limits>

#include "aglab/errors.hpp"

namespace aglab {

std::uint64_t Language::count_through(UniverseIndex k) const {
    // Largest j with nth_member(j) <= k; nth_member(j) >= j bounds j by k.
    std::uint64_t lo = 0;
    std::uint64_t hi = k.k;
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo + 1) / 2;
        if (nth_member(mid) <= k) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    return lo;
}

// ---------------------------------------------------------------------------

HeadTailLanguage::HeadTailLanguage(int id, std::string description, std::vector<std::uint64_t> head,
                                   std::uint64_t tail_start, std::uint64_t modulus,
                                   std::uint64_t residue)
    : Language(id, std::move(description)), head_(std::move(head)), modulus_(modulus), residue_(residue) {
    if (modulus_ == 0) throw InvalidArgument("modulus must be positive");
    if (residue_ >= modulus_) throw InvalidArgument("residue must be below the modulus");
    if (tail_start == 0) tail_start = 1;
    std::sort(head_.begin(), head_.end());
    if (std::adjacent_find(head_.begin(), head_.end()) != head_.end()) {
        throw InvalidArgument("duplicate head element");
    }
    if (!head_.empty() && head_.front() == 0) throw InvalidArgument("indices are 1-based");
    if (!head_.empty() && head_.back() >= tail_start) {
        throw InvalidArgument("head elements must precede the tail start");
    }
    const std::uint64_t shift = (residue_ + modulus_ - tail_start % modulus_) % modulus_;
    tail_first_ = tail_start + shift;
}

bool HeadTailLanguage::member(UniverseIndex k) const {
    if (k.k >= tail_first_) return k.k % modulus_ == residue_;
    return std::binary_search(head_.begin(), head_.end(), k.k);
}

UniverseIndex HeadTailLanguage::nth_member(std::uint64_t j) const {
    if (j == 0) throw InvalidArgument("member ranks are 1-based");
    if (j <= head_.size()) return UniverseIndex{head_[j - 1]};
    const std::uint64_t t = j - head_.size() - 1;
    if (t > (std::numeric_limits<std::uint64_t>::max() - tail_first_) / modulus_) {
        throw InvalidArgument("member index overflows 64 bits");
    }
    return UniverseIndex{tail_first_ + t * modulus_};
}

std::uint64_t HeadTailLanguage::count_through(UniverseIndex k) const {
    const auto in_head =
        static_cast<std::uint64_t>(std::upper_bound(head_.begin(), head_.end(), k.k) - head_.begin());
    if (k.k < tail_first_) return in_head;
    return in_head + (k.k - tail_first_) / modulus_ + 1;
}

// ---------------------------------------------------------------------------

PairPatternLanguage::PairPatternLanguage(int id, std::string description, UniverseSpec universe,
                                         std::vector<std::vector<std::int64_t>> prefix,
                                         std::vector<std::int64_t> tail)
    : Language(id, std::move(description)),
      universe_(std::move(universe)),
      prefix_(std::move(prefix)),
      tail_(std::move(tail)) {
    if (universe_.kind != UniverseKind::PairNatFinite) {
        throw InvalidArgument("pattern languages live in a pair universe");
    }
    if (tail_.empty()) throw InvalidArgument("tail label set must be nonempty (languages are infinite)");
    auto normalize = [this](std::vector<std::int64_t>& labels) {
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        for (auto y : labels) {
            if (!universe_.has_label(y)) throw InvalidArgument("label outside the universe");
        }
    };
    normalize(tail_);
    cumulative_.assign(prefix_.size() + 1, 0);
    for (std::size_t w = 0; w < prefix_.size(); ++w) {
        normalize(prefix_[w]);
        cumulative_[w + 1] = cumulative_[w] + prefix_[w].size();
    }
}

const std::vector<std::int64_t>& PairPatternLanguage::labels_at(std::uint64_t w) const {
    if (w >= 1 && w <= prefix_.size()) return prefix_[w - 1];
    return tail_;
}

bool PairPatternLanguage::member(UniverseIndex k) const {
    const auto [w, y] = decode_pair(universe_, k);
    const auto& labels = labels_at(w);
    return std::binary_search(labels.begin(), labels.end(), y);
}

UniverseIndex PairPatternLanguage::nth_member(std::uint64_t j) const {
    if (j == 0) throw InvalidArgument("member ranks are 1-based");
    const std::uint64_t in_prefix = cumulative_.back();
    if (j <= in_prefix) {
        // First w with cumulative_[w] >= j.
        const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), j);
        const auto w = static_cast<std::uint64_t>(it - cumulative_.begin());
        const std::uint64_t offset = j - cumulative_[w - 1] - 1;
        return encode_pair(universe_, w, prefix_[w - 1][offset]);
    }
    const std::uint64_t t = j - in_prefix - 1;
    const std::uint64_t per_block = tail_.size();
    const std::uint64_t w = prefix_.size() + t / per_block + 1;
    return encode_pair(universe_, w, tail_[t % per_block]);
}

std::uint64_t PairPatternLanguage::count_through(UniverseIndex k) const {
    const auto [w, y] = decode_pair(universe_, k);
    const auto& labels = labels_at(w);
    const auto within =
        static_cast<std::uint64_t>(std::upper_bound(labels.begin(), labels.end(), y) - labels.begin());
    if (w <= prefix_.size()) return cumulative_[w - 1] + within;
    return cumulative_.back() + (w - prefix_.size() - 1) * tail_.size() + within;
}

// ---------------------------------------------------------------------------

Collection Collection::finite(UniverseSpec universe, std::string name, std::vector<LanguagePtr> languages) {
    if (languages.empty()) throw InvalidArgument("a collection needs at least one language");
    Collection c;
    c.universe_ = std::move(universe);
    c.name_ = std::move(name);
    c.languages_ = std::move(languages);
    return c;
}

Collection Collection::countable(UniverseSpec universe, std::string name, Generator generator,
                                 std::uint64_t cached) {
    if (!generator) throw InvalidArgument("countable collection needs a generator");
    Collection c;
    c.universe_ = std::move(universe);
    c.name_ = std::move(name);
    c.languages_.reserve(cached);
    for (std::uint64_t i = 1; i <= cached; ++i) c.languages_.push_back(generator(i));
    c.generator_ = std::move(generator);
    return c;
}

std::optional<std::uint64_t> Collection::size() const {
    if (generator_) return std::nullopt;
    return languages_.size();
}

LanguagePtr Collection::at(std::uint64_t i) const {
    if (i == 0) throw InvalidArgument("collection indices are 1-based");
    if (i <= languages_.size()) return languages_[i - 1];
    if (!generator_) throw InvalidArgument("index beyond the end of a finite collection");
    return generator_(i);
}

std::vector<LanguagePtr> Collection::window(std::uint64_t size) const {
    if (size == 0) throw InvalidArgument("window size must be >= 1");
    if (!generator_) size = std::min<std::uint64_t>(size, languages_.size());
    std::vector<LanguagePtr> out;
    out.reserve(size);
    for (std::uint64_t i = 1; i <= size; ++i) out.push_back(at(i));
    return out;
}

UniverseIndex first_member(const Language& L) { return L.first_member(); }
UniverseIndex next_member(const Language& L, UniverseIndex k) { return L.next_member(k); }
std::vector<LanguagePtr> window(const Collection& c, std::uint64_t size) { return c.window(size); }

// ---------------------------------------------------------------------------

Collection signature_collection(std::uint64_t distractors) {
    auto universe = UniverseSpec::pairs(distractors + 2, 0);
    std::vector<LanguagePtr> langs;
    langs.push_back(std::make_shared<PairPatternLanguage>(
        1, "L: signature (1,0)", universe, std::vector<std::vector<std::int64_t>>{{0}},
        std::vector<std::int64_t>{0, 1}));
    langs.push_back(std::make_shared<PairPatternLanguage>(
        2, "L': signature (1,1)", universe, std::vector<std::vector<std::int64_t>>{{1}},
        std::vector<std::int64_t>{0, 1}));
    for (std::uint64_t t = 0; t < distractors; ++t) {
        const auto label = static_cast<std::int64_t>(t + 2);
        langs.push_back(std::make_shared<PairPatternLanguage>(
            static_cast<int>(t + 3), "distractor N x {" + std::to_string(label) + "}", universe,
            std::vector<std::vector<std::int64_t>>{}, std::vector<std::int64_t>{label}));
    }
    return Collection::finite(universe, "signature(" + std::to_string(distractors) + ")", std::move(langs));
}

std::vector<int> prefix_bits_for_position(std::uint64_t position) {
    if (position == 0) throw InvalidArgument("collection positions are 1-based");
    // Lengths 1..l-1 occupy positions 1 .. 2^l - 2, so l = floor(log2(position + 1)).
    const auto length = static_cast<unsigned>(std::bit_width(position + 1) - 1);
    const std::uint64_t rank = position + 1 - (std::uint64_t{1} << length);
    std::vector<int> bits(length);
    for (unsigned b = 0; b < length; ++b) {
        bits[b] = static_cast<int>((rank >> (length - 1 - b)) & 1U);
    }
    return bits;
}

std::uint64_t position_for_prefix_bits(const std::vector<int>& bits) {
    if (bits.empty() || bits.size() > 62) throw InvalidArgument("prefix length must be in 1..62");
    std::uint64_t rank = 0;
    for (int b : bits) {
        if (b != 0 && b != 1) throw InvalidArgument("prefix bits must be 0/1");
        rank = (rank << 1) | static_cast<std::uint64_t>(b);
    }
    return (std::uint64_t{1} << bits.size()) - 1 + rank;
}

LanguagePtr make_prefix_language(const std::vector<int>& bits, int id) {
    static const UniverseSpec universe = UniverseSpec::pairs(3, -1);
    std::vector<std::vector<std::int64_t>> prefix;
    std::string name = "L_";
    prefix.reserve(bits.size());
    for (int b : bits) {
        prefix.push_back({b});
        name += static_cast<char>('0' + b);
    }
    return std::make_shared<PairPatternLanguage>(id, std::move(name), universe, std::move(prefix),
                                                 std::vector<std::int64_t>{-1});
}

Collection prefix_labeled_collection() {
    auto generator = [](std::uint64_t position) {
        return make_prefix_language(prefix_bits_for_position(position), static_cast<int>(position));
    };
    // |I| <= 7 cached; windows used at desk scale stay inside it.
    return Collection::countable(UniverseSpec::pairs(3, -1), "prefix-labeled", generator, 254);
}

Collection finite_intersection_collection(std::uint64_t m) {
    std::vector<std::uint64_t> common;
    for (std::uint64_t s = 2; s <= m + 1; ++s) common.push_back(s);
    std::vector<LanguagePtr> langs;
    langs.push_back(std::make_shared<HeadTailLanguage>(1, "L: common + even tail", common, m + 2, 2, 0));
    langs.push_back(std::make_shared<HeadTailLanguage>(2, "L': common + odd tail", common, m + 2, 2, 1));
    return Collection::finite(UniverseSpec::naturals(), "finite-intersection(" + std::to_string(m) + ")",
                              std::move(langs));
}

Collection residue_collection(std::uint64_t q) {
    if (q == 0) throw InvalidArgument("residue modulus must be >= 1");
    std::vector<LanguagePtr> langs;
    for (std::uint64_t i = 0; i < q; ++i) {
        langs.push_back(std::make_shared<HeadTailLanguage>(
            static_cast<int>(i + 1), std::to_string(i) + " mod " + std::to_string(q),
            std::vector<std::uint64_t>{}, 1, q, i));
    }
    return Collection::finite(UniverseSpec::naturals(), "residue(" + std::to_string(q) + ")", std::move(langs));
}

Collection label_constant_collection(const UniverseSpec& universe) {
    if (universe.kind != UniverseKind::PairNatFinite) throw InvalidArgument("needs a pair universe");
    std::vector<LanguagePtr> langs;
    for (std::uint64_t t = 0; t < universe.label_count; ++t) {
        const auto y = universe.label_offset + static_cast<std::int64_t>(t);
        langs.push_back(std::make_shared<PairPatternLanguage>(
            static_cast<int>(t + 1), "N x {" + std::to_string(y) + "}", universe,
            std::vector<std::vector<std::int64_t>>{}, std::vector<std::int64_t>{y}));
    }
    return Collection::finite(universe, "label-constant", std::move(langs));
}

}  // namespace aglab
