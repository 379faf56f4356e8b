#include <doctest.h>

#include "aglab/languages.hpp"

using namespace aglab;

namespace {

std::uint64_t scan_first(const Language& L, std::uint64_t from, std::uint64_t limit) {
    for (std::uint64_t k = from; k <= limit; ++k) {
        if (L.member(UniverseIndex{k})) return k;
    }
    return 0;
}

// member, nth_member and count_through describe the same set.
void check_consistent(const Language& L, std::uint64_t limit) {
    std::uint64_t count = 0;
    for (std::uint64_t k = 1; k <= limit; ++k) {
        if (L.member(UniverseIndex{k})) {
            ++count;
            REQUIRE(L.nth_member(count).k == k);
        }
        REQUIRE(L.count_through(UniverseIndex{k}) == count);
    }
}

}  // namespace

TEST_CASE("first members") {
    const auto R = residue_collection(2);
    CHECK(first_member(*R.at(1)).k == 2);

    const auto P = prefix_labeled_collection();
    const auto spec = UniverseSpec::pairs(3, -1);
    const auto L0 = P.at(position_for_prefix_bits({0}));
    CHECK(first_member(*L0).k == encode_pair(spec, 1, 0).k);
    CHECK(first_member(*L0).k == scan_first(*L0, 1, 100));

    const auto S = signature_collection(6);
    CHECK(first_member(*S.at(1)).k == kSignatureS0.k);
    CHECK(scan_first(*S.at(1), 1, 100) == kSignatureS0.k);
    CHECK(scan_first(*S.at(2), 1, 100) == kSignatureS1.k);
}

TEST_CASE("next member skips to the following member") {
    const auto evens = residue_collection(2).at(1);
    CHECK(next_member(*evens, UniverseIndex{2}).k == 4);
    CHECK(next_member(*evens, UniverseIndex{3}).k == 4);

    const auto spec = UniverseSpec::pairs(3, -1);
    const auto L0 = prefix_labeled_collection().at(position_for_prefix_bits({0}));
    const auto start = encode_pair(spec, 1, 0);
    CHECK(next_member(*L0, start).k == encode_pair(spec, 2, -1).k);
    CHECK(next_member(*L0, start).k == scan_first(*L0, start.k + 1, 100));
}

TEST_CASE("windows follow the enumeration and truncate finite collections") {
    CHECK(residue_collection(3).window(5).size() == 3);
    const auto P = prefix_labeled_collection();
    const auto w = P.window(2);
    REQUIRE(w.size() == 2);
    CHECK(prefix_bits_for_position(1) == std::vector<int>{0});
    CHECK(prefix_bits_for_position(2) == std::vector<int>{1});
    CHECK(w[0]->member(encode_pair(UniverseSpec::pairs(3, -1), 1, 0)));
    CHECK(w[1]->member(encode_pair(UniverseSpec::pairs(3, -1), 1, 1)));
    const auto R = residue_collection(4).window(2);
    CHECK(R[0]->member(UniverseIndex{4}));
    CHECK(R[1]->member(UniverseIndex{5}));
}

TEST_CASE("prefix positions round trip in length-then-lexicographic order") {
    std::vector<int> prev;
    for (std::uint64_t pos = 1; pos <= 200; ++pos) {
        const auto bits = prefix_bits_for_position(pos);
        CHECK(position_for_prefix_bits(bits) == pos);
        if (!prev.empty()) {
            CHECK((bits.size() > prev.size() || (bits.size() == prev.size() && prev < bits)));
        }
        prev = bits;
    }
}

TEST_CASE("membership, enumeration and counting agree") {
    for (const auto& L : residue_collection(3).window(3)) check_consistent(*L, 300);
    for (const auto& L : signature_collection(3).window(5)) check_consistent(*L, 300);
    for (const auto& L : prefix_labeled_collection().window(10)) check_consistent(*L, 300);
    for (std::uint64_t m : {0, 1, 4}) {
        for (const auto& L : finite_intersection_collection(m).window(2)) check_consistent(*L, 300);
    }
    for (const auto& L : label_constant_collection(UniverseSpec::pairs(4, 1)).window(4)) check_consistent(*L, 300);
}

TEST_CASE("signature strings belong to exactly one language") {
    const auto S = signature_collection(6);
    for (auto s : {kSignatureS0, kSignatureS1}) {
        int owners = 0;
        for (const auto& L : S.window(8)) owners += L->member(s) ? 1 : 0;
        CHECK(owners == 1);
    }
}

TEST_CASE("finite intersection pair shares exactly the common strings") {
    const auto C = finite_intersection_collection(3);
    for (std::uint64_t k = 1; k <= 100; ++k) {
        const bool both = C.at(1)->member(UniverseIndex{k}) && C.at(2)->member(UniverseIndex{k});
        CHECK(both == (k >= 2 && k <= 4));
    }
    CHECK_FALSE(C.at(1)->member(kReservedOutside));
    CHECK_FALSE(C.at(2)->member(kReservedOutside));
}
