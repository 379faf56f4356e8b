#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "aglab/identify.hpp"
#include "oracles.hpp"

using namespace aglab;

namespace {

Sample repeat(std::vector<std::pair<UniverseIndex, std::uint64_t>> counts) {
    std::vector<UniverseIndex> items;
    for (const auto& [k, c] : counts) items.insert(items.end(), c, k);
    return Sample(items);
}

}  // namespace

TEST_CASE("samples keep draws and counts") {
    const Sample S({UniverseIndex{3}, UniverseIndex{1}, UniverseIndex{3}});
    CHECK(S.size() == 3);
    CHECK(S.count(UniverseIndex{3}) == 2);
    CHECK(S.distinct().size() == 2);
    CHECK(S.distinct()[0].first.k == 1);
    const auto T = Sample::from_counts({{UniverseIndex{3}, 2}, {UniverseIndex{1}, 1}, {UniverseIndex{5}, 0}});
    CHECK(T.size() == 3);
    CHECK(T.distinct() == S.distinct());
    CHECK(T.items().size() == 3);
    CHECK_FALSE(T.contains(UniverseIndex{5}));
}

TEST_CASE("empirical miss counts") {
    const auto C = signature_collection(2);
    const auto L = C.at(1);
    const auto Lp = C.at(2);
    CHECK(empirical_miss_count(*L, repeat({{kSignatureS0, 2}, {kSignatureS1, 2}})) == 2);
    const HeadTailLanguage all(0, "all", {}, 1, 1, 0);
    CHECK(empirical_miss_count(all, repeat({{kSignatureS0, 2}, {kSignatureS1, 2}})) == 0);
    CHECK(empirical_miss_count(*Lp, repeat({{kSignatureS0, 7}, {kSignatureS1, 3}})) == 7);
}

TEST_CASE("erm picks the first minimizer") {
    CHECK(erm_select({4}) == 1);
    CHECK(erm_select({3, 1, 1}) == 2);
    const auto C = signature_collection(6);
    CHECK(erm_identify(C, repeat({{kSignatureS0, 10}}), WindowFn::constant(8)) == 1);
}

TEST_CASE("margin rule traces") {
    CHECK(margin_select({7}, 9, 1) == 1);
    // (15 - 5) * 5 = 50 is not > 50.
    CHECK(margin_select({15, 5}, 25, 5) == 1);
    // i = 2 qualifies (65 > 50); i = 3 fails against j = 2 (10 <= 50).
    CHECK(margin_select({18, 5, 3}, 25, 5) == 2);
}

TEST_CASE("selection rules match the brute-force definitions") {
    std::mt19937_64 gen(17);
    for (int t = 0; t < 20000; ++t) {
        const std::uint64_t size = 1 + gen() % 7;
        const std::uint64_t n = 1 + gen() % 40;
        const std::uint64_t f = 1 + gen() % 8;
        std::vector<std::uint64_t> miss(size);
        for (auto& m : miss) m = gen() % (n + 1);
        CHECK(margin_select(miss, n, f) == oracle::margin_select(miss, n, f));
        CHECK(erm_select(miss) == oracle::erm_select(miss));
    }
}

TEST_CASE("window functions") {
    for (std::uint64_t n = 1; n <= 5000; ++n) {
        const auto r = ceil_root(n, 4);
        CHECK(r * r * r * r >= n);
        CHECK((r - 1) * (r - 1) * (r - 1) * (r - 1) < n);
    }
    CHECK(ceil_root(std::uint64_t{1} << 62, 2) == std::uint64_t{1} << 31);
    CHECK(ceil_root(18446744073709551615ULL, 4) == 65536);
    const auto f = WindowFn::fourth_root();
    CHECK(f(4096) == 8);
    CHECK(f(4097) == 9);
    CHECK(f(256) == 4);
    CHECK(f.name() == "root:4");
    CHECK(WindowFn::log2()(1) == 1);
    CHECK(WindowFn::log2()(8) == 4);
    CHECK(WindowFn::constant(3)(1000) == 3);
}

TEST_CASE("identification bound") {
    const auto f = WindowFn::fourth_root();
    CHECK(theoretical_id_bound(1, f) == 1.0);
    CHECK(theoretical_id_bound(4096, f) == doctest::Approx(16.0 * std::exp(-32.0)).epsilon(1e-12));
    CHECK(theoretical_id_bound(4096, f) == doctest::Approx(2.03e-13).epsilon(0.01));
    const auto g = WindowFn::constant(3);
    for (std::uint64_t n = 1; n < 500; ++n) CHECK(theoretical_id_bound(n + 1, g) <= theoretical_id_bound(n, g));
}

TEST_CASE("algorithms depend on the sample only through its counts") {
    const auto C = signature_collection(4);
    const std::vector<UniverseIndex> pool = {kSignatureS0, kSignatureS1, UniverseIndex{3}, UniverseIndex{9}};
    std::mt19937_64 gen(5);
    for (int t = 0; t < 500; ++t) {
        const std::uint64_t n = 1 + gen() % 60;
        std::vector<UniverseIndex> items(n);
        for (auto& x : items) x = pool[gen() % pool.size()];
        auto shuffled = items;
        std::shuffle(shuffled.begin(), shuffled.end(), gen);
        for (const auto& alg : {margin_algorithm(WindowFn::fourth_root()), erm_algorithm(WindowFn::log2())}) {
            const auto a = alg.run(C, Sample(items));
            CHECK(a == alg.run(C, Sample(shuffled)));
            CHECK(a >= 1);
            CHECK(a <= alg.reach(C, n));
        }
    }
}

TEST_CASE("windows are truncated by finite collections") {
    const auto C = residue_collection(2);
    const Sample S(std::vector<UniverseIndex>(50, UniverseIndex{1}));
    // Odds explain everything; the margin rule moves to it once the gap is decisive.
    CHECK(erm_identify(C, S, WindowFn::constant(10)) == 2);
    CHECK(margin_identify(C, S, WindowFn::constant(10)) == 2);
    CHECK(margin_identify(C, S, WindowFn::constant(1)) == 1);
    CHECK(constant_algorithm(2).run(C, S) == 2);
}
