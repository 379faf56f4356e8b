#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "aglab/errors.hpp"
#include "aglab/generate.hpp"
#include "oracles.hpp"

using namespace aglab;

namespace {

std::shared_ptr<const HeadTailLanguage> evens_language() {
    return std::make_shared<HeadTailLanguage>(1, "evens", std::vector<std::uint64_t>{}, 1, 2, 0);
}

Sample sample_of(std::initializer_list<std::uint64_t> ks) {
    std::vector<UniverseIndex> items;
    for (auto k : ks) items.push_back(UniverseIndex{k});
    return Sample(items);
}

}  // namespace

TEST_CASE("witness elimination hand trace") {
    const auto C = residue_collection(2);  // evens, odds
    const auto st = generate_trace(C, sample_of({2, 4}));
    CHECK(st.r[0].k == 6);
    CHECK(st.r[1].k == 1);
    CHECK(st.chosen == 1);
    CHECK(st.output.k == 6);
}

TEST_CASE("without advances the output is the largest first member") {
    const auto C = residue_collection(3);
    CHECK(generate(C, sample_of({100})).k == 3);
}

TEST_CASE("ties go to the smallest index") {
    const auto C = Collection::finite(UniverseSpec::naturals(), "twins",
                                      {std::make_shared<HeadTailLanguage>(1, "a", std::vector<std::uint64_t>{}, 1, 2, 0),
                                       std::make_shared<HeadTailLanguage>(2, "b", std::vector<std::uint64_t>{}, 1, 2, 0)});
    const auto st = generate_trace(C, sample_of({2}));
    CHECK(st.chosen == 1);
    CHECK(st.output.k == 4);
}

TEST_CASE("output is new and lies in the chosen language") {
    std::mt19937_64 gen(3);
    for (const auto& C : {residue_collection(3), finite_intersection_collection(2), finite_intersection_collection(0)}) {
        for (int t = 0; t < 500; ++t) {
            std::vector<UniverseIndex> items(1 + gen() % 20);
            for (auto& x : items) x = UniverseIndex{1 + gen() % 30};
            const Sample S(items);
            const auto st = generate_trace(C, S);
            CHECK_FALSE(S.contains(st.output));
            CHECK(C.at(st.chosen)->member(st.output));
            CHECK(generate(C, S) == st.output);
        }
    }
}

TEST_CASE("countable collections need a window") {
    const auto C = prefix_labeled_collection();
    CHECK_THROWS_AS(generate(C, sample_of({1})), InvalidArgument);
    CHECK_NOTHROW(generate(C, sample_of({1}), 4));
}

TEST_CASE("first unseen") {
    CHECK(first_unseen(sample_of({1, 2, 4})).k == 3);
    CHECK(first_unseen(sample_of({5})).k == 1);
}

TEST_CASE("witness index") {
    const auto C = residue_collection(2);
    const AtomsWithTailDistribution on_evens({}, evens_language(), 1.0);
    CHECK(witness_index(C, on_evens, 100).value == std::optional<std::uint64_t>(1));

    const auto all = Collection::finite(UniverseSpec::naturals(), "all",
                                        {std::make_shared<HeadTailLanguage>(1, "N", std::vector<std::uint64_t>{}, 1, 1, 0)});
    CHECK(witness_index(all, *geometric_base(), 100).value == std::optional<std::uint64_t>(1));

    const auto small = finite_support({{UniverseIndex{2}, 0.5}, {UniverseIndex{4}, 0.5}});
    CHECK(witness_index(C, *small, 100).value == std::optional<std::uint64_t>(6));
    const auto unknown = witness_index(C, *small, 3);
    CHECK_FALSE(unknown.known());
    CHECK_FALSE(unknown.reason.empty());
}

TEST_CASE("witness index matches the brute-force scan") {
    std::mt19937_64 gen(8);
    for (int t = 0; t < 200; ++t) {
        std::vector<Atom> atoms;
        const std::uint64_t count = 1 + gen() % 6;
        std::vector<std::uint64_t> used;
        while (used.size() < count) {
            const std::uint64_t k = 1 + gen() % 25;
            if (std::find(used.begin(), used.end(), k) == used.end()) used.push_back(k);
        }
        for (auto k : used) atoms.push_back({UniverseIndex{k}, 1.0 / static_cast<double>(count)});
        const auto D = finite_support(atoms);
        for (const auto& C : {residue_collection(2), residue_collection(3), finite_intersection_collection(3)}) {
            CHECK(witness_index(C, *D, 1000).value == oracle::witness_index(C, *D, 1000));
        }
    }
}

TEST_CASE("generation constants") {
    const auto C = residue_collection(2);
    const AtomsWithTailDistribution on_evens({}, evens_language(), 1.0);
    const auto g = analytic_gen_constants(C, on_evens, 1, 1);
    CHECK(g.i_star == 2);
    CHECK(g.I_star == std::vector<std::uint64_t>{2});
    CHECK(g.p_star == on_evens.pmf(UniverseIndex{2}));
    CHECK(g.c == 1);
    CHECK(g.bound(0) == 1.0);
    CHECK(g.bound(3) == doctest::Approx(std::pow(1.0 - g.p_star, 3)));
    CHECK(g.Cexp == doctest::Approx(-std::log(1.0 - g.p_star)));

    const auto point = finite_support({{UniverseIndex{2}, 1.0}});
    CHECK_THROWS_AS(analytic_gen_constants(C, *point, 1, 1), InvalidArgument);
}

TEST_CASE("generator horizons") {
    const auto C = residue_collection(2);
    const auto D = finite_support({{UniverseIndex{2}, 0.5}, {UniverseIndex{4}, 0.5}});
    CHECK(witness_generator().horizon(C, *D) == std::optional<std::uint64_t>(6));
    CHECK(first_unseen_generator().horizon(C, *D) == std::optional<std::uint64_t>(1));
}
