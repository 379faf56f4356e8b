#include <doctest.h>

#include <cmath>
#include <map>

#include "aglab/distributions.hpp"
#include "aglab/errors.hpp"

using namespace aglab;

namespace {

LemmaArtifacts two_blocks() {
    LemmaArtifacts art;
    art.n = {BigCount::of(2), BigCount::of(8)};
    art.k = {BigCount::of(4), BigCount::of(8)};
    art.sigma = {BigCount::of(4), BigCount::of(12)};
    art.p = {0.5, 0.5};
    return art;
}

}  // namespace

TEST_CASE("finite support distributions") {
    const auto D0 = finite_support({{kSignatureS0, 0.75}, {kSignatureS1, 0.25}});
    CHECK(D0->pmf(kSignatureS0) == 0.75);
    CHECK(D0->pmf(kSignatureS1) == 0.25);
    CHECK(D0->pmf(UniverseIndex{3}) == 0.0);
    CHECK(D0->cdf(UniverseIndex{1}) == 0.75);

    const auto point = finite_support({{UniverseIndex{9}, 1.0}});
    Rng rng(1);
    for (int t = 0; t < 100; ++t) CHECK(point->sample(rng).k == 9);

    CHECK_THROWS_AS(finite_support({{UniverseIndex{1}, 0.5}, {UniverseIndex{2}, 0.4}}), InvalidArgument);
    CHECK_THROWS_AS(finite_support({{UniverseIndex{1}, 1.5}, {UniverseIndex{2}, -0.5}}), InvalidArgument);
}

TEST_CASE("inverse-CDF sampling matches the atom masses") {
    const auto D = finite_support({{UniverseIndex{1}, 0.5}, {UniverseIndex{2}, 0.5}});
    Rng rng(2024);
    int ones = 0;
    const int draws = 100000;
    for (int t = 0; t < draws; ++t) ones += D->sample(rng).k == 1 ? 1 : 0;
    CHECK(std::abs(ones / double(draws) - 0.5) < 0.01);
}

TEST_CASE("geometric base") {
    const auto G = geometric_base();
    CHECK(G->pmf(UniverseIndex{1}) == 0.5);
    CHECK(G->pmf(UniverseIndex{10}) == std::ldexp(1.0, -10));
    double s = 0.0;
    for (std::uint64_t w = 1; w <= 50; ++w) s += G->pmf(UniverseIndex{w});
    CHECK(s == doctest::Approx(1.0 - std::ldexp(1.0, -50)).epsilon(1e-15));
    CHECK(G->cdf(UniverseIndex{50}) == doctest::Approx(1.0 - std::ldexp(1.0, -50)).epsilon(1e-15));
    Rng rng(7);
    double mean = 0.0;
    const int draws = 100000;
    for (int t = 0; t < draws; ++t) mean += static_cast<double>(G->sample(rng).k);
    CHECK(std::abs(mean / draws - 2.0) < 0.03);
}

TEST_CASE("block distribution spreads p over 2k equal atoms") {
    const BlockDistribution B(two_blocks());
    for (std::uint64_t w = 1; w <= 8; ++w) CHECK(B.pmf(UniverseIndex{w}) == 0.0625);
    double first = 0.0;
    double all = 0.0;
    for (std::uint64_t w = 1; w <= B.block_end(2); ++w) {
        if (w <= B.block_end(1)) first += B.pmf(UniverseIndex{w});
        all += B.pmf(UniverseIndex{w});
    }
    CHECK(first == doctest::Approx(0.5));
    CHECK(all == doctest::Approx(1.0));
    CHECK(B.pmf(UniverseIndex{B.block_end(2) + 1}) == 0.0);
    CHECK(B.truncated_at(UniverseIndex{B.block_end(2) + 1}));
    CHECK_FALSE(B.truncated_at(UniverseIndex{B.block_end(2)}));
}

TEST_CASE("block distribution from a constructed sequence is normalized") {
    const auto art = lemma512_construct(RateFunction::power(0.5), 4);
    const BlockDistribution B(art);
    for (std::size_t i = 1; i <= B.depth(); ++i) {
        double mass = 0.0;
        for (std::uint64_t w = B.block_begin(i); w <= B.block_end(i); ++w) {
            const double p = B.pmf(UniverseIndex{w});
            CHECK(p > 0.0);
            mass += p;
        }
        CHECK(mass == doctest::Approx(art.p[i - 1]).epsilon(1e-9));
    }
    CHECK(B.cdf(UniverseIndex{B.block_end(B.depth())}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("labeled distributions") {
    const auto spec = UniverseSpec::pairs(3, -1);
    const auto point = labeled_distribution(finite_support({{UniverseIndex{3}, 1.0}}),
                                            LabelSource::explicit_prefix({1, -1, 0}), spec);
    CHECK(point->pmf(encode_pair(spec, 3, 0)) == 1.0);
    Rng rng(3);
    CHECK(point->sample(rng).k == encode_pair(spec, 3, 0).k);

    const auto z = LabelSource::seeded(11, 2, 0);
    const auto D = labeled_distribution(geometric_base(), z, spec);
    for (std::uint64_t w = 1; w <= 20; ++w) {
        const auto y = z.query(w);
        CHECK(D->pmf(encode_pair(spec, w, y)) == std::ldexp(1.0, -static_cast<int>(w)));
        CHECK_FALSE(D->in_support(encode_pair(spec, w, y == 0 ? 1 : 0)));
        CHECK_FALSE(D->in_support(encode_pair(spec, w, -1)));
    }
}

TEST_CASE("seeded label sources are reproducible and uniform") {
    const auto a = LabelSource::seeded(5, 4, 1);
    const auto b = LabelSource::seeded(5, 4, 1);
    std::map<std::int64_t, int> freq;
    for (std::uint64_t w = 1; w <= 40000; ++w) {
        CHECK(a.query(w) == b.query(w));
        ++freq[a.query(w)];
    }
    CHECK(freq.size() == 4);
    for (const auto& [y, c] : freq) {
        CHECK(y >= 1);
        CHECK(y <= 4);
        CHECK(std::abs(c / 40000.0 - 0.25) < 0.02);
    }
}

TEST_CASE("closed-form mass outside agrees with summing the pmf") {
    const auto spec = UniverseSpec::pairs(3, -1);
    const auto z = LabelSource::seeded(3, 2, 0);
    const auto D = labeled_distribution(geometric_base(), z, spec);
    const auto C = prefix_labeled_collection();
    for (std::uint64_t i = 1; i <= 30; ++i) {
        const auto L = C.at(i);
        double inside = 0.0;
        for (std::uint64_t k = 1; k <= 3 * 60; ++k) {
            if (L->member(UniverseIndex{k})) inside += D->pmf(UniverseIndex{k});
        }
        CHECK(D->mass_outside(*L) == doctest::Approx(1.0 - inside).epsilon(1e-12));
    }
}

TEST_CASE("atoms with a geometric tail") {
    auto tail = std::make_shared<HeadTailLanguage>(9, "evens", std::vector<std::uint64_t>{}, 1, 2, 0);
    const AtomsWithTailDistribution D({{UniverseIndex{1}, 0.2}, {UniverseIndex{3}, 0.1}}, tail, 0.7);
    double total = 0.0;
    for (std::uint64_t k = 1; k <= 200; ++k) total += D.pmf(UniverseIndex{k});
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(D.pmf(UniverseIndex{2}) == doctest::Approx(0.35));
    CHECK(D.pmf(UniverseIndex{5}) == 0.0);

    const auto R = residue_collection(2);
    CHECK(D.mass_outside(*R.at(1)) == doctest::Approx(0.3));
    CHECK(D.mass_outside(*R.at(2)) == doctest::Approx(0.7));
    CHECK(D.contains_language(*R.at(1)) == std::optional<bool>(true));
    CHECK(D.contains_language(*R.at(2)) == std::optional<bool>(false));

    Rng rng(9);
    int ones = 0;
    for (int t = 0; t < 100000; ++t) ones += D.sample(rng).k == 1 ? 1 : 0;
    CHECK(std::abs(ones / 100000.0 - 0.2) < 0.01);
    CHECK_THROWS_AS(AtomsWithTailDistribution({{UniverseIndex{2}, 0.3}}, tail, 0.7), InvalidArgument);
}
