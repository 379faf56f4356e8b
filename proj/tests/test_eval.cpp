#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <stdexcept>

#include "aglab/errors.hpp"
#include "aglab/eval.hpp"
#include "oracles.hpp"

using namespace aglab;

namespace {

Analytics truth_of(double inf) {
    Analytics a;
    a.inf_error = inf;
    a.best_index = 1;
    return a;
}

// Residue classes mod 3 with a three-atom support; inf over C is 1 - 0.5.
struct SmallId {
    Collection C = residue_collection(3);
    DistributionPtr D = finite_support({{UniverseIndex{3}, 0.5}, {UniverseIndex{4}, 0.3}, {UniverseIndex{5}, 0.2}});
    Analytics truth = truth_of(0.5);
};

}  // namespace

TEST_CASE("true and excess error") {
    const auto inst = build_id_lower(6);
    const auto& D0 = *inst.variants[0].dist;
    CHECK(true_error(*inst.collection.at(1), D0) == 0.25);
    const HeadTailLanguage all(0, "N", {}, 1, 1, 0);
    CHECK(true_error(all, D0) == 0.0);
    CHECK(excess_error(*inst.collection.at(1), D0, 0.25) == 0.0);
    CHECK_THROWS_AS(excess_error(*inst.collection.at(1), D0, 0.5), ConsistencyError);
}

TEST_CASE("exact identification of constant answers") {
    const auto inst = build_id_lower(6);
    for (std::uint64_t n : {1, 5, 20}) {
        const auto r0 = exact_id_eval(constant_algorithm(1), inst.collection, *inst.variants[0].dist,
                                      inst.variants[0].analytics, n);
        CHECK(r0.id_err == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(r0.select_prob == doctest::Approx(1.0));
        const auto r1 = exact_id_eval(constant_algorithm(1), inst.collection, *inst.variants[1].dist,
                                      inst.variants[1].analytics, n);
        CHECK(r1.id_err == doctest::Approx(0.5));
        CHECK(r1.select_prob == doctest::Approx(0.0));
        CHECK(r1.compositions == n + 1);
    }
}

TEST_CASE("exact identification matches enumeration of ordered samples") {
    const auto inst = build_id_lower(4);
    const std::vector<IdAlgorithm> algs = {margin_algorithm(WindowFn::fourth_root()), erm_algorithm(WindowFn::log2()),
                                           margin_algorithm(WindowFn::constant(3))};
    for (const auto& alg : algs) {
        for (std::size_t v = 0; v < 2; ++v) {
            for (std::uint64_t n = 1; n <= 9; ++n) {
                const auto& var = inst.variants[v];
                const auto r = exact_id_eval(alg, inst.collection, *var.dist, var.analytics, n);
                CHECK(r.id_err == doctest::Approx(oracle::id_err(alg, inst.collection, *var.dist,
                                                                 var.analytics.inf_error, n))
                                      .epsilon(1e-10));
                CHECK(std::abs(r.total_probability - 1.0) < 1e-9);
            }
        }
    }
    const SmallId s;
    for (const auto& alg : algs) {
        for (std::uint64_t n = 1; n <= 6; ++n) {
            const auto r = exact_id_eval(alg, s.C, *s.D, s.truth, n);
            CHECK(r.id_err == doctest::Approx(oracle::id_err(alg, s.C, *s.D, 0.5, n)).epsilon(1e-10));
        }
    }
}

TEST_CASE("composition budget") {
    const SmallId s;
    CHECK_THROWS_AS(exact_id_eval(erm_algorithm(WindowFn::log2()), s.C, *s.D, s.truth, 100, 10), Unsupported);
    CHECK_THROWS_AS(exact_id_eval(erm_algorithm(WindowFn::log2()), s.C, *geometric_base(), s.truth, 3), Unsupported);
}

TEST_CASE("exact generation matches enumeration of ordered samples") {
    const std::vector<std::pair<Collection, DistributionPtr>> cases = {
        {residue_collection(2), finite_support({{UniverseIndex{2}, 0.5}, {UniverseIndex{4}, 0.3}, {UniverseIndex{1}, 0.2}})},
        {residue_collection(3), finite_support({{UniverseIndex{3}, 0.4}, {UniverseIndex{6}, 0.4}, {UniverseIndex{2}, 0.2}})},
        {finite_intersection_collection(2),
         finite_support({{UniverseIndex{2}, 0.25}, {UniverseIndex{3}, 0.25}, {UniverseIndex{4}, 0.5}})},
    };
    for (const auto& [C, D] : cases) {
        for (const auto& gen : {witness_generator(), first_unseen_generator()}) {
            for (std::uint64_t n = 1; n <= 6; ++n) {
                const auto exact = exact_gen_eval(gen, C, *D, n);
                const auto rational = exact_gen_eval_rational(gen, C, *D, n);
                CHECK(exact.gen_err == doctest::Approx(oracle::gen_err(gen, C, *D, n)).epsilon(1e-12));
                CHECK(static_cast<double>(rational.gen_err) == doctest::Approx(exact.gen_err).epsilon(1e-12));
                CHECK(rational.total_probability == 1);
            }
        }
    }
}

TEST_CASE("generation lower bound at m = 0, n = 3") {
    const auto inst = build_gen_lower(0);
    double worst = 0.0;
    for (std::size_t v = 0; v < 2; ++v) {
        worst = std::max(worst, exact_gen_err(witness_generator(), inst, v, 3, inst.bound(3)).estimate);
    }
    CHECK(worst >= 1.0 / 16.0);
}

TEST_CASE("Monte Carlo agrees with exact identification") {
    const auto inst = build_id_lower(6);
    const auto alg = margin_algorithm(WindowFn::fourth_root());
    for (std::size_t v = 0; v < 2; ++v) {
        const auto exact = exact_id_err(alg, inst, v, 8, 0.0).front();
        const auto mc = mc_rate(id_trial_model(alg, inst, v), {8}, 1000000, 99, [](std::uint64_t) { return 0.0; });
        CHECK(std::abs(mc.front().estimate - exact.estimate) <= 3.0 * mc.front().std_error + 1e-15);
    }
    const auto erm = erm_algorithm(WindowFn::constant(8));
    const auto exact = exact_id_err(erm, inst, 0, 5, 0.0).front();
    const auto mc = mc_rate(id_trial_model(erm, inst, 0), {5}, 200000, 4, [](std::uint64_t) { return 0.0; });
    CHECK(exact.estimate > 0.0);
    CHECK(std::abs(mc.front().estimate - exact.estimate) <= 3.0 * mc.front().std_error);
}

TEST_CASE("Monte Carlo agrees with exact generation") {
    const auto demo = build_gen_witness_demo();
    for (std::uint64_t n : {2, 6, 12}) {
        const auto exact = exact_gen_err(witness_generator(), demo, 0, n, 0.0);
        const auto mc = mc_rate(gen_trial_model(witness_generator(), demo, 0), {n}, 100000, 5,
                                [](std::uint64_t) { return 0.0; });
        CHECK(std::abs(mc.front().estimate - exact.estimate) <= 3.0 * mc.front().std_error + 1e-15);
    }
}

TEST_CASE("signature instance stays under the identification bound at n = 4096") {
    const auto inst = build_id_lower(6);
    const auto f = WindowFn::fourth_root();
    const double bound = theoretical_id_bound(4096, f);
    const auto pts = mc_rate(id_trial_model(margin_algorithm(f), inst, 0), {4096}, 10000, 1,
                             [&](std::uint64_t) { return bound; });
    CHECK(pts.front().estimate <= bound + 3.0 * pts.front().std_error);
}

TEST_CASE("Monte Carlo is deterministic and thread-count independent") {
    const auto inst = build_gen_nfl(0.25);
    const auto model = gen_trial_model(first_unseen_generator(), inst, kRandomFamily);
    const auto bound = [](std::uint64_t) { return 0.75; };
    const auto serial = mc_rate_serial(model, {1, 3, 7}, 3000, 11, bound);
    for (int threads : {1, 2, 5}) {
        omp_set_num_threads(threads);
        const auto par = mc_rate(model, {1, 3, 7}, 3000, 11, bound);
        REQUIRE(par.size() == serial.size());
        for (std::size_t i = 0; i < par.size(); ++i) {
            CHECK(par[i].estimate == serial[i].estimate);
            CHECK(par[i].std_error == serial[i].std_error);
        }
    }
    const auto one = mc_rate(model, {4}, 1, 3, bound);
    CHECK(one.front().estimate == mc_rate(model, {4}, 1, 3, bound).front().estimate);
    CHECK(one.front().trials == 1);
}

TEST_CASE("Monte Carlo mean and standard error") {
    TrialModel m;
    m.metric = Metric::IdErr;
    m.run = [](std::uint64_t, std::uint64_t seed) { return TrialOutcome{static_cast<double>(seed % 3) / 2.0, 0.0}; };
    const std::uint64_t t = 1000;
    const auto pt = mc_rate(m, {10}, t, 77, [](std::uint64_t) { return 0.0; }).front();
    double sum = 0.0;
    double sq = 0.0;
    for (std::uint64_t i = 0; i < t; ++i) {
        const double x = static_cast<double>(trial_seed(77, 10, i) % 3) / 2.0;
        sum += x;
        sq += x * x;
    }
    const double mean = sum / t;
    const double var = (sq - t * mean * mean) / (t - 1);
    CHECK(pt.estimate == doctest::Approx(mean).epsilon(1e-12));
    CHECK(pt.std_error == doctest::Approx(std::sqrt(var / t)).epsilon(1e-9));
}

TEST_CASE("trial failures propagate") {
    TrialModel m;
    m.run = [](std::uint64_t, std::uint64_t seed) -> TrialOutcome {
        if (seed % 7 == 0) throw ConsistencyError("bad trial");
        return {};
    };
    CHECK_THROWS_AS(mc_rate(m, {1}, 200, 1, [](std::uint64_t) { return 0.0; }), ConsistencyError);
}
