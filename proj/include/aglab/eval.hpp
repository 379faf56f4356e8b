#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "aglab/adversary.hpp"
#include "aglab/distributions.hpp"
#include "aglab/generate.hpp"
#include "aglab/identify.hpp"

namespace aglab {

enum class Metric { IdErr, GenErr, SelectProb };
enum class Method { Exact, MonteCarlo };

std::string to_string(Metric m);
std::string to_string(Method m);

struct RatePoint {
    std::uint64_t n = 0;
    Metric metric = Metric::IdErr;
    double estimate = 0.0;
    double std_error = 0.0;     // 0 for exact points
    double bound = 0.0;
    Method method = Method::Exact;
    std::uint64_t trials = 0;   // 0 for exact points
};

using Rational = boost::multiprecision::cpp_rational;

// P[x not in L]. Throws Unsupported when D has no closed form for L.
double true_error(const Language& L, const Distribution& D);

// true_error - inf_error; throws ConsistencyError below -1e-12.
double excess_error(const Language& L, const Distribution& D, double inf_error);

// ---------------------------------------------------------------------------
// Exact evaluation

struct ExactIdResult {
    double id_err = 0.0;
    double select_prob = 0.0;           // P[chosen index = best index]
    double total_probability = 0.0;     // before renormalization
    std::uint64_t compositions = 0;
};

inline constexpr std::uint64_t kCompositionBudget = 1'000'000;

// Enumerates every frequency vector of n draws over the atoms of a finite
// support distribution. Throws Unsupported for other distributions or when
// the number of compositions exceeds the budget.
ExactIdResult exact_id_eval(const IdAlgorithm& alg, const Collection& C, const Distribution& D,
                            const Analytics& truth, std::uint64_t n,
                            std::uint64_t budget = kCompositionBudget);

// IdErr and SelectProb points for one variant of an instance.
std::vector<RatePoint> exact_id_err(const IdAlgorithm& alg, const Instance& inst, std::size_t variant,
                                    std::uint64_t n, double bound);

template <class Scalar>
struct ExactGenResult {
    Scalar gen_err{};
    Scalar total_probability{};
    std::uint64_t horizon = 0;
    std::uint64_t relevant_atoms = 0;
};

inline constexpr std::uint64_t kMaxGenAtoms = 20;

// Enumerates the sets S n [1..H] for the generator's horizon H, weighted by
// inclusion-exclusion. Throws Unsupported when H is unknown or more than 20
// support strings lie below it.
ExactGenResult<double> exact_gen_eval(const Generator& gen, const Collection& C, const Distribution& D,
                                      std::uint64_t n);
ExactGenResult<Rational> exact_gen_eval_rational(const Generator& gen, const Collection& C, const Distribution& D,
                                                 std::uint64_t n);

RatePoint exact_gen_err(const Generator& gen, const Instance& inst, std::size_t variant, std::uint64_t n,
                        double bound);

// ---------------------------------------------------------------------------
// Monte Carlo

struct TrialOutcome {
    double loss = 0.0;
    double selected_best = 0.0;   // identification only
};

/// One randomized experiment at sample size n. `run` must be a pure
/// function of (n, trial_seed).
struct TrialModel {
    Metric metric = Metric::IdErr;
    bool reports_selection = false;
    std::function<TrialOutcome(std::uint64_t n, std::uint64_t trial_seed)> run;
};

// variant == kRandomFamily draws a fresh z per trial from the instance's family.
inline constexpr std::size_t kRandomFamily = static_cast<std::size_t>(-1);

TrialModel id_trial_model(const IdAlgorithm& alg, const Instance& inst, std::size_t variant);
TrialModel gen_trial_model(const Generator& gen, const Instance& inst, std::size_t variant);

// Seed of trial t at sample size n.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t n, std::uint64_t trial);

// Trials fan out over OpenMP threads; per-trial losses are stored and summed
// in trial order, so the result does not depend on the thread count.
std::vector<RatePoint> mc_rate(const TrialModel& model, const std::vector<std::uint64_t>& n_grid,
                               std::uint64_t trials, std::uint64_t seed,
                               const std::function<double(std::uint64_t)>& bound);

// Single-threaded reference of mc_rate; bit-identical output.
std::vector<RatePoint> mc_rate_serial(const TrialModel& model, const std::vector<std::uint64_t>& n_grid,
                                      std::uint64_t trials, std::uint64_t seed,
                                      const std::function<double(std::uint64_t)>& bound);

}  // namespace aglab
