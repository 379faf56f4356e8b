#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "aglab/distributions.hpp"
#include "aglab/generate.hpp"
#include "aglab/languages.hpp"
#include "aglab/sequence.hpp"

namespace aglab {

/// Ground truth attached to one distribution of an instance.
struct Analytics {
    double inf_error = 0.0;                     // inf over C of P[x not in L]
    std::optional<std::uint64_t> best_index;    // smallest index attaining it, if attained
    std::optional<std::uint64_t> i_cd;          // witness index i(C, D)
    std::optional<GenConstants> gen;            // constants of the exponential generation rate
};

struct Variant {
    std::string label;
    DistributionPtr dist;
    Analytics analytics;
};

/// Distributions D_z indexed by a label sequence z, for the constructions
/// whose guarantee is an expectation over a uniformly random z.
struct RandomFamily {
    std::uint64_t label_count = 2;
    std::int64_t label_offset = 0;
    std::function<DistributionPtr(LabelSource)> make;
    Analytics analytics;  // shared by every z
};

enum class BoundKind { Upper, Lower, LimsupLower };

struct Instance {
    std::string name;
    UniverseSpec universe;
    Collection collection;
    std::vector<Variant> variants;
    std::optional<RandomFamily> family;

    // Reference curve of the underlying theorem, clamped to [0, 1].
    std::function<double(std::uint64_t)> bound;
    BoundKind bound_kind = BoundKind::Lower;

    std::optional<LemmaArtifacts> lemma;       // slow-rate instance only
    std::vector<std::uint64_t> checkpoints;    // sample sizes where the bound is argued
    std::vector<std::string> notes;
};

// Signature collection with d distractors; variants D_0 = {s0: 3/4, s1: 1/4}
// and its mirror D_1. Bound (1/4)^{n+2}.
Instance build_id_lower(std::uint64_t distractors = 6);

// Prefix-labeled collection with D_z = (block base, z) over N x {-1,0,1};
// random family with labels {0, 1}. Bound R(n)/8.
Instance build_slow_rate(const RateFunction& rate, std::uint64_t depth = 4);

// Label-constant collection over N x {1..ceil(1/eps)} with D_z = (2^-w, z).
// Bound 1 - eps, as a limsup.
Instance build_gen_nfl(double epsilon);

// Two languages sharing m strings, variants D_0 (supp L) and D_1 (supp L').
// Bound exp(-2n), divided by 4 when m > 0.
Instance build_gen_lower(std::uint64_t m);

// {odds, evens} with D = {1: 0.2, 3: 0.1} plus 0.7 spread over the evens, so
// that evens lies inside the support and odds does not. Upper bound
// c (1 - p*)^n from the generation constants.
Instance build_gen_witness_demo();

// Builder lookup by name ("id-lower", "slow-rate", "nfl", "gen-lower",
// "gen-witness-demo") with numeric parameters.
Instance build_instance(const std::string& name, const std::vector<std::pair<std::string, std::string>>& params);

struct ReferenceIndex {
    std::uint64_t index = 1;
    double value = 0.0;
    std::uint64_t scanned = 0;
};

// argmax over i of (1 - 2^-i)^n / i, scanned up to 4 ceil(log2((n ln 2)^2 + 1)).
ReferenceIndex best_reference_index(std::uint64_t n);

}  // namespace aglab
