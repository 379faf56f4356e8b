#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aglab/distributions.hpp"
#include "aglab/identify.hpp"
#include "aglab/languages.hpp"

namespace aglab {

/// Trace of one witness-elimination run.
struct GenState {
    std::vector<UniverseIndex> r;   // r[i-1]: first member of L_i not in the sample
    std::uint64_t chosen = 1;       // o, 1-based
    UniverseIndex output;           // u_{r_o}
};

// Runs the elimination over L_1..L_window. `window` defaults to the size of a
// finite collection and is required for countable ones.
GenState generate_trace(const Collection& C, const Sample& S, std::optional<std::uint64_t> window = std::nullopt);
UniverseIndex generate(const Collection& C, const Sample& S, std::optional<std::uint64_t> window = std::nullopt);

// Smallest index not in the sample.
UniverseIndex first_unseen(const Sample& S);

struct WitnessIndex {
    std::optional<std::uint64_t> value;  // empty means Unknown
    std::string reason;                  // why Unknown

    bool known() const { return value.has_value(); }
};

// i(C, D): smallest i such that every L_j not contained in supp(D) has a
// member u_k outside the support with k <= i. Containment comes from the
// distribution's certificate when it has one; otherwise members are scanned
// up to scan_limit.
WitnessIndex witness_index(const Collection& C, const Distribution& D, std::uint64_t scan_limit,
                           std::optional<std::uint64_t> window = std::nullopt);

struct GenConstants {
    std::uint64_t designated = 1;        // index m of a language inside supp(D)
    std::uint64_t i_cd = 1;
    std::uint64_t i_star = 1;            // first member of L_m at or after i(C, D)
    std::vector<std::uint64_t> I_star;   // members of L_m up to i_star
    double p_star = 0.0;                 // least mass over I_star
    std::uint64_t c = 0;                 // |I_star|
    double Cexp = 0.0;                   // -ln(1 - p_star)

    // min(1, c (1 - p_star)^n).
    double bound(std::uint64_t n) const;
};

// Throws InvalidArgument when L_designated is not certified inside supp(D).
GenConstants analytic_gen_constants(const Collection& C, const Distribution& D, std::uint64_t designated,
                                    std::uint64_t i_cd);

/// A generator maps a sample to one new string. `horizon` returns H such that
/// the loss indicator depends on the sample only through S n [1..H], which is
/// what exact evaluation enumerates; empty when no such H is known.
struct Generator {
    std::string name;
    std::function<UniverseIndex(const Collection&, const Sample&)> run;
    std::function<std::optional<std::uint64_t>(const Collection&, const Distribution&)> horizon;
};

// The witness-elimination generator; `window` as for generate().
Generator witness_generator(std::optional<std::uint64_t> window = std::nullopt);
// Baseline ignoring the collection: outputs the first unseen string.
Generator first_unseen_generator();

inline constexpr std::uint64_t kDefaultScanLimit = 1 << 16;

}  // namespace aglab
