#include "aglab/generate.hpp"

#include <algorithm>
#include <cmath>

#include "aglab/errors.hpp"

namespace aglab {
namespace {

std::uint64_t resolve_window(const Collection& C, std::optional<std::uint64_t> window) {
    if (window) {
        if (*window == 0) throw InvalidArgument("generation window must be >= 1");
        return C.is_finite() ? std::min(*window, *C.size()) : *window;
    }
    if (!C.is_finite()) throw InvalidArgument("countable collections need an explicit generation window");
    return *C.size();
}

}  // namespace

GenState generate_trace(const Collection& C, const Sample& S, std::optional<std::uint64_t> window) {
    const auto languages = C.window(resolve_window(C, window));
    GenState state;
    state.r.reserve(languages.size());
    for (const auto& L : languages) {
        UniverseIndex r = L->first_member();
        while (S.contains(r)) r = L->next_member(r);
        state.r.push_back(r);
    }
    const auto best = std::max_element(state.r.begin(), state.r.end());  // first maximum
    state.chosen = static_cast<std::uint64_t>(best - state.r.begin()) + 1;
    state.output = *best;
    return state;
}

UniverseIndex generate(const Collection& C, const Sample& S, std::optional<std::uint64_t> window) {
    return generate_trace(C, S, window).output;
}

UniverseIndex first_unseen(const Sample& S) {
    std::uint64_t k = 1;
    for (const auto& [index, count] : S.distinct()) {
        if (index.k != k) break;
        ++k;
    }
    return UniverseIndex{k};
}

// ---------------------------------------------------------------------------

WitnessIndex witness_index(const Collection& C, const Distribution& D, std::uint64_t scan_limit,
                           std::optional<std::uint64_t> window) {
    const auto languages = C.window(resolve_window(C, window));
    std::uint64_t result = 1;
    for (const auto& L : languages) {
        const auto contained = D.contains_language(*L);
        if (contained == true) continue;
        std::optional<std::uint64_t> witness;
        for (std::uint64_t j = 1;; ++j) {
            const UniverseIndex k = L->nth_member(j);
            if (k.k > scan_limit) break;
            if (!D.in_support(k)) {
                witness = k.k;
                break;
            }
        }
        if (!witness) {
            return WitnessIndex{std::nullopt, contained.has_value()
                                                  ? "no witness for " + L->description() + " up to the scan limit"
                                                  : "containment of " + L->description() + " not certified"};
        }
        result = std::max(result, *witness);
    }
    return WitnessIndex{result, {}};
}

double GenConstants::bound(std::uint64_t n) const {
    const double b = static_cast<double>(c) * std::pow(1.0 - p_star, static_cast<double>(n));
    return std::clamp(b, 0.0, 1.0);
}

GenConstants analytic_gen_constants(const Collection& C, const Distribution& D, std::uint64_t designated,
                                    std::uint64_t i_cd) {
    const auto L = C.at(designated);
    if (D.contains_language(*L) != true) {
        throw InvalidArgument(L->description() + " is not certified to lie inside supp(D)");
    }
    GenConstants g;
    g.designated = designated;
    g.i_cd = i_cd;
    g.i_star = L->next_member(UniverseIndex{i_cd - 1}).k;
    g.p_star = 1.0;
    for (std::uint64_t j = 1;; ++j) {
        const auto k = L->nth_member(j);
        if (k.k > g.i_star) break;
        g.I_star.push_back(k.k);
        g.p_star = std::min(g.p_star, D.pmf(k));
    }
    g.c = g.I_star.size();
    g.Cexp = -std::log1p(-g.p_star);
    return g;
}

// ---------------------------------------------------------------------------

Generator witness_generator(std::optional<std::uint64_t> window) {
    Generator g;
    g.name = window ? "witness[" + std::to_string(*window) + "]" : "witness";
    g.run = [window](const Collection& C, const Sample& S) { return generate(C, S, window); };
    // Pointers of languages not inside the support stop at their witness, so
    // whether the chosen output misses the support is settled by S n [1..i(C,D)].
    g.horizon = [window](const Collection& C, const Distribution& D) -> std::optional<std::uint64_t> {
        return witness_index(C, D, kDefaultScanLimit, window).value;
    };
    return g;
}

Generator first_unseen_generator() {
    Generator g;
    g.name = "first-unseen";
    g.run = [](const Collection&, const Sample& S) { return first_unseen(S); };
    // The output never passes the first string outside the support.
    g.horizon = [](const Collection&, const Distribution& D) -> std::optional<std::uint64_t> {
        for (std::uint64_t k = 1; k <= kDefaultScanLimit; ++k) {
            if (!D.in_support(UniverseIndex{k})) return k;
        }
        return std::nullopt;
    };
    return g;
}

}  // namespace aglab
