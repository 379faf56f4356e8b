#pragma once

// Brute-force references the fast paths are checked against. Everything here
// follows the definitions literally and is only usable at tiny sizes.

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "aglab/distributions.hpp"
#include "aglab/eval.hpp"
#include "aglab/generate.hpp"
#include "aglab/identify.hpp"
#include "aglab/languages.hpp"

namespace oracle {

// Largest i in 1..|miss| with (miss_j - miss_i) f > 2n for all j < i.
inline std::uint64_t margin_select(const std::vector<std::uint64_t>& miss, std::uint64_t n, std::uint64_t f) {
    std::uint64_t best = 1;
    for (std::uint64_t i = 1; i <= miss.size(); ++i) {
        bool ok = true;
        for (std::uint64_t j = 1; j < i; ++j) {
            const double lhs = (static_cast<double>(miss[j - 1]) - static_cast<double>(miss[i - 1])) *
                               static_cast<double>(f);
            if (!(lhs > 2.0 * static_cast<double>(n))) ok = false;
        }
        if (ok) best = i;
    }
    return best;
}

inline std::uint64_t erm_select(const std::vector<std::uint64_t>& miss) {
    std::uint64_t best = 1;
    for (std::uint64_t i = 2; i <= miss.size(); ++i) {
        if (miss[i - 1] < miss[best - 1]) best = i;
    }
    return best;
}

// Calls visit(items, probability) for every ordered sequence of n draws.
inline void for_each_sequence(const std::vector<aglab::Atom>& atoms, std::uint64_t n,
                              const std::function<void(const std::vector<aglab::UniverseIndex>&, double)>& visit) {
    std::vector<std::size_t> digit(n, 0);
    std::vector<aglab::UniverseIndex> items(n);
    while (true) {
        double p = 1.0;
        for (std::uint64_t t = 0; t < n; ++t) {
            items[t] = atoms[digit[t]].index;
            p *= atoms[digit[t]].probability;
        }
        visit(items, p);
        std::uint64_t t = 0;
        while (t < n && ++digit[t] == atoms.size()) digit[t++] = 0;
        if (t == n) return;
    }
}

// E[excess error of the chosen language] over all ordered samples.
inline double id_err(const aglab::IdAlgorithm& alg, const aglab::Collection& C, const aglab::Distribution& D,
                     double inf_error, std::uint64_t n) {
    const std::vector<aglab::Atom> atoms(D.atoms().begin(), D.atoms().end());
    double total = 0.0;
    for_each_sequence(atoms, n, [&](const std::vector<aglab::UniverseIndex>& items, double p) {
        const aglab::Sample S(items);
        const auto i = alg.run(C, S);
        total += p * (D.mass_outside(*C.at(i)) - inf_error);
    });
    return total;
}

// P[output not in supp(D) \ S] over all ordered samples.
inline double gen_err(const aglab::Generator& gen, const aglab::Collection& C, const aglab::Distribution& D,
                      std::uint64_t n) {
    const std::vector<aglab::Atom> atoms(D.atoms().begin(), D.atoms().end());
    double total = 0.0;
    for_each_sequence(atoms, n, [&](const std::vector<aglab::UniverseIndex>& items, double p) {
        const aglab::Sample S(items);
        const auto out = gen.run(C, S);
        if (!(D.pmf(out) > 0.0) || S.contains(out)) total += p;
    });
    return total;
}

// i(C, D) for a finite support: every language leaves the support, so the
// answer is the largest first non-support member over the collection.
inline std::optional<std::uint64_t> witness_index(const aglab::Collection& C, const aglab::Distribution& D,
                                                  std::uint64_t limit) {
    std::uint64_t worst = 1;
    for (const auto& L : C.window(*C.size())) {
        std::optional<std::uint64_t> first;
        for (std::uint64_t k = 1; k <= limit && !first; ++k) {
            if (L->member(aglab::UniverseIndex{k}) && !(D.pmf(aglab::UniverseIndex{k}) > 0.0)) first = k;
        }
        if (!first) return std::nullopt;
        worst = std::max(worst, *first);
    }
    return worst;
}

inline double reference_value(std::uint64_t i, std::uint64_t n) {
    return std::pow(1.0 - std::ldexp(1.0, -static_cast<int>(i)), static_cast<double>(n)) / static_cast<double>(i);
}

}  // namespace oracle
