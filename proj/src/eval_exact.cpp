#include <algorithm>
#include <cmath>
#include <map>

#include "aglab/errors.hpp"
#include "aglab/eval.hpp"

namespace aglab {

std::string to_string(Metric m) {
    switch (m) {
        case Metric::IdErr:
            return "IdErr";
        case Metric::GenErr:
            return "GenErr";
        case Metric::SelectProb:
            return "SelectProb";
    }
    return "?";
}

std::string to_string(Method m) { return m == Method::Exact ? "exact" : "mc"; }

double true_error(const Language& L, const Distribution& D) { return D.mass_outside(L); }

double excess_error(const Language& L, const Distribution& D, double inf_error) {
    const double e = true_error(L, D) - inf_error;
    if (e < -1e-12) {
        throw ConsistencyError("error of " + L.description() + " lies below the analytic infimum by " +
                               std::to_string(-e));
    }
    return std::max(e, 0.0);
}

namespace {

struct Neumaier {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

// C(n + a - 1, a - 1), saturating at `cap + 1`.
std::uint64_t composition_count(std::uint64_t n, std::uint64_t a, std::uint64_t cap) {
    long double c = 1.0L;
    for (std::uint64_t i = 1; i < a; ++i) {
        c = c * static_cast<long double>(n + i) / static_cast<long double>(i);
        if (c > static_cast<long double>(cap)) return cap + 1;
    }
    return static_cast<std::uint64_t>(std::llround(c));
}

}  // namespace

ExactIdResult exact_id_eval(const IdAlgorithm& alg, const Collection& C, const Distribution& D,
                            const Analytics& truth, std::uint64_t n, std::uint64_t budget) {
    if (n == 0) throw InvalidArgument("identification needs n >= 1");
    if (D.support_kind() != SupportKind::FiniteExplicit) {
        throw Unsupported("exact identification needs a finite support; use Monte Carlo");
    }
    const auto atoms = D.atoms();
    const std::uint64_t a = atoms.size();
    if (composition_count(n, a, budget) > budget) {
        throw Unsupported("more than " + std::to_string(budget) + " compositions; use Monte Carlo");
    }
    std::vector<double> log_p(a);
    for (std::size_t i = 0; i < a; ++i) log_p[i] = std::log(atoms[i].probability);
    const double log_n_fact = std::lgamma(static_cast<double>(n) + 1.0);

    std::map<std::uint64_t, double> loss_cache;
    auto loss_of = [&](std::uint64_t index) {
        auto it = loss_cache.find(index);
        if (it == loss_cache.end()) {
            it = loss_cache.emplace(index, excess_error(*C.at(index), D, truth.inf_error)).first;
        }
        return it->second;
    };

    Neumaier total;
    Neumaier err;
    Neumaier select;
    ExactIdResult result;
    std::vector<std::uint64_t> counts(a, 0);
    std::vector<std::pair<UniverseIndex, std::uint64_t>> pairs(a);

    // Depth-first over compositions: counts[0..i-1] fixed, `left` draws to place.
    auto visit = [&](auto&& self, std::size_t i, std::uint64_t left, double log_weight) -> void {
        if (i + 1 == a) {
            counts[i] = left;
            const double lw = log_weight - std::lgamma(static_cast<double>(left) + 1.0) +
                              (left == 0 ? 0.0 : static_cast<double>(left) * log_p[i]);
            const double w = std::exp(log_n_fact + lw);
            for (std::size_t j = 0; j < a; ++j) pairs[j] = {atoms[j].index, counts[j]};
            const std::uint64_t chosen = alg.run(C, Sample::from_counts(pairs));
            total.add(w);
            err.add(w * loss_of(chosen));
            if (truth.best_index && chosen == *truth.best_index) select.add(w);
            ++result.compositions;
            return;
        }
        for (std::uint64_t c = 0; c <= left; ++c) {
            counts[i] = c;
            const double lw = log_weight - std::lgamma(static_cast<double>(c) + 1.0) +
                              (c == 0 ? 0.0 : static_cast<double>(c) * log_p[i]);
            self(self, i + 1, left - c, lw);
        }
    };
    visit(visit, 0, n, 0.0);

    result.total_probability = total.value();
    if (std::abs(result.total_probability - 1.0) > 1e-9) {
        throw ConsistencyError("composition probabilities sum to " + std::to_string(result.total_probability));
    }
    result.id_err = std::clamp(err.value() / result.total_probability, 0.0, 1.0);
    result.select_prob = std::clamp(select.value() / result.total_probability, 0.0, 1.0);
    return result;
}

std::vector<RatePoint> exact_id_err(const IdAlgorithm& alg, const Instance& inst, std::size_t variant,
                                    std::uint64_t n, double bound) {
    const auto& v = inst.variants.at(variant);
    const auto r = exact_id_eval(alg, inst.collection, *v.dist, v.analytics, n);
    std::vector<RatePoint> out;
    out.push_back(RatePoint{n, Metric::IdErr, r.id_err, 0.0, bound, Method::Exact, 0});
    if (v.analytics.best_index) {
        out.push_back(RatePoint{n, Metric::SelectProb, r.select_prob, 0.0, 1.0 - bound, Method::Exact, 0});
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

template <class Scalar>
Scalar power(Scalar base, std::uint64_t e) {
    Scalar result{1};
    while (e != 0) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e != 0) base *= base;
    }
    return result;
}

template <class Scalar>
ExactGenResult<Scalar> exact_gen_impl(const Generator& gen, const Collection& C, const Distribution& D,
                                      std::uint64_t n) {
    const auto horizon = gen.horizon(C, D);
    if (!horizon) throw Unsupported("no evaluation horizon for " + gen.name + "; use Monte Carlo");
    std::vector<UniverseIndex> relevant;
    std::vector<Scalar> mass;
    Scalar inside{0};
    for (std::uint64_t k = 1; k <= *horizon; ++k) {
        if (!D.in_support(UniverseIndex{k})) continue;
        if (relevant.size() == kMaxGenAtoms) {
            throw Unsupported("more than " + std::to_string(kMaxGenAtoms) + " support strings below the horizon");
        }
        relevant.push_back(UniverseIndex{k});
        mass.emplace_back(D.pmf(UniverseIndex{k}));
        inside += mass.back();
    }
    const Scalar outside = Scalar{1} - inside;
    const std::size_t r = relevant.size();
    const std::size_t subsets = std::size_t{1} << r;

    // g[T] = P[every draw lands in T or beyond the relevant strings]; the
    // Moebius transform turns it into P[S n relevant = T].
    std::vector<Scalar> g(subsets);
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        Scalar m = outside;
        for (std::size_t i = 0; i < r; ++i) {
            if (mask >> i & 1) m += mass[i];
        }
        g[mask] = power(m, n);
    }
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t mask = 0; mask < subsets; ++mask) {
            if (mask >> i & 1) g[mask] -= g[mask ^ (std::size_t{1} << i)];
        }
    }

    ExactGenResult<Scalar> result;
    result.horizon = *horizon;
    result.relevant_atoms = r;
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        std::vector<UniverseIndex> items;
        for (std::size_t i = 0; i < r; ++i) {
            if (mask >> i & 1) items.push_back(relevant[i]);
        }
        const Sample S(std::move(items));
        const UniverseIndex out = gen.run(C, S);
        result.total_probability += g[mask];
        if (!D.in_support(out) || S.contains(out)) result.gen_err += g[mask];
    }
    return result;
}

}  // namespace

ExactGenResult<double> exact_gen_eval(const Generator& gen, const Collection& C, const Distribution& D,
                                      std::uint64_t n) {
    auto r = exact_gen_impl<double>(gen, C, D, n);
    if (std::abs(r.total_probability - 1.0) > 1e-9) {
        throw ConsistencyError("distinct-set probabilities sum to " + std::to_string(r.total_probability));
    }
    r.gen_err = std::clamp(r.gen_err, 0.0, 1.0);
    return r;
}

ExactGenResult<Rational> exact_gen_eval_rational(const Generator& gen, const Collection& C, const Distribution& D,
                                                 std::uint64_t n) {
    auto r = exact_gen_impl<Rational>(gen, C, D, n);
    if (r.total_probability != 1) throw ConsistencyError("distinct-set probabilities do not sum to 1");
    return r;
}

RatePoint exact_gen_err(const Generator& gen, const Instance& inst, std::size_t variant, std::uint64_t n,
                        double bound) {
    const auto& v = inst.variants.at(variant);
    const auto r = exact_gen_eval(gen, inst.collection, *v.dist, n);
    return RatePoint{n, Metric::GenErr, r.gen_err, 0.0, bound, Method::Exact, 0};
}

}  // namespace aglab
