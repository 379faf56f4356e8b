#include <cmath>
#include <exception>

#include <omp.h>

#include "aglab/errors.hpp"
#include "aglab/eval.hpp"

namespace aglab {
namespace {

// Stream tag separating label sequences from sample draws.
constexpr std::uint64_t kLabelStream = 0x6c6162656c73ULL;

struct Source {
    DistributionPtr fixed;
    std::optional<RandomFamily> family;
    Analytics truth;

    DistributionPtr realize(std::uint64_t seed) const {
        if (fixed) return fixed;
        return family->make(LabelSource::seeded(derive_seed(seed, kLabelStream), family->label_count,
                                                family->label_offset));
    }
};

Source source_of(const Instance& inst, std::size_t variant) {
    if (variant == kRandomFamily) {
        if (!inst.family) throw InvalidArgument(inst.name + " has no random family");
        return Source{nullptr, inst.family, inst.family->analytics};
    }
    const auto& v = inst.variants.at(variant);
    return Source{v.dist, std::nullopt, v.analytics};
}

Sample draw(const Distribution& D, std::uint64_t n, Rng& rng) {
    std::vector<UniverseIndex> items(n);
    for (auto& x : items) x = D.sample(rng);
    return Sample(std::move(items));
}

RatePoint summarize(const std::vector<double>& values, std::uint64_t n, Metric metric, double bound) {
    const auto t = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / t;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = values.size() > 1 ? std::sqrt(ss / (t - 1.0)) : 0.0;
    return RatePoint{n, metric, std::clamp(mean, 0.0, 1.0), sd / std::sqrt(t), bound, Method::MonteCarlo,
                     values.size()};
}

std::vector<RatePoint> collect(const TrialModel& model, std::uint64_t n, const std::vector<TrialOutcome>& outcomes,
                               double bound) {
    std::vector<double> loss(outcomes.size());
    std::vector<double> select(outcomes.size());
    for (std::size_t t = 0; t < outcomes.size(); ++t) {
        loss[t] = outcomes[t].loss;
        select[t] = outcomes[t].selected_best;
    }
    std::vector<RatePoint> out{summarize(loss, n, model.metric, bound)};
    if (model.reports_selection) out.push_back(summarize(select, n, Metric::SelectProb, 1.0 - bound));
    return out;
}

void check_trials(std::uint64_t trials) {
    if (trials == 0) throw InvalidArgument("trials must be >= 1");
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t n, std::uint64_t trial) {
    return derive_seed(seed, n, trial);
}

TrialModel id_trial_model(const IdAlgorithm& alg, const Instance& inst, std::size_t variant) {
    const Source src = source_of(inst, variant);
    const Collection C = inst.collection;
    TrialModel model;
    model.metric = Metric::IdErr;
    model.reports_selection = src.truth.best_index.has_value();
    model.run = [alg, src, C](std::uint64_t n, std::uint64_t seed) {
        const auto D = src.realize(seed);
        Rng rng(seed);
        const Sample S = draw(*D, n, rng);
        const std::uint64_t chosen = alg.run(C, S);
        TrialOutcome o;
        o.loss = excess_error(*C.at(chosen), *D, src.truth.inf_error);
        o.selected_best = src.truth.best_index && chosen == *src.truth.best_index ? 1.0 : 0.0;
        return o;
    };
    return model;
}

TrialModel gen_trial_model(const Generator& gen, const Instance& inst, std::size_t variant) {
    const Source src = source_of(inst, variant);
    const Collection C = inst.collection;
    TrialModel model;
    model.metric = Metric::GenErr;
    model.run = [gen, src, C](std::uint64_t n, std::uint64_t seed) {
        const auto D = src.realize(seed);
        Rng rng(seed);
        const Sample S = draw(*D, n, rng);
        const UniverseIndex out = gen.run(C, S);
        TrialOutcome o;
        o.loss = !D->in_support(out) || S.contains(out) ? 1.0 : 0.0;
        return o;
    };
    return model;
}

std::vector<RatePoint> mc_rate(const TrialModel& model, const std::vector<std::uint64_t>& n_grid,
                               std::uint64_t trials, std::uint64_t seed,
                               const std::function<double(std::uint64_t)>& bound) {
    check_trials(trials);
    std::vector<RatePoint> out;
    for (const std::uint64_t n : n_grid) {
        std::vector<TrialOutcome> outcomes(trials);
        std::exception_ptr failure;
        const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(dynamic, 64)
        for (std::int64_t t = 0; t < count; ++t) {
            try {
                outcomes[t] = model.run(n, trial_seed(seed, n, static_cast<std::uint64_t>(t)));
            } catch (...) {
#pragma omp critical(aglab_mc_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        for (auto& p : collect(model, n, outcomes, bound(n))) out.push_back(p);
    }
    return out;
}

std::vector<RatePoint> mc_rate_serial(const TrialModel& model, const std::vector<std::uint64_t>& n_grid,
                                      std::uint64_t trials, std::uint64_t seed,
                                      const std::function<double(std::uint64_t)>& bound) {
    check_trials(trials);
    std::vector<RatePoint> out;
    for (const std::uint64_t n : n_grid) {
        std::vector<TrialOutcome> outcomes(trials);
        for (std::uint64_t t = 0; t < trials; ++t) outcomes[t] = model.run(n, trial_seed(seed, n, t));
        for (auto& p : collect(model, n, outcomes, bound(n))) out.push_back(p);
    }
    return out;
}

}  // namespace aglab
