#pragma once

// Clonal-selection search over rule vectors.
//
// Each generation the best candidates are cloned in proportion to their rank,
// the clones are hypermutated with a rate that falls as rank improves, the
// population is refilled with the fittest of parents and clones, and the
// weakest fraction is replaced by fresh random candidates (receptor editing).
// The best candidate ever seen is always retained.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "aisinmaca/errors.hpp"
#include "aisinmaca/evaluation.hpp"
#include "aisinmaca/fuzzy_ca.hpp"
#include "aisinmaca/maca_model.hpp"

namespace aisinmaca {

enum class FitnessMetric { Accuracy, CC };

inline std::string_view metric_name(FitnessMetric m) { return m == FitnessMetric::CC ? "cc" : "accuracy"; }

// All randomness comes from this engine. Distributions are drawn through the
// helpers below rather than <random> distributions, whose output is
// implementation-defined, so seeded runs are reproducible across toolchains.
using Rng = std::mt19937_64;

template <typename URBG>
std::uint64_t uniform_index(URBG& rng, std::uint64_t bound) {
    const std::uint64_t range = static_cast<std::uint64_t>(URBG::max() - URBG::min());
    if (range == std::numeric_limits<std::uint64_t>::max()) {
        const std::uint64_t limit = range - (range % bound + 1) % bound;
        std::uint64_t x;
        do x = static_cast<std::uint64_t>(rng() - URBG::min());
        while (x > limit);
        return x % bound;
    }
    return static_cast<std::uint64_t>(rng() - URBG::min()) % bound;
}

// Uniform in [0,1).
template <typename URBG>
double unit_real(URBG& rng) {
    const auto x = static_cast<std::uint64_t>(rng() - URBG::min());
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

template <typename URBG>
RuleVector random_rules(std::size_t size, URBG& rng) {
    RuleVector rules(size);
    for (auto& r : rules) r = local_rule_from_ordinal(uniform_index(rng, kLocalRuleCount));
    return rules;
}

// Each cell independently, with probability `rate`, is resampled uniformly
// from the full (rule, complement) catalog.
template <typename URBG>
RuleVector mutate(const RuleVector& rules, double rate, URBG& rng) {
    if (!(rate > 0.0 && rate <= 1.0)) {
        throw InvalidParameter("mutation rate must be in (0,1], got " + std::to_string(rate));
    }
    RuleVector out = rules;
    for (auto& r : out) {
        if (unit_real(rng) < rate) r = local_rule_from_ordinal(uniform_index(rng, kLocalRuleCount));
    }
    return out;
}

struct TrainerConfig {
    std::size_t population = 50;
    std::size_t generations = 200;
    std::size_t select_top = 10;
    std::size_t clone_budget = 50;
    double editing_fraction = 0.1;
    FitnessMetric metric = FitnessMetric::Accuracy;
    std::uint64_t seed = 0;
    int levels = kDefaultLevels;
    std::size_t size = 0;  // 0: take the width of the training data
    double rate_min = 0.05;
    double rate_max = 0.5;
    // When positive, affinity is measured on this evenly spaced fraction of
    // the data using basins fitted on the remainder.
    double holdout_fraction = 0.0;
    unsigned threads = 1;

    std::size_t editing_count() const {
        return static_cast<std::size_t>(editing_fraction * static_cast<double>(population));
    }

    void validate() const {
        auto fail = [](const std::string& m) { throw InvalidParameter(m); };
        if (population < 1) fail("population must be at least 1");
        if (select_top < 1) fail("select_top must be at least 1");
        if (select_top > population) fail("select_top must not exceed population");
        if (clone_budget < population) fail("clone_budget must be at least population");
        if (!(editing_fraction >= 0.0 && editing_fraction < 1.0)) fail("editing_fraction must be in [0,1)");
        if (!(rate_min > 0.0 && rate_min <= rate_max && rate_max <= 1.0)) {
            fail("mutation rates must satisfy 0 < rate_min <= rate_max <= 1");
        }
        if (!(holdout_fraction >= 0.0 && holdout_fraction < 1.0)) fail("holdout_fraction must be in [0,1)");
        if (threads < 1) fail("threads must be at least 1");
        FuzzyLevels check(levels);
        (void)check;
    }
};

struct TrainerReport {
    std::vector<double> best_fitness_per_generation;
    std::uint64_t evaluations = 0;
    double final_fitness = 0.0;
};

struct TrainResult {
    TrainedModel model;
    TrainerReport report;
};

// Fitness of rule vectors against one dataset. Encodings and label priors are
// computed once and shared by every evaluation.
class AffinityEvaluator {
public:
    AffinityEvaluator(std::span<const LabeledExample> data, const FuzzyLevels& levels, std::size_t size,
                      FitnessMetric metric, double holdout_fraction = 0.0)
        : levels_(levels), metric_(metric), data_(data.begin(), data.end()) {
        if (data_.empty()) throw InvalidParameter("affinity needs a non-empty dataset");
        encoded_ = encode_all(data_, levels_, size);
        const auto priors = label_priors(data_);
        if (metric_ == FitnessMetric::CC) {
            if (priors.size() > 2) {
                throw InvalidParameter("cc fitness requires at most two labels, found " +
                                       std::to_string(priors.size()));
            }
            positive_ = priors.count(kPositiveLabel) ? kPositiveLabel : priors.begin()->first;
        }
        const double n = static_cast<double>(data_.size());
        for (std::size_t i = 0; i < data_.size(); ++i) {
            const bool held = holdout_fraction > 0.0 &&
                              std::floor(static_cast<double>(i + 1) * holdout_fraction) >
                                  std::floor(static_cast<double>(i) * holdout_fraction);
            (held ? score_idx_ : fit_idx_).push_back(i);
        }
        if (holdout_fraction > 0.0 && (score_idx_.empty() || fit_idx_.empty())) {
            throw InvalidParameter("holdout fraction leaves an empty split for " +
                                   std::to_string(static_cast<std::size_t>(n)) + " examples");
        }
        for (auto i : fit_idx_) {
            fit_data_.push_back(data_[i]);
            fit_encoded_.push_back(encoded_[i]);
        }
        fit_priors_ = label_priors(fit_data_);
        fallback_ = majority_label(fit_priors_);
    }

    double operator()(const RuleVector& rules) const {
        const CompiledRules compiled(levels_, rules);
        const auto labels = label_basins(fit_basins(compiled, fit_encoded_, fit_data_), fit_priors_);
        const auto& scored = score_idx_.empty() ? fit_idx_ : score_idx_;

        ConfusionCounts counts;
        std::size_t correct = 0;
        for (auto i : scored) {
            const auto it = labels.find(compiled.evolve(encoded_[i]).attractor_key);
            const Label& predicted = it == labels.end() ? fallback_ : it->second.label;
            const Label& actual = data_[i].label;
            if (predicted == actual) ++correct;
            if (metric_ == FitnessMetric::CC) {
                const bool p = predicted == positive_;
                const bool a = actual == positive_;
                if (p && a) ++counts.tp;
                else if (p) ++counts.fp;
                else if (a) ++counts.fn;
                else ++counts.tn;
            }
        }
        if (metric_ == FitnessMetric::CC) return correlation(counts).value_or(0.0);
        return static_cast<double>(correct) / static_cast<double>(scored.size());
    }

private:
    FuzzyLevels levels_;
    FitnessMetric metric_;
    std::vector<LabeledExample> data_;
    std::vector<std::vector<LevelIndex>> encoded_;
    std::vector<std::size_t> fit_idx_, score_idx_;
    std::vector<LabeledExample> fit_data_;
    std::vector<std::vector<LevelIndex>> fit_encoded_;
    LabelCounts fit_priors_;
    Label fallback_;
    Label positive_;
};

// Training-set fitness: accuracy, or CC (binary labels only, undefined -> 0).
inline double affinity(const RuleVector& rules, std::span<const LabeledExample> data,
                       const FuzzyLevels& levels, FitnessMetric metric) {
    return AffinityEvaluator(data, levels, rules.size(), metric)(rules);
}

namespace detail {

struct Candidate {
    RuleVector rules;
    double fitness = 0.0;
};

inline void evaluate_all(std::vector<Candidate>& cands, std::size_t from, const AffinityEvaluator& eval,
                         unsigned threads) {
    const std::size_t count = cands.size() - from;
    if (threads <= 1 || count < 2) {
        for (std::size_t i = from; i < cands.size(); ++i) cands[i].fitness = eval(cands[i].rules);
        return;
    }
    std::vector<std::jthread> workers;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (std::size_t begin = from; begin < cands.size(); begin += chunk) {
        const std::size_t end = std::min(cands.size(), begin + chunk);
        workers.emplace_back([&cands, &eval, begin, end] {
            for (std::size_t i = begin; i < end; ++i) cands[i].fitness = eval(cands[i].rules);
        });
    }
}

// Stable: equal fitness keeps candidate index order.
inline void sort_by_fitness(std::vector<Candidate>& cands) {
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& a, const Candidate& b) { return a.fitness > b.fitness; });
}

// Clone counts for ranks 0..k-1 proportional to (k - rank), summing to budget.
inline std::vector<std::size_t> clone_allocation(std::size_t k, std::size_t budget) {
    const std::size_t weight_sum = k * (k + 1) / 2;
    std::vector<std::size_t> out(k);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < k; ++i) {
        out[i] = budget * (k - i) / weight_sum;
        assigned += out[i];
    }
    for (std::size_t i = 0; assigned < budget; i = (i + 1) % k, ++assigned) ++out[i];
    return out;
}

}  // namespace detail

inline TrainResult train(std::span<const LabeledExample> data, TrainerConfig config) {
    config.validate();
    if (data.empty()) throw InvalidParameter("training data is empty");
    if (config.size == 0) config.size = data.front().features.size();
    if (config.size == 0) throw InvalidParameter("training examples have no features");

    const FuzzyLevels levels(config.levels);
    const AffinityEvaluator eval(data, levels, config.size, config.metric, config.holdout_fraction);
    Rng rng(config.seed);
    TrainerReport report;

    std::vector<detail::Candidate> pop(config.population);
    for (auto& c : pop) c.rules = random_rules(config.size, rng);
    detail::evaluate_all(pop, 0, eval, config.threads);
    report.evaluations += pop.size();

    detail::Candidate best = pop.front();
    for (const auto& c : pop) {
        if (c.fitness > best.fitness) best = c;
    }

    const std::size_t editing = config.editing_count();
    const auto allocation = detail::clone_allocation(config.select_top, config.clone_budget);

    for (std::size_t gen = 0; gen < config.generations; ++gen) {
        detail::sort_by_fitness(pop);

        const std::size_t k = config.select_top;
        std::vector<detail::Candidate> merged = pop;
        const std::size_t first_clone = merged.size();
        for (std::size_t rank = 0; rank < k; ++rank) {
            const double normalized = k == 1 ? 1.0 : static_cast<double>(k - 1 - rank) / static_cast<double>(k - 1);
            const double rate = config.rate_max - (config.rate_max - config.rate_min) * normalized;
            for (std::size_t c = 0; c < allocation[rank]; ++c) {
                merged.push_back({mutate(pop[rank].rules, rate, rng), 0.0});
            }
        }
        detail::evaluate_all(merged, first_clone, eval, config.threads);
        report.evaluations += merged.size() - first_clone;

        detail::sort_by_fitness(merged);
        merged.resize(config.population);
        pop = std::move(merged);

        const std::size_t first_fresh = pop.size() - editing;
        for (std::size_t i = first_fresh; i < pop.size(); ++i) {
            pop[i] = {random_rules(config.size, rng), 0.0};
        }
        detail::evaluate_all(pop, first_fresh, eval, config.threads);
        report.evaluations += editing;

        for (const auto& c : pop) {
            if (c.fitness > best.fitness) best = c;
        }
        report.best_fitness_per_generation.push_back(best.fitness);
    }

    report.final_fitness = best.fitness;
    TrainResult result;
    result.model = build_model(levels, best.rules, data,
                               ModelMetadata{config.seed, best.fitness, config.generations});
    result.report = std::move(report);
    return result;
}

}  // namespace aisinmaca
