#pragma once

// Multiple-attractor classifier: feature vectors are quantized onto a
// lattice, evolved to their attractor, and the attractor's basin carries the
// class label learned from training data.

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aisinmaca/errors.hpp"
#include "aisinmaca/fuzzy_ca.hpp"
#include "aisinmaca/text.hpp"

namespace aisinmaca {

using Label = std::string;

// Label used for positive examples (coding / promoter).
inline const Label kPositiveLabel = "C";
inline const Label kNegativeLabel = "N";

inline bool valid_label(std::string_view label) {
    return !label.empty() && !text::has_whitespace(label);
}

struct LabeledExample {
    std::vector<double> features;
    Label label;

    friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

struct BasinStats {
    AttractorKey attractor_key;
    std::map<Label, std::size_t> counts;

    std::size_t total() const {
        std::size_t t = 0;
        for (const auto& [_, c] : counts) t += c;
        return t;
    }
    double purity() const {
        std::size_t best = 0;
        for (const auto& [_, c] : counts) best = std::max(best, c);
        return static_cast<double>(best) / static_cast<double>(total());
    }
};

using BasinStatsMap = std::map<AttractorKey, BasinStats>;
using LabelCounts = std::map<Label, std::size_t>;

struct BasinLabel {
    Label label;
    double purity = 0.0;

    friend bool operator==(const BasinLabel&, const BasinLabel&) = default;
};

using BasinLabelMap = std::map<AttractorKey, BasinLabel>;

struct ModelMetadata {
    std::uint64_t seed = 0;
    double fitness = 0.0;
    std::uint64_t generations = 0;

    friend bool operator==(const ModelMetadata&, const ModelMetadata&) = default;
};

struct TrainedModel {
    FuzzyLevels levels;
    std::size_t size = 0;
    RuleVector rules;
    BasinLabelMap basin_labels;
    Label fallback_label;
    ModelMetadata metadata;

    friend bool operator==(const TrainedModel&, const TrainedModel&) = default;
};

inline FuzzyLattice encode(std::span<const double> features, const FuzzyLevels& levels) {
    std::vector<LevelIndex> cells;
    cells.reserve(features.size());
    for (std::size_t i = 0; i < features.size(); ++i) {
        const double x = features[i];
        if (!(x >= 0.0 && x <= 1.0)) {
            throw DomainError("feature " + std::to_string(i + 1) + " value " + std::to_string(x) +
                              " outside [0,1]");
        }
        cells.push_back(quantize(x, levels).level_index);
    }
    return FuzzyLattice(levels, std::move(cells));
}

inline LabelCounts label_priors(std::span<const LabeledExample> data) {
    LabelCounts priors;
    for (const auto& ex : data) ++priors[ex.label];
    return priors;
}

// Most frequent label; ties go to the lexicographically smaller label.
inline Label majority_label(const LabelCounts& priors) {
    if (priors.empty()) throw InvalidParameter("no labels to choose from");
    const auto it = std::max_element(priors.begin(), priors.end(), [](const auto& a, const auto& b) {
        return a.second < b.second;  // first maximum in key order wins
    });
    return it->first;
}

// Tally pre-encoded examples by attractor. `encoded[i]` must be the lattice
// cells of `data[i]`.
inline BasinStatsMap fit_basins(const CompiledRules& rules,
                                std::span<const std::vector<LevelIndex>> encoded,
                                std::span<const LabeledExample> data) {
    if (data.empty()) throw InvalidParameter("cannot fit basins on an empty dataset");
    BasinStatsMap stats;
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto key = rules.evolve(encoded[i]).attractor_key;
        auto& basin = stats[key];
        if (basin.attractor_key.empty()) basin.attractor_key = std::move(key);
        ++basin.counts[data[i].label];
    }
    return stats;
}

inline std::vector<std::vector<LevelIndex>> encode_all(std::span<const LabeledExample> data,
                                                       const FuzzyLevels& levels,
                                                       std::size_t size) {
    std::vector<std::vector<LevelIndex>> out;
    out.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i].features.size() != size) {
            throw DimensionMismatch("example " + std::to_string(i + 1) + " has " +
                                    std::to_string(data[i].features.size()) +
                                    " features, lattice size is " + std::to_string(size));
        }
        out.push_back(encode(data[i].features, levels).cells());
    }
    return out;
}

inline BasinStatsMap fit_basins(const RuleVector& rules, std::span<const LabeledExample> data,
                                const FuzzyLevels& levels) {
    if (data.empty()) throw InvalidParameter("cannot fit basins on an empty dataset");
    const auto encoded = encode_all(data, levels, rules.size());
    return fit_basins(CompiledRules(levels, rules), encoded, data);
}

// Majority label per basin. Count ties go to the label with the larger
// training prior, then to the lexicographically smaller label.
inline BasinLabelMap label_basins(const BasinStatsMap& stats, const LabelCounts& priors) {
    if (stats.empty()) throw InvalidParameter("no basins to label");
    BasinLabelMap out;
    for (const auto& [key, basin] : stats) {
        const Label* best = nullptr;
        std::size_t best_count = 0;
        std::size_t best_prior = 0;
        for (const auto& [label, count] : basin.counts) {
            const auto pit = priors.find(label);
            const std::size_t prior = pit == priors.end() ? 0 : pit->second;
            if (!best || count > best_count || (count == best_count && prior > best_prior)) {
                best = &label;
                best_count = count;
                best_prior = prior;
            }
        }
        out.emplace(key, BasinLabel{*best, basin.purity()});
    }
    return out;
}

inline TrainedModel build_model(const FuzzyLevels& levels, const RuleVector& rules,
                                std::span<const LabeledExample> data, ModelMetadata metadata = {}) {
    const auto priors = label_priors(data);
    TrainedModel model;
    model.levels = levels;
    model.size = rules.size();
    model.rules = rules;
    model.basin_labels = label_basins(fit_basins(rules, data, levels), priors);
    model.fallback_label = majority_label(priors);
    model.metadata = metadata;
    return model;
}

struct Classification {
    Label label;
    double confidence = 0.0;

    friend bool operator==(const Classification&, const Classification&) = default;
};

// Binds a model to its compiled rule tables for repeated classification.
class Classifier {
public:
    explicit Classifier(const TrainedModel& model)
        : model_(&model), rules_(model.levels, model.rules) {}

    Classification classify(std::span<const double> features) const {
        if (features.size() != model_->size) {
            throw DimensionMismatch("expected " + std::to_string(model_->size) + " features, got " +
                                    std::to_string(features.size()));
        }
        return classify_cells(encode(features, model_->levels).cells());
    }

    Classification classify_cells(std::span<const LevelIndex> cells) const {
        const auto key = rules_.evolve(cells).attractor_key;
        const auto it = model_->basin_labels.find(key);
        if (it == model_->basin_labels.end()) return {model_->fallback_label, 0.0};
        return {it->second.label, it->second.purity};
    }

private:
    const TrainedModel* model_;
    CompiledRules rules_;
};

inline Classification classify(const TrainedModel& model, std::span<const double> features) {
    return Classifier(model).classify(features);
}

// ---------------------------------------------------------------------------
// Model text format

inline constexpr std::string_view kModelHeader = "AIS-INMACA-MODEL v1";
inline constexpr std::string_view kModelMagic = "AIS-INMACA-MODEL";

inline std::string format_rules(const RuleVector& rules, std::string_view sep = ",") {
    std::string out;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        if (i) out += sep;
        out += rule_name(rules[i].id);
        out += rules[i].complemented ? ":C" : ":N";
    }
    return out;
}

inline std::string format_key(const AttractorKey& key) {
    std::string out;
    for (std::size_t i = 0; i < key.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(key[i]);
    }
    return out;
}

inline std::string serialize(const TrainedModel& model) {
    std::string out;
    out += kModelHeader;
    out += "\nn=" + std::to_string(model.levels.count());
    out += "\nsize=" + std::to_string(model.size);
    out += "\nboundary=null";
    out += "\nfallback=" + model.fallback_label;
    out += "\nrules=" + format_rules(model.rules);
    out += "\nseed=" + std::to_string(model.metadata.seed);
    out += "\nfitness=" + text::shortest(model.metadata.fitness);
    out += "\ngenerations=" + std::to_string(model.metadata.generations);
    out += '\n';
    for (const auto& [key, bl] : model.basin_labels) {
        out += format_key(key) + '\t' + bl.label + '\t' + text::fixed(bl.purity, 6) + '\n';
    }
    return out;
}

namespace detail {

inline std::string_view expect_key(std::string_view line, std::string_view key, std::size_t lineno) {
    if (line.size() <= key.size() || line.substr(0, key.size()) != key || line[key.size()] != '=') {
        throw ParseError("expected '" + std::string(key) + "=...', got '" + std::string(line) + "'",
                         lineno);
    }
    return line.substr(key.size() + 1);
}

inline LocalRule parse_model_rule(std::string_view token, std::size_t lineno) {
    const auto colon = token.find(':');
    if (colon == std::string_view::npos) {
        throw ParseError("rule token '" + std::string(token) + "' lacks ':N' or ':C' flag", lineno);
    }
    const auto id = parse_rule_id(token.substr(0, colon));
    if (!id) throw ParseError("unknown rule token '" + std::string(token.substr(0, colon)) + "'", lineno);
    const auto flag = token.substr(colon + 1);
    if (flag != "N" && flag != "C") {
        throw ParseError("unknown complement flag '" + std::string(flag) + "'", lineno);
    }
    return LocalRule{*id, flag == "C"};
}

}  // namespace detail

// Parses the model text format. The seed/fitness/generations lines are
// optional; absent metadata defaults to zero.
inline TrainedModel deserialize(std::string_view textual) {
    const auto lines = text::lines(textual);
    if (lines.empty()) throw ParseError("empty model text", 1);
    if (lines[0] != kModelHeader) {
        if (lines[0].substr(0, kModelMagic.size()) == kModelMagic) {
            throw VersionError("unsupported model version '" + std::string(lines[0]) + "'");
        }
        throw ParseError("missing model header '" + std::string(kModelHeader) + "'", 1);
    }
    if (lines.size() < 6) throw ParseError("truncated model header", lines.size());

    TrainedModel model;
    const auto n = text::parse_int<int>(detail::expect_key(lines[1], "n", 2));
    if (!n || *n < 2 || *n > kMaxLevels) throw ParseError("invalid level count", 2);
    model.levels = FuzzyLevels(*n);

    const auto size = text::parse_int<std::size_t>(detail::expect_key(lines[2], "size", 3));
    if (!size || *size == 0) throw ParseError("invalid size", 3);
    model.size = *size;

    if (detail::expect_key(lines[3], "boundary", 4) != "null") {
        throw ParseError("unsupported boundary '" + std::string(lines[3]) + "'", 4);
    }

    model.fallback_label = std::string(detail::expect_key(lines[4], "fallback", 5));
    if (!valid_label(model.fallback_label)) throw ParseError("invalid fallback label", 5);

    for (auto token : text::split(detail::expect_key(lines[5], "rules", 6), ",")) {
        model.rules.push_back(detail::parse_model_rule(token, 6));
    }
    if (model.rules.size() != model.size) {
        throw ParseError("rules list has " + std::to_string(model.rules.size()) +
                             " entries, size is " + std::to_string(model.size),
                         6);
    }

    std::size_t i = 6;
    for (; i < lines.size() && lines[i].find('\t') == std::string_view::npos; ++i) {
        const std::size_t lineno = i + 1;
        const auto line = lines[i];
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("unexpected line '" + std::string(line) + "'", lineno);
        const auto key = line.substr(0, eq);
        const auto value = line.substr(eq + 1);
        if (key == "seed") {
            const auto v = text::parse_int<std::uint64_t>(value);
            if (!v) throw ParseError("invalid seed", lineno);
            model.metadata.seed = *v;
        } else if (key == "fitness") {
            const auto v = text::parse_double(value);
            if (!v) throw ParseError("invalid fitness", lineno);
            model.metadata.fitness = *v;
        } else if (key == "generations") {
            const auto v = text::parse_int<std::uint64_t>(value);
            if (!v) throw ParseError("invalid generations", lineno);
            model.metadata.generations = *v;
        } else {
            throw ParseError("unknown key '" + std::string(key) + "'", lineno);
        }
    }

    for (; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        const auto fields = text::split(lines[i], "\t");
        if (fields.size() != 3) throw ParseError("basin line must have 3 tab-separated fields", lineno);
        AttractorKey key;
        for (auto tok : text::split(fields[0], ",")) {
            const auto v = text::parse_int<int>(tok);
            if (!v || *v < 0 || *v >= model.levels.count()) {
                throw ParseError("invalid level index '" + std::string(tok) + "'", lineno);
            }
            key.push_back(static_cast<LevelIndex>(*v));
        }
        if (key.size() != model.size) throw ParseError("attractor key length differs from size", lineno);
        if (!valid_label(fields[1])) throw ParseError("invalid label '" + std::string(fields[1]) + "'", lineno);
        const auto purity = text::parse_double(fields[2]);
        if (!purity || !(*purity > 0.0 && *purity <= 1.0)) {
            throw ParseError("invalid purity '" + std::string(fields[2]) + "'", lineno);
        }
        if (!model.basin_labels.emplace(std::move(key), BasinLabel{std::string(fields[1]), *purity}).second) {
            throw ParseError("duplicate attractor", lineno);
        }
    }
    return model;
}

}  // namespace aisinmaca
