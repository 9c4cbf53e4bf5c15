#pragma once

// Command-line front end. run_cli() is the whole program minus main(), so
// tests can drive every subcommand in-process.
//
// Exit codes: 0 success, 1 usage error, 2 input/parse error,
// 3 model/config mismatch.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aisinmaca/clonal_trainer.hpp"
#include "aisinmaca/errors.hpp"
#include "aisinmaca/evaluation.hpp"
#include "aisinmaca/features.hpp"
#include "aisinmaca/fuzzy_ca.hpp"
#include "aisinmaca/maca_model.hpp"
#include "aisinmaca/region_report.hpp"
#include "aisinmaca/seq_ingest.hpp"
#include "aisinmaca/text.hpp"

namespace aisinmaca::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInput = 2, kMismatch = 3 };

class UsageError : public Error {
public:
    using Error::Error;
};

class InputError : public Error {
public:
    using Error::Error;
};

class MismatchError : public Error {
public:
    using Error::Error;
};

// "RULE" or "RULE~" per cell, comma-separated; "RULE*K" / "RULE~*K" repeats
// a rule K times.
inline RuleVector parse_rule_spec(std::string_view spec) {
    RuleVector rules;
    for (auto raw : text::split(spec, ",")) {
        auto token = text::trim(raw);
        std::size_t repeat = 1;
        if (const auto star = token.find('*'); star != std::string_view::npos) {
            const auto k = text::parse_int<std::size_t>(token.substr(star + 1));
            if (!k || *k == 0) throw UsageError("bad repeat count in rule token '" + std::string(token) + "'");
            repeat = *k;
            token = token.substr(0, star);
        }
        LocalRule rule;
        if (!token.empty() && token.back() == '~') {
            rule.complemented = true;
            token.remove_suffix(1);
        }
        const auto id = parse_rule_id(token);
        if (!id) throw UsageError("unknown rule '" + std::string(token) + "'");
        rule.id = *id;
        rules.insert(rules.end(), repeat, rule);
    }
    return rules;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << content;
    if (!out) throw InputError("failed writing '" + path + "'");
}

inline Task parse_task(const std::string& s) { return s == "promoter" ? Task::Promoter : Task::Coding; }

inline WindowSpec default_window(Task task) {
    return task == Task::Coding ? WindowSpec{120, 30} : WindowSpec{50, 10};
}

// 1-based inclusive regions keyed by record id, from "id<TAB>start<TAB>end".
inline std::map<std::string, std::vector<Region>> parse_region_file(std::string_view textual) {
    std::map<std::string, std::vector<Region>> out;
    const auto lines = text::lines(textual);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto line = text::trim(lines[i]);
        if (line.empty() || line.front() == '#') continue;
        const auto f = text::split(line, "\t");
        if (f.size() != 3) throw ParseError("region line needs record_id, start, end", i + 1);
        const auto start = text::parse_int<std::int64_t>(f[1]);
        const auto end = text::parse_int<std::int64_t>(f[2]);
        if (!start || !end) throw ParseError("non-numeric region coordinate", i + 1);
        out[std::string(f[0])].push_back({*start, *end});
    }
    return out;
}

inline std::string format_metric(const std::optional<double>& v) {
    return v ? text::fixed(*v, 6) : std::string("undefined");
}

inline std::string render_metrics(const MetricsReport& m) {
    std::string out;
    auto line = [&out](std::string_view name, const std::string& value) {
        out += name;
        out += '\t' + value + '\n';
    };
    line("tp", std::to_string(m.counts.tp));
    line("fp", std::to_string(m.counts.fp));
    line("tn", std::to_string(m.counts.tn));
    line("fn", std::to_string(m.counts.fn));
    line("ap", std::to_string(m.derived.ap));
    line("an", std::to_string(m.derived.an));
    line("pp", std::to_string(m.derived.pp));
    line("pn", std::to_string(m.derived.pn));
    line("sn", format_metric(m.sn));
    line("sp", format_metric(m.sp));
    line("cc", format_metric(m.cc));
    line("accuracy", format_metric(m.accuracy));
    return out;
}

inline std::string render_basins(const FuzzyLevels& levels, const BasinMap& basins) {
    std::string out = "attractor\tvalues\tbasin_size\n";
    std::size_t total = 0;
    for (const auto& [key, members] : basins) {
        std::string values;
        for (std::size_t i = 0; i < key.size(); ++i) {
            if (i) values += ',';
            values += text::fixed(levels.value(key[i]), 2);
        }
        out += format_key(key) + '\t' + values + '\t' + std::to_string(members.size()) + '\n';
        total += members.size();
    }
    out += "total\t" + std::to_string(total) + '\n';
    return out;
}

struct PredictOptions {
    std::string model_path;
    std::string fasta_path;
    std::string task = "coding";
    std::size_t window = 0;
    std::size_t stride = 0;
    double threshold = 0.5;
    std::string format;
    std::int64_t max_gap = 0;
    bool both_strands = false;
};

struct WindowCall {
    std::int64_t start;
    std::int64_t end;
    Classification result;
    std::string subsequence;
};

inline std::vector<WindowCall> scan(const Classifier& classifier, Task task, const SequenceRecord& rec,
                                    const WindowSpec& spec) {
    std::vector<WindowCall> calls;
    for (auto& w : windows(rec, spec)) {
        const auto fv = features_for(task, w.subsequence);
        calls.push_back({w.start, w.end, classifier.classify(fv.values), std::move(w.subsequence)});
    }
    return calls;
}

inline std::vector<ScoredWindow> positive_scores(const std::vector<WindowCall>& calls) {
    std::vector<ScoredWindow> out;
    for (const auto& c : calls) {
        out.push_back({c.start, c.end, c.result.label == kPositiveLabel ? c.result.confidence : 0.0});
    }
    return out;
}

inline std::string cmd_predict(const PredictOptions& opt) {
    const Task task = parse_task(opt.task);
    TrainedModel model;
    try {
        model = deserialize(read_file(opt.model_path));
    } catch (const VersionError& e) {
        throw MismatchError(std::string("model: ") + e.what());
    }
    const auto& schema = schema_for(task);
    if (model.size != schema.size()) {
        throw MismatchError("model size " + std::to_string(model.size) + " does not match " + opt.task +
                            " feature schema length " + std::to_string(schema.size()));
    }
    WindowSpec spec = default_window(task);
    if (opt.window) spec.width = opt.window;
    if (opt.stride) spec.stride = opt.stride;
    const std::size_t min_width = task == Task::Coding ? 3 : kTataMotif.size();
    if (spec.width < min_width) {
        throw UsageError("window width must be at least " + std::to_string(min_width) + " for " + opt.task);
    }
    std::string format = opt.format;
    if (format.empty()) format = task == Task::Coding ? "exon-table" : "promoter-table";

    const auto records = parse_fasta(read_file(opt.fasta_path));
    const Classifier classifier(model);

    std::string out;
    std::vector<GeneGroup> genes;
    std::vector<PromoterRow> promoters;
    for (const auto& rec : records) {
        const auto len = static_cast<std::int64_t>(rec.residues.size());
        std::vector<char> strands = {'+'};
        if (opt.both_strands) strands.push_back('-');
        for (char strand : strands) {
            const SequenceRecord scanned =
                strand == '+' ? rec : SequenceRecord{rec.id, reverse_complement(rec.residues)};
            const auto calls = scan(classifier, task, scanned, spec);

            if (format == "raw") {
                for (const auto& c : calls) {
                    // Reverse-strand windows are reported in forward coordinates.
                    const auto start = strand == '+' ? c.start : len - c.end + 2;
                    const auto end = strand == '+' ? c.end : len - c.start + 2;
                    out += rec.id + '\t' + std::to_string(start) + '\t' + std::to_string(end) + '\t' +
                           c.result.label + '\t' + text::fixed(c.result.confidence, 6);
                    if (opt.both_strands) out += std::string("\t") + strand;
                    out += '\n';
                }
                continue;
            }

            const auto regions = merge_windows(positive_scores(calls), opt.threshold, opt.max_gap);
            if (format == "exon-table") {
                GeneGroup g{rec.id, strand, {}};
                for (const auto& r : regions) {
                    if (strand == '+') g.regions.push_back({r.start, r.end});
                    else g.regions.push_back({len - r.end + 1, len - r.start + 1});
                }
                std::sort(g.regions.begin(), g.regions.end());
                genes.push_back(std::move(g));
            } else if (strand == '+') {
                // Best-scoring window inside each merged region.
                for (const auto& r : regions) {
                    const WindowCall* best = nullptr;
                    double best_score = -1.0;
                    for (const auto& c : calls) {
                        const double s = c.result.label == kPositiveLabel ? c.result.confidence : 0.0;
                        if (c.start >= r.start && c.end - 1 <= r.end && s > best_score) {
                            best = &c;
                            best_score = s;
                        }
                    }
                    promoters.push_back({best->start, best->end, best_score, best->subsequence});
                }
            }
        }
    }
    if (format == "exon-table") return gene_table(genes);
    if (format == "promoter-table") return promoter_table(promoters);
    return out;
}

inline std::string cmd_features(const std::string& fasta_path, const std::string& task_name, std::size_t width,
                                std::size_t stride) {
    const Task task = parse_task(task_name);
    WindowSpec spec = default_window(task);
    if (width) spec.width = width;
    if (stride) spec.stride = stride;
    const std::size_t min_width = task == Task::Coding ? 3 : kTataMotif.size();
    if (spec.width < min_width) {
        throw UsageError("window width must be at least " + std::to_string(min_width) + " for " + task_name);
    }
    std::string out = "record\tstart\tend";
    for (const auto& name : schema_for(task)) out += '\t' + name;
    out += '\n';
    for (const auto& rec : parse_fasta(read_file(fasta_path))) {
        for (const auto& w : windows(rec, spec)) {
            out += rec.id + '\t' + std::to_string(w.start) + '\t' + std::to_string(w.end);
            for (double v : features_for(task, w.subsequence).values) out += '\t' + text::fixed(v, 6);
            out += '\n';
        }
    }
    return out;
}

inline std::string cmd_evaluate(const std::string& pred_path, const std::string& truth_path, std::int64_t len) {
    const auto pred = parse_region_file(read_file(pred_path));
    const auto truth = parse_region_file(read_file(truth_path));
    std::map<std::string, int> ids;
    for (const auto& [id, _] : pred) ids[id];
    for (const auto& [id, _] : truth) ids[id];
    ConfusionCounts total;
    static const std::vector<Region> none;
    for (const auto& [id, _] : ids) {
        const auto p = pred.find(id);
        const auto t = truth.find(id);
        total += confusion_from_regions(p == pred.end() ? none : p->second, t == truth.end() ? none : t->second, len);
    }
    if (ids.empty()) total.tn = static_cast<std::uint64_t>(len);
    return render_metrics(metrics(total));
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fuzzy multiple-attractor cellular automata classifier trained by clonal selection"};
    app.require_subcommand(1);

    // train
    auto* train_cmd = app.add_subcommand("train", "Train a classifier on a labeled attribute table");
    std::string data_path, out_path, metric = "accuracy";
    TrainerConfig cfg;
    train_cmd->add_option("--data", data_path, "Labeled table (tab/comma separated)")->required();
    train_cmd->add_option("--out", out_path, "Model output path")->required();
    train_cmd->add_option("--n", cfg.levels, "Number of fuzzy levels")->capture_default_str();
    train_cmd->add_option("--size", cfg.size, "Lattice size (default: table width)");
    train_cmd->add_option("--pop", cfg.population, "Population size")->capture_default_str();
    train_cmd->add_option("--gens", cfg.generations, "Generations")->capture_default_str();
    train_cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    train_cmd->add_option("--metric", metric, "Fitness metric")
        ->check(CLI::IsMember({"accuracy", "cc"}))
        ->capture_default_str();
    auto* top_opt = train_cmd->add_option("--select-top", cfg.select_top, "Candidates selected for cloning");
    auto* budget_opt = train_cmd->add_option("--clone-budget", cfg.clone_budget, "Clones per generation");
    train_cmd->add_option("--editing", cfg.editing_fraction, "Fraction replaced by random candidates")
        ->capture_default_str();
    train_cmd->add_option("--holdout", cfg.holdout_fraction, "Fraction held out for affinity scoring")
        ->capture_default_str();
    train_cmd->add_option("--threads", cfg.threads, "Worker threads for affinity evaluation")
        ->capture_default_str();

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "Scan sequences with a trained model");
    PredictOptions popt;
    predict_cmd->add_option("--model", popt.model_path, "Model file")->required();
    predict_cmd->add_option("--fasta", popt.fasta_path, "FASTA input")->required();
    predict_cmd->add_option("--task", popt.task, "coding or promoter")
        ->check(CLI::IsMember({"coding", "promoter"}))
        ->capture_default_str();
    predict_cmd->add_option("--window", popt.window, "Window width (default 120 coding, 50 promoter)");
    predict_cmd->add_option("--stride", popt.stride, "Window stride (default 30 coding, 10 promoter)");
    predict_cmd->add_option("--threshold", popt.threshold, "Minimum positive score")->capture_default_str();
    predict_cmd->add_option("--format", popt.format, "exon-table, promoter-table or raw")
        ->check(CLI::IsMember({"exon-table", "promoter-table", "raw"}));
    predict_cmd->add_option("--max-gap", popt.max_gap, "Merge windows separated by at most this many bases")
        ->capture_default_str();
    predict_cmd->add_flag("--both-strands", popt.both_strands, "Also scan the reverse complement");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Nucleotide-level accuracy of predicted regions");
    std::string pred_path, truth_path;
    std::int64_t seq_len = 0;
    eval_cmd->add_option("--pred", pred_path, "Predicted regions")->required();
    eval_cmd->add_option("--truth", truth_path, "True regions")->required();
    eval_cmd->add_option("--len", seq_len, "Sequence length per record")->required()->check(CLI::NonNegativeNumber);

    // basins
    auto* basins_cmd = app.add_subcommand("basins", "List attractor basins by exhaustive enumeration");
    std::string basin_model, rule_spec;
    int basin_n = kDefaultLevels;
    std::size_t basin_size = 0;
    auto* bmodel_opt = basins_cmd->add_option("--model", basin_model, "Model file");
    auto* rules_opt = basins_cmd->add_option("--rules", rule_spec, "Rule spec, e.g. OR3,IDENTITY~,ZERO or ZERO*3");
    basins_cmd->add_option("--n", basin_n, "Number of fuzzy levels")->capture_default_str();
    basins_cmd->add_option("--size", basin_size, "Lattice size (default: rule count)");
    bmodel_opt->excludes(rules_opt);

    // features
    auto* feat_cmd = app.add_subcommand("features", "Dump per-window feature vectors");
    std::string feat_fasta, feat_task = "coding";
    std::size_t feat_window = 0, feat_stride = 0;
    feat_cmd->add_option("--fasta", feat_fasta, "FASTA input")->required();
    feat_cmd->add_option("--task", feat_task, "coding or promoter")
        ->check(CLI::IsMember({"coding", "promoter"}))
        ->capture_default_str();
    feat_cmd->add_option("--window", feat_window, "Window width");
    feat_cmd->add_option("--stride", feat_stride, "Window stride");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (train_cmd->parsed()) {
            cfg.metric = metric == "cc" ? FitnessMetric::CC : FitnessMetric::Accuracy;
            if (top_opt->count() == 0) cfg.select_top = std::min(cfg.select_top, cfg.population);
            if (budget_opt->count() == 0) cfg.clone_budget = std::max(cfg.clone_budget, cfg.population);
            try {
                cfg.validate();
            } catch (const InvalidParameter& e) {
                throw UsageError(e.what());
            }
            const auto data = load_table(read_file(data_path));
            if (data.empty()) throw InputError("no examples in '" + data_path + "'");
            if (cfg.size != 0 && cfg.size != data.front().features.size()) {
                throw InputError("--size " + std::to_string(cfg.size) + " does not match table width " +
                                 std::to_string(data.front().features.size()));
            }
            auto result = train(data, cfg);
            write_file(out_path, serialize(result.model));
            out << "metric\t" << metric_name(cfg.metric) << '\n';
            out << "final_fitness\t" << text::fixed(result.report.final_fitness, 6) << '\n';
            out << "evaluations\t" << result.report.evaluations << '\n';
            out << "generation\tbest_fitness\n";
            for (std::size_t g = 0; g < result.report.best_fitness_per_generation.size(); ++g) {
                out << g + 1 << '\t' << text::fixed(result.report.best_fitness_per_generation[g], 6) << '\n';
            }
        } else if (predict_cmd->parsed()) {
            out << cmd_predict(popt);
        } else if (eval_cmd->parsed()) {
            out << cmd_evaluate(pred_path, truth_path, seq_len);
        } else if (basins_cmd->parsed()) {
            FuzzyLevels levels;
            RuleVector rules;
            if (bmodel_opt->count()) {
                TrainedModel model;
                try {
                    model = deserialize(read_file(basin_model));
                } catch (const VersionError& e) {
                    throw MismatchError(std::string("model: ") + e.what());
                }
                levels = model.levels;
                rules = model.rules;
            } else if (rules_opt->count()) {
                try {
                    levels = FuzzyLevels(basin_n);
                } catch (const InvalidParameter& e) {
                    throw UsageError(e.what());
                }
                rules = parse_rule_spec(rule_spec);
            } else {
                throw UsageError("basins needs --model or --rules");
            }
            if (basin_size != 0 && basin_size != rules.size()) {
                throw MismatchError("--size " + std::to_string(basin_size) + " does not match " +
                                    std::to_string(rules.size()) + " rules");
            }
            out << render_basins(levels, basin_map(levels, rules.size(), rules));
        } else if (feat_cmd->parsed()) {
            out << cmd_features(feat_fasta, feat_task, feat_window, feat_stride);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const InvalidParameter& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const MismatchError& e) {
        err << "error: " << e.what() << '\n';
        return kMismatch;
    } catch (const StateSpaceTooLarge& e) {
        err << "error: " << e.what() << '\n';
        return kMismatch;
    } catch (const DimensionMismatch& e) {
        err << "error: " << e.what() << '\n';
        return kMismatch;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInput;
    }
    return kOk;
}

}  // namespace aisinmaca::cli
