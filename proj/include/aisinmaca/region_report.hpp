#pragma once

// Window calls -> merged regions, and the two tabular report formats
// (gene element boundaries, promoter windows).

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "aisinmaca/errors.hpp"
#include "aisinmaca/evaluation.hpp"
#include "aisinmaca/maca_model.hpp"
#include "aisinmaca/text.hpp"

namespace aisinmaca {

// A window's [start, end) coordinates with its positive-class score.
struct ScoredWindow {
    std::int64_t start = 1;
    std::int64_t end = 1;
    double score = 0.0;
};

// Inclusive [start, end].
struct RegionCall {
    std::int64_t start = 0;
    std::int64_t end = 0;
    double score = 0.0;
    Label label = kPositiveLabel;

    friend bool operator==(const RegionCall&, const RegionCall&) = default;
};

// Windows scoring at least `threshold` are merged when the gap between them
// is at most `max_gap` positions (overlaps always merge). A region's score
// is the maximum of its windows.
inline std::vector<RegionCall> merge_windows(const std::vector<ScoredWindow>& calls, double threshold,
                                             std::int64_t max_gap, const Label& label = kPositiveLabel) {
    for (std::size_t i = 1; i < calls.size(); ++i) {
        if (calls[i].start < calls[i - 1].start) throw InvalidParameter("window calls are not sorted by start");
    }
    std::vector<RegionCall> out;
    for (const auto& w : calls) {
        if (w.score < threshold) continue;
        const std::int64_t last = w.end - 1;
        if (!out.empty() && w.start - out.back().end - 1 <= max_gap) {
            out.back().end = std::max(out.back().end, last);
            out.back().score = std::max(out.back().score, w.score);
        } else {
            out.push_back({w.start, last, w.score, label});
        }
    }
    return out;
}

enum class ElementKind { Utr5, Initial, Internal, Terminal, Single };

inline std::string_view element_kind_name(ElementKind k) {
    switch (k) {
        case ElementKind::Utr5: return "Utr5";
        case ElementKind::Initial: return "Initial";
        case ElementKind::Internal: return "Internal";
        case ElementKind::Terminal: return "Terminal";
        case ElementKind::Single: return "Single";
    }
    return "";
}

inline ElementKind parse_element_kind(std::string_view s, std::size_t lineno = 0) {
    for (auto k : {ElementKind::Utr5, ElementKind::Initial, ElementKind::Internal, ElementKind::Terminal,
                   ElementKind::Single}) {
        if (element_kind_name(k) == s) return k;
    }
    throw ParseError("unknown element kind '" + std::string(s) + "'", lineno);
}

// Kind by ordinal position among `count` coding regions of one gene.
inline ElementKind positional_kind(std::size_t index, std::size_t count) {
    if (count == 1) return ElementKind::Single;
    if (index == 0) return ElementKind::Initial;
    if (index + 1 == count) return ElementKind::Terminal;
    return ElementKind::Internal;
}

struct GeneElementRow {
    std::size_t gene_number = 1;
    std::size_t element_number = 0;
    ElementKind kind = ElementKind::Single;
    char strand = '+';
    std::int64_t left = 0;
    std::int64_t right = 0;

    friend bool operator==(const GeneElementRow&, const GeneElementRow&) = default;
};

// Coding regions of one record on one strand; each non-empty group is a gene.
struct GeneGroup {
    std::string record_id;
    char strand = '+';
    std::vector<Region> regions;
};

inline constexpr std::string_view kGeneTableHeader =
    "Gene number\tElement number\tExons/UTR\tStrand\tLeft end\tRight end";

inline std::vector<GeneElementRow> gene_rows(const std::vector<GeneGroup>& groups) {
    std::vector<GeneElementRow> rows;
    std::size_t gene = 0;
    for (const auto& g : groups) {
        if (g.regions.empty()) continue;
        ++gene;
        for (std::size_t i = 0; i < g.regions.size(); ++i) {
            rows.push_back({gene, i, positional_kind(i, g.regions.size()), g.strand, g.regions[i].start,
                            g.regions[i].end});
        }
    }
    return rows;
}

inline std::string render_gene_table(const std::vector<GeneElementRow>& rows) {
    std::string out(kGeneTableHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += std::to_string(r.gene_number) + '\t' + std::to_string(r.element_number) + '\t';
        out += element_kind_name(r.kind);
        out += '\t';
        out += r.strand;
        out += '\t' + std::to_string(r.left) + '\t' + std::to_string(r.right) + '\n';
    }
    return out;
}

inline std::string gene_table(const std::vector<GeneGroup>& groups) { return render_gene_table(gene_rows(groups)); }

inline std::vector<GeneElementRow> parse_gene_table(std::string_view textual) {
    const auto lines = text::lines(textual);
    if (lines.empty() || lines[0] != kGeneTableHeader) throw ParseError("missing gene table header", 1);
    std::vector<GeneElementRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        if (text::trim(lines[i]).empty()) continue;
        const auto f = text::split(lines[i], "\t");
        if (f.size() != 6) throw ParseError("gene table row needs 6 fields", lineno);
        const auto gene = text::parse_int<std::size_t>(f[0]);
        const auto elem = text::parse_int<std::size_t>(f[1]);
        const auto left = text::parse_int<std::int64_t>(f[4]);
        const auto right = text::parse_int<std::int64_t>(f[5]);
        if (!gene || !elem || !left || !right) throw ParseError("non-numeric gene table field", lineno);
        if (f[3] != "+" && f[3] != "-") throw ParseError("strand must be '+' or '-'", lineno);
        if (*left > *right) throw ParseError("left end exceeds right end", lineno);
        rows.push_back({*gene, *elem, parse_element_kind(f[2], lineno), f[3][0], *left, *right});
    }
    return rows;
}

// A promoter window: inclusive start, exclusive end (end = start + width).
struct PromoterRow {
    std::int64_t start = 1;
    std::int64_t end = 1;
    double score = 0.0;
    std::string sequence;

    friend bool operator==(const PromoterRow&, const PromoterRow&) = default;
};

inline constexpr std::string_view kPromoterTableHeader = "Start\tEnd\tScore\tPromoter Sequence";

inline std::string promoter_table(const std::vector<PromoterRow>& rows) {
    std::string out(kPromoterTableHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += std::to_string(r.start) + '\t' + std::to_string(r.end) + '\t' + text::fixed(r.score, 2) + '\t' +
               r.sequence + '\n';
    }
    return out;
}

inline std::vector<PromoterRow> parse_promoter_table(std::string_view textual) {
    const auto lines = text::lines(textual);
    if (lines.empty() || lines[0] != kPromoterTableHeader) throw ParseError("missing promoter table header", 1);
    std::vector<PromoterRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        if (text::trim(lines[i]).empty()) continue;
        const auto f = text::split(lines[i], "\t");
        if (f.size() != 4) throw ParseError("promoter table row needs 4 fields", lineno);
        const auto start = text::parse_int<std::int64_t>(f[0]);
        const auto end = text::parse_int<std::int64_t>(f[1]);
        const auto score = text::parse_double(f[2]);
        if (!start || !end || !score) throw ParseError("non-numeric promoter table field", lineno);
        rows.push_back({*start, *end, *score, std::string(f[3])});
    }
    return rows;
}

}  // namespace aisinmaca
