#pragma once

// FASTA records, fixed-width windows, and labeled attribute tables.

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "aisinmaca/errors.hpp"
#include "aisinmaca/maca_model.hpp"
#include "aisinmaca/text.hpp"

namespace aisinmaca {

struct SequenceRecord {
    std::string id;
    std::string residues;  // uppercase, over {A,C,G,T,N}

    friend bool operator==(const SequenceRecord&, const SequenceRecord&) = default;
};

inline bool is_residue(char c) { return c == 'A' || c == 'C' || c == 'G' || c == 'T' || c == 'N'; }

inline std::vector<SequenceRecord> parse_fasta(std::string_view textual) {
    std::vector<SequenceRecord> records;
    const auto lines = text::lines(textual);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        const auto line = text::trim(lines[i]);
        if (line.empty()) continue;
        if (line.front() == '>') {
            const auto header = text::trim(line.substr(1));
            const auto id = header.substr(0, header.find_first_of(" \t"));
            if (id.empty()) throw ParseError("FASTA header without an id", lineno);
            records.push_back({std::string(id), {}});
            continue;
        }
        if (records.empty()) throw ParseError("sequence data before the first '>' header", lineno);
        auto& rec = records.back();
        for (char raw : line) {
            const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(raw)));
            if (!is_residue(c)) {
                throw ParseError("illegal character '" + std::string(1, raw) + "' in record '" + rec.id +
                                     "' at offset " + std::to_string(rec.residues.size() + 1),
                                 lineno);
            }
            rec.residues.push_back(c);
        }
    }
    return records;
}

inline std::string to_fasta(const std::vector<SequenceRecord>& records, std::size_t line_width = 60) {
    std::string out;
    for (const auto& rec : records) {
        out += '>' + rec.id + '\n';
        for (std::size_t pos = 0; pos < rec.residues.size(); pos += line_width) {
            out.append(rec.residues, pos, line_width);
            out += '\n';
        }
    }
    return out;
}

inline std::string reverse_complement(std::string_view seq) {
    std::string out(seq.rbegin(), seq.rend());
    for (auto& c : out) {
        switch (c) {
            case 'A': c = 'T'; break;
            case 'T': c = 'A'; break;
            case 'C': c = 'G'; break;
            case 'G': c = 'C'; break;
            default: c = 'N'; break;
        }
    }
    return out;
}

struct WindowSpec {
    std::size_t width = 50;
    std::size_t stride = 10;
};

// start is 1-based inclusive, end is exclusive: end - start == width.
struct Window {
    std::int64_t start = 1;
    std::int64_t end = 1;
    std::string subsequence;

    friend bool operator==(const Window&, const Window&) = default;
};

inline std::vector<Window> windows(const SequenceRecord& record, const WindowSpec& spec) {
    if (spec.width < 1 || spec.stride < 1) throw InvalidParameter("window width and stride must be positive");
    std::vector<Window> out;
    const std::size_t len = record.residues.size();
    if (len < spec.width) return out;
    for (std::size_t offset = 0; offset + spec.width <= len; offset += spec.stride) {
        const auto start = static_cast<std::int64_t>(offset) + 1;
        out.push_back({start, start + static_cast<std::int64_t>(spec.width),
                       record.residues.substr(offset, spec.width)});
    }
    return out;
}

// Rows of attributes in [0,1] followed by a label, separated by tabs or
// commas. A leading row index such as "7." is ignored; blank lines and lines
// starting with '#' are skipped.
inline std::vector<LabeledExample> load_table(std::string_view textual) {
    std::vector<LabeledExample> out;
    std::size_t width = 0;
    const auto lines = text::lines(textual);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::size_t lineno = i + 1;
        const auto line = text::trim(lines[i]);
        if (line.empty() || line.front() == '#') continue;

        std::vector<std::string_view> fields;
        for (auto f : text::split(line, "\t,")) fields.push_back(text::trim(f));
        if (!fields.empty() && fields.front().size() > 1 && fields.front().back() == '.' &&
            text::parse_int<long>(fields.front().substr(0, fields.front().size() - 1))) {
            fields.erase(fields.begin());
        }
        if (fields.size() < 2) throw ParseError("row needs at least one attribute and a label", lineno);

        LabeledExample ex;
        ex.label = std::string(fields.back());
        if (!valid_label(ex.label)) throw ParseError("invalid label '" + ex.label + "'", lineno);
        for (std::size_t col = 0; col + 1 < fields.size(); ++col) {
            const auto v = text::parse_double(fields[col]);
            if (!v) {
                throw ParseError("non-numeric attribute '" + std::string(fields[col]) + "' in column " +
                                     std::to_string(col + 1),
                                 lineno);
            }
            if (!(*v >= 0.0 && *v <= 1.0)) {
                throw ParseError("attribute " + std::string(fields[col]) + " in column " +
                                     std::to_string(col + 1) + " outside [0,1]",
                                 lineno);
            }
            ex.features.push_back(*v);
        }
        if (width == 0) width = ex.features.size();
        if (ex.features.size() != width) {
            throw ParseError("ragged row: " + std::to_string(ex.features.size()) + " attributes, expected " +
                                 std::to_string(width),
                             lineno);
        }
        out.push_back(std::move(ex));
    }
    return out;
}

inline std::string to_table(const std::vector<LabeledExample>& data) {
    std::string out;
    for (const auto& ex : data) {
        for (double v : ex.features) out += text::shortest(v) + '\t';
        out += ex.label + '\n';
    }
    return out;
}

}  // namespace aisinmaca
