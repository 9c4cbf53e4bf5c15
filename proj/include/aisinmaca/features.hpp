#pragma once

// Sequence-window features scaled into [0,1] for the coding and promoter
// tasks. 'N' counts toward window length but never matches a base or motif.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "aisinmaca/errors.hpp"

namespace aisinmaca {

inline constexpr std::array<char, 4> kBases = {'A', 'C', 'G', 'T'};
inline constexpr std::string_view kTataMotif = "TATAAA";
inline constexpr std::string_view kInitiatorMotif = "CCAT";

struct FeatureVector {
    std::vector<double> values;
    std::vector<std::string> schema;
};

inline const std::vector<std::string>& coding_schema() {
    static const std::vector<std::string> names = {
        "asym_A", "asym_C", "asym_G", "asym_T", "comp_A", "comp_C", "comp_G", "comp_T", "period3",
    };
    return names;
}

inline const std::vector<std::string>& promoter_schema() {
    static const std::vector<std::string> names = {"gc_content", "cpg_oe", "tata_score", "inr_score"};
    return names;
}

namespace detail {
inline void require_length(std::string_view seq, std::size_t min, const char* what) {
    if (seq.size() < min) {
        throw DomainError(std::string(what) + " needs at least " + std::to_string(min) +
                          " residues, got " + std::to_string(seq.size()));
    }
}
}  // namespace detail

inline double composition(std::string_view seq, char base) {
    detail::require_length(seq, 1, "composition");
    return static_cast<double>(std::count(seq.begin(), seq.end(), base)) / static_cast<double>(seq.size());
}

// (max - min) / (max + min + 1) over the base's counts in the three codon
// phases.
inline double position_asymmetry(std::string_view seq, char base) {
    detail::require_length(seq, 3, "position asymmetry");
    std::array<double, 3> phase{};
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (seq[i] == base) phase[i % 3] += 1.0;
    }
    const auto [lo, hi] = std::minmax_element(phase.begin(), phase.end());
    return (*hi - *lo) / (*hi + *lo + 1.0);
}

// Spectral power at frequency 1/3 summed over the four base indicator
// sequences, scaled by 3/L^2 and clamped to 1.
inline double period3_power(std::string_view seq) {
    detail::require_length(seq, 3, "period-3 power");
    // Powers of exp(-2*pi*i/3) cycle with period 3.
    const double h = std::sqrt(3.0) / 2.0;
    const std::array<std::complex<double>, 3> omega = {
        std::complex<double>(1.0, 0.0), std::complex<double>(-0.5, -h), std::complex<double>(-0.5, h)};
    std::array<std::complex<double>, 4> sums{};
    for (std::size_t j = 0; j < seq.size(); ++j) {
        for (std::size_t b = 0; b < kBases.size(); ++b) {
            if (seq[j] == kBases[b]) sums[b] += omega[j % 3];
        }
    }
    double total = 0.0;
    for (const auto& s : sums) total += std::norm(s);
    const double len = static_cast<double>(seq.size());
    return std::min(1.0, 3.0 * total / (len * len));
}

inline double gc_content(std::string_view seq) {
    detail::require_length(seq, 1, "GC content");
    const auto gc = std::count_if(seq.begin(), seq.end(), [](char c) { return c == 'G' || c == 'C'; });
    return static_cast<double>(gc) / static_cast<double>(seq.size());
}

// CpG observed/expected ratio halved and clamped to 1.
inline double cpg_ratio(std::string_view seq) {
    detail::require_length(seq, 2, "CpG ratio");
    double observed = 0.0;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        if (seq[i] == 'C' && seq[i + 1] == 'G') observed += 1.0;
    }
    const double c = static_cast<double>(std::count(seq.begin(), seq.end(), 'C'));
    const double g = static_cast<double>(std::count(seq.begin(), seq.end(), 'G'));
    const double expected = c * g / static_cast<double>(seq.size());
    if (expected == 0.0) return 0.0;
    return std::min(1.0, (observed / expected) / 2.0);
}

// Best fraction of motif positions matched over all ungapped placements.
inline double consensus_score(std::string_view seq, std::string_view motif) {
    if (motif.empty()) throw InvalidParameter("empty motif");
    detail::require_length(seq, motif.size(), "consensus score");
    std::size_t best = 0;
    for (std::size_t off = 0; off + motif.size() <= seq.size(); ++off) {
        std::size_t hits = 0;
        for (std::size_t k = 0; k < motif.size(); ++k) {
            if (seq[off + k] == motif[k]) ++hits;
        }
        best = std::max(best, hits);
        if (best == motif.size()) break;
    }
    return static_cast<double>(best) / static_cast<double>(motif.size());
}

inline FeatureVector coding_features(std::string_view seq) {
    FeatureVector fv;
    fv.schema = coding_schema();
    for (char b : kBases) fv.values.push_back(position_asymmetry(seq, b));
    for (char b : kBases) fv.values.push_back(composition(seq, b));
    fv.values.push_back(period3_power(seq));
    return fv;
}

inline FeatureVector promoter_features(std::string_view seq) {
    FeatureVector fv;
    fv.schema = promoter_schema();
    fv.values = {gc_content(seq), cpg_ratio(seq), consensus_score(seq, kTataMotif),
                 consensus_score(seq, kInitiatorMotif)};
    return fv;
}

enum class Task { Coding, Promoter };

inline const std::vector<std::string>& schema_for(Task task) {
    return task == Task::Coding ? coding_schema() : promoter_schema();
}

inline FeatureVector features_for(Task task, std::string_view seq) {
    return task == Task::Coding ? coding_features(seq) : promoter_features(seq);
}

}  // namespace aisinmaca
