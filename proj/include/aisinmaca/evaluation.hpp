#pragma once

// Nucleotide-level prediction accuracy statistics: confusion counts, the
// derived marginals, sensitivity, specificity, correlation coefficient and
// accuracy. Undefined ratios (zero denominators) are reported as nullopt.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aisinmaca/errors.hpp"

namespace aisinmaca {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }

    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp;
        fp += o.fp;
        tn += o.tn;
        fn += o.fn;
        return *this;
    }

    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct DerivedCounts {
    std::uint64_t ap = 0;  // actual positives
    std::uint64_t an = 0;  // actual negatives
    std::uint64_t pp = 0;  // predicted positives
    std::uint64_t pn = 0;  // predicted negatives

    friend bool operator==(const DerivedCounts&, const DerivedCounts&) = default;
};

inline DerivedCounts derive(const ConfusionCounts& c) {
    return {c.tp + c.fn, c.tn + c.fp, c.tp + c.fp, c.tn + c.fn};
}

inline std::optional<double> sensitivity(const ConfusionCounts& c) {
    if (c.tp + c.fn == 0) return std::nullopt;
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

// TN/(TN+FP).
inline std::optional<double> specificity(const ConfusionCounts& c) {
    if (c.tn + c.fp == 0) return std::nullopt;
    return static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
}

inline std::optional<double> correlation(const ConfusionCounts& c) {
    const auto d = derive(c);
    if (d.an == 0 || d.pp == 0 || d.ap == 0 || d.pn == 0) return std::nullopt;
    const double numer = static_cast<double>(c.tp) * static_cast<double>(c.tn) -
                         static_cast<double>(c.fp) * static_cast<double>(c.fn);
    // Each pair product is taken under its own root to keep the
    // intermediate within double range for large counts.
    const double denom = std::sqrt(static_cast<double>(d.an) * static_cast<double>(d.pp)) *
                         std::sqrt(static_cast<double>(d.ap) * static_cast<double>(d.pn));
    return numer / denom;
}

inline std::optional<double> accuracy(const ConfusionCounts& c) {
    if (c.total() == 0) return std::nullopt;
    return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

struct MetricsReport {
    ConfusionCounts counts;
    DerivedCounts derived;
    std::optional<double> sn;
    std::optional<double> sp;
    std::optional<double> cc;
    std::optional<double> accuracy;
};

inline MetricsReport metrics(const ConfusionCounts& c) {
    return {c, derive(c), sensitivity(c), specificity(c), correlation(c), accuracy(c)};
}

// 1-based inclusive interval.
struct Region {
    std::int64_t start = 0;
    std::int64_t end = 0;

    friend auto operator<=>(const Region&, const Region&) = default;
};

// Position-by-position comparison over [1, seq_len].
inline ConfusionCounts confusion_from_regions(const std::vector<Region>& pred,
                                              const std::vector<Region>& truth,
                                              std::int64_t seq_len) {
    if (seq_len < 0) throw InvalidParameter("sequence length must be non-negative");
    auto mark = [seq_len](const std::vector<Region>& regions, const char* what) {
        std::vector<bool> covered(static_cast<std::size_t>(seq_len), false);
        for (const auto& r : regions) {
            if (r.start > r.end) {
                throw DomainError(std::string(what) + " region [" + std::to_string(r.start) + "," +
                                  std::to_string(r.end) + "] is inverted");
            }
            if (r.start < 1 || r.end > seq_len) {
                throw DomainError(std::string(what) + " region [" + std::to_string(r.start) + "," +
                                  std::to_string(r.end) + "] outside [1," + std::to_string(seq_len) +
                                  "]");
            }
            for (auto p = r.start; p <= r.end; ++p) covered[static_cast<std::size_t>(p - 1)] = true;
        }
        return covered;
    };
    const auto p = mark(pred, "predicted");
    const auto t = mark(truth, "truth");
    ConfusionCounts c;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] && t[i]) ++c.tp;
        else if (p[i]) ++c.fp;
        else if (t[i]) ++c.fn;
        else ++c.tn;
    }
    return c;
}

}  // namespace aisinmaca
