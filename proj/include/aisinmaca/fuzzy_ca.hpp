#pragma once

// Fuzzy cellular automata over a one-dimensional lattice with null boundary.
//
// Cell states are quantized rationals j/(n-1), j = 0..n-1, stored as level
// indices. Local rules are evaluated in exact integer arithmetic and the raw
// fuzzy value is re-quantized to the nearest level (ties toward the lower
// level), so the global state space is finite and every trajectory reaches
// a cycle.

#include <algorithm>
#include <array>
#include <compare>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "aisinmaca/errors.hpp"

namespace aisinmaca {

using LevelIndex = std::uint8_t;

// Largest supported number of fuzzy levels (level indices fit in LevelIndex).
inline constexpr int kMaxLevels = 256;

// Default level count.
inline constexpr int kDefaultLevels = 6;

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num * b.den == b.num * a.den;
    }
};

inline Rational reduced(std::int64_t num, std::int64_t den) {
    const std::int64_t g = std::gcd(num, den);
    return g ? Rational{num / g, den / g} : Rational{0, 1};
}

inline Rational operator-(std::int64_t lhs, const Rational& r) {
    return reduced(lhs * r.den - r.num, r.den);
}

// The ordered level set {0, 1/(n-1), ..., 1}. Only n is stored; levels are
// materialized on demand.
class FuzzyLevels {
public:
    FuzzyLevels() = default;

    explicit FuzzyLevels(int n) : n_(n) {
        if (n < 2 || n > kMaxLevels) {
            throw InvalidParameter("level count must be in [2, " + std::to_string(kMaxLevels) +
                                   "], got " + std::to_string(n));
        }
    }

    int count() const { return n_; }
    std::int64_t denominator() const { return n_ - 1; }
    LevelIndex top() const { return static_cast<LevelIndex>(n_ - 1); }

    Rational level(std::size_t j) const {
        return reduced(static_cast<std::int64_t>(j), denominator());
    }
    double value(std::size_t j) const {
        return static_cast<double>(j) / static_cast<double>(denominator());
    }
    LevelIndex complement(LevelIndex j) const { return static_cast<LevelIndex>(n_ - 1 - j); }

    std::vector<Rational> levels() const {
        std::vector<Rational> out;
        out.reserve(static_cast<std::size_t>(n_));
        for (int j = 0; j < n_; ++j) out.push_back(level(static_cast<std::size_t>(j)));
        return out;
    }

    friend bool operator==(const FuzzyLevels&, const FuzzyLevels&) = default;

private:
    int n_ = kDefaultLevels;
};

inline FuzzyLevels make_levels(int n) { return FuzzyLevels(n); }

struct FuzzyState {
    LevelIndex level_index = 0;

    friend bool operator==(const FuzzyState&, const FuzzyState&) = default;
};

// Nearest level to x; an exact midpoint goes to the lower level.
inline FuzzyState quantize(double x, const FuzzyLevels& levels) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw DomainError("value " + std::to_string(x) + " outside [0,1]");
    }
    const double scaled = x * static_cast<double>(levels.denominator());
    double whole = std::floor(scaled);
    if (scaled - whole > 0.5) whole += 1.0;
    whole = std::min(whole, static_cast<double>(levels.denominator()));
    return FuzzyState{static_cast<LevelIndex>(whole)};
}

// Exact re-quantization of the rational num/den (0 <= num <= den).
inline LevelIndex quantize_exact(std::int64_t num, std::int64_t den, const FuzzyLevels& levels) {
    const std::int64_t t = num * levels.denominator();
    std::int64_t j = t / den;
    if (2 * (t % den) > den) ++j;
    return static_cast<LevelIndex>(j);
}

// ---------------------------------------------------------------------------
// Local rules

enum class RuleId : std::uint8_t { Zero, Identity, Left, Right, And3, Or3, AndLR, OrLR, Maj3 };

inline constexpr std::array<RuleId, 9> kRuleCatalog = {
    RuleId::Zero, RuleId::Identity, RuleId::Left,  RuleId::Right, RuleId::And3,
    RuleId::Or3,  RuleId::AndLR,    RuleId::OrLR,  RuleId::Maj3,
};

inline constexpr std::array<std::string_view, 9> kRuleNames = {
    "ZERO", "IDENTITY", "LEFT", "RIGHT", "AND3", "OR3", "AND_LR", "OR_LR", "MAJ3",
};

inline std::string_view rule_name(RuleId id) { return kRuleNames[static_cast<std::size_t>(id)]; }

inline std::optional<RuleId> parse_rule_id(std::string_view token) {
    for (std::size_t i = 0; i < kRuleNames.size(); ++i) {
        if (kRuleNames[i] == token) return kRuleCatalog[i];
    }
    return std::nullopt;
}

struct LocalRule {
    RuleId id = RuleId::Identity;
    bool complemented = false;

    friend auto operator<=>(const LocalRule&, const LocalRule&) = default;
};

// Number of distinct local rules (catalog x complement flag).
inline constexpr std::size_t kLocalRuleCount = kRuleCatalog.size() * 2;

inline LocalRule local_rule_from_ordinal(std::size_t ordinal) {
    return LocalRule{kRuleCatalog[ordinal / 2], (ordinal % 2) == 1};
}

using RuleVector = std::vector<LocalRule>;

inline RuleVector uniform_rules(std::size_t size, LocalRule rule) { return RuleVector(size, rule); }

inline LevelIndex apply_rule(LevelIndex l, LevelIndex s, LevelIndex r, LocalRule rule,
                             const FuzzyLevels& levels) {
    const std::int64_t d = levels.denominator();
    const std::int64_t a = l, b = s, c = r;
    std::int64_t num = 0;
    std::int64_t den = d;
    switch (rule.id) {
        case RuleId::Zero: num = 0; break;
        case RuleId::Identity: num = b; break;
        case RuleId::Left: num = a; break;
        case RuleId::Right: num = c; break;
        case RuleId::And3: num = a * b * c; den = d * d * d; break;
        case RuleId::Or3: num = std::min(d, a + b + c); break;
        case RuleId::AndLR: num = a * c; den = d * d; break;
        case RuleId::OrLR: num = std::min(d, a + c); break;
        case RuleId::Maj3: num = std::max(std::min(a, b), std::min(std::max(a, b), c)); break;
    }
    if (rule.complemented) num = den - num;
    return quantize_exact(num, den, levels);
}

inline FuzzyState apply_rule(FuzzyState left, FuzzyState self, FuzzyState right, LocalRule rule,
                             const FuzzyLevels& levels) {
    for (auto st : {left, self, right}) {
        if (st.level_index >= levels.count()) throw DomainError("state outside level set");
    }
    return FuzzyState{apply_rule(left.level_index, self.level_index, right.level_index, rule, levels)};
}

// ---------------------------------------------------------------------------
// Lattice and evolution

using AttractorKey = std::vector<LevelIndex>;

class FuzzyLattice {
public:
    FuzzyLattice(FuzzyLevels levels, std::vector<LevelIndex> cells)
        : levels_(levels), cells_(std::move(cells)) {
        if (cells_.empty()) throw InvalidParameter("lattice must have at least one cell");
        for (auto c : cells_) {
            if (c >= levels_.count()) {
                throw DomainError("cell level " + std::to_string(c) + " outside level set of size " +
                                  std::to_string(levels_.count()));
            }
        }
    }

    const FuzzyLevels& levels() const { return levels_; }
    const std::vector<LevelIndex>& cells() const { return cells_; }
    std::size_t size() const { return cells_.size(); }
    FuzzyState operator[](std::size_t i) const { return FuzzyState{cells_[i]}; }

    std::vector<double> values() const {
        std::vector<double> out;
        out.reserve(cells_.size());
        for (auto c : cells_) out.push_back(levels_.value(c));
        return out;
    }

    friend bool operator==(const FuzzyLattice&, const FuzzyLattice&) = default;

private:
    FuzzyLevels levels_;
    std::vector<LevelIndex> cells_;
};

struct EvolutionResult {
    AttractorKey attractor_key;
    std::uint64_t transient_len = 0;
    std::uint64_t cycle_len = 1;

    friend bool operator==(const EvolutionResult&, const EvolutionResult&) = default;
};

// n^size, saturating at UINT64_MAX.
inline std::uint64_t state_space_size(const FuzzyLevels& levels, std::size_t size) {
    const auto n = static_cast<std::uint64_t>(levels.count());
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < size; ++i) {
        if (total > std::numeric_limits<std::uint64_t>::max() / n) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        total *= n;
    }
    return total;
}

// A rule vector bound to a level set. For small n every cell's rule is
// tabulated over all (left, self, right) triples.
class CompiledRules {
public:
    static constexpr int kTabulateLimit = 16;

    CompiledRules(const FuzzyLevels& levels, RuleVector rules)
        : levels_(levels), rules_(std::move(rules)) {
        if (rules_.empty()) throw InvalidParameter("rule vector must not be empty");
        const int n = levels_.count();
        if (n <= kTabulateLimit) {
            stride_ = static_cast<std::size_t>(n) * n * n;
            table_.resize(rules_.size() * stride_);
            for (std::size_t cell = 0; cell < rules_.size(); ++cell) {
                LevelIndex* t = table_.data() + cell * stride_;
                for (int l = 0; l < n; ++l)
                    for (int s = 0; s < n; ++s)
                        for (int r = 0; r < n; ++r)
                            t[(l * n + s) * n + r] =
                                apply_rule(static_cast<LevelIndex>(l), static_cast<LevelIndex>(s),
                                           static_cast<LevelIndex>(r), rules_[cell], levels_);
            }
        }
    }

    const FuzzyLevels& levels() const { return levels_; }
    const RuleVector& rules() const { return rules_; }
    std::size_t size() const { return rules_.size(); }

    // Synchronous update of every cell; absent neighbors read as level 0.
    void step_into(std::span<const LevelIndex> in, std::span<LevelIndex> out) const {
        const std::size_t len = rules_.size();
        if (in.size() != len || out.size() != len) {
            throw DimensionMismatch("lattice length " + std::to_string(in.size()) +
                                    " does not match rule vector length " + std::to_string(len));
        }
        const int n = levels_.count();
        for (std::size_t i = 0; i < len; ++i) {
            const LevelIndex l = i > 0 ? in[i - 1] : 0;
            const LevelIndex s = in[i];
            const LevelIndex r = i + 1 < len ? in[i + 1] : 0;
            if (!table_.empty()) {
                out[i] = table_[i * stride_ + (static_cast<std::size_t>(l) * n + s) * n + r];
            } else {
                out[i] = apply_rule(l, s, r, rules_[i], levels_);
            }
        }
    }

    // Brent cycle detection. The attractor key is the lexicographically
    // smallest configuration on the cycle.
    EvolutionResult evolve(std::span<const LevelIndex> start) const {
        const std::size_t len = rules_.size();
        if (start.size() != len) {
            throw DimensionMismatch("lattice length " + std::to_string(start.size()) +
                                    " does not match rule vector length " + std::to_string(len));
        }
        std::vector<LevelIndex> tortoise(start.begin(), start.end());
        std::vector<LevelIndex> hare(len), scratch(len);
        step_into(tortoise, hare);

        std::uint64_t power = 1, lambda = 1;
        while (tortoise != hare) {
            if (power == lambda) {
                tortoise = hare;
                power *= 2;
                lambda = 0;
            }
            step_into(hare, scratch);
            hare.swap(scratch);
            ++lambda;
        }

        tortoise.assign(start.begin(), start.end());
        hare.assign(start.begin(), start.end());
        for (std::uint64_t i = 0; i < lambda; ++i) {
            step_into(hare, scratch);
            hare.swap(scratch);
        }
        std::uint64_t mu = 0;
        while (tortoise != hare) {
            step_into(tortoise, scratch);
            tortoise.swap(scratch);
            step_into(hare, scratch);
            hare.swap(scratch);
            ++mu;
        }

        EvolutionResult result{tortoise, mu, lambda};
        for (std::uint64_t i = 1; i < lambda; ++i) {
            step_into(tortoise, scratch);
            tortoise.swap(scratch);
            if (tortoise < result.attractor_key) result.attractor_key = tortoise;
        }
        return result;
    }

private:
    FuzzyLevels levels_;
    RuleVector rules_;
    std::size_t stride_ = 0;
    std::vector<LevelIndex> table_;
};

inline FuzzyLattice step(const FuzzyLattice& lattice, const RuleVector& rules) {
    if (lattice.size() != rules.size()) {
        throw DimensionMismatch("lattice length " + std::to_string(lattice.size()) +
                                " does not match rule vector length " + std::to_string(rules.size()));
    }
    std::vector<LevelIndex> next(lattice.size());
    const auto& levels = lattice.levels();
    const auto& cells = lattice.cells();
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const LevelIndex l = i > 0 ? cells[i - 1] : 0;
        const LevelIndex r = i + 1 < cells.size() ? cells[i + 1] : 0;
        next[i] = apply_rule(l, cells[i], r, rules[i], levels);
    }
    return FuzzyLattice(levels, std::move(next));
}

// max_steps must cover the whole state space so that cycle entry is
// guaranteed by pigeonhole.
inline EvolutionResult evolve(const FuzzyLattice& lattice, const RuleVector& rules,
                              std::uint64_t max_steps) {
    if (lattice.size() != rules.size()) {
        throw DimensionMismatch("lattice length " + std::to_string(lattice.size()) +
                                " does not match rule vector length " + std::to_string(rules.size()));
    }
    const auto space = state_space_size(lattice.levels(), lattice.size());
    if (max_steps < space) {
        throw InvalidParameter("max_steps " + std::to_string(max_steps) +
                               " is below the state space size " + std::to_string(space));
    }
    return CompiledRules(lattice.levels(), rules).evolve(lattice.cells());
}

inline EvolutionResult evolve(const FuzzyLattice& lattice, const RuleVector& rules) {
    return evolve(lattice, rules, state_space_size(lattice.levels(), lattice.size()));
}

inline constexpr std::uint64_t kMaxBasinStates = 1'000'000;

using BasinMap = std::map<AttractorKey, std::vector<AttractorKey>>;

// Every one of the n^size initial configurations, in lexicographic order,
// grouped by the attractor it drains into.
inline BasinMap basin_map(const FuzzyLevels& levels, std::size_t size, const RuleVector& rules) {
    if (rules.size() != size) {
        throw DimensionMismatch("rule vector length " + std::to_string(rules.size()) +
                                " does not match size " + std::to_string(size));
    }
    if (size == 0) throw InvalidParameter("size must be at least 1");
    const auto space = state_space_size(levels, size);
    if (space > kMaxBasinStates) {
        throw StateSpaceTooLarge("state space " + std::to_string(levels.count()) + "^" +
                                 std::to_string(size) + " exceeds " + std::to_string(kMaxBasinStates));
    }
    const CompiledRules compiled(levels, rules);
    BasinMap basins;
    std::vector<LevelIndex> state(size, 0);
    for (std::uint64_t k = 0; k < space; ++k) {
        basins[compiled.evolve(state).attractor_key].push_back(state);
        for (std::size_t i = size; i-- > 0;) {
            if (++state[i] < levels.count()) break;
            state[i] = 0;
        }
    }
    return basins;
}

}  // namespace aisinmaca
