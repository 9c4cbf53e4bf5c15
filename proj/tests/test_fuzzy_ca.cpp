#include <gtest/gtest.h>

#include <random>
#include <set>

#include "aisinmaca/fuzzy_ca.hpp"
#include "oracles.hpp"

using namespace aisinmaca;

namespace {

std::vector<LevelIndex> idx(std::initializer_list<int> v) {
    std::vector<LevelIndex> out;
    for (int x : v) out.push_back(static_cast<LevelIndex>(x));
    return out;
}

const LocalRule kZero{RuleId::Zero, false};
const LocalRule kIdentity{RuleId::Identity, false};
const LocalRule kNotIdentity{RuleId::Identity, true};
const LocalRule kOr3{RuleId::Or3, false};

RuleVector random_rule_vector(std::size_t size, std::mt19937_64& rng) {
    RuleVector rules;
    for (std::size_t i = 0; i < size; ++i) rules.push_back(local_rule_from_ordinal(rng() % kLocalRuleCount));
    return rules;
}

}  // namespace

TEST(Levels, SixLevelsMatchWorkedExample) {
    const auto levels = make_levels(6).levels();
    const std::vector<Rational> expected = {{0, 1}, {1, 5}, {2, 5}, {3, 5}, {4, 5}, {1, 1}};
    ASSERT_EQ(levels.size(), 6u);
    for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(levels[j], expected[j]) << j;
    EXPECT_DOUBLE_EQ(make_levels(6).value(1), 0.2);
}

TEST(Levels, TwoAndFive) {
    const auto two = make_levels(2).levels();
    EXPECT_EQ(two[0], (Rational{0, 1}));
    EXPECT_EQ(two[1], (Rational{1, 1}));
    const auto five = make_levels(5).levels();
    const std::vector<double> expected = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(five[j].to_double(), expected[j]);
}

TEST(Levels, RejectsBadCounts) {
    EXPECT_THROW(make_levels(1), InvalidParameter);
    EXPECT_THROW(make_levels(0), InvalidParameter);
    EXPECT_THROW(make_levels(kMaxLevels + 1), InvalidParameter);
}

TEST(Levels, ComplementClosureAndOrder) {
    for (int n = 2; n <= 40; ++n) {
        const auto levels = make_levels(n);
        const auto list = levels.levels();
        EXPECT_EQ(list.front(), (Rational{0, 1}));
        EXPECT_EQ(list.back(), (Rational{1, 1}));
        for (int j = 0; j < n; ++j) {
            EXPECT_EQ(1 - list[j], list[n - 1 - j]) << "n=" << n << " j=" << j;
            if (j > 0) EXPECT_LT(list[j - 1].num * list[j].den, list[j].num * list[j - 1].den);
        }
    }
}

TEST(Quantize, Examples) {
    const auto six = make_levels(6);
    EXPECT_EQ(quantize(0.45, six).level_index, 2);
    EXPECT_EQ(quantize(0.50, six).level_index, 2);  // tie rounds down
    EXPECT_EQ(quantize(1.00, six).level_index, 5);
    EXPECT_EQ(quantize(0.00, six).level_index, 0);
    EXPECT_EQ(quantize(0.75, six).level_index, 4);
}

TEST(Quantize, DomainErrors) {
    const auto six = make_levels(6);
    EXPECT_THROW(quantize(-0.01, six), DomainError);
    EXPECT_THROW(quantize(1.01, six), DomainError);
    EXPECT_THROW(quantize(std::nan(""), six), DomainError);
}

TEST(Quantize, AgreesWithNearestLevelScan) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n : {2, 3, 5, 6, 11, 17}) {
        const auto levels = make_levels(n);
        for (int k = 0; k < 2000; ++k) {
            const double x = u(rng);
            EXPECT_EQ(quantize(x, levels).level_index, oracle::nearest_level(x, n)) << x;
        }
    }
}

TEST(ApplyRule, Examples) {
    const auto six = make_levels(6);
    EXPECT_EQ(apply_rule(FuzzyState{2}, FuzzyState{2}, FuzzyState{2}, kOr3, six).level_index, 5);
    EXPECT_EQ(apply_rule(FuzzyState{0}, FuzzyState{1}, FuzzyState{0}, kNotIdentity, six).level_index, 4);
    for (int l = 0; l < 6; ++l)
        for (int r = 0; r < 6; ++r)
            EXPECT_EQ(apply_rule(static_cast<LevelIndex>(l), 3, static_cast<LevelIndex>(r), kZero, six), 0);
}

TEST(ApplyRule, ExhaustivelyMatchesFractionOracle) {
    for (int n : {2, 3, 4, 5, 6, 7}) {
        const auto levels = make_levels(n);
        for (std::size_t o = 0; o < kLocalRuleCount; ++o) {
            const auto rule = local_rule_from_ordinal(o);
            const std::string name(rule_name(rule.id));
            for (int l = 0; l < n; ++l)
                for (int s = 0; s < n; ++s)
                    for (int r = 0; r < n; ++r) {
                        const int got = apply_rule(static_cast<LevelIndex>(l), static_cast<LevelIndex>(s),
                                                   static_cast<LevelIndex>(r), rule, levels);
                        ASSERT_EQ(got, oracle::apply(name, rule.complemented, l, s, r, n))
                            << name << (rule.complemented ? "~" : "") << " n=" << n << " (" << l << "," << s
                            << "," << r << ")";
                        ASSERT_LT(got, n);
                    }
        }
    }
}

TEST(ApplyRule, ComplementedIdentityIsExactComplement) {
    for (int n = 2; n <= 20; ++n) {
        const auto levels = make_levels(n);
        for (int s = 0; s < n; ++s) {
            EXPECT_EQ(apply_rule(0, static_cast<LevelIndex>(s), 0, kNotIdentity, levels), n - 1 - s);
        }
    }
}

TEST(Step, Examples) {
    const auto six = make_levels(6);
    const FuzzyLattice start(six, idx({1, 2, 3}));
    EXPECT_EQ(step(start, uniform_rules(3, kIdentity)), start);

    const FuzzyLattice fours(six, idx({2, 2, 2}));
    EXPECT_EQ(step(fours, uniform_rules(3, kOr3)).cells(), idx({4, 5, 4}));
    EXPECT_EQ(step(start, uniform_rules(3, kZero)).cells(), idx({0, 0, 0}));
}

TEST(Step, LengthMismatch) {
    const FuzzyLattice lat(make_levels(6), idx({1, 2, 3}));
    EXPECT_THROW(step(lat, uniform_rules(2, kIdentity)), DimensionMismatch);
}

TEST(Lattice, RejectsInvalidCells) {
    EXPECT_THROW(FuzzyLattice(make_levels(3), idx({0, 3})), DomainError);
    EXPECT_THROW(FuzzyLattice(make_levels(3), {}), InvalidParameter);
}

TEST(Evolve, Examples) {
    const auto six = make_levels(6);
    auto r = evolve(FuzzyLattice(six, idx({3, 1, 4})), uniform_rules(3, kZero));
    EXPECT_EQ(r.attractor_key, idx({0, 0, 0}));
    EXPECT_LE(r.transient_len, 1u);
    EXPECT_EQ(r.cycle_len, 1u);

    r = evolve(FuzzyLattice(six, idx({1, 2, 3})), uniform_rules(3, kIdentity));
    EXPECT_EQ(r.attractor_key, idx({1, 2, 3}));
    EXPECT_EQ(r.transient_len, 0u);
    EXPECT_EQ(r.cycle_len, 1u);

    r = evolve(FuzzyLattice(six, idx({0, 0, 0})), uniform_rules(3, kNotIdentity));
    EXPECT_EQ(r.attractor_key, idx({0, 0, 0}));
    EXPECT_EQ(r.transient_len, 0u);
    EXPECT_EQ(r.cycle_len, 2u);
}

TEST(Evolve, RejectsTooFewSteps) {
    const FuzzyLattice lat(make_levels(4), idx({0, 1, 2}));
    EXPECT_THROW(evolve(lat, uniform_rules(3, kIdentity), 63), InvalidParameter);
    EXPECT_NO_THROW(evolve(lat, uniform_rules(3, kIdentity), 64));
}

TEST(Evolve, MatchesSimulationOracleOnRandomRules) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        const std::size_t size = 1 + rng() % 5;
        const auto levels = make_levels(n);
        const auto rules = random_rule_vector(size, rng);
        std::vector<std::pair<std::string, bool>> named;
        for (auto r : rules) named.emplace_back(std::string(rule_name(r.id)), r.complemented);
        std::vector<LevelIndex> start(size);
        std::vector<int> start_int(size);
        for (std::size_t i = 0; i < size; ++i) {
            start[i] = static_cast<LevelIndex>(rng() % n);
            start_int[i] = start[i];
        }
        const auto got = evolve(FuzzyLattice(levels, start), rules);
        const auto want = oracle::simulate(start_int, named, n);
        ASSERT_EQ(got.transient_len, want.transient);
        ASSERT_EQ(got.cycle_len, want.cycle);
        ASSERT_EQ(std::vector<int>(got.attractor_key.begin(), got.attractor_key.end()), want.attractor);
        ASSERT_LE(got.transient_len + got.cycle_len, state_space_size(levels, size));
    }
}

TEST(Evolve, ComplementDualityCycleLength) {
    for (int n : {2, 3, 5, 6}) {
        const auto levels = make_levels(n);
        const auto rules = uniform_rules(3, kNotIdentity);
        for (const auto& [key, members] : basin_map(levels, 3, rules)) {
            for (const auto& start : members) {
                const auto r = evolve(FuzzyLattice(levels, start), rules);
                bool self_complementary = true;
                for (auto c : start) self_complementary &= (c == levels.complement(c));
                EXPECT_EQ(r.cycle_len, self_complementary ? 1u : 2u);
            }
        }
    }
}

TEST(BasinMap, Examples) {
    auto basins = basin_map(make_levels(2), 3, uniform_rules(3, kIdentity));
    EXPECT_EQ(basins.size(), 8u);
    for (const auto& [key, members] : basins) {
        ASSERT_EQ(members.size(), 1u);
        EXPECT_EQ(members.front(), key);
    }
    basins = basin_map(make_levels(6), 3, uniform_rules(3, kZero));
    ASSERT_EQ(basins.size(), 1u);
    EXPECT_EQ(basins.begin()->first, idx({0, 0, 0}));
    EXPECT_EQ(basins.begin()->second.size(), 216u);
}

TEST(BasinMap, PartitionsStateSpace) {
    std::mt19937_64 rng(3);
    const auto levels = make_levels(4);
    for (int trial = 0; trial < 50; ++trial) {
        const auto rules = random_rule_vector(3, rng);
        const auto basins = basin_map(levels, 3, rules);
        std::set<std::vector<LevelIndex>> all;
        std::size_t total = 0;
        for (const auto& [key, members] : basins) {
            total += members.size();
            all.insert(members.begin(), members.end());
            // the attractor itself lies in its own basin
            EXPECT_TRUE(std::find(members.begin(), members.end(), key) != members.end());
        }
        EXPECT_EQ(total, 64u);
        EXPECT_EQ(all.size(), 64u);
    }
}

TEST(BasinMap, Guards) {
    EXPECT_THROW(basin_map(make_levels(6), 8, uniform_rules(8, kZero)), StateSpaceTooLarge);
    EXPECT_THROW(basin_map(make_levels(6), 3, uniform_rules(2, kZero)), DimensionMismatch);
}

TEST(Step, Deterministic) {
    std::mt19937_64 rng(5);
    const auto levels = make_levels(6);
    const auto rules = random_rule_vector(6, rng);
    const FuzzyLattice lat(levels, idx({5, 0, 3, 2, 4, 1}));
    EXPECT_EQ(step(lat, rules), step(lat, rules));
}

TEST(CompiledRules, TabulatedAndDirectPathsAgree) {
    // n above the tabulation limit takes the direct path.
    std::mt19937_64 rng(9);
    const auto big = make_levels(CompiledRules::kTabulateLimit + 4);
    const auto rules = random_rule_vector(4, rng);
    const CompiledRules compiled(big, rules);
    std::vector<LevelIndex> in = idx({3, 19, 0, 7}), out(4);
    compiled.step_into(in, out);
    EXPECT_EQ(out, step(FuzzyLattice(big, in), rules).cells());
}
