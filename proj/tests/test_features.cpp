#include <gtest/gtest.h>

#include <random>

#include "aisinmaca/features.hpp"
#include "oracles.hpp"

using namespace aisinmaca;

namespace {
std::string random_dna(std::mt19937_64& rng, std::size_t len, const std::string& alphabet = "ACGT") {
    std::string s;
    for (std::size_t i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
    return s;
}
}  // namespace

TEST(Composition, Examples) {
    EXPECT_DOUBLE_EQ(composition("GGCC", 'G'), 0.5);
    EXPECT_DOUBLE_EQ(composition("AAAA", 'A'), 1.0);
    EXPECT_DOUBLE_EQ(composition("ACGTN", 'A'), 0.2);
    EXPECT_THROW(composition("", 'A'), DomainError);
}

TEST(Composition, SumsToOneWithoutN) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 200; ++t) {
        const auto s = random_dna(rng, 1 + rng() % 100);
        std::size_t total = 0;
        for (char b : kBases) total += static_cast<std::size_t>(composition(s, b) * s.size() + 0.5);
        EXPECT_EQ(total, s.size());
        double sum = 0.0;
        for (char b : kBases) sum += composition(s, b);
        EXPECT_NEAR(sum, 1.0, 1e-12);
    }
}

TEST(PositionAsymmetry, Examples) {
    EXPECT_DOUBLE_EQ(position_asymmetry("AAAAAA", 'A'), 0.0);
    EXPECT_DOUBLE_EQ(position_asymmetry("ATGATGATG", 'A'), 0.75);
    EXPECT_DOUBLE_EQ(position_asymmetry("ACG", 'T'), 0.0);
    EXPECT_THROW(position_asymmetry("AC", 'A'), DomainError);
}

TEST(Period3, Examples) {
    EXPECT_NEAR(period3_power("ATGATGATGATG"), 1.0, 1e-12);
    EXPECT_NEAR(period3_power(std::string(12, 'A')), 0.0, 1e-12);
    EXPECT_NEAR(period3_power("ACG"), 1.0, 1e-12);
    EXPECT_THROW(period3_power("AC"), DomainError);
}

TEST(Period3, AgreesWithDirectDft) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 200; ++t) {
        const auto s = random_dna(rng, 3 + rng() % 200, "ACGTN");
        EXPECT_NEAR(period3_power(s), oracle::period3(s), 1e-9);
    }
}

TEST(Period3, SmallOnRandomSequences) {
    std::mt19937_64 rng(300);
    double sum = 0.0;
    const int trials = 500;
    for (int t = 0; t < trials; ++t) sum += period3_power(random_dna(rng, 300));
    EXPECT_LT(sum / trials, 0.15);
}

TEST(CpG, Examples) {
    EXPECT_DOUBLE_EQ(cpg_ratio("CGCG"), 1.0);
    EXPECT_DOUBLE_EQ(cpg_ratio("AATT"), 0.0);
    EXPECT_DOUBLE_EQ(cpg_ratio("CCGG"), 0.5);
    EXPECT_THROW(cpg_ratio("C"), DomainError);
}

TEST(Consensus, Examples) {
    EXPECT_DOUBLE_EQ(consensus_score("GGGTATAAAGGG", kTataMotif), 1.0);
    EXPECT_DOUBLE_EQ(consensus_score("CCCCCC", kTataMotif), 0.0);
    EXPECT_DOUBLE_EQ(consensus_score("TATACA", kTataMotif), 5.0 / 6.0);
    EXPECT_DOUBLE_EQ(consensus_score("NNNNNN", kTataMotif), 0.0);
    EXPECT_THROW(consensus_score("TATA", kTataMotif), DomainError);
}

TEST(CodingFeatures, Example) {
    const auto fv = coding_features("ATGATGATG");
    ASSERT_EQ(fv.schema, coding_schema());
    ASSERT_EQ(fv.values.size(), 9u);
    EXPECT_DOUBLE_EQ(fv.values[0], 0.75);  // A
    EXPECT_DOUBLE_EQ(fv.values[1], 0.0);   // C
    EXPECT_DOUBLE_EQ(fv.values[2], 0.75);  // G
    EXPECT_DOUBLE_EQ(fv.values[3], 0.75);  // T
    EXPECT_DOUBLE_EQ(fv.values[4], 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(fv.values[5], 0.0);
    EXPECT_DOUBLE_EQ(fv.values[6], 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(fv.values[7], 1.0 / 3.0);
    EXPECT_NEAR(fv.values[8], 1.0, 1e-12);
}

TEST(PromoterFeatures, Example) {
    // Shorter than the TATA motif: rejected.
    EXPECT_THROW(promoter_features("AATT"), DomainError);

    const auto fv = promoter_features("AATTAATT");
    ASSERT_EQ(fv.schema, promoter_schema());
    EXPECT_DOUBLE_EQ(fv.values[0], 0.0);
    EXPECT_DOUBLE_EQ(fv.values[1], 0.0);
    EXPECT_DOUBLE_EQ(fv.values[2], consensus_score("AATTAATT", kTataMotif));
    EXPECT_DOUBLE_EQ(fv.values[2], 4.0 / 6.0);  // AATTAA vs TATAAA
    EXPECT_DOUBLE_EQ(fv.values[3], consensus_score("AATTAATT", kInitiatorMotif));
    EXPECT_DOUBLE_EQ(fv.values[3], 2.0 / 4.0);  // TAAT vs CCAT
}

TEST(Features, AlwaysInUnitInterval) {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 300; ++t) {
        const auto s = random_dna(rng, 6 + rng() % 150, t % 3 ? "ACGT" : "ACGTN");
        for (const auto& fv : {coding_features(s), promoter_features(s)}) {
            ASSERT_EQ(fv.values.size(), fv.schema.size());
            for (double v : fv.values) {
                EXPECT_GE(v, 0.0);
                EXPECT_LE(v, 1.0);
            }
        }
    }
}
