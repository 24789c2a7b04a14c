#include <gtest/gtest.h>

#include <random>

#include "dense.hpp"
#include "hexsim/pauli.hpp"
#include "hexsim/pauli_sum.hpp"

using namespace hexsim;
using testing_dense::dense_pauli;
using testing_dense::random_word;

namespace {

PauliWord w(const char *text, std::size_t n) {
    return parse_pauli(text, n);
}

}  // namespace

TEST(PauliMul, SingleQubitTable) {
    auto r = pauli_mul(w("Z0", 1), w("X0", 1));
    EXPECT_EQ(r.word, w("Y0", 1));
    EXPECT_EQ(r.phase, 1);
    auto sq = pauli_mul(w("X0", 1), w("X0", 1));
    EXPECT_TRUE(sq.word.is_identity());
    EXPECT_EQ(sq.phase, 0);
}

TEST(PauliMul, TwoQubitProductMatchesDense) {
    auto a = w("X0 Z1", 2);
    auto b = w("Z0 Z1", 2);
    auto r = pauli_mul(a, b);
    // Dense oracle: the product equals (-i) Y0 as a 4x4 matrix.
    testing_dense::Mat lhs = dense_pauli(a) * dense_pauli(b);
    testing_dense::Mat rhs = r.phase_value() * dense_pauli(r.word);
    EXPECT_LT((lhs - rhs).norm(), 1e-14);
    EXPECT_EQ(r.word, w("Y0", 2));
    EXPECT_EQ(r.phase, 3);
}

TEST(PauliMul, SizeMismatchThrows) {
    EXPECT_THROW(pauli_mul(PauliWord(2), PauliWord(3)), ArgumentError);
    EXPECT_THROW(anticommutes(PauliWord(2), PauliWord(3)), ArgumentError);
}

TEST(PauliMul, RandomProductsMatchDense) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 300; ++t) {
        std::size_t n = 1 + t % 6;
        auto a = random_word(n, rng);
        auto b = random_word(n, rng);
        auto r = pauli_mul(a, b);
        testing_dense::Mat diff = dense_pauli(a) * dense_pauli(b) - r.phase_value() * dense_pauli(r.word);
        ASSERT_LT(diff.norm(), 1e-12);
    }
}

TEST(PauliMul, WideWordsAcrossWordBoundary) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
        auto a = random_word(130, rng);
        auto b = random_word(130, rng);
        auto c = random_word(130, rng);
        auto ab = pauli_mul(a, b);
        auto ab_c = pauli_mul(ab, PhasedWord{c, 0});
        auto bc = pauli_mul(b, c);
        auto a_bc = pauli_mul(PhasedWord{a, 0}, bc);
        ASSERT_EQ(ab_c, a_bc);
    }
}

TEST(PauliProperties, AssociativityAgainstDense) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        std::size_t n = 1 + t % 8;
        auto a = random_word(n, rng);
        auto b = random_word(n, rng);
        auto c = random_word(n, rng);
        auto left = pauli_mul(pauli_mul(a, b), PhasedWord{c, 0});
        auto right = pauli_mul(PhasedWord{a, 0}, pauli_mul(b, c));
        ASSERT_EQ(left, right);
        if (n <= 5) {
            testing_dense::Mat dense = dense_pauli(a) * dense_pauli(b) * dense_pauli(c);
            ASSERT_LT((dense - left.phase_value() * dense_pauli(left.word)).norm(), 1e-12);
        }
    }
}

TEST(PauliProperties, SquaresAreIdentityAndPhasesPair) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 500; ++t) {
        std::size_t n = 1 + t % 70;
        auto a = random_word(n, rng);
        auto b = random_word(n, rng);
        auto sq = pauli_mul(a, a);
        ASSERT_TRUE(sq.word.is_identity());
        ASSERT_EQ(sq.phase, 0);
        ASSERT_EQ(anticommutes(a, b), anticommutes(b, a));
        auto ab = pauli_mul(a, b);
        auto ba = pauli_mul(b, a);
        cplx prod = ab.phase_value() / ba.phase_value();
        ASSERT_NEAR(prod.real(), anticommutes(a, b) ? -1.0 : 1.0, 1e-15);
    }
}

TEST(Anticommutes, Basics) {
    EXPECT_TRUE(anticommutes(w("X0", 1), w("Z0", 1)));
    EXPECT_FALSE(anticommutes(w("X0", 1), w("X0", 1)));
}

TEST(Anticommutes, MatchesDenseAnticommutator) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 1000; ++t) {
        auto a = random_word(6, rng);
        auto b = random_word(6, rng);
        testing_dense::Mat da = dense_pauli(a);
        testing_dense::Mat db = dense_pauli(b);
        bool dense_anti = (da * db + db * da).norm() < 1e-12;
        ASSERT_EQ(anticommutes(a, b), dense_anti);
    }
}

TEST(Classify, Examples) {
    auto id = classify(PauliWord(5));
    EXPECT_EQ(id.weight, 0u);
    EXPECT_TRUE(id.z_type);
    auto big = classify(w("X13 X29 X31 Y9 Y30 Z8 Z12 Z17 Z28 Z32", 127));
    EXPECT_EQ(big.weight, 10u);
    EXPECT_FALSE(big.z_type);
    auto z = classify(w("Z62", 127));
    EXPECT_EQ(z.weight, 1u);
    EXPECT_TRUE(z.z_type);
}

TEST(ParsePauli, ExamplesAndRoundTrip) {
    auto z62 = w("Z62", 127);
    EXPECT_TRUE(z62.z_bit(62));
    EXPECT_FALSE(z62.x_bit(62));
    EXPECT_EQ(z62.support().size(), 1u);

    auto three = w("X0 Y1 Z2", 3);
    EXPECT_EQ(classify(three).weight, 3u);
    EXPECT_TRUE(three.z_bit(1) && three.z_bit(2) && !three.z_bit(0));
    EXPECT_TRUE(three.x_bit(0) && three.x_bit(1) && !three.x_bit(2));

    EXPECT_EQ(format_pauli(w("Y1 X0", 2)), "X0 Y1");
    EXPECT_EQ(format_pauli(PauliWord(4)), "I");

    std::mt19937_64 rng(9);
    for (int t = 0; t < 100; ++t) {
        auto r = random_word(100, rng);
        ASSERT_EQ(parse_pauli(format_pauli(r), 100), r);
    }
}

TEST(ParsePauli, ErrorsCarryPosition) {
    try {
        parse_pauli("X0 Q1", 3);
        FAIL();
    } catch (const ParseError &e) {
        EXPECT_EQ(e.where(), 3u);
    }
    EXPECT_THROW(parse_pauli("X0 Z0", 3), ParseError);
    EXPECT_THROW(parse_pauli("X3", 3), ParseError);
}

TEST(PauliWordLayout, TailBitsStayZero) {
    PauliWord a(70);
    a.set(69, 'Y');
    EXPECT_EQ(a.data()[1] >> 6, 0u);
    EXPECT_EQ(a.data()[3] >> 6, 0u);
}

TEST(PauliSumBasics, FromTermsSortsAndSums) {
    auto s = PauliSum::from_terms(2, {{w("Z1", 2), 1.0}, {w("X0", 2), 2.0}, {w("Z1", 2), 0.5}});
    EXPECT_EQ(s.size(), 2u);
    EXPECT_TRUE(s.is_sorted_unique());
    EXPECT_DOUBLE_EQ(s.coefficient_of(w("Z1", 2))->real(), 1.5);
}

TEST(PauliSumBasics, TruncateKeepsBoundary) {
    auto s = PauliSum::from_terms(2, {{w("X0", 2), 0.5}, {w("Z1", 2), 1e-5}});
    EXPECT_EQ(truncate(s, 0.0).size(), 2u);
    auto t = truncate(s, 1e-4);
    EXPECT_EQ(t.size(), 1u);
    EXPECT_TRUE(t.coefficient_of(w("X0", 2)).has_value());
    auto edge = truncate(s, 1e-5);
    EXPECT_EQ(edge.size(), 2u);
}

TEST(PauliSumBasics, NormAndExpectation) {
    auto s = PauliSum::from_terms(2, {{w("X0", 2), 3.0}, {w("Z1", 2), 4.0}});
    EXPECT_DOUBLE_EQ(frobenius_norm(s), 5.0);
    EXPECT_DOUBLE_EQ(frobenius_norm(PauliSum::single(w("Y0", 2))), 1.0);
    EXPECT_DOUBLE_EQ(expectation(PauliSum::single(w("Z62", 127))), 1.0);
    EXPECT_DOUBLE_EQ(expectation(PauliSum::single(w("X0", 2), 0.7)), 0.0);
    EXPECT_THROW(expectation(PauliSum::single(w("Z0", 2), cplx{0.0, 1.0})), NumericalError);
}

TEST(PauliSumBasics, ParseObservable) {
    auto m = parse_observable("magnetization", 4);
    EXPECT_EQ(m.size(), 4u);
    EXPECT_DOUBLE_EQ(expectation(m), 1.0);
    auto two = parse_observable("0.5*Z0 Z1 + -0.25*X2", 3);
    EXPECT_EQ(two.size(), 2u);
    EXPECT_DOUBLE_EQ(expectation(two), 0.5);
}
