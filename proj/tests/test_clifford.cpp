#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "dense.hpp"
#include "hexsim/clifford.hpp"
#include "hexsim/lattice.hpp"
#include "hexsim/oracle.hpp"

using namespace hexsim;
using testing_dense::dense_pauli;
using testing_dense::full_circuit;
using testing_dense::full_gate;
using testing_dense::Mat;
using testing_dense::random_clifford_gate;
using testing_dense::random_word;

namespace {

constexpr double kPi = std::numbers::pi;

struct RandomClifford {
    CliffordTableau tableau;
    Mat unitary;
};

RandomClifford random_clifford(std::size_t n, std::size_t gates, std::mt19937_64 &rng) {
    RandomClifford rc{CliffordTableau(n), Mat::Identity(std::size_t{1} << n, std::size_t{1} << n)};
    for (std::size_t g = 0; g < gates; ++g) {
        Gate gate = random_clifford_gate(n, rng);
        rc.tableau.then_gate(gate);
        rc.unitary = full_gate(gate, n) * rc.unitary;
    }
    return rc;
}

void expect_conjugation_matches(const CliffordTableau &t, const Mat &u, const PauliWord &p) {
    PhasedWord img = t.conjugate(p);
    Mat dense = u.adjoint() * dense_pauli(p) * u;
    Mat mine = img.phase_value() * dense_pauli(img.word);
    ASSERT_LT((dense - mine).norm(), 1e-10) << format_pauli(p);
}

}  // namespace

TEST(Conjugate, HadamardMapsZToX) {
    auto t = CliffordTableau::from_gate(Gate::clifford(GateKind::H, {0}), 1);
    auto img = t.conjugate(parse_pauli("Z0", 1));
    EXPECT_EQ(img.word, parse_pauli("X0", 1));
    EXPECT_EQ(img.phase, 0);
}

TEST(Conjugate, ZeroQuarterTurnIsIdentity) {
    auto zz = parse_pauli("Z0 Z1", 2);
    FoldedAngle f = fold_angle(kPi / 4);
    EXPECT_EQ(f.quarter_turns, 0);
    EXPECT_EQ(CliffordTableau::pauli_rotation(zz, f.quarter_turns), CliffordTableau::identity(2));
}

TEST(Conjugate, ElementaryGatesMatchDense) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 40; ++t) {
        Gate g = random_clifford_gate(3, rng);
        auto tab = CliffordTableau::from_gate(g, 3);
        Mat u = full_gate(g, 3);
        for (int k = 0; k < 10; ++k) {
            expect_conjugation_matches(tab, u, random_word(3, rng));
        }
    }
}

TEST(Conjugate, QuarterTurnRotationsMatchDense) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 30; ++t) {
        auto axis = random_word(3, rng);
        if (axis.is_identity()) {
            continue;
        }
        for (int k = 0; k < 4; ++k) {
            auto tab = CliffordTableau::pauli_rotation(axis, k);
            Mat u = full_gate(Gate::rotation(axis, k * kPi / 2), 3);
            for (int s = 0; s < 8; ++s) {
                expect_conjugation_matches(tab, u, random_word(3, rng));
            }
        }
    }
}

TEST(Conjugate, RandomFiveQubitCliffordMatchesDense) {
    std::mt19937_64 rng(3);
    auto rc = random_clifford(5, 20, rng);
    ASSERT_TRUE(rc.tableau.is_symplectic());
    for (int k = 0; k < 100; ++k) {
        expect_conjugation_matches(rc.tableau, rc.unitary, random_word(5, rng));
    }
}

TEST(Conjugate, SizeMismatchThrows) {
    EXPECT_THROW(CliffordTableau(2).conjugate(PauliWord(3)), ArgumentError);
    EXPECT_THROW(compose(CliffordTableau(2), CliffordTableau(3)), ArgumentError);
}

TEST(Compose, IdentityAndInverse) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t) {
        auto rc = random_clifford(4, 25, rng);
        EXPECT_EQ(compose(CliffordTableau::identity(4), rc.tableau), rc.tableau);
        EXPECT_EQ(compose(rc.tableau, CliffordTableau::identity(4)), rc.tableau);
        EXPECT_EQ(compose(rc.tableau, rc.tableau.inverse()), CliffordTableau::identity(4));
        EXPECT_EQ(compose(rc.tableau.inverse(), rc.tableau), CliffordTableau::identity(4));
    }
}

TEST(Compose, MatchesSequentialDenseConjugation) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
        auto a = random_clifford(4, 15, rng);
        auto b = random_clifford(4, 15, rng);
        auto ab = compose(a.tableau, b.tableau);
        ASSERT_TRUE(ab.is_symplectic());
        // second(first(P)) = B^dag A^dag P A B
        Mat u = a.unitary * b.unitary;
        for (int k = 0; k < 20; ++k) {
            auto p = random_word(4, rng);
            ASSERT_EQ(ab.conjugate(p), b.tableau.conjugate(a.tableau.conjugate(p)));
            expect_conjugation_matches(ab, u, p);
        }
    }
}

TEST(Compose, SymplecticAfterEveryStep) {
    std::mt19937_64 rng(6);
    CliffordTableau acc(6);
    for (int t = 0; t < 50; ++t) {
        acc = compose(acc, CliffordTableau::from_gate(random_clifford_gate(6, rng), 6));
        ASSERT_TRUE(acc.is_symplectic());
    }
}

TEST(Compose, WideTableauInverse) {
    std::mt19937_64 rng(7);
    CliffordTableau acc(130);
    for (int t = 0; t < 400; ++t) {
        acc.then_gate(random_clifford_gate(130, rng));
    }
    ASSERT_TRUE(acc.is_symplectic());
    EXPECT_EQ(compose(acc, acc.inverse()), CliffordTableau::identity(130));
}

TEST(FoldAngle, HalfOpenInterval) {
    auto a = fold_angle(kPi / 4);
    EXPECT_DOUBLE_EQ(a.angle, kPi / 4);
    EXPECT_EQ(a.quarter_turns, 0);
    auto b = fold_angle(-kPi / 4);
    EXPECT_NEAR(b.angle, kPi / 4, 1e-15);
    EXPECT_EQ(b.quarter_turns, 3);
    auto c = fold_angle(-kPi / 2);
    EXPECT_EQ(c.angle, 0.0);
    EXPECT_EQ(c.quarter_turns, 3);
    auto d = fold_angle(16 * kPi / 32);
    EXPECT_EQ(d.angle, 0.0);
    EXPECT_EQ(d.quarter_turns, 1);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-10, 10);
    for (int t = 0; t < 1000; ++t) {
        double th = u(rng);
        auto f = fold_angle(th);
        ASSERT_GT(f.angle, -kPi / 4);
        ASSERT_LE(f.angle, kPi / 4);
        double back = f.angle + f.quarter_turns * kPi / 2;
        ASSERT_NEAR(std::remainder(back - th, 2 * kPi), 0.0, 1e-12);
    }
}

TEST(FromGate, NonCliffordAngleRejected) {
    try {
        CliffordTableau::from_gate(Gate::rotation(parse_pauli("X0", 1), 0.3), 1);
        FAIL();
    } catch (const UnsupportedGateError &e) {
        EXPECT_NE(std::string(e.what()).find("rotation"), std::string::npos);
    }
}

TEST(Recompile, CliffordPointHasNoRotations) {
    auto lat = heavy_hex(1, 1);
    auto c = kicked_ising(lat, kPi / 2, 4);
    auto rc = recompile(c, parse_observable("magnetization", lat.num_nodes));
    EXPECT_TRUE(rc.rotations.empty());
    EXPECT_EQ(rc.source_rotation_count, c.rotation_count());
}

TEST(Recompile, OnlyTransverseRotationsSurvive) {
    auto lat = heavy_hex(1, 1);
    auto c = kicked_ising(lat, 0.3, 3);
    auto rc = recompile(c, parse_observable("Z0", lat.num_nodes));
    EXPECT_EQ(rc.rotations.size(), lat.num_nodes * 3);
    for (const auto &r : rc.rotations) {
        EXPECT_DOUBLE_EQ(r.angle, 0.3);
    }
    EXPECT_LE(rc.rotations.size(), c.rotation_count());
}

TEST(Recompile, RotationsThenResidualReproduceCircuit) {
    std::mt19937_64 rng(9);
    const std::size_t n = 4;
    for (int t = 0; t < 10; ++t) {
        Circuit c;
        c.num_qubits = n;
        c.steps = 1;
        Layer l;
        std::uniform_real_distribution<double> ang(-4, 4);
        for (int g = 0; g < 25; ++g) {
            if (g % 3 == 0) {
                auto axis = random_word(n, rng);
                if (!axis.is_identity()) {
                    double a = (g % 2) ? ang(rng) : std::round(ang(rng)) * kPi / 4;
                    l.gates.push_back(Gate::rotation(axis, a));
                }
            } else {
                l.gates.push_back(random_clifford_gate(n, rng));
            }
        }
        c.layers.push_back(l);
        auto rc = recompile(c, parse_observable("Z0", n));
        Mat u = full_circuit(c);
        Mat r = Mat::Identity(16, 16);
        for (const auto &rot : rc.rotations) {
            ASSERT_GT(rot.angle, -kPi / 4);
            ASSERT_LE(rot.angle, kPi / 4);
            r = full_gate(Gate::rotation(rot.axis, rot.signed_angle()), n) * r;
        }
        for (int k = 0; k < 10; ++k) {
            auto p = random_word(n, rng);
            Mat expect = u.adjoint() * dense_pauli(p) * u;
            PhasedWord kp = rc.residual_clifford.conjugate(p);
            Mat mine = r.adjoint() * (kp.phase_value() * dense_pauli(kp.word)) * r;
            ASSERT_LT((expect - mine).norm(), 1e-10);
        }
    }
}

TEST(Recompile, ExpectationMatchesDenseOracle) {
    auto lat = fragment(heavy_hex(2, 2), 0, 8);
    ASSERT_EQ(lat.num_nodes, 8u);
    auto c = kicked_ising(lat, 5 * kPi / 32, 3);
    for (std::size_t q = 0; q < lat.num_nodes; ++q) {
        auto o = PauliSum::single(PauliWord::single(8, q, 'Z'));
        auto rc = recompile(c, o);
        StateVector psi(8);
        for (const auto &r : rc.rotations) {
            psi.apply_pauli_rotation(r.axis, r.signed_angle());
        }
        double recompiled = psi.expectation(rc.transformed_observable).real();
        Mat u = full_circuit(c);
        double dense = (u.adjoint() * testing_dense::dense_pauli(o.term_word(0)) * u)(0, 0).real();
        EXPECT_NEAR(recompiled, dense, 1e-12);
    }
}
