#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "dense.hpp"
#include "hexsim/clifford.hpp"
#include "hexsim/lattice.hpp"
#include "hexsim/oracle.hpp"

using namespace hexsim;
using testing_dense::Mat;

namespace {

constexpr double kPi = std::numbers::pi;

Circuit random_circuit(std::size_t n, std::size_t gates, std::mt19937_64 &rng) {
    Circuit c;
    c.num_qubits = n;
    c.steps = 1;
    Layer l;
    std::uniform_real_distribution<double> ang(-3, 3);
    while (l.gates.size() < gates) {
        if (rng() % 2) {
            auto axis = testing_dense::random_word(n, rng);
            if (!axis.is_identity()) {
                l.gates.push_back(Gate::rotation(axis, ang(rng)));
            }
        } else {
            l.gates.push_back(testing_dense::random_clifford_gate(n, rng));
        }
    }
    c.layers.push_back(l);
    return c;
}

}  // namespace

TEST(StateVector, GroundStateZ) {
    Circuit c;
    c.num_qubits = 3;
    EXPECT_DOUBLE_EQ(statevector_expectation(c, parse_observable("Z0", 3)), 1.0);
    EXPECT_DOUBLE_EQ(statevector_expectation(c, parse_observable("X1", 3)), 0.0);
}

TEST(StateVector, TwoQubitStepAgreesWithExplicitMatrices) {
    Lattice lat;
    lat.num_nodes = 2;
    lat.edges = {{0, 1}};
    auto c = kicked_ising(lat, kPi / 4, 1);
    auto o = parse_observable("Z0", 2);
    // Explicit 4x4 algebra, independent of the gate engine.
    const cplx i{0, 1};
    const double h = kPi / 8;
    Mat rx(2, 2);
    rx << std::cos(h), -i * std::sin(h), -i * std::sin(h), std::cos(h);
    Mat zz = Mat::Zero(4, 4);
    zz.diagonal() << std::exp(i * kPi / 4.0), std::exp(-i * kPi / 4.0), std::exp(-i * kPi / 4.0), std::exp(i * kPi / 4.0);
    Mat u = zz * testing_dense::kron(rx, rx);
    Mat z0 = testing_dense::kron(Mat::Identity(2, 2), testing_dense::pauli_1q('Z'));
    double explicit_value = (u.adjoint() * z0 * u)(0, 0).real();
    EXPECT_NEAR(statevector_expectation(c, o), explicit_value, 1e-14);
    // ZZ commutes with Z0 and cos(pi/4) is left.
    EXPECT_NEAR(explicit_value, std::cos(kPi / 4), 1e-14);
}

TEST(StateVector, NormPreservedByEveryGate) {
    std::mt19937_64 rng(1);
    auto c = random_circuit(7, 60, rng);
    StateVector psi(7);
    for (const auto &g : c.layers[0].gates) {
        psi.apply(g);
        ASSERT_NEAR(psi.norm(), 1.0, 1e-10);
    }
}

TEST(StateVector, CapacityErrors) {
    EXPECT_THROW(StateVector(25), CapacityError);
    EXPECT_THROW(StateVector(10, 8), CapacityError);
    Circuit c;
    c.num_qubits = 13;
    EXPECT_THROW(heisenberg_dense_expectation(c, parse_observable("Z0", 13)), CapacityError);
}

TEST(DenseHeisenberg, IdentityCircuit) {
    Circuit c;
    c.num_qubits = 3;
    auto o = parse_observable("0.5*Z0 + 0.25*Z1 Z2 + 2*X0", 3);
    EXPECT_NEAR(heisenberg_dense_expectation(c, o), 0.75, 1e-15);
}

TEST(DenseHeisenberg, RandomCircuitsAgreeWithStatevector) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 10; ++t) {
        auto c = random_circuit(6, 30, rng);
        auto o = PauliSum::from_terms(6, {{testing_dense::random_word(6, rng), 0.7},
                                          {testing_dense::random_word(6, rng), -0.4}});
        EXPECT_NEAR(heisenberg_dense_expectation(c, o), statevector_expectation(c, o), 1e-12);
    }
}

TEST(DenseHeisenberg, ThreeWayAgreementAtCliffordPoint) {
    auto lat = fragment(heavy_hex(2, 2), 5, 8);
    auto c = kicked_ising(lat, kPi / 2, 3);
    for (std::size_t q = 0; q < 8; ++q) {
        for (char letter : {'Z', 'X'}) {
            auto o = PauliSum::single(PauliWord::single(8, q, letter));
            auto rc = recompile(c, o);
            ASSERT_TRUE(rc.rotations.empty());
            double tableau = expectation(rc.transformed_observable);
            EXPECT_NEAR(statevector_expectation(c, o), tableau, 1e-12);
            EXPECT_NEAR(heisenberg_dense_expectation(c, o), tableau, 1e-12);
        }
    }
}

TEST(DenseHeisenberg, AllOraclesAgreeOnSmallKickedIsing) {
    for (std::size_t n : {4u, 6u, 8u, 10u}) {
        auto lat = fragment(heavy_hex(2, 2), 0, n);
        for (int k : {3, 8, 13}) {
            auto c = kicked_ising(lat, k * kPi / 32, 2);
            auto o = parse_observable("magnetization", n);
            double sv = statevector_expectation(c, o);
            double dense = heisenberg_dense_expectation(c, o);
            EXPECT_NEAR(sv, dense, 1e-12) << n << " " << k;
        }
    }
}
