#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "dense.hpp"
#include "hexsim/lattice.hpp"
#include "hexsim/oracle.hpp"
#include "hexsim/tn.hpp"

using namespace hexsim;

namespace {

constexpr double kPi = std::numbers::pi;

double fidelity(const std::vector<cplx> &a, const std::vector<cplx> &b) {
    cplx ov = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        ov += std::conj(a[k]) * b[k];
        na += std::norm(a[k]);
        nb += std::norm(b[k]);
    }
    return std::abs(ov) / std::sqrt(na * nb);
}

PauliSum z_at(std::size_t n, std::size_t q) {
    return PauliSum::single(PauliWord::single(n, q, 'Z'));
}

Gate two_qubit(std::size_t n, std::size_t a, char la, std::size_t b, char lb, double angle) {
    PauliWord w(n);
    w.set(a, la);
    w.set(b, lb);
    return Gate::rotation(w, angle);
}

/// Reassembles a split two-qubit gate into its 4x4 matrix.
testing_dense::Mat reassemble(const std::vector<GateFactor> &f) {
    Tensor t = contract({f[0].tensor.relabeled({{"o", "o1"}, {"i", "i1"}}),
                         f[1].tensor.relabeled({{"o", "o2"}, {"i", "i2"}})},
                        {"o1", "o2", "i1", "i2"});
    return to_matrix(t, {"o1", "o2"}, {"i1", "i2"});
}

}  // namespace

TEST(GateFactors, TwoQubitGatesSplitExactly) {
    const std::size_t n = 3;
    std::vector<Gate> gates = {two_qubit(n, 0, 'Z', 2, 'Z', -kPi / 2), two_qubit(n, 1, 'X', 0, 'Y', 0.37),
                               Gate::clifford(GateKind::CX, {2, 0}), Gate::clifford(GateKind::CZ, {0, 1})};
    for (const auto &g : gates) {
        auto f = gate_factors(g);
        ASSERT_EQ(f.size(), 2u);
        EXPECT_EQ(f[0].site, g.qubits[0]);
        auto u = local_unitary(g);
        auto m = reassemble(f);
        for (std::size_t r = 0; r < 4; ++r) {
            for (std::size_t c = 0; c < 4; ++c) {
                EXPECT_LT(std::abs(m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) - u[r * 4 + c]),
                          1e-14);
            }
        }
    }
}

TEST(GateFactors, RzzHasRankTwo) {
    auto f = gate_factors(two_qubit(2, 0, 'Z', 1, 'Z', -kPi / 2));
    EXPECT_EQ(f[0].tensor.dim("g"), 2u);
}

TEST(GateFactors, RejectsWideGates) {
    PauliWord w(3);
    w.set(0, 'Z');
    w.set(1, 'Z');
    w.set(2, 'Z');
    EXPECT_THROW(gate_factors(Gate::rotation(w, 0.1)), UnsupportedGateError);
}

TEST(Evolve, IdentityLayerLeavesStateUnchanged) {
    auto lat = heavy_hex(1, 1);
    auto c = kicked_ising(lat, 0.3, 2);
    auto steps = gates_by_step(c);
    EvolvingState psi = EvolvingState::zero_state(lat.num_nodes);
    CompressOptions opt{.chi = 16, .kappa = 0.0};
    evolve(psi, steps[0], 1, opt);
    auto before = to_dense_state(psi);
    std::vector<Gate> ids;
    for (auto [u, v] : lat.edges) {
        ids.push_back(two_qubit(lat.num_nodes, u, 'Z', v, 'Z', 0.0));
    }
    evolve(psi, ids, 2, opt);
    EXPECT_GT(fidelity(before, to_dense_state(psi)), 1.0 - 1e-8);
}

TEST(Evolve, OneStepMatchesStatevector) {
    auto lat = heavy_hex(1, 1);
    auto c = kicked_ising(lat, 0.41, 1);
    EvolvingState psi = EvolvingState::zero_state(lat.num_nodes);
    evolve(psi, gates_by_step(c)[0], 1, {.chi = 16, .kappa = 0.0});
    auto exact = simulate(c).amplitudes();
    auto tn = to_dense_state(psi);
    EXPECT_GT(fidelity(exact, tn), 1.0 - 1e-8);
    EXPECT_EQ(psi.max_bond(), 2u);
    EXPECT_TRUE(psi.flags.empty());
}

TEST(Evolve, ThreeStepsOnTreeAreLossless) {
    auto lat = fragment(heavy_hex(2, 2), 5, 10);
    auto c = kicked_ising(lat, 0.7, 3);
    EvolvingState psi = EvolvingState::zero_state(lat.num_nodes);
    auto steps = gates_by_step(c);
    for (std::size_t t = 0; t < 3; ++t) {
        evolve(psi, steps[t], t + 1, {.chi = 8, .kappa = 0.0});
    }
    EXPECT_GT(fidelity(simulate(c).amplitudes(), to_dense_state(psi)), 1.0 - 1e-8);
    double n2 = state_norm_squared(psi, {.tol = 1e-12}, 1).value().real();
    EXPECT_NEAR(n2, 1.0, 1e-8);
}

TEST(Evolve, TruncationNeverIncreasesNorm) {
    auto lat = heavy_hex(1, 1);
    auto c = kicked_ising(lat, 0.9, 4);
    EvolvingState psi = EvolvingState::zero_state(lat.num_nodes);
    auto steps = gates_by_step(c);
    for (std::size_t t = 0; t < 4; ++t) {
        evolve(psi, steps[t], t + 1, {.chi = 2, .kappa = 0.0});
        EXPECT_LE(psi.max_bond(), 2u);
    }
    auto dense = to_dense_state(psi);
    double n2 = 0.0;
    for (auto a : dense) {
        n2 += std::norm(a);
    }
    EXPECT_LE(n2, 1.0 + 1e-8);
    EXPECT_GT(n2, 0.5);
}

TEST(Evolve, PepoMatchesDenseHeisenberg) {
    auto lat = fragment(heavy_hex(1, 1), 0, 6);
    auto c = kicked_ising(lat, 0.33, 2);
    auto w = PauliWord::single(lat.num_nodes, 2, 'Z');
    EvolvingState phi = EvolvingState::pauli_operator(w);
    auto steps = gates_by_step(c);
    for (std::size_t t = 2; t > 0; --t) {
        evolve(phi, steps[t - 1], t, {.chi = 16, .kappa = 0.0});
    }
    auto u = testing_dense::full_circuit(c);
    testing_dense::Mat expected = u.adjoint() * testing_dense::dense_pauli(w) * u;
    EXPECT_LT((to_dense_operator(phi) - expected).norm(), 1e-10);
}

TEST(Evolve, CliffordPepoStaysProduct) {
    auto lat = heavy_hex(1, 1);
    auto c = kicked_ising(lat, kPi / 2, 3);
    EvolvingState phi = EvolvingState::pauli_operator(PauliWord::single(lat.num_nodes, 0, 'Z'));
    auto steps = gates_by_step(c);
    for (std::size_t t = 3; t > 0; --t) {
        evolve(phi, steps[t - 1], t, {.chi = 16, .kappa = 0.0});
    }
    EXPECT_EQ(phi.max_bond(), 1u);
    BetheValue z = state_norm_squared(phi, {}, 1);
    z.log_abs -= 12 * std::log(2.0);
    EXPECT_NEAR(z.value().real(), 1.0, 1e-8);
}

TEST(RunTn, SplitRules) {
    EXPECT_EQ(tn_split(TnMethod::PEPS, 5, 64).psi, 3u);
    EXPECT_EQ(tn_split(TnMethod::PEPS, 1, 64).lazy, 1u);
    EXPECT_EQ(tn_split(TnMethod::PEPO, 5, 64).lazy, 3u);
    EXPECT_EQ(tn_split(TnMethod::PEPO, 5, 64).op, 2u);
    EXPECT_EQ(tn_split(TnMethod::PEPO, 2, 1024).lazy, 2u);
    EXPECT_EQ(tn_split(TnMethod::MIX, 5, 8).psi, 3u);
    EXPECT_EQ(tn_split(TnMethod::MIX, 5, 8).op, 2u);
    EXPECT_EQ(tn_split(TnMethod::MIX, 6, 8).psi, 3u);
}

TEST(RunTn, ZeroFieldGivesOne) {
    auto lat = heavy_hex(1, 1);
    auto c = kicked_ising(lat, 0.0, 4);
    for (auto m : {TnMethod::PEPS, TnMethod::PEPO, TnMethod::MIX}) {
        auto r = run_tn(c, z_at(lat.num_nodes, 3), m, {.chi = 4});
        EXPECT_NEAR(r.expectation, 1.0, 1e-12) << tn_method_name(m);
        EXPECT_NEAR(r.n_mix, 1.0, 1e-12);
    }
}

TEST(RunTn, ExactRegimeMatchesOracle) {
    auto lat = fragment(heavy_hex(3, 3), 20, 14);
    auto c = kicked_ising(lat, 5 * kPi / 32, 3);
    auto o = z_at(lat.num_nodes, 7);
    double exact = statevector_expectation(c, o);
    for (auto m : {TnMethod::PEPS, TnMethod::PEPO, TnMethod::MIX}) {
        auto r = run_tn(c, o, m, {.chi = 64, .kappa = 0.0});
        EXPECT_NEAR(r.expectation, exact, 1e-8) << tn_method_name(m);
        EXPECT_NEAR(r.n_mix, 1.0, 1e-8) << tn_method_name(m);
        EXPECT_FALSE(r.flagged()) << tn_method_name(m);
    }
}

TEST(RunTn, WeightedWordKeepsCoefficient) {
    auto lat = fragment(heavy_hex(2, 2), 3, 8);
    auto c = kicked_ising(lat, 0.2, 2);
    PauliWord w(lat.num_nodes);
    w.set(1, 'X');
    w.set(2, 'Y');
    auto o = PauliSum::single(w, -0.5);
    auto r = run_tn(c, o, TnMethod::MIX, {.chi = 16, .kappa = 0.0});
    EXPECT_NEAR(r.expectation, statevector_expectation(c, o), 1e-10);
}

TEST(RunTn, RejectsSums) {
    auto lat = heavy_hex(1, 1);
    auto c = kicked_ising(lat, 0.2, 1);
    auto o = PauliSum::from_terms(12, {{PauliWord::single(12, 0, 'Z'), 1.0}, {PauliWord::single(12, 1, 'Z'), 1.0}});
    EXPECT_THROW(run_tn(c, o, TnMethod::MIX, {}), ArgumentError);
}

TEST(RunTn, SandwichMessagesAreFixedPoint) {
    auto lat = heavy_hex(1, 1);
    auto c = kicked_ising(lat, 0.5, 3);
    auto steps = gates_by_step(c);
    EvolvingState psi = EvolvingState::zero_state(12);
    for (std::size_t t = 0; t < 3; ++t) {
        evolve(psi, steps[t], t + 1, {.chi = 8, .kappa = 5e-6});
    }
    std::vector<std::vector<Tensor>> sites(12);
    for (std::size_t j = 0; j < 12; ++j) {
        sites[j].push_back(psi.sites[j]);
    }
    SiteNetwork sn = doubled_network(sites, physical_set(psi));
    BpOptions opt{.tol = 5e-6, .mode = BpMode::TwoNorm};
    auto ms = bp_iterate(sn, opt);
    ASSERT_TRUE(ms.converged);
    opt.max_iter = 1;
    auto again = bp_iterate(sn, opt, &ms);
    EXPECT_LE(again.last_delta, 5e-6);
}
