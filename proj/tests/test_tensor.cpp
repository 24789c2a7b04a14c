#include <gtest/gtest.h>

#include <random>

#include "hexsim/tensor.hpp"
#include "networks.hpp"

using namespace hexsim;

using testing_networks::random_tensor;

TEST(Tensor, ShapeValidation) {
    EXPECT_THROW(Tensor({"a", "a"}, {2, 2}), ArgumentError);
    EXPECT_THROW(Tensor({"a"}, {2}, {1.0}), ArgumentError);
    Tensor t({"a", "b"}, {2, 3});
    EXPECT_EQ(t.size(), 6u);
    EXPECT_THROW(t.dim("c"), ArgumentError);
}

TEST(Tensor, PermuteRoundTrip) {
    std::mt19937_64 rng(1);
    auto t = random_tensor({"a", "b", "c", "d"}, {2, 3, 4, 5}, rng);
    auto p = t.permuted({"c", "a", "d", "b"});
    EXPECT_EQ(p.at({1, 0, 3, 2}), t.at({0, 2, 1, 3}));
    auto back = p.permuted({"a", "b", "c", "d"});
    EXPECT_EQ(back.data(), t.data());
}

TEST(Contract, MatrixVector) {
    Tensor a({"i", "j"}, {2, 2}, {1.0, 2.0, 3.0, 4.0});
    Tensor v({"j"}, {2}, {5.0, 6.0});
    auto r = contract({a, v}, {"i"});
    EXPECT_EQ(r.data()[0], cplx(17.0));
    EXPECT_EQ(r.data()[1], cplx(39.0));
}

TEST(Contract, Trace) {
    Tensor a({"i", "k"}, {3, 3}, {1, 2, 3, 4, 5, 6, 7, 8, 9});
    EXPECT_EQ(trace(a, "i", "k").value(), cplx(15.0));
    // Same value through a contraction with an identity tensor.
    Tensor id({"i", "k"}, {3, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1});
    EXPECT_EQ(contract({a, id}).value(), cplx(15.0));
}

TEST(Contract, ErrorsOnMismatch) {
    Tensor a({"i"}, {2});
    Tensor b({"i"}, {3});
    EXPECT_THROW(contract({a, b}), ArgumentError);
    EXPECT_THROW(contract({a}, {"z"}), ArgumentError);
}

TEST(Contract, RandomNetworksMatchNaiveSum) {
    std::mt19937_64 rng(2);
    const Labels pool = {"a", "b", "c", "d", "e", "f", "g", "h"};
    for (int trial = 0; trial < 40; ++trial) {
        std::map<std::string, std::size_t> dim;
        for (const auto &l : pool) {
            dim[l] = 1 + rng() % 4;
        }
        // Each label is placed on exactly two of five tensors.
        std::vector<Labels> ls(5);
        for (const auto &l : pool) {
            std::size_t x = rng() % 5;
            std::size_t y = (x + 1 + rng() % 4) % 5;
            ls[x].push_back(l);
            ls[y].push_back(l);
        }
        std::vector<Tensor> ts;
        double work = 1;
        for (const auto &l : pool) {
            work *= static_cast<double>(dim[l]);
        }
        if (work > 1e6) {
            continue;
        }
        for (auto &labels : ls) {
            Dims d;
            for (const auto &l : labels) {
                d.push_back(dim[l]);
            }
            ts.push_back(random_tensor(labels, d, rng));
        }
        cplx fast = contract(ts).value();
        cplx slow = naive_scalar(ts);
        ASSERT_LT(std::abs(fast - slow), 1e-12 * std::max(1.0, std::abs(slow)));
    }
}

TEST(Contract, PathIndependence) {
    std::mt19937_64 rng(3);
    std::vector<Tensor> ts = {random_tensor({"a", "b"}, {3, 4}, rng), random_tensor({"b", "c"}, {4, 2}, rng),
                              random_tensor({"c", "d"}, {2, 5}, rng), random_tensor({"d", "a"}, {5, 3}, rng)};
    cplx greedy = contract(ts).value();
    ContractionPath chain;
    chain.steps = {{0, 1}, {0, 1}, {0, 1}};
    cplx sequential = contract_with_path(ts, {}, chain).value();
    EXPECT_LT(std::abs(greedy - sequential), 1e-12 * std::abs(greedy));
}

TEST(Contract, HyperedgeKeepsBatchLabel) {
    Tensor a({"i", "x"}, {2, 2}, {1, 2, 3, 4});
    Tensor b({"i", "y"}, {2, 2}, {5, 6, 7, 8});
    auto r = contract({a, b}, {"i", "x", "y"});
    EXPECT_EQ(r.at({1, 0, 1}), cplx(3.0 * 8.0));
}

TEST(TruncatedSvd, RankOneOuterProduct) {
    Tensor u({"a"}, {3}, {1.0, 2.0, 3.0});
    Tensor v({"b"}, {4}, {1.0, -1.0, 0.5, 2.0});
    auto t = contract({u, v}, {"a", "b"});
    auto r = truncated_svd(t, {"a"}, 8, 0.0);
    EXPECT_EQ(r.s.size(), 1u);
    EXPECT_EQ(r.discarded_weight, 0.0);
}

TEST(TruncatedSvd, FullRankReconstruction) {
    std::mt19937_64 rng(4);
    auto t = random_tensor({"a", "b"}, {8, 8}, rng);
    auto r = truncated_svd(t, {"a"}, 8, 0.0);
    ASSERT_EQ(r.s.size(), 8u);
    for (std::size_t k = 1; k < r.s.size(); ++k) {
        EXPECT_GE(r.s[k - 1], r.s[k]);
        EXPECT_GE(r.s[k], 0.0);
    }
    Tensor s({"svd", "svd2"}, {8, 8});
    for (std::size_t k = 0; k < 8; ++k) {
        s.at({k, k}) = r.s[k];
    }
    auto rebuilt = contract({r.u, s, r.v.relabeled({{"svd", "svd2"}})}, {"a", "b"});
    for (std::size_t k = 0; k < t.size(); ++k) {
        ASSERT_LT(std::abs(rebuilt.data()[k] - t.data()[k]), 1e-12);
    }
}

TEST(TruncatedSvd, ChiAndKappaCaps) {
    std::mt19937_64 rng(5);
    auto t = random_tensor({"a", "b", "c"}, {4, 4, 4}, rng);
    auto r = truncated_svd(t, {"a", "b"}, 3, 0.0);
    EXPECT_EQ(r.s.size(), 3u);
    EXPECT_GT(r.discarded_weight, 0.0);
    EXPECT_EQ(r.u.labels(), (Labels{"a", "b", "svd"}));
    EXPECT_EQ(r.v.labels(), (Labels{"svd", "c"}));
    // A huge kappa keeps only the leading value.
    EXPECT_EQ(truncated_svd(t, {"a"}, 16, 0.99).s.size(), 1u);
    Eigen::VectorXd sv(4);
    sv << 1.0, 0.1, 1e-3, 1e-4;
    // Discarding {1e-3, 1e-4} costs ~1.005e-3 of the norm ~1.005.
    EXPECT_EQ(truncation_rank(sv, 10, 2e-3), 2u);
    EXPECT_EQ(truncation_rank(sv, 10, 5e-4), 3u);
    EXPECT_EQ(truncation_rank(sv, 10, 0.0), 4u);
    EXPECT_THROW(truncated_svd(t, {"a", "b", "c"}, 2, 0.0), ArgumentError);
}

TEST(TruncatedSvd, RzzGateSplitsAtRankTwo) {
    // exp(+i pi/4 ZZ) as (a_out, a_in, b_out, b_in).
    const cplx i{0, 1};
    Tensor g({"ao", "ai", "bo", "bi"}, {2, 2, 2, 2});
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
            double parity = (a ^ b) ? -1.0 : 1.0;
            g.at({a, a, b, b}) = std::exp(i * (std::numbers::pi / 4) * parity);
        }
    }
    auto r = truncated_svd(g, {"ao", "ai"}, 16, 0.0);
    EXPECT_EQ(r.s.size(), 2u);
    EXPECT_LT(r.discarded_weight, 1e-12);
}

TEST(EighPsd, IdentityAndDiagonal) {
    auto id = eigh_psd(MatrixC::Identity(4, 4));
    for (double v : id.values) {
        EXPECT_NEAR(v, 1.0, 1e-15);
    }
    MatrixC d = MatrixC::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 4.0;
    auto r = eigh_psd(d);
    EXPECT_NEAR(r.values[0], 4.0, 1e-15);
    EXPECT_NEAR(r.values[1], 1.0, 1e-15);
    EXPECT_NEAR(std::abs(r.vectors(1, 0)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(r.vectors(0, 1)), 1.0, 1e-15);
    EXPECT_THROW(eigh_psd(MatrixC::Zero(2, 3)), ArgumentError);
}

TEST(EighPsd, RandomPsdReconstructs) {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> g;
    MatrixC a(6, 6);
    for (Eigen::Index r = 0; r < 6; ++r) {
        for (Eigen::Index c = 0; c < 6; ++c) {
            a(r, c) = cplx{g(rng), g(rng)};
        }
    }
    MatrixC m = a.adjoint() * a;
    auto e = eigh_psd(m);
    Eigen::VectorXd lam(6);
    for (int k = 0; k < 6; ++k) {
        lam(k) = e.values[static_cast<std::size_t>(k)];
    }
    MatrixC back = e.vectors * lam.asDiagonal() * e.vectors.adjoint();
    EXPECT_LT((back - m).norm(), 1e-10);
    EXPECT_FALSE(e.negative_flag);
}

TEST(EighPsd, NegativeEigenvaluesFlaggedAndClamped) {
    MatrixC m = MatrixC::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -0.5;
    auto e = eigh_psd(m);
    EXPECT_TRUE(e.negative_flag);
    EXPECT_EQ(e.values[1], 0.0);
}
