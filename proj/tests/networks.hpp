#pragma once

#include <random>
#include <string>

#include "hexsim/bp.hpp"
#include "hexsim/tensor.hpp"

namespace testing_networks {

using namespace hexsim;

inline Tensor random_tensor(const Labels &labels, const Dims &dims, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Tensor t(labels, dims);
    for (auto &v : t.data()) {
        v = cplx{g(rng), g(rng)};
    }
    return t;
}

/// Random tree of `sites` sites, degree <= 3, bond dims in [1, max_dim].
/// Some sites are split into two tensors joined by an internal label.
inline SiteNetwork random_tree(std::size_t sites, std::size_t max_dim, std::mt19937_64 &rng) {
    std::vector<Labels> labels(sites);
    std::vector<Dims> dims(sites);
    std::vector<std::size_t> degree(sites, 0);
    std::uniform_int_distribution<std::size_t> dim_dist(1, max_dim);
    for (std::size_t i = 1; i < sites; ++i) {
        std::size_t parent;
        do {
            parent = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
        } while (degree[parent] >= 3);
        ++degree[parent];
        ++degree[i];
        std::string l = "t" + std::to_string(parent) + "_" + std::to_string(i);
        std::size_t d = dim_dist(rng);
        labels[parent].push_back(l);
        dims[parent].push_back(d);
        labels[i].push_back(l);
        dims[i].push_back(d);
    }
    SiteNetwork sn(sites);
    for (std::size_t s = 0; s < sites; ++s) {
        if (labels[s].size() >= 2 && rng() % 2 == 0) {
            std::string inner = "in" + std::to_string(s);
            std::size_t d = dim_dist(rng);
            Labels la(labels[s].begin(), labels[s].begin() + 1);
            Dims da(dims[s].begin(), dims[s].begin() + 1);
            Labels lb(labels[s].begin() + 1, labels[s].end());
            Dims db(dims[s].begin() + 1, dims[s].end());
            la.push_back(inner);
            da.push_back(d);
            lb.push_back(inner);
            db.push_back(d);
            sn.add(s, random_tensor(la, da, rng));
            sn.add(s, random_tensor(lb, db, rng));
        } else {
            sn.add(s, random_tensor(labels[s], dims[s], rng));
        }
    }
    sn.finalize();
    return sn;
}

}  // namespace testing_networks
