// Copyright 2026 The hexsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Belief propagation over networks whose sites each hold several tensors.
// Messages live on site pairs and carry every label the pair shares, fused.
// In two-norm (doubled) networks a bra label is its ket label plus "*".

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hexsim/errors.hpp"
#include "hexsim/parallel.hpp"
#include "hexsim/tensor.hpp"

namespace hexsim {

inline std::string bra_label(const std::string &ket) {
    return ket + "*";
}

inline bool is_bra_label(const std::string &l) {
    return !l.empty() && l.back() == '*';
}

struct Bond {
    std::size_t a = 0;
    std::size_t b = 0;
    Labels labels;
    Dims dims;

    std::size_t dimension() const {
        return product(dims);
    }
    std::size_t other(std::size_t site) const {
        return site == a ? b : a;
    }
    std::string name() const {
        return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
    }
};

class SiteNetwork {
  public:
    SiteNetwork() = default;
    explicit SiteNetwork(std::size_t num_sites) : sites_(num_sites) {
    }

    std::size_t num_sites() const {
        return sites_.size();
    }

    void add(std::size_t site, Tensor t) {
        if (site >= sites_.size()) {
            throw ArgumentError("site index out of range");
        }
        sites_[site].push_back(std::move(t));
        finalized_ = false;
    }

    const std::vector<Tensor> &site(std::size_t i) const {
        return sites_.at(i);
    }
    std::vector<Tensor> &site(std::size_t i) {
        finalized_ = false;
        return sites_.at(i);
    }

    /// Derives bonds and dangling labels. Every label must occur at most twice.
    void finalize() {
        std::map<std::string, std::vector<std::size_t>> where;
        std::map<std::string, std::size_t> dim;
        for (std::size_t s = 0; s < sites_.size(); ++s) {
            for (const auto &t : sites_[s]) {
                for (std::size_t k = 0; k < t.rank(); ++k) {
                    const auto &l = t.labels()[k];
                    where[l].push_back(s);
                    auto [it, fresh] = dim.emplace(l, t.dims()[k]);
                    if (!fresh && it->second != t.dims()[k]) {
                        throw StructureError("label '" + l + "' has inconsistent dimensions");
                    }
                }
            }
        }
        std::map<std::pair<std::size_t, std::size_t>, Labels> pairs;
        dangling_.clear();
        for (const auto &[l, sites] : where) {
            if (sites.size() > 2) {
                throw StructureError("label '" + l + "' appears " + std::to_string(sites.size()) + " times");
            }
            if (sites.size() == 1) {
                dangling_.push_back(l);
            } else if (sites[0] != sites[1]) {
                pairs[{std::min(sites[0], sites[1]), std::max(sites[0], sites[1])}].push_back(l);
            }
        }
        bonds_.clear();
        site_bonds_.assign(sites_.size(), {});
        for (auto &[ab, labels] : pairs) {
            Bond b;
            b.a = ab.first;
            b.b = ab.second;
            b.labels = labels;
            for (const auto &l : labels) {
                b.dims.push_back(dim[l]);
            }
            site_bonds_[b.a].push_back(bonds_.size());
            site_bonds_[b.b].push_back(bonds_.size());
            bonds_.push_back(std::move(b));
        }
        finalized_ = true;
    }

    const std::vector<Bond> &bonds() const {
        require_final();
        return bonds_;
    }
    const std::vector<std::size_t> &site_bonds(std::size_t s) const {
        require_final();
        return site_bonds_.at(s);
    }
    const Labels &dangling() const {
        require_final();
        return dangling_;
    }

    std::vector<Tensor> all_tensors() const {
        std::vector<Tensor> out;
        for (const auto &s : sites_) {
            out.insert(out.end(), s.begin(), s.end());
        }
        return out;
    }

  private:
    void require_final() const {
        if (!finalized_) {
            throw StructureError("SiteNetwork used before finalize()");
        }
    }

    std::vector<std::vector<Tensor>> sites_;
    std::vector<Bond> bonds_;
    std::vector<std::vector<std::size_t>> site_bonds_;
    Labels dangling_;
    bool finalized_ = false;
};

enum class BpMode { OneNorm, TwoNorm };

struct BpOptions {
    double tol = 5e-6;
    std::size_t max_iter = 500;
    BpMode mode = BpMode::OneNorm;
    /// m <- (1 - damping) m_new + damping m_old.
    double damping = 0.0;
    std::size_t workers = 1;
    /// Relative amplitude of a seeded random perturbation of the uniform start.
    double perturbation = 0.0;
    std::uint64_t seed = 0;
};

struct MessageSet {
    /// messages[e][0] flows a -> b, messages[e][1] flows b -> a.
    std::vector<std::array<Tensor, 2>> messages;
    std::size_t iterations = 0;
    double last_delta = 0.0;
    bool converged = false;

    /// Message on bond e arriving at `site`.
    const Tensor &into(const Bond &bond, std::size_t e, std::size_t site) const {
        return messages[e][site == bond.b ? 0 : 1];
    }
    Tensor &into(const Bond &bond, std::size_t e, std::size_t site) {
        return messages[e][site == bond.b ? 0 : 1];
    }
};

namespace detail {

/// Ket labels (sorted) of a doubled bond, checking every bra partner exists.
inline Labels ket_labels(const Labels &bond_labels) {
    Labels ket;
    std::set<std::string> all(bond_labels.begin(), bond_labels.end());
    for (const auto &l : bond_labels) {
        if (!is_bra_label(l)) {
            if (!all.count(bra_label(l))) {
                throw StructureError("bond label '" + l + "' has no bra partner");
            }
            ket.push_back(l);
        }
    }
    if (2 * ket.size() != bond_labels.size()) {
        throw StructureError("bond labels do not split into ket/bra pairs");
    }
    return ket;
}

inline Labels bra_labels(const Labels &ket) {
    Labels bra;
    for (const auto &l : ket) {
        bra.push_back(bra_label(l));
    }
    return bra;
}

inline void hermitize(Tensor &m, const Labels &bond_labels) {
    Labels ket = ket_labels(bond_labels);
    Labels bra = bra_labels(ket);
    Dims kd;
    for (const auto &l : ket) {
        kd.push_back(m.dim(l));
    }
    MatrixC x = to_matrix(m, ket, bra);
    MatrixC h = (x + x.adjoint()) / 2.0;
    m = from_matrix(h, ket, kd, bra, kd).permuted(m.labels());
}

/// Scales to unit 1-norm and removes the overall phase of the entry sum.
inline void normalize_message(Tensor &m) {
    double n1 = m.norm1();
    if (n1 == 0.0) {
        return;
    }
    cplx sum = 0.0;
    for (cplx v : m.data()) {
        sum += v;
    }
    cplx phase = std::abs(sum) > 1e-8 * n1 ? sum / std::abs(sum) : cplx{1.0};
    m.scale(1.0 / (n1 * phase));
}

inline double diff_norm1(const Tensor &a, const Tensor &b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        s += std::abs(a.data()[k] - b.data()[k]);
    }
    return s;
}

}  // namespace detail

/// Uniform all-ones messages at unit 1-norm.
inline MessageSet uniform_messages(const SiteNetwork &sn) {
    MessageSet ms;
    for (const auto &b : sn.bonds()) {
        Tensor t(b.labels, b.dims);
        for (auto &v : t.data()) {
            v = 1.0 / static_cast<double>(t.size());
        }
        ms.messages.push_back({t, t});
    }
    return ms;
}

/// Contracts site `s` with every incoming message except the one on bond `skip`.
inline std::vector<Tensor> site_with_messages(const SiteNetwork &sn, const MessageSet &ms, std::size_t s,
                                              std::optional<std::size_t> skip) {
    std::vector<Tensor> ts = sn.site(s);
    for (std::size_t e : sn.site_bonds(s)) {
        if (skip && e == *skip) {
            continue;
        }
        ts.push_back(ms.into(sn.bonds()[e], e, s));
    }
    return ts;
}

/// Synchronous message passing from `init` (uniform when absent).
inline MessageSet bp_iterate(const SiteNetwork &sn, const BpOptions &opt, const MessageSet *init = nullptr) {
    if (!sn.dangling().empty()) {
        throw StructureError("network has dangling labels " + join_labels(sn.dangling()));
    }
    const auto &bonds = sn.bonds();
    MessageSet ms = init ? *init : uniform_messages(sn);
    if (ms.messages.size() != bonds.size()) {
        throw StructureError("message set does not match the network bonds");
    }
    if (!init && opt.perturbation > 0.0) {
        std::mt19937_64 rng(opt.seed);
        std::uniform_real_distribution<double> u(-opt.perturbation, opt.perturbation);
        for (std::size_t e = 0; e < bonds.size(); ++e) {
            for (auto &m : ms.messages[e]) {
                for (auto &v : m.data()) {
                    v *= 1.0 + u(rng);
                }
                if (opt.mode == BpMode::TwoNorm) {
                    detail::hermitize(m, bonds[e].labels);
                }
                detail::normalize_message(m);
            }
        }
    }
    for (std::size_t e = 0; e < bonds.size(); ++e) {
        for (auto &m : ms.messages[e]) {
            if (m.labels() != bonds[e].labels) {
                m = m.permuted(bonds[e].labels);
            }
        }
    }
    if (opt.mode == BpMode::TwoNorm) {
        for (std::size_t e = 0; e < bonds.size(); ++e) {
            detail::ket_labels(bonds[e].labels);
        }
    }
    // Contraction paths depend only on shapes, so they are computed once.
    std::vector<std::array<std::optional<ContractionPath>, 2>> paths(bonds.size());
    ms.converged = bonds.empty();
    ms.iterations = 0;
    ms.last_delta = 0.0;
    while (!ms.converged && ms.iterations < opt.max_iter) {
        MessageSet next = ms;
        std::vector<double> deltas(2 * bonds.size(), 0.0);
        parallel_for_each_index(2 * bonds.size(), opt.workers, [&](std::size_t task) {
            std::size_t e = task / 2;
            std::size_t dir = task % 2;
            const Bond &b = bonds[e];
            std::size_t from = dir == 0 ? b.a : b.b;
            auto ts = site_with_messages(sn, ms, from, e);
            auto &path = paths[e][dir];
            if (!path) {
                path = greedy_path(ts, b.labels);
            }
            Tensor m = contract_with_path(std::move(ts), b.labels, *path);
            if (opt.mode == BpMode::TwoNorm) {
                detail::hermitize(m, b.labels);
            }
            detail::normalize_message(m);
            if (opt.damping > 0) {
                const Tensor &old = ms.messages[e][dir];
                for (std::size_t k = 0; k < m.size(); ++k) {
                    m.data()[k] = (1.0 - opt.damping) * m.data()[k] + opt.damping * old.data()[k];
                }
                detail::normalize_message(m);
            }
            deltas[task] = detail::diff_norm1(m, ms.messages[e][dir]);
            next.messages[e][dir] = std::move(m);
        });
        ms.messages = std::move(next.messages);
        ++ms.iterations;
        ms.last_delta = deltas.empty() ? 0.0 : *std::max_element(deltas.begin(), deltas.end());
        ms.converged = ms.last_delta <= opt.tol;
    }
    return ms;
}

/// Bethe estimate held as log|Z| plus a phase so large networks do not overflow.
struct BetheValue {
    double log_abs = 0.0;
    cplx phase = 1.0;
    bool zero = false;

    cplx value() const {
        return zero ? cplx{0.0} : phase * std::exp(log_abs);
    }
};

inline BetheValue l1bp_log_value(const SiteNetwork &sn, const MessageSet &ms) {
    BetheValue z;
    const auto &bonds = sn.bonds();
    for (std::size_t e = 0; e < bonds.size(); ++e) {
        cplx den = contract({ms.messages[e][0], ms.messages[e][1]}).value();
        if (den == 0.0) {
            throw StructureError("degenerate bond " + bonds[e].name() + ": message overlap is zero");
        }
        z.log_abs -= std::log(std::abs(den));
        z.phase /= den / std::abs(den);
    }
    for (std::size_t s = 0; s < sn.num_sites(); ++s) {
        if (sn.site(s).empty()) {
            continue;
        }
        cplx num = contract(site_with_messages(sn, ms, s, std::nullopt)).value();
        if (num == 0.0) {
            z.zero = true;
            return z;
        }
        z.log_abs += std::log(std::abs(num));
        z.phase *= num / std::abs(num);
    }
    return z;
}

/// Z ~ prod_i (site i with all incoming messages) / prod_bonds (m_ab . m_ba).
inline cplx l1bp_value(const SiteNetwork &sn, const MessageSet &ms) {
    return l1bp_log_value(sn, ms).value();
}

struct BondProjectors {
    /// D x r and r x D over the fused ket bond.
    MatrixC p_a;
    MatrixC p_b;
    std::size_t rank = 0;
    double discarded_weight = 0.0;
    std::vector<double> singular_values;
    bool dead = false;
    bool negative_flag = false;
};

/// Projectors from Hermitian PSD environments m_ab (site a's side) and m_ba,
/// both D x D with rows ket and columns bra.
inline BondProjectors compress_bond(const MatrixC &m_ab, const MatrixC &m_ba, std::size_t chi, double kappa) {
    if (m_ab.rows() != m_ba.rows() || m_ab.rows() != m_ab.cols() || m_ba.rows() != m_ba.cols()) {
        throw ArgumentError("bond messages must be square and of equal size");
    }
    const Eigen::Index d = m_ab.rows();
    auto ea = eigh_psd(m_ab);
    auto eb = eigh_psd(m_ba);
    BondProjectors out;
    out.negative_flag = ea.negative_flag || eb.negative_flag;
    auto significant = [](const EighResult &e) {
        Eigen::Index k = 0;
        while (k < static_cast<Eigen::Index>(e.values.size()) &&
               e.values[static_cast<std::size_t>(k)] > kRelativeZero * e.values[0]) {
            ++k;
        }
        return e.values.empty() || e.values[0] <= 0 ? Eigen::Index{0} : k;
    };
    const Eigen::Index ka = significant(ea);
    const Eigen::Index kb = significant(eb);
    if (ka == 0 || kb == 0) {
        out.dead = true;
        out.p_a = MatrixC::Zero(d, 0);
        out.p_b = MatrixC::Zero(0, d);
        return out;
    }
    // R_A = sqrt(lambda_A) W_A^T, R_B = W_B sqrt(lambda_B).
    MatrixC ra(ka, d);
    for (Eigen::Index k = 0; k < ka; ++k) {
        ra.row(k) = std::sqrt(ea.values[static_cast<std::size_t>(k)]) * ea.vectors.col(k).transpose();
    }
    MatrixC rb(d, kb);
    for (Eigen::Index k = 0; k < kb; ++k) {
        rb.col(k) = std::sqrt(eb.values[static_cast<std::size_t>(k)]) * eb.vectors.col(k);
    }
    MatrixC core = ra * rb;
    Eigen::BDCSVD<MatrixC> svd(core, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd &sv = svd.singularValues();
    std::size_t r = truncation_rank(sv, chi, kappa);
    if (r == 0) {
        out.dead = true;
        out.p_a = MatrixC::Zero(d, 0);
        out.p_b = MatrixC::Zero(0, d);
        return out;
    }
    const auto ri = static_cast<Eigen::Index>(r);
    double tail = 0.0;
    for (Eigen::Index k = ri; k < sv.size(); ++k) {
        if (sv(k) > kRelativeZero * sv(0)) {
            tail += sv(k) * sv(k);
        }
    }
    Eigen::VectorXd inv_sqrt(ri);
    for (Eigen::Index k = 0; k < ri; ++k) {
        inv_sqrt(k) = 1.0 / std::sqrt(sv(k));
    }
    out.rank = r;
    out.discarded_weight = std::sqrt(tail);
    out.singular_values.assign(sv.data(), sv.data() + ri);
    out.p_a = rb * svd.matrixV().leftCols(ri) * inv_sqrt.asDiagonal();
    out.p_b = inv_sqrt.asDiagonal() * svd.matrixU().leftCols(ri).adjoint() * ra;
    return out;
}

/// Tensor form: messages over a doubled bond (ket labels plus starred copies).
inline BondProjectors compress_bond(const Tensor &m_ab, const Tensor &m_ba, std::size_t chi, double kappa) {
    Labels ket = detail::ket_labels(m_ab.labels());
    Labels bra = detail::bra_labels(ket);
    return compress_bond(to_matrix(m_ab, ket, bra), to_matrix(m_ba, ket, bra), chi, kappa);
}

}  // namespace hexsim
