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

// Lazy belief-propagation tensor-network evolution.
//
// Labels: a PEPS site carries physical label p{j}; a PEPO site carries u{j}
// (row, bra side) and d{j} (column, ket side). After compression each site
// pair shares one virtual label {prefix}{a}_{b}. Lazy gate tensors use labels
// built from a per-network counter so no two layers collide. In a doubled
// network the bra copy stars every label except the physical ones.

#include <algorithm>
#include <chrono>
#include <functional>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hexsim/bp.hpp"
#include "hexsim/circuit.hpp"
#include "hexsim/errors.hpp"
#include "hexsim/parallel.hpp"
#include "hexsim/pauli_sum.hpp"
#include "hexsim/tensor.hpp"

namespace hexsim {

enum class StateKind { PEPS, PEPO };
enum class TnMethod { PEPS, PEPO, MIX };

inline std::string tn_method_name(TnMethod m) {
    switch (m) {
        case TnMethod::PEPS:
            return "peps";
        case TnMethod::PEPO:
            return "pepo";
        case TnMethod::MIX:
            return "mix";
    }
    return "?";
}

inline std::string phys_label(StateKind kind, std::size_t j, bool row = true) {
    if (kind == StateKind::PEPS) {
        return "p" + std::to_string(j);
    }
    return (row ? "u" : "d") + std::to_string(j);
}

/// Gate factor on one site: labels "o" (output), "i" (input) and, for
/// two-qubit gates, "g" joining the two factors.
struct GateFactor {
    std::size_t site = 0;
    Tensor tensor;
};

/// Splits a one- or two-qubit gate into site factors; two-qubit gates are
/// split by SVD at their exact operator-Schmidt rank.
inline std::vector<GateFactor> gate_factors(const Gate &g) {
    auto u = local_unitary(g);
    if (g.qubits.size() == 1) {
        return {{g.qubits[0], Tensor({"o", "i"}, {2, 2}, u)}};
    }
    if (g.qubits.size() != 2) {
        throw UnsupportedGateError("tensor-network evolution supports gates on at most two qubits, got " +
                                   std::to_string(g.qubits.size()));
    }
    // M[(o1 i1), (o2 i2)] = U[(o1 o2), (i1 i2)], first qubit most significant.
    MatrixC m(4, 4);
    for (std::size_t o1 = 0; o1 < 2; ++o1) {
        for (std::size_t i1 = 0; i1 < 2; ++i1) {
            for (std::size_t o2 = 0; o2 < 2; ++o2) {
                for (std::size_t i2 = 0; i2 < 2; ++i2) {
                    m(static_cast<Eigen::Index>(o1 * 2 + i1), static_cast<Eigen::Index>(o2 * 2 + i2)) =
                        u[(o1 * 2 + o2) * 4 + i1 * 2 + i2];
                }
            }
        }
    }
    Eigen::JacobiSVD<MatrixC> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto &s = svd.singularValues();
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > kRelativeZero * s(0)) {
        ++r;
    }
    MatrixC a = svd.matrixU().leftCols(r);
    MatrixC b = svd.matrixV().leftCols(r).adjoint();
    for (Eigen::Index k = 0; k < r; ++k) {
        a.col(k) *= std::sqrt(s(k));
        b.row(k) *= std::sqrt(s(k));
    }
    const auto rank = static_cast<std::size_t>(r);
    return {{g.qubits[0], from_matrix(a, {"o", "i"}, {2, 2}, {"g"}, {rank})},
            {g.qubits[1], from_matrix(b, {"g"}, {rank}, {"o", "i"}, {2, 2})}};
}

/// Per-site tensor lists with a counter for fresh labels.
struct LazySites {
    std::vector<std::vector<Tensor>> sites;
    std::string prefix;
    std::size_t counter = 0;

    std::string fresh() {
        return prefix + std::to_string(counter++);
    }

    /// Renames `from` to `to` in whichever tensor of `site` carries it.
    void rename(std::size_t site, const std::string &from, const std::string &to) {
        for (auto &t : sites[site]) {
            if (t.has(from)) {
                t = t.relabeled({{from, to}});
                return;
            }
        }
        throw StructureError("label '" + from + "' not found on site " + std::to_string(site));
    }
};

/// Which open index a gate chain grows from.
enum class Side {
    /// U acting on a ket: gates in time order, new output label.
    Ket,
    /// Right factor of U^dag Phi U: gates in reverse time order, U attached by its output.
    OpColumn,
    /// Left factor of U^dag Phi U: as OpColumn with conj(U).
    OpRow,
};

/// Attaches `gates` to the open labels `open[q]`, advancing each to a fresh label.
inline void attach_gates(LazySites &net, std::vector<std::string> &open, const std::vector<Gate> &gates, Side side) {
    auto apply = [&](const Gate &g) {
        auto factors = gate_factors(g);
        const std::string bond = net.fresh();
        for (auto &f : factors) {
            const std::string next = net.fresh();
            std::map<std::string, std::string> rename{{"g", bond}};
            if (side == Side::Ket) {
                rename["i"] = open[f.site];
                rename["o"] = next;
            } else {
                rename["o"] = open[f.site];
                rename["i"] = next;
            }
            Tensor t = f.tensor.relabeled(rename);
            if (side == Side::OpRow) {
                t = t.conj();
            }
            net.sites[f.site].push_back(std::move(t));
            open[f.site] = next;
        }
    };
    if (side == Side::Ket) {
        std::for_each(gates.begin(), gates.end(), apply);
    } else {
        std::for_each(gates.rbegin(), gates.rend(), apply);
    }
}

/// Gates of each step, index 0 holding step 1.
inline std::vector<std::vector<Gate>> gates_by_step(const Circuit &c) {
    std::vector<std::vector<Gate>> steps(c.steps);
    for (const auto &layer : c.layers) {
        if (layer.step == 0 || layer.step > c.steps) {
            throw ArgumentError("layer step index out of range");
        }
        for (const auto &g : layer.gates) {
            steps[layer.step - 1].push_back(g);
        }
    }
    return steps;
}

struct StepLog {
    std::size_t step = 0;
    std::size_t bp_iterations = 0;
    bool bp_converged = true;
    std::size_t max_bond = 0;
    double discarded_weight = 0.0;
};

/// PEPS or PEPO with one tensor per site and one virtual label per bonded site pair.
struct EvolvingState {
    StateKind kind = StateKind::PEPS;
    std::size_t num_sites = 0;
    std::vector<Tensor> sites;
    /// Virtual labels are {bond_prefix}{a}_{b}.
    std::string bond_prefix = "v";
    std::vector<StepLog> log;
    std::vector<std::string> flags;

    Labels physical(std::size_t j) const {
        if (kind == StateKind::PEPS) {
            return {phys_label(kind, j)};
        }
        return {phys_label(kind, j, true), phys_label(kind, j, false)};
    }

    std::size_t max_bond() const {
        std::size_t m = 1;
        for (std::size_t j = 0; j < num_sites; ++j) {
            auto phys = physical(j);
            for (std::size_t k = 0; k < sites[j].rank(); ++k) {
                if (std::find(phys.begin(), phys.end(), sites[j].labels()[k]) == phys.end()) {
                    m = std::max(m, sites[j].dims()[k]);
                }
            }
        }
        return m;
    }

    void flag(const std::string &f) {
        if (std::find(flags.begin(), flags.end(), f) == flags.end()) {
            flags.push_back(f);
        }
    }

    /// |0...0> as a bond-free PEPS.
    static EvolvingState zero_state(std::size_t n) {
        EvolvingState s;
        s.kind = StateKind::PEPS;
        s.num_sites = n;
        s.bond_prefix = "v";
        for (std::size_t j = 0; j < n; ++j) {
            s.sites.push_back(Tensor({phys_label(StateKind::PEPS, j)}, {2}, {1.0, 0.0}));
        }
        return s;
    }

    /// A Pauli word (coefficient excluded) as a bond-free PEPO.
    static EvolvingState pauli_operator(const PauliWord &w) {
        EvolvingState s;
        s.kind = StateKind::PEPO;
        s.num_sites = w.num_qubits();
        s.bond_prefix = "w";
        const cplx i1{0.0, 1.0};
        for (std::size_t j = 0; j < s.num_sites; ++j) {
            std::vector<cplx> m;
            switch (w.letter(j)) {
                case 'X':
                    m = {0.0, 1.0, 1.0, 0.0};
                    break;
                case 'Y':
                    m = {0.0, -i1, i1, 0.0};
                    break;
                case 'Z':
                    m = {1.0, 0.0, 0.0, -1.0};
                    break;
                default:
                    m = {1.0, 0.0, 0.0, 1.0};
                    break;
            }
            s.sites.push_back(Tensor({phys_label(StateKind::PEPO, j, true), phys_label(StateKind::PEPO, j, false)},
                                     {2, 2}, m));
        }
        return s;
    }
};

/// Site tensors of `state` with physical labels moved to fresh names, plus
/// the open label lists that gate chains extend.
struct OpenState {
    LazySites net;
    std::vector<std::string> open_ket;
    std::vector<std::string> open_row;
    std::vector<std::string> open_col;
};

inline OpenState open_state(const EvolvingState &state, const std::string &prefix) {
    OpenState os;
    os.net.prefix = prefix;
    os.net.sites.resize(state.num_sites);
    for (std::size_t j = 0; j < state.num_sites; ++j) {
        os.net.sites[j].push_back(state.sites[j]);
        if (state.kind == StateKind::PEPS) {
            std::string f = os.net.fresh();
            os.net.rename(j, phys_label(StateKind::PEPS, j), f);
            os.open_ket.push_back(f);
        } else {
            std::string fr = os.net.fresh();
            std::string fc = os.net.fresh();
            os.net.rename(j, phys_label(StateKind::PEPO, j, true), fr);
            os.net.rename(j, phys_label(StateKind::PEPO, j, false), fc);
            os.open_row.push_back(fr);
            os.open_col.push_back(fc);
        }
    }
    return os;
}

/// Applies one step lazily: U|psi> for a PEPS, U^dag Phi U for a PEPO.
inline void attach_step(OpenState &os, StateKind kind, const std::vector<Gate> &gates) {
    if (kind == StateKind::PEPS) {
        attach_gates(os.net, os.open_ket, gates, Side::Ket);
    } else {
        attach_gates(os.net, os.open_col, gates, Side::OpColumn);
        attach_gates(os.net, os.open_row, gates, Side::OpRow);
    }
}

/// Gives the open labels their final names.
inline void close_state(OpenState &os, StateKind kind, const std::function<std::string(std::size_t, int)> &name) {
    for (std::size_t j = 0; j < os.net.sites.size(); ++j) {
        if (kind == StateKind::PEPS) {
            os.net.rename(j, os.open_ket[j], name(j, 0));
        } else {
            os.net.rename(j, os.open_row[j], name(j, 1));
            os.net.rename(j, os.open_col[j], name(j, 2));
        }
    }
}

/// Doubled network <X|X>: ket tensors plus conjugates with every label
/// starred except those in `keep`.
inline SiteNetwork doubled_network(const std::vector<std::vector<Tensor>> &sites, const std::set<std::string> &keep) {
    SiteNetwork sn(sites.size());
    for (std::size_t j = 0; j < sites.size(); ++j) {
        for (const auto &t : sites[j]) {
            sn.add(j, t);
            std::map<std::string, std::string> star;
            for (const auto &l : t.labels()) {
                if (!keep.count(l)) {
                    star[l] = bra_label(l);
                }
            }
            sn.add(j, t.conj().relabeled(star));
        }
    }
    sn.finalize();
    return sn;
}

inline std::set<std::string> physical_set(const EvolvingState &s) {
    std::set<std::string> keep;
    for (std::size_t j = 0; j < s.num_sites; ++j) {
        for (const auto &l : s.physical(j)) {
            keep.insert(l);
        }
    }
    return keep;
}

struct CompressOptions {
    std::size_t chi = 16;
    double kappa = 5e-6;
    BpOptions bp{.mode = BpMode::TwoNorm};
    std::size_t workers = 1;
};

/// Applies one step of gates to `state` and compresses every bond with
/// projectors from two-norm BP on the lazy doubled network.
inline void evolve(EvolvingState &state, const std::vector<Gate> &gates, std::size_t step, const CompressOptions &opt) {
    if (opt.chi == 0) {
        throw ArgumentError("chi must be at least 1");
    }
    StepLog entry;
    entry.step = step;
    if (gates.empty()) {
        entry.max_bond = state.max_bond();
        state.log.push_back(entry);
        return;
    }
    OpenState os = open_state(state, "l");
    attach_step(os, state.kind, gates);
    close_state(os, state.kind, [&](std::size_t j, int which) {
        return which == 0 ? phys_label(StateKind::PEPS, j) : phys_label(StateKind::PEPO, j, which == 1);
    });
    const auto keep = physical_set(state);
    SiteNetwork sn = doubled_network(os.net.sites, keep);
    BpOptions bopt = opt.bp;
    bopt.mode = BpMode::TwoNorm;
    bopt.workers = opt.workers;
    MessageSet ms = bp_iterate(sn, bopt);
    entry.bp_iterations = ms.iterations;
    entry.bp_converged = ms.converged;
    if (!ms.converged) {
        state.flag("bp_nonconverged");
    }

    const auto &bonds = sn.bonds();
    std::vector<std::vector<Tensor>> extra(state.num_sites);
    std::vector<BondProjectors> projectors(bonds.size());
    parallel_for_each_index(bonds.size(), opt.workers, [&](std::size_t e) {
        projectors[e] = compress_bond(ms.messages[e][0], ms.messages[e][1], opt.chi, opt.kappa);
    });
    std::vector<std::pair<std::string, std::string>> final_names;
    for (std::size_t e = 0; e < bonds.size(); ++e) {
        const Bond &b = bonds[e];
        auto &p = projectors[e];
        if (p.negative_flag) {
            state.flag("negative_message");
        }
        if (p.dead) {
            state.flag("dead_bond");
            const auto d = std::max<Eigen::Index>(p.p_a.rows(), p.p_b.cols());
            p.p_a = MatrixC::Zero(d, 1);
            p.p_b = MatrixC::Zero(1, d);
            p.rank = 1;
        }
        Labels ket = detail::ket_labels(b.labels);
        Dims kd;
        for (const auto &l : ket) {
            kd.push_back(b.dims[static_cast<std::size_t>(std::find(b.labels.begin(), b.labels.end(), l) -
                                                         b.labels.begin())]);
        }
        const std::string tmp = "n" + std::to_string(b.a) + "_" + std::to_string(b.b);
        extra[b.a].push_back(from_matrix(p.p_a, ket, kd, {tmp}, {p.rank}));
        extra[b.b].push_back(from_matrix(p.p_b, {tmp}, {p.rank}, ket, kd));
        entry.discarded_weight += p.discarded_weight;
        entry.max_bond = std::max(entry.max_bond, p.rank);
    }
    std::vector<Tensor> next(state.num_sites);
    parallel_for_each_index(state.num_sites, opt.workers, [&](std::size_t j) {
        std::vector<Tensor> ts = os.net.sites[j];
        ts.insert(ts.end(), extra[j].begin(), extra[j].end());
        Labels out = state.physical(j);
        std::map<std::string, std::string> rename;
        for (std::size_t e : sn.site_bonds(j)) {
            const Bond &b = bonds[e];
            const std::string suffix = std::to_string(b.a) + "_" + std::to_string(b.b);
            out.push_back("n" + suffix);
            rename["n" + suffix] = state.bond_prefix + suffix;
        }
        next[j] = contract(ts, out).relabeled(rename);
    });
    state.sites = std::move(next);
    state.log.push_back(entry);
}

/// <X|X> by L1BP on the doubled network of a compressed state.
inline BetheValue state_norm_squared(const EvolvingState &state, const BpOptions &bp, std::size_t workers,
                                     std::size_t *iterations = nullptr, bool *converged = nullptr) {
    std::vector<std::vector<Tensor>> sites(state.num_sites);
    for (std::size_t j = 0; j < state.num_sites; ++j) {
        sites[j].push_back(state.sites[j]);
    }
    SiteNetwork sn = doubled_network(sites, physical_set(state));
    BpOptions bopt = bp;
    bopt.mode = BpMode::TwoNorm;
    bopt.workers = workers;
    MessageSet ms = bp_iterate(sn, bopt);
    if (iterations) {
        *iterations = ms.iterations;
    }
    if (converged) {
        *converged = ms.converged;
    }
    return l1bp_log_value(sn, ms);
}

struct TnOptions {
    std::size_t chi = 16;
    double kappa = 5e-6;
    BpOptions bp{};
    bool prune = true;
    std::size_t workers = 1;
};

struct TnResult {
    double expectation = 0.0;
    double imaginary = 0.0;
    double n_psi = 1.0;
    double n_o = 1.0;
    double n_mix = 1.0;
    TnMethod method = TnMethod::MIX;
    std::size_t chi = 0;
    double kappa = 0.0;
    /// Steps held by the compressed PEPS, the lazy layers and the compressed PEPO.
    std::size_t psi_steps = 0;
    std::size_t lazy_steps = 0;
    std::size_t op_steps = 0;
    std::size_t sandwich_bp_iterations = 0;
    std::size_t max_bond = 1;
    std::vector<StepLog> psi_log;
    std::vector<StepLog> op_log;
    std::vector<std::string> flags;
    double wall_time = 0.0;

    bool flagged() const {
        return !flags.empty();
    }
};

/// Steps handled by (PEPS compression, lazy layers, PEPO compression).
struct TnSplit {
    std::size_t psi = 0;
    std::size_t lazy = 0;
    std::size_t op = 0;
};

inline TnSplit tn_split(TnMethod method, std::size_t steps, std::size_t chi) {
    TnSplit s;
    switch (method) {
        case TnMethod::PEPS:
            s.psi = steps >= 2 ? steps - 2 : 0;
            s.lazy = steps - s.psi;
            break;
        case TnMethod::PEPO: {
            std::size_t tau = static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(chi)) / 2.0));
            s.lazy = std::min(tau, steps);
            s.op = steps - s.lazy;
            break;
        }
        case TnMethod::MIX:
            s.psi = (steps + 1) / 2;
            s.op = steps - s.psi;
            break;
    }
    return s;
}

/// <psi| V^dag Phi V |psi> with V the lazy steps, as a closed site network.
/// The ket ends on d{j}; the bra is its conjugate ending on u{j}.
inline SiteNetwork sandwich_network(const EvolvingState &psi, const std::vector<std::vector<Gate>> &lazy_steps,
                                    const EvolvingState &phi) {
    if (psi.kind != StateKind::PEPS || phi.kind != StateKind::PEPO || psi.num_sites != phi.num_sites) {
        throw ArgumentError("sandwich needs a PEPS and a PEPO on the same sites");
    }
    const std::size_t n = psi.num_sites;
    OpenState ket = open_state(psi, "k");
    for (const auto &gates : lazy_steps) {
        attach_step(ket, StateKind::PEPS, gates);
    }
    close_state(ket, StateKind::PEPS, [](std::size_t j, int) { return phys_label(StateKind::PEPO, j, false); });
    SiteNetwork sn(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::string d = phys_label(StateKind::PEPO, j, false);
        const std::string u = phys_label(StateKind::PEPO, j, true);
        for (const auto &t : ket.net.sites[j]) {
            sn.add(j, t);
            std::map<std::string, std::string> star;
            for (const auto &l : t.labels()) {
                star[l] = l == d ? u : bra_label(l);
            }
            sn.add(j, t.conj().relabeled(star));
        }
        sn.add(j, phi.sites[j]);
    }
    sn.finalize();
    return sn;
}

/// <psi(tau)| Phi(tau+1) |psi(tau)> for a single Pauli word, never renormalized.
inline TnResult run_tn(const Circuit &circuit, const PauliSum &observable, TnMethod method, const TnOptions &opt) {
    auto start = std::chrono::steady_clock::now();
    if (observable.size() != 1) {
        throw ArgumentError("run_tn takes a single Pauli word; sum terms by linearity");
    }
    if (observable.num_qubits() != circuit.num_qubits) {
        throw ArgumentError("observable and circuit qubit counts differ");
    }
    const Circuit c = opt.prune ? lightcone_prune(circuit, observable) : circuit;
    const auto steps = gates_by_step(c);
    const std::size_t n = c.num_qubits;
    const std::size_t T = steps.size();

    TnResult res;
    res.method = method;
    res.chi = opt.chi;
    res.kappa = opt.kappa;
    const TnSplit split = tn_split(method, T, opt.chi);
    res.psi_steps = split.psi;
    res.lazy_steps = split.lazy;
    res.op_steps = split.op;

    CompressOptions copt{opt.chi, opt.kappa, opt.bp, opt.workers};
    EvolvingState psi = EvolvingState::zero_state(n);
    for (std::size_t t = 0; t < split.psi; ++t) {
        evolve(psi, steps[t], t + 1, copt);
    }
    EvolvingState phi = EvolvingState::pauli_operator(observable.term_word(0));
    for (std::size_t t = T; t > split.psi + split.lazy; --t) {
        evolve(phi, steps[t - 1], t, copt);
    }

    if (split.psi > 0) {
        res.n_psi = std::sqrt(std::abs(state_norm_squared(psi, opt.bp, opt.workers).value()));
    }
    if (split.op > 0) {
        BetheValue z = state_norm_squared(phi, opt.bp, opt.workers);
        z.log_abs -= static_cast<double>(n) * std::log(2.0);
        res.n_o = std::sqrt(std::abs(z.value()));
    }
    res.n_mix = res.n_psi * res.n_o;

    std::vector<std::vector<Gate>> lazy(steps.begin() + static_cast<std::ptrdiff_t>(split.psi),
                                        steps.begin() + static_cast<std::ptrdiff_t>(split.psi + split.lazy));
    SiteNetwork sn = sandwich_network(psi, lazy, phi);
    BpOptions bopt = opt.bp;
    bopt.mode = BpMode::OneNorm;
    bopt.workers = opt.workers;
    MessageSet ms = bp_iterate(sn, bopt);
    res.sandwich_bp_iterations = ms.iterations;
    cplx value = observable.coeff(0) * l1bp_value(sn, ms);

    res.expectation = value.real();
    res.imaginary = value.imag();
    res.psi_log = psi.log;
    res.op_log = phi.log;
    res.max_bond = std::max(psi.max_bond(), phi.max_bond());
    for (const auto &f : psi.flags) {
        res.flags.push_back("psi_" + f);
    }
    for (const auto &f : phi.flags) {
        res.flags.push_back("op_" + f);
    }
    if (!ms.converged) {
        res.flags.push_back("sandwich_bp_nonconverged");
    }
    if (std::abs(value.imag()) > 1e-8 * std::max(1.0, std::abs(value))) {
        res.flags.push_back("imaginary_residue");
    }
    if (res.n_mix > 1.0 + 1e-8) {
        res.flags.push_back("norm_above_one");
    }
    res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

/// Dense amplitudes of a PEPS, bit q of the index being qubit q.
inline std::vector<cplx> to_dense_state(const EvolvingState &s) {
    if (s.kind != StateKind::PEPS) {
        throw ArgumentError("to_dense_state needs a PEPS");
    }
    Labels out;
    for (std::size_t j = s.num_sites; j-- > 0;) {
        out.push_back(phys_label(StateKind::PEPS, j));
    }
    return contract(s.sites, out).data();
}

/// Dense matrix of a PEPO, row index over u{j}, column over d{j}, bit q = qubit q.
inline MatrixC to_dense_operator(const EvolvingState &s) {
    if (s.kind != StateKind::PEPO) {
        throw ArgumentError("to_dense_operator needs a PEPO");
    }
    Labels rows;
    Labels cols;
    for (std::size_t j = s.num_sites; j-- > 0;) {
        rows.push_back(phys_label(StateKind::PEPO, j, true));
        cols.push_back(phys_label(StateKind::PEPO, j, false));
    }
    Labels out = rows;
    out.insert(out.end(), cols.begin(), cols.end());
    Tensor t = contract(s.sites, out);
    return to_matrix(t, rows, cols);
}

}  // namespace hexsim
