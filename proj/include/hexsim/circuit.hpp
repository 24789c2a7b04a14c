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

// Circuits of Clifford gates and Pauli rotations exp(-i theta sigma / 2).
//
// A circuit is an ordered list of layers in time order (first layer acts on
// |0...0> first). Every layer carries its explicit gates and the step it
// belongs to; marker layers separate steps so tensor-network code can apply a
// whole step at once.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "hexsim/errors.hpp"
#include "hexsim/lattice.hpp"
#include "hexsim/pauli.hpp"
#include "hexsim/pauli_sum.hpp"
#include "json.hpp"

namespace hexsim {

enum class GateKind { H, S, Sdg, X, Y, Z, CX, CZ, Rotation };

inline std::string gate_name(GateKind k) {
    switch (k) {
        case GateKind::H:
            return "H";
        case GateKind::S:
            return "S";
        case GateKind::Sdg:
            return "SDG";
        case GateKind::X:
            return "X";
        case GateKind::Y:
            return "Y";
        case GateKind::Z:
            return "Z";
        case GateKind::CX:
            return "CX";
        case GateKind::CZ:
            return "CZ";
        case GateKind::Rotation:
            return "R";
    }
    return "?";
}

struct Gate {
    GateKind kind = GateKind::H;
    /// Support, in the order the local unitary indexes it (first = most significant).
    std::vector<std::size_t> qubits;
    /// Rotation axis over all circuit qubits (rotations only).
    PauliWord axis;
    double angle = 0.0;

    static Gate rotation(PauliWord axis, double angle) {
        Gate g;
        g.kind = GateKind::Rotation;
        g.qubits = axis.support();
        g.axis = std::move(axis);
        g.angle = angle;
        return g;
    }

    static Gate clifford(GateKind kind, std::vector<std::size_t> qubits) {
        if (kind == GateKind::Rotation) {
            throw ArgumentError("use Gate::rotation for rotations");
        }
        std::size_t arity = (kind == GateKind::CX || kind == GateKind::CZ) ? 2 : 1;
        if (qubits.size() != arity || (arity == 2 && qubits[0] == qubits[1])) {
            throw ArgumentError("gate " + gate_name(kind) + " needs " + std::to_string(arity) + " distinct qubits");
        }
        Gate g;
        g.kind = kind;
        g.qubits = std::move(qubits);
        return g;
    }

    bool is_rotation() const {
        return kind == GateKind::Rotation;
    }
};

enum class LayerKind { RX, RZZ, Gates, Marker };

inline std::string layer_kind_name(LayerKind k) {
    switch (k) {
        case LayerKind::RX:
            return "rx";
        case LayerKind::RZZ:
            return "rzz";
        case LayerKind::Gates:
            return "gates";
        case LayerKind::Marker:
            return "marker";
    }
    return "?";
}

struct Layer {
    LayerKind kind = LayerKind::Gates;
    /// Step index, 1-based; the optional trailing X layer gets its own step.
    std::size_t step = 1;
    /// Common angle for RX / RZZ layers.
    double angle = 0.0;
    std::vector<Gate> gates;
};

struct Circuit {
    std::size_t num_qubits = 0;
    /// Number of distinct steps (kicked-Ising steps plus any trailing layer).
    std::size_t steps = 0;
    std::vector<Layer> layers;

    std::size_t gate_count() const {
        std::size_t c = 0;
        for (const auto &l : layers) {
            c += l.gates.size();
        }
        return c;
    }

    std::size_t rotation_count() const {
        std::size_t c = 0;
        for (const auto &l : layers) {
            for (const auto &g : l.gates) {
                c += g.is_rotation() ? 1 : 0;
            }
        }
        return c;
    }

    /// Gates of each step in time order; index 0 is step 1.
    std::vector<std::vector<Gate>> gates_by_step() const {
        std::vector<std::vector<Gate>> out(steps);
        for (const auto &l : layers) {
            if (l.step == 0 || l.step > steps) {
                throw ArgumentError("layer step index out of range");
            }
            for (const auto &g : l.gates) {
                out[l.step - 1].push_back(g);
            }
        }
        return out;
    }

    void validate() const {
        for (const auto &l : layers) {
            for (const auto &g : l.gates) {
                for (std::size_t q : g.qubits) {
                    if (q >= num_qubits) {
                        throw ArgumentError("gate " + gate_name(g.kind) + " acts on qubit " + std::to_string(q) +
                                            " outside the circuit");
                    }
                }
                if (g.is_rotation() && g.axis.num_qubits() != num_qubits) {
                    throw ArgumentError("rotation axis size does not match the circuit");
                }
            }
        }
    }
};

/// Kicked Ising circuit: each step applies exp(-i theta_h X_j / 2) on every
/// node, then exp(+i pi Z_j Z_k / 4) on every edge (a rotation with angle
/// -pi/2). With `extra_x_layer` one more X layer is appended as step T+1.
inline Circuit kicked_ising(const Lattice &lat, double theta_h, std::size_t steps, bool extra_x_layer = false) {
    if (steps == 0) {
        throw ArgumentError("kicked_ising needs at least one step");
    }
    lat.validate();
    Circuit c;
    c.num_qubits = lat.num_nodes;
    const std::size_t n = lat.num_nodes;
    auto rx_layer = [&](std::size_t step) {
        Layer l{LayerKind::RX, step, theta_h, {}};
        for (std::size_t q = 0; q < n; ++q) {
            l.gates.push_back(Gate::rotation(PauliWord::single(n, q, 'X'), theta_h));
        }
        return l;
    };
    for (std::size_t t = 1; t <= steps; ++t) {
        c.layers.push_back(Layer{LayerKind::Marker, t, 0.0, {}});
        c.layers.push_back(rx_layer(t));
        Layer zz{LayerKind::RZZ, t, -std::numbers::pi / 2, {}};
        for (auto [u, v] : lat.edges) {
            PauliWord axis(n);
            axis.set(u, 'Z');
            axis.set(v, 'Z');
            zz.gates.push_back(Gate::rotation(axis, -std::numbers::pi / 2));
        }
        c.layers.push_back(std::move(zz));
    }
    c.steps = steps;
    if (extra_x_layer) {
        c.steps = steps + 1;
        c.layers.push_back(Layer{LayerKind::Marker, steps + 1, 0.0, {}});
        c.layers.push_back(rx_layer(steps + 1));
    }
    return c;
}

/// Union of the supports of all terms.
inline std::set<std::size_t> observable_support(const PauliSum &o) {
    std::set<std::size_t> s;
    for (std::size_t i = 0; i < o.size(); ++i) {
        for (std::size_t q : o.term_word(i).support()) {
            s.insert(q);
        }
    }
    return s;
}

/// Drops every gate outside the backward causal cone of the observable's
/// support. Gates inside the cone extend it by their own support.
inline Circuit lightcone_prune(const Circuit &c, const PauliSum &o) {
    std::vector<bool> cone(c.num_qubits, false);
    for (std::size_t q : observable_support(o)) {
        cone[q] = true;
    }
    Circuit out = c;
    for (auto layer = out.layers.rbegin(); layer != out.layers.rend(); ++layer) {
        // RX and RZZ layers consist of mutually commuting gates, so each one is
        // tested against the cone as it stood after the layer.
        const bool simultaneous = layer->kind == LayerKind::RX || layer->kind == LayerKind::RZZ;
        const std::vector<bool> frozen = cone;
        const std::vector<bool> &probe = simultaneous ? frozen : cone;
        std::vector<Gate> kept;
        for (auto g = layer->gates.rbegin(); g != layer->gates.rend(); ++g) {
            bool hit = false;
            for (std::size_t q : g->qubits) {
                hit = hit || probe[q];
            }
            if (hit) {
                for (std::size_t q : g->qubits) {
                    cone[q] = true;
                }
                kept.push_back(std::move(*g));
            }
        }
        std::reverse(kept.begin(), kept.end());
        layer->gates = std::move(kept);
    }
    return out;
}

/// Dense unitary of a gate on its own support: 2^k x 2^k row-major, row =
/// output basis state, column = input, first listed qubit most significant.
inline std::vector<cplx> local_unitary(const Gate &g) {
    const double r = 1.0 / std::numbers::sqrt2;
    const cplx i1{0.0, 1.0};
    switch (g.kind) {
        case GateKind::H:
            return {r, r, r, -r};
        case GateKind::S:
            return {1.0, 0.0, 0.0, i1};
        case GateKind::Sdg:
            return {1.0, 0.0, 0.0, -i1};
        case GateKind::X:
            return {0.0, 1.0, 1.0, 0.0};
        case GateKind::Y:
            return {0.0, -i1, i1, 0.0};
        case GateKind::Z:
            return {1.0, 0.0, 0.0, -1.0};
        case GateKind::CX:
            return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0};
        case GateKind::CZ:
            return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1};
        case GateKind::Rotation:
            break;
    }
    // cos(theta/2) I - i sin(theta/2) sigma, with sigma built site by site.
    const std::size_t k = g.qubits.size();
    const std::size_t dim = std::size_t{1} << k;
    std::vector<cplx> sigma(dim * dim, 0.0);
    for (std::size_t col = 0; col < dim; ++col) {
        std::size_t row = col;
        cplx amp = 1.0;
        for (std::size_t s = 0; s < k; ++s) {
            std::size_t bit = k - 1 - s;
            bool in = (col >> bit) & 1;
            switch (g.axis.letter(g.qubits[s])) {
                case 'X':
                    row ^= std::size_t{1} << bit;
                    break;
                case 'Y':
                    row ^= std::size_t{1} << bit;
                    amp *= in ? -i1 : i1;
                    break;
                case 'Z':
                    amp *= in ? -1.0 : 1.0;
                    break;
                default:
                    break;
            }
        }
        sigma[row * dim + col] = amp;
    }
    std::vector<cplx> u(dim * dim, 0.0);
    const double c = std::cos(g.angle / 2);
    const double s = std::sin(g.angle / 2);
    for (std::size_t a = 0; a < dim; ++a) {
        u[a * dim + a] = c;
    }
    for (std::size_t idx = 0; idx < dim * dim; ++idx) {
        u[idx] += -i1 * s * sigma[idx];
    }
    return u;
}

inline nlohmann::json to_json(const Circuit &c) {
    nlohmann::json j;
    j["num_qubits"] = c.num_qubits;
    j["steps"] = c.steps;
    j["layers"] = nlohmann::json::array();
    for (const auto &l : c.layers) {
        nlohmann::json jl;
        jl["kind"] = layer_kind_name(l.kind);
        jl["step"] = l.step;
        jl["angle"] = l.angle;
        jl["gates"] = nlohmann::json::array();
        for (const auto &g : l.gates) {
            nlohmann::json jg;
            jg["kind"] = gate_name(g.kind);
            jg["qubits"] = g.qubits;
            if (g.is_rotation()) {
                jg["axis"] = format_pauli(g.axis);
                jg["angle"] = g.angle;
            }
            jl["gates"].push_back(std::move(jg));
        }
        j["layers"].push_back(std::move(jl));
    }
    return j;
}

}  // namespace hexsim
