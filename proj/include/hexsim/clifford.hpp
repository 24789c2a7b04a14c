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

// Clifford tableaux in the Heisenberg picture and Clifford recompilation.
//
// A tableau stores, for every generator G in {X_j, Z_j}, the image C^dag G C
// as a phased Hermitian word (phase 0 or 2, i.e. a sign).

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hexsim/circuit.hpp"
#include "hexsim/errors.hpp"
#include "hexsim/pauli.hpp"
#include "hexsim/pauli_sum.hpp"

namespace hexsim {

class CliffordTableau {
  public:
    CliffordTableau() = default;

    explicit CliffordTableau(std::size_t num_qubits) : n_(num_qubits) {
        images_.reserve(2 * num_qubits);
        for (std::size_t j = 0; j < num_qubits; ++j) {
            images_.push_back({PauliWord::single(num_qubits, j, 'X'), 0});
            images_.push_back({PauliWord::single(num_qubits, j, 'Z'), 0});
        }
    }

    static CliffordTableau identity(std::size_t num_qubits) {
        return CliffordTableau(num_qubits);
    }

    /// Tableau of exp(-i k (pi/2) sigma / 2), i.e. a Pauli rotation by a multiple of pi/2.
    static CliffordTableau pauli_rotation(const PauliWord &axis, int quarter_turns) {
        CliffordTableau t(axis.num_qubits());
        t.then_pauli_rotation(axis, quarter_turns);
        return t;
    }

    /// Tableau of a single Clifford gate, or of a rotation whose angle is a multiple of pi/2.
    static CliffordTableau from_gate(const Gate &g, std::size_t num_qubits) {
        CliffordTableau t(num_qubits);
        t.then_gate(g);
        return t;
    }

    std::size_t num_qubits() const {
        return n_;
    }
    const PhasedWord &x_image(std::size_t j) const {
        return images_[2 * j];
    }
    const PhasedWord &z_image(std::size_t j) const {
        return images_[2 * j + 1];
    }

    /// C^dag P C with exact phase tracking.
    PhasedWord conjugate(const PhasedWord &p) const {
        if (p.word.num_qubits() != n_) {
            throw ArgumentError("tableau/Pauli size mismatch");
        }
        const std::size_t nw = p.word.num_words();
        // op(z, x) = (-i)^{y} prod Z^z prod X^x, and conjugation is multiplicative.
        PhasedWord acc{PauliWord(n_), (p.phase + 3 * static_cast<int>(packed::y_count(p.word.data(), nw))) & 3};
        std::vector<Word> scratch(2 * nw);
        auto absorb = [&](const PhasedWord &img) {
            int k = packed::multiply(acc.word.data(), img.word.data(), scratch.data(), nw);
            std::copy(scratch.begin(), scratch.end(), acc.word.data());
            acc.phase = (acc.phase + k + img.phase) & 3;
        };
        for (std::size_t q : p.word.support()) {
            if (p.word.z_bit(q)) {
                absorb(z_image(q));
            }
        }
        for (std::size_t q : p.word.support()) {
            if (p.word.x_bit(q)) {
                absorb(x_image(q));
            }
        }
        return acc;
    }

    PhasedWord conjugate(const PauliWord &p) const {
        return conjugate(PhasedWord{p, 0});
    }

    /// In place: this <- this o R, where R = exp(-i k (pi/2) sigma / 2) acts
    /// first on the Pauli being conjugated.
    void then_pauli_rotation(const PauliWord &axis, int quarter_turns) {
        if (axis.num_qubits() != n_) {
            throw ArgumentError("rotation axis size mismatch");
        }
        int k = ((quarter_turns % 4) + 4) % 4;
        if (k == 0) {
            return;
        }
        PhasedWord axis_image = conjugate(axis);
        // Generators commute with sigma unless they sit on its support.
        for (std::size_t q : axis.support()) {
            for (std::size_t which = 0; which < 2; ++which) {
                PauliWord g = PauliWord::single(n_, q, which == 0 ? 'X' : 'Z');
                if (!anticommutes(g, axis)) {
                    continue;
                }
                PhasedWord &img = images_[2 * q + which];
                if (k == 2) {
                    img.phase = (img.phase + 2) & 3;
                } else {
                    // R^dag G R = +-i sigma G for an anticommuting generator.
                    PhasedWord prod = pauli_mul(axis_image, img);
                    prod.phase = (prod.phase + (k == 1 ? 1 : 3)) & 3;
                    img = std::move(prod);
                }
            }
        }
    }

    /// In place: this <- this o C(g) for a Clifford gate g.
    void then_gate(const Gate &g) {
        if (g.kind == GateKind::Rotation) {
            auto folded = quarter_turns_of(g.angle);
            if (!folded) {
                throw UnsupportedGateError("rotation angle " + std::to_string(g.angle) +
                                           " is not a multiple of pi/2");
            }
            then_pauli_rotation(g.axis, *folded);
            return;
        }
        for (std::size_t q : g.qubits) {
            if (q >= n_) {
                throw ArgumentError("gate qubit out of range");
            }
        }
        // Heisenberg images of the gate's own local generators.
        std::vector<std::pair<std::size_t, PhasedWord>> updates;
        auto word = [&](std::initializer_list<std::pair<std::size_t, char>> letters, int sign) {
            PauliWord w(n_);
            for (auto [q, l] : letters) {
                w.set(q, l);
            }
            return PhasedWord{w, sign < 0 ? 2 : 0};
        };
        const std::size_t a = g.qubits[0];
        switch (g.kind) {
            case GateKind::H:
                updates = {{2 * a, word({{a, 'Z'}}, 1)}, {2 * a + 1, word({{a, 'X'}}, 1)}};
                break;
            case GateKind::S:
                updates = {{2 * a, word({{a, 'Y'}}, -1)}, {2 * a + 1, word({{a, 'Z'}}, 1)}};
                break;
            case GateKind::Sdg:
                updates = {{2 * a, word({{a, 'Y'}}, 1)}, {2 * a + 1, word({{a, 'Z'}}, 1)}};
                break;
            case GateKind::X:
                updates = {{2 * a, word({{a, 'X'}}, 1)}, {2 * a + 1, word({{a, 'Z'}}, -1)}};
                break;
            case GateKind::Y:
                updates = {{2 * a, word({{a, 'X'}}, -1)}, {2 * a + 1, word({{a, 'Z'}}, -1)}};
                break;
            case GateKind::Z:
                updates = {{2 * a, word({{a, 'X'}}, -1)}, {2 * a + 1, word({{a, 'Z'}}, 1)}};
                break;
            case GateKind::CX: {
                const std::size_t b = g.qubits[1];
                updates = {{2 * a, word({{a, 'X'}, {b, 'X'}}, 1)},
                           {2 * a + 1, word({{a, 'Z'}}, 1)},
                           {2 * b, word({{b, 'X'}}, 1)},
                           {2 * b + 1, word({{a, 'Z'}, {b, 'Z'}}, 1)}};
                break;
            }
            case GateKind::CZ: {
                const std::size_t b = g.qubits[1];
                updates = {{2 * a, word({{a, 'X'}, {b, 'Z'}}, 1)},
                           {2 * a + 1, word({{a, 'Z'}}, 1)},
                           {2 * b, word({{a, 'Z'}, {b, 'X'}}, 1)},
                           {2 * b + 1, word({{b, 'Z'}}, 1)}};
                break;
            }
            case GateKind::Rotation:
                break;
        }
        std::vector<std::pair<std::size_t, PhasedWord>> resolved;
        resolved.reserve(updates.size());
        for (auto &[slot, local] : updates) {
            resolved.emplace_back(slot, conjugate(local));
        }
        for (auto &[slot, img] : resolved) {
            images_[slot] = std::move(img);
        }
    }

    /// Images preserve the canonical commutation relations and are Hermitian.
    bool is_symplectic() const {
        for (std::size_t i = 0; i < images_.size(); ++i) {
            if (images_[i].phase % 2 != 0) {
                return false;
            }
            for (std::size_t j = i + 1; j < images_.size(); ++j) {
                bool expect = (i / 2 == j / 2);
                if (anticommutes(images_[i].word, images_[j].word) != expect) {
                    return false;
                }
            }
        }
        return true;
    }

    CliffordTableau inverse() const {
        CliffordTableau inv(n_);
        for (std::size_t slot = 0; slot < images_.size(); ++slot) {
            const PauliWord &target = inv.images_[slot].word;
            // The preimage Q of a generator G is fixed by anticommutation:
            // x_j(Q) = [G anticommutes with C(Z_j)], z_j(Q) = [G anticommutes with C(X_j)].
            PauliWord q(n_);
            for (std::size_t j = 0; j < n_; ++j) {
                bool x = anticommutes(target, z_image(j).word);
                bool z = anticommutes(target, x_image(j).word);
                q.set(j, x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I'));
            }
            PhasedWord back = conjugate(q);
            if (back.word != target) {
                throw NumericalError("tableau is not invertible");
            }
            inv.images_[slot] = PhasedWord{std::move(q), (4 - back.phase) & 3};
        }
        return inv;
    }

    friend bool operator==(const CliffordTableau &, const CliffordTableau &) = default;
    friend CliffordTableau compose(const CliffordTableau &first, const CliffordTableau &second);

    /// k with angle = k pi/2 (within 1e-12), if any.
    static std::optional<int> quarter_turns_of(double angle) {
        double k = std::round(angle / (std::numbers::pi / 2));
        if (std::abs(angle - k * (std::numbers::pi / 2)) > 1e-12) {
            return std::nullopt;
        }
        return static_cast<int>(std::fmod(k, 4.0));
    }

  private:
    std::size_t n_ = 0;
    std::vector<PhasedWord> images_;
};

/// conjugate(compose(first, second), p) == second.conjugate(first.conjugate(p)).
inline CliffordTableau compose(const CliffordTableau &first, const CliffordTableau &second) {
    if (first.num_qubits() != second.num_qubits()) {
        throw ArgumentError("tableau size mismatch");
    }
    CliffordTableau result = first;
    for (auto &img : result.images_) {
        img = second.conjugate(img);
    }
    return result;
}

inline PhasedWord conjugate(const CliffordTableau &c, const PhasedWord &p) {
    return c.conjugate(p);
}

/// theta = folded + k pi/2 with folded in (-pi/4, pi/4]; |folded| < 1e-12 snaps to 0.
struct FoldedAngle {
    double angle = 0.0;
    int quarter_turns = 0;
};

inline FoldedAngle fold_angle(double theta) {
    constexpr double half = std::numbers::pi / 2;
    constexpr double quarter = std::numbers::pi / 4;
    double k = std::ceil((theta - quarter) / half);
    double rest = theta - k * half;
    if (rest <= -quarter) {
        rest += half;
        k -= 1;
    } else if (rest > quarter) {
        rest -= half;
        k += 1;
    }
    if (std::abs(rest) < 1e-12) {
        rest = 0.0;
    }
    int turns = static_cast<int>(std::fmod(k, 4.0));
    return {rest, (turns + 4) % 4};
}

struct RecompiledRotation {
    PauliWord axis;
    /// +1 or -1; the rotation is exp(-i sign angle axis / 2).
    int sign = 1;
    double angle = 0.0;

    double signed_angle() const {
        return sign * angle;
    }
};

/// Circuit rewritten as non-Clifford rotations (time order) followed by one
/// residual Clifford, with the observable already conjugated by it.
struct RecompiledCircuit {
    std::size_t num_qubits = 0;
    std::vector<RecompiledRotation> rotations;
    CliffordTableau residual_clifford;
    PauliSum transformed_observable;
    std::size_t source_gate_count = 0;
    std::size_t source_rotation_count = 0;
};

/// Conjugates every term of a sum, folding phases into coefficients.
inline PauliSum conjugate_sum(const CliffordTableau &c, const PauliSum &o) {
    std::vector<std::pair<PauliWord, cplx>> terms;
    terms.reserve(o.size());
    for (std::size_t i = 0; i < o.size(); ++i) {
        PhasedWord img = c.conjugate(o.term_word(i));
        terms.emplace_back(std::move(img.word), o.coeff(i) * img.phase_value());
    }
    return PauliSum::from_terms(o.num_qubits(), terms);
}

inline RecompiledCircuit recompile(const Circuit &circuit, const PauliSum &observable) {
    if (observable.num_qubits() != circuit.num_qubits) {
        throw ArgumentError("observable and circuit sizes differ");
    }
    circuit.validate();
    RecompiledCircuit rc;
    rc.num_qubits = circuit.num_qubits;
    CliffordTableau acc(circuit.num_qubits);
    for (const auto &layer : circuit.layers) {
        for (const auto &g : layer.gates) {
            ++rc.source_gate_count;
            if (!g.is_rotation()) {
                acc.then_gate(g);
                continue;
            }
            ++rc.source_rotation_count;
            FoldedAngle f = fold_angle(g.angle);
            if (f.angle != 0.0) {
                PhasedWord axis = acc.conjugate(g.axis);
                rc.rotations.push_back({std::move(axis.word), axis.phase == 2 ? -1 : 1, f.angle});
            }
            acc.then_pauli_rotation(g.axis, f.quarter_turns);
        }
    }
    rc.transformed_observable = conjugate_sum(acc, observable);
    rc.residual_clifford = std::move(acc);
    return rc;
}

}  // namespace hexsim
