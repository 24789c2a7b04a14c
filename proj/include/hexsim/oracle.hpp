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

// Ground-truth engines for small systems: a dense statevector simulator and a
// dense Heisenberg-picture operator conjugation.

#include <bit>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "hexsim/bp.hpp"
#include "hexsim/circuit.hpp"
#include "hexsim/errors.hpp"
#include "hexsim/pauli.hpp"
#include "hexsim/pauli_sum.hpp"

namespace hexsim {

inline constexpr std::size_t kStatevectorCap = 24;
inline constexpr std::size_t kDenseOperatorCap = 12;

struct ContractionBudget {
    double max_flops = 4e9;
    double max_intermediate = 67108864.0;
};

namespace detail {

struct PauliMasks {
    std::uint64_t z = 0;
    std::uint64_t x = 0;
    int y_phase = 0;  // exponent of i in (-i)^{#Y}
};

inline PauliMasks masks_of(const PauliWord &w) {
    PauliMasks m;
    for (std::size_t q : w.support()) {
        if (w.z_bit(q)) {
            m.z |= std::uint64_t{1} << q;
        }
        if (w.x_bit(q)) {
            m.x |= std::uint64_t{1} << q;
        }
    }
    m.y_phase = (3 * std::popcount(m.z & m.x)) & 3;
    return m;
}

/// (P v)[idx] for the canonical word encoded by m.
inline cplx pauli_apply_at(const PauliMasks &m, const std::vector<cplx> &v, std::uint64_t idx) {
    cplx a = v[idx ^ m.x];
    if (std::popcount(idx & m.z) & 1) {
        a = -a;
    }
    return a;
}

}  // namespace detail

/// Basis index bit q holds qubit q.
class StateVector {
  public:
    explicit StateVector(std::size_t num_qubits, std::size_t cap = kStatevectorCap) : n_(num_qubits) {
        if (num_qubits > cap) {
            throw CapacityError("statevector needs " + std::to_string(num_qubits) + " qubits, cap is " +
                                std::to_string(cap));
        }
        amps_.assign(std::size_t{1} << num_qubits, 0.0);
        amps_[0] = 1.0;
    }

    std::size_t num_qubits() const {
        return n_;
    }
    const std::vector<cplx> &amplitudes() const {
        return amps_;
    }
    std::vector<cplx> &amplitudes() {
        return amps_;
    }

    double norm() const {
        double s = 0.0;
        for (cplx a : amps_) {
            s += std::norm(a);
        }
        return std::sqrt(s);
    }

    void apply(const Gate &g) {
        if (g.is_rotation()) {
            apply_pauli_rotation(g.axis, g.angle);
        } else {
            apply_local(local_unitary(g), g.qubits);
        }
    }

    /// exp(-i theta sigma / 2) = cos(theta/2) - i sin(theta/2) sigma.
    void apply_pauli_rotation(const PauliWord &axis, double theta) {
        auto m = detail::masks_of(axis);
        const cplx ph = i_pow(m.y_phase);
        const double c = std::cos(theta / 2);
        const cplx s = cplx{0.0, -std::sin(theta / 2)} * ph;
        std::vector<cplx> out(amps_.size());
        for (std::uint64_t idx = 0; idx < amps_.size(); ++idx) {
            out[idx] = c * amps_[idx] + s * detail::pauli_apply_at(m, amps_, idx);
        }
        amps_.swap(out);
    }

    /// Dense k-qubit unitary, first listed qubit most significant.
    void apply_local(const std::vector<cplx> &u, const std::vector<std::size_t> &qubits) {
        const std::size_t k = qubits.size();
        const std::size_t dim = std::size_t{1} << k;
        std::uint64_t mask = 0;
        for (std::size_t q : qubits) {
            mask |= std::uint64_t{1} << q;
        }
        std::vector<std::uint64_t> offset(dim, 0);
        for (std::size_t l = 0; l < dim; ++l) {
            for (std::size_t s = 0; s < k; ++s) {
                if ((l >> (k - 1 - s)) & 1) {
                    offset[l] |= std::uint64_t{1} << qubits[s];
                }
            }
        }
        std::vector<cplx> in(dim);
        for (std::uint64_t base = 0; base < amps_.size(); ++base) {
            if (base & mask) {
                continue;
            }
            for (std::size_t l = 0; l < dim; ++l) {
                in[l] = amps_[base | offset[l]];
            }
            for (std::size_t r = 0; r < dim; ++r) {
                cplx acc = 0.0;
                for (std::size_t l = 0; l < dim; ++l) {
                    acc += u[r * dim + l] * in[l];
                }
                amps_[base | offset[r]] = acc;
            }
        }
    }

    cplx pauli_expectation(const PauliWord &w) const {
        auto m = detail::masks_of(w);
        cplx acc = 0.0;
        for (std::uint64_t idx = 0; idx < amps_.size(); ++idx) {
            acc += std::conj(amps_[idx]) * detail::pauli_apply_at(m, amps_, idx);
        }
        return acc * i_pow(m.y_phase);
    }

    cplx expectation(const PauliSum &o) const {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < o.size(); ++i) {
            acc += o.coeff(i) * pauli_expectation(o.term_word(i));
        }
        return acc;
    }

  private:
    std::size_t n_;
    std::vector<cplx> amps_;
};

inline StateVector simulate(const Circuit &c, std::size_t cap = kStatevectorCap) {
    StateVector psi(c.num_qubits, cap);
    for (const auto &layer : c.layers) {
        for (const auto &g : layer.gates) {
            psi.apply(g);
        }
    }
    return psi;
}

inline double statevector_expectation(const Circuit &c, const PauliSum &o, std::size_t cap = kStatevectorCap,
                                      double imag_tolerance = 1e-10) {
    if (o.num_qubits() != c.num_qubits) {
        throw ArgumentError("observable and circuit sizes differ");
    }
    cplx v = simulate(c, cap).expectation(o);
    if (std::abs(v.imag()) > imag_tolerance) {
        throw NumericalError("statevector expectation has imaginary residue " + std::to_string(v.imag()));
    }
    return v.real();
}

/// Dense 2^n x 2^n row-major operator.
class DenseOperator {
  public:
    explicit DenseOperator(std::size_t num_qubits, std::size_t cap = kDenseOperatorCap) : n_(num_qubits) {
        if (num_qubits > cap) {
            throw CapacityError("dense operator needs " + std::to_string(num_qubits) + " qubits, cap is " +
                                std::to_string(cap));
        }
        dim_ = std::size_t{1} << num_qubits;
        m_.assign(dim_ * dim_, 0.0);
    }

    static DenseOperator from_sum(const PauliSum &o, std::size_t cap = kDenseOperatorCap) {
        DenseOperator d(o.num_qubits(), cap);
        for (std::size_t t = 0; t < o.size(); ++t) {
            auto m = detail::masks_of(o.term_word(t));
            cplx coef = o.coeff(t) * i_pow(m.y_phase);
            // Column idx^x feeds row idx.
            for (std::uint64_t r = 0; r < d.dim_; ++r) {
                double sign = (std::popcount(r & m.z) & 1) ? -1.0 : 1.0;
                d.at(r, r ^ m.x) += coef * sign;
            }
        }
        return d;
    }

    cplx &at(std::size_t r, std::size_t c) {
        return m_[r * dim_ + c];
    }
    cplx at(std::size_t r, std::size_t c) const {
        return m_[r * dim_ + c];
    }
    std::size_t dim() const {
        return dim_;
    }

    /// M <- G^dag M G.
    void conjugate_by(const Gate &g) {
        std::vector<cplx> u = local_unitary(g);
        std::vector<cplx> udag(u.size());
        const std::size_t d = std::size_t{1} << g.qubits.size();
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                udag[r * d + c] = std::conj(u[c * d + r]);
            }
        }
        // (G^dag (G^dag M)^dag)^dag = G^dag M G
        left_apply(udag, g.qubits);
        adjoint_in_place();
        left_apply(udag, g.qubits);
        adjoint_in_place();
    }

  private:
    void adjoint_in_place() {
        for (std::size_t r = 0; r < dim_; ++r) {
            m_[r * dim_ + r] = std::conj(m_[r * dim_ + r]);
            for (std::size_t c = r + 1; c < dim_; ++c) {
                cplx a = m_[r * dim_ + c];
                m_[r * dim_ + c] = std::conj(m_[c * dim_ + r]);
                m_[c * dim_ + r] = std::conj(a);
            }
        }
    }

    void left_apply(const std::vector<cplx> &u, const std::vector<std::size_t> &qubits) {
        const std::size_t k = qubits.size();
        const std::size_t d = std::size_t{1} << k;
        std::uint64_t mask = 0;
        for (std::size_t q : qubits) {
            mask |= std::uint64_t{1} << q;
        }
        std::vector<std::uint64_t> offset(d, 0);
        for (std::size_t l = 0; l < d; ++l) {
            for (std::size_t s = 0; s < k; ++s) {
                if ((l >> (k - 1 - s)) & 1) {
                    offset[l] |= std::uint64_t{1} << qubits[s];
                }
            }
        }
        std::vector<cplx> in(d);
        for (std::size_t col = 0; col < dim_; ++col) {
            for (std::uint64_t base = 0; base < dim_; ++base) {
                if (base & mask) {
                    continue;
                }
                for (std::size_t l = 0; l < d; ++l) {
                    in[l] = at(base | offset[l], col);
                }
                for (std::size_t r = 0; r < d; ++r) {
                    cplx acc = 0.0;
                    for (std::size_t l = 0; l < d; ++l) {
                        acc += u[r * d + l] * in[l];
                    }
                    at(base | offset[r], col) = acc;
                }
            }
        }
    }

    std::size_t n_;
    std::size_t dim_;
    std::vector<cplx> m_;
};

/// <0| G_1^dag ... G_N^dag O G_N ... G_1 |0>, conjugating the full matrix gate by gate.
inline double heisenberg_dense_expectation(const Circuit &c, const PauliSum &o, std::size_t cap = kDenseOperatorCap,
                                           double imag_tolerance = 1e-10) {
    if (o.num_qubits() != c.num_qubits) {
        throw ArgumentError("observable and circuit sizes differ");
    }
    DenseOperator m = DenseOperator::from_sum(o, cap);
    for (auto layer = c.layers.rbegin(); layer != c.layers.rend(); ++layer) {
        for (auto g = layer->gates.rbegin(); g != layer->gates.rend(); ++g) {
            m.conjugate_by(*g);
        }
    }
    cplx v = m.at(0, 0);
    if (std::abs(v.imag()) > imag_tolerance) {
        throw NumericalError("dense Heisenberg expectation has imaginary residue " + std::to_string(v.imag()));
    }
    return v.real();
}

/// Exact scalar value of a closed network along the greedy path.
inline cplx exact_contract(const SiteNetwork &sn, const ContractionBudget &budget = {}) {
    auto tensors = sn.all_tensors();
    if (tensors.empty()) {
        return 1.0;
    }
    auto path = greedy_path(tensors, {});
    if (path.flops > budget.max_flops || path.max_intermediate > budget.max_intermediate) {
        throw CapacityError("exact contraction over budget (" + std::to_string(path.flops) + " flops, largest " +
                            std::to_string(path.max_intermediate) + " elements); bottleneck labels " +
                            join_labels(path.bottleneck));
    }
    Tensor t = contract_with_path(std::move(tensors), {}, path);
    if (t.rank() != 0) {
        throw StructureError("network is not closed; open labels " + join_labels(t.labels()));
    }
    return t.value();
}

}  // namespace hexsim
