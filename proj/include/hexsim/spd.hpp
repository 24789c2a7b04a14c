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

// Sparse Pauli dynamics: Heisenberg evolution of a thresholded PauliSum
// through the rotation list of a recompiled circuit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hexsim/clifford.hpp"
#include "hexsim/errors.hpp"
#include "hexsim/parallel.hpp"
#include "hexsim/pauli.hpp"
#include "hexsim/pauli_sum.hpp"

namespace hexsim {

inline constexpr std::size_t kDefaultMaxTerms = 40'000'000;

/// Term cap, overridable through SIM_MAX_TERMS.
inline std::size_t max_terms_from_env(std::size_t fallback = kDefaultMaxTerms) {
    if (const char *v = std::getenv("SIM_MAX_TERMS")) {
        char *end = nullptr;
        unsigned long long parsed = std::strtoull(v, &end, 10);
        if (end != v && *end == '\0' && parsed > 0) {
            return static_cast<std::size_t>(parsed);
        }
        throw ArgumentError(std::string("SIM_MAX_TERMS is not a positive integer: ") + v);
    }
    return fallback;
}

/// One rotation U = exp(-i theta axis / 2) applied in the Heisenberg picture,
/// O -> U^dag O U, followed by truncation at delta.
inline PauliSum apply_rotation(const PauliSum &s, const PauliWord &axis, double theta, double delta,
                               std::size_t workers = 1) {
    if (axis.num_qubits() != s.num_qubits()) {
        throw ArgumentError("rotation axis size mismatch");
    }
    if (delta < 0) {
        throw ArgumentError("delta must be non-negative");
    }
#ifndef NDEBUG
    if (!s.is_sorted_unique()) {
        throw StructureError("PauliSum is not sorted and deduplicated");
    }
#endif
    if (theta == 0.0) {
        return truncate(s, delta);
    }
    const std::size_t n = s.size();
    const std::size_t nw = s.num_words();
    const std::size_t stride = s.stride();
    const double c = std::cos(theta);
    const cplx is{0.0, std::sin(theta)};
    const std::span<const cplx> old = s.coeffs();

    std::vector<cplx> updated(old.begin(), old.end());
    struct Fresh {
        std::vector<Word> words;
        std::vector<cplx> coeffs;
    };
    // Chunk count is fixed by n alone so the output never depends on `workers`.
    constexpr std::size_t kChunk = 1 << 15;
    const std::size_t chunks = std::max<std::size_t>(1, (n + kChunk - 1) / kChunk);
    std::vector<Fresh> fresh(chunks);

    parallel_for_each_index(chunks, workers, [&](std::size_t ch) {
        std::size_t begin = n * ch / chunks;
        std::size_t end = n * (ch + 1) / chunks;
        std::vector<Word> tmp(stride);
        Fresh &f = fresh[ch];
        for (std::size_t i = begin; i < end; ++i) {
            const Word *w = s.word(i);
            if (!packed::anticommutes(w, axis.data(), nw)) {
                continue;
            }
            int k = packed::multiply(axis.data(), w, tmp.data(), nw);
            cplx ph = i_pow(k);
            if (auto j = s.find(tmp.data())) {
                updated[i] = c * old[i] + is * std::conj(ph) * old[*j];
            } else {
                updated[i] = c * old[i];
                cplx a = is * ph * old[i];
                if (std::abs(a) >= delta) {
                    f.words.insert(f.words.end(), tmp.begin(), tmp.end());
                    f.coeffs.push_back(a);
                }
            }
        }
    });

    std::vector<Word> new_words;
    std::vector<cplx> new_coeffs;
    for (auto &f : fresh) {
        new_words.insert(new_words.end(), f.words.begin(), f.words.end());
        new_coeffs.insert(new_coeffs.end(), f.coeffs.begin(), f.coeffs.end());
    }
    std::vector<std::size_t> order(new_coeffs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return packed::compare(&new_words[a * stride], &new_words[b * stride], stride) == std::strong_ordering::less;
    });

    PauliSum out(s.num_qubits());
    out.reserve(n + order.size());
    std::size_t i = 0;
    std::size_t m = 0;
    auto advance_old = [&] {
        while (i < n && std::abs(updated[i]) < delta) {
            ++i;
        }
    };
    advance_old();
    while (i < n || m < order.size()) {
        bool take_old;
        if (i == n) {
            take_old = false;
        } else if (m == order.size()) {
            take_old = true;
        } else {
            take_old = packed::compare(s.word(i), &new_words[order[m] * stride], stride) == std::strong_ordering::less;
        }
        if (take_old) {
            out.push_back(s.word(i), updated[i]);
            ++i;
            advance_old();
        } else {
            out.push_back(&new_words[order[m] * stride], new_coeffs[order[m]]);
            ++m;
        }
    }
    return out;
}

struct SpdOptions {
    double delta = 0.0;
    std::size_t max_terms = kDefaultMaxTerms;
    std::size_t workers = 1;
    /// Records the Frobenius norm after every rotation.
    bool trace_norm = false;
};

struct SpdResult {
    double expectation = 0.0;
    double frobenius_norm = 0.0;
    std::size_t peak_terms = 0;
    std::size_t final_terms = 0;
    std::size_t gate_count = 0;
    double wall_time = 0.0;
    double max_imaginary = 0.0;
    std::vector<double> norm_trace;
};

/// Applies the recompiled rotations last-to-first to the transformed observable.
inline SpdResult run_spd(const RecompiledCircuit &rc, const SpdOptions &opt) {
    auto start = std::chrono::steady_clock::now();
    SpdResult r;
    PauliSum o = truncate(rc.transformed_observable, opt.delta);
    r.peak_terms = o.size();
    for (auto it = rc.rotations.rbegin(); it != rc.rotations.rend(); ++it) {
        o = apply_rotation(o, it->axis, it->signed_angle(), opt.delta, opt.workers);
        ++r.gate_count;
        r.peak_terms = std::max(r.peak_terms, o.size());
        if (o.size() > opt.max_terms) {
            throw CapacityError("SPD term count " + std::to_string(o.size()) + " exceeds cap " +
                                std::to_string(opt.max_terms));
        }
        if (opt.trace_norm) {
            r.norm_trace.push_back(frobenius_norm(o));
        }
    }
    r.expectation = expectation(o);
    r.frobenius_norm = frobenius_norm(o);
    r.max_imaginary = max_imaginary_part(o);
    r.final_terms = o.size();
    r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

inline SpdResult run_spd(const RecompiledCircuit &rc, double delta) {
    SpdOptions opt;
    opt.delta = delta;
    opt.max_terms = max_terms_from_env();
    return run_spd(rc, opt);
}

}  // namespace hexsim
