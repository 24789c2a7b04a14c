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

// Sorted sparse Pauli expansion O = sum_P a_P P, the state of sparse Pauli
// dynamics. Words live in one flat array (stride 2*ceil(n/64)), coefficients
// in a parallel array; terms are strictly ascending in packed order.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hexsim/errors.hpp"
#include "hexsim/pauli.hpp"

namespace hexsim {

class PauliSum {
  public:
    PauliSum() = default;
    explicit PauliSum(std::size_t num_qubits) : n_(num_qubits), nw_(words_for(num_qubits)) {
    }

    /// Builds a sum from arbitrary terms; duplicates are added together.
    static PauliSum from_terms(std::size_t num_qubits, const std::vector<std::pair<PauliWord, cplx>> &terms) {
        PauliSum s(num_qubits);
        std::vector<std::size_t> order(terms.size());
        std::iota(order.begin(), order.end(), 0);
        for (const auto &[w, c] : terms) {
            if (w.num_qubits() != num_qubits) {
                throw ArgumentError("term size does not match PauliSum size");
            }
        }
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return terms[a].first < terms[b].first; });
        for (std::size_t idx : order) {
            const auto &[w, c] = terms[idx];
            if (!s.coeffs_.empty() &&
                packed::compare(s.word(s.size() - 1), w.data(), s.stride()) == std::strong_ordering::equal) {
                s.coeffs_.back() += c;
            } else {
                s.push_back(w.data(), c);
            }
        }
        return s;
    }

    static PauliSum single(const PauliWord &w, cplx coefficient = 1.0) {
        PauliSum s(w.num_qubits());
        s.push_back(w.data(), coefficient);
        return s;
    }

    std::size_t num_qubits() const {
        return n_;
    }
    std::size_t num_words() const {
        return nw_;
    }
    std::size_t stride() const {
        return 2 * nw_;
    }
    std::size_t size() const {
        return coeffs_.size();
    }
    bool empty() const {
        return coeffs_.empty();
    }

    const Word *word(std::size_t i) const {
        return words_.data() + i * stride();
    }
    PauliWord term_word(std::size_t i) const {
        return PauliWord(n_, std::span<const Word>(word(i), stride()));
    }
    cplx coeff(std::size_t i) const {
        return coeffs_[i];
    }
    std::span<const cplx> coeffs() const {
        return coeffs_;
    }

    /// Index of `w` (packed, stride words) if present.
    std::optional<std::size_t> find(const Word *w) const {
        std::size_t lo = 0;
        std::size_t hi = size();
        while (lo < hi) {
            std::size_t mid = lo + (hi - lo) / 2;
            auto c = packed::compare(word(mid), w, stride());
            if (c == std::strong_ordering::equal) {
                return mid;
            }
            if (c == std::strong_ordering::less) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        return std::nullopt;
    }

    std::optional<cplx> coefficient_of(const PauliWord &w) const {
        if (w.num_qubits() != n_) {
            throw ArgumentError("word size does not match PauliSum size");
        }
        if (auto i = find(w.data())) {
            return coeffs_[*i];
        }
        return std::nullopt;
    }

    bool is_sorted_unique() const {
        for (std::size_t i = 1; i < size(); ++i) {
            if (packed::compare(word(i - 1), word(i), stride()) != std::strong_ordering::less) {
                return false;
            }
        }
        return true;
    }

    /// Appends a term that must sort after every existing term.
    void push_back(const Word *w, cplx c) {
        words_.insert(words_.end(), w, w + stride());
        coeffs_.push_back(c);
    }

    void reserve(std::size_t terms) {
        words_.reserve(terms * stride());
        coeffs_.reserve(terms);
    }

    // Direct storage access for the evolution kernels.
    std::vector<Word> &raw_words() {
        return words_;
    }
    std::vector<cplx> &raw_coeffs() {
        return coeffs_;
    }
    const std::vector<Word> &raw_words() const {
        return words_;
    }

  private:
    std::size_t n_ = 0;
    std::size_t nw_ = 0;
    std::vector<Word> words_;
    std::vector<cplx> coeffs_;
};

/// Keeps exactly the terms with |a| >= delta.
inline PauliSum truncate(const PauliSum &s, double delta) {
    if (delta < 0) {
        throw ArgumentError("truncation threshold must be non-negative");
    }
    PauliSum out(s.num_qubits());
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (std::abs(s.coeff(i)) >= delta) {
            out.push_back(s.word(i), s.coeff(i));
        }
    }
    return out;
}

/// ||a||_2, which equals sqrt(Tr(O^dag O) / 2^n).
inline double frobenius_norm(const PauliSum &s) {
    double acc = 0.0;
    for (cplx c : s.coeffs()) {
        acc += std::norm(c);
    }
    return std::sqrt(acc);
}

/// Largest |Im a_P| over all terms; zero for Hermitian observables in canonical form.
inline double max_imaginary_part(const PauliSum &s) {
    double m = 0.0;
    for (cplx c : s.coeffs()) {
        m = std::max(m, std::abs(c.imag()));
    }
    return m;
}

/// <0|O|0>: the sum of coefficients of terms built only from I and Z.
inline double expectation(const PauliSum &s, double imag_tolerance = 1e-10) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (packed::is_z_type(s.word(i), s.num_words())) {
            acc += s.coeff(i);
        }
    }
    if (std::abs(acc.imag()) > imag_tolerance) {
        throw NumericalError("expectation has imaginary residue " + std::to_string(acc.imag()));
    }
    return acc.real();
}

/// Observable text: "magnetization" (sum_j Z_j / n), or '+'-separated terms,
/// each an optional "<coefficient>*" followed by a Pauli string, e.g.
/// "0.5*Z0 Z1 + 0.5*X3".
inline PauliSum parse_observable(std::string_view text, std::size_t num_qubits) {
    auto trim = [](std::string_view v) {
        while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) {
            v.remove_prefix(1);
        }
        while (!v.empty() && (v.back() == ' ' || v.back() == '\t' || v.back() == '\n')) {
            v.remove_suffix(1);
        }
        return v;
    };
    text = trim(text);
    std::vector<std::pair<PauliWord, cplx>> terms;
    if (text == "magnetization" || text == "M_Z" || text == "MZ") {
        for (std::size_t q = 0; q < num_qubits; ++q) {
            terms.emplace_back(PauliWord::single(num_qubits, q, 'Z'), 1.0 / static_cast<double>(num_qubits));
        }
        return PauliSum::from_terms(num_qubits, terms);
    }
    std::size_t offset = 0;
    while (offset <= text.size()) {
        std::size_t plus = text.find('+', offset);
        std::string_view part = text.substr(offset, plus == std::string_view::npos ? std::string_view::npos
                                                                                  : plus - offset);
        std::string_view body = trim(part);
        double coefficient = 1.0;
        if (auto star = body.find('*'); star != std::string_view::npos) {
            std::string number(trim(body.substr(0, star)));
            char *end = nullptr;
            coefficient = std::strtod(number.c_str(), &end);
            if (number.empty() || end != number.c_str() + number.size()) {
                throw ParseError("bad coefficient '" + number + "'", offset);
            }
            body = trim(body.substr(star + 1));
        }
        if (body.empty()) {
            throw ParseError("empty observable term", offset);
        }
        try {
            terms.emplace_back(parse_pauli(body, num_qubits), coefficient);
        } catch (const ParseError &e) {
            throw ParseError(e.what(), offset + e.where());
        }
        if (plus == std::string_view::npos) {
            break;
        }
        offset = plus + 1;
    }
    return PauliSum::from_terms(num_qubits, terms);
}

}  // namespace hexsim
