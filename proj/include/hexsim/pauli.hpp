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

// Bit-packed Pauli words.
//
// A word over n qubits stores two bit vectors, z then x, each packed into
// ceil(n/64) little-endian 64-bit words. The operator it denotes is the
// Hermitian product (-i)^{|z&x|} Z^z X^x, so a site with both bits set is Y
// itself, not -Y. Products pick up a phase i^k that callers fold into
// coefficients.

#include <algorithm>
#include <bit>
#include <complex>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hexsim/errors.hpp"

namespace hexsim {

using Word = std::uint64_t;
using cplx = std::complex<double>;

constexpr std::size_t words_for(std::size_t num_qubits) {
    return (num_qubits + 63) / 64;
}

/// i^exponent for exponent taken mod 4.
inline cplx i_pow(int exponent) {
    switch (exponent & 3) {
        case 0:
            return {1.0, 0.0};
        case 1:
            return {0.0, 1.0};
        case 2:
            return {-1.0, 0.0};
        default:
            return {0.0, -1.0};
    }
}

namespace packed {

// Raw operations over a packed (z..., x...) span of 2*nw words. These are the
// hot-loop primitives used by PauliSum; PauliWord wraps them.

inline std::size_t popcount_and(const Word *a, const Word *b, std::size_t nw) {
    std::size_t c = 0;
    for (std::size_t k = 0; k < nw; ++k) {
        c += static_cast<std::size_t>(std::popcount(a[k] & b[k]));
    }
    return c;
}

inline bool anticommutes(const Word *a, const Word *b, std::size_t nw) {
    Word parity = 0;
    for (std::size_t k = 0; k < nw; ++k) {
        parity ^= (a[k] & b[nw + k]) ^ (a[nw + k] & b[k]);
    }
    return (std::popcount(parity) & 1) != 0;
}

inline std::size_t y_count(const Word *a, std::size_t nw) {
    return popcount_and(a, a + nw, nw);
}

/// out = word part of a*b; returns k with op(a)op(b) = i^k op(out).
inline int multiply(const Word *a, const Word *b, Word *out, std::size_t nw) {
    std::size_t ya = y_count(a, nw);
    std::size_t yb = y_count(b, nw);
    // X^{xa} Z^{zb} = (-1)^{|xa & zb|} Z^{zb} X^{xa}
    std::size_t swaps = popcount_and(a + nw, b, nw);
    for (std::size_t k = 0; k < 2 * nw; ++k) {
        out[k] = a[k] ^ b[k];
    }
    std::size_t yr = y_count(out, nw);
    return static_cast<int>((yr + 4 * nw * 64 - ya - yb + 2 * swaps) & 3);
}

inline bool is_z_type(const Word *a, std::size_t nw) {
    for (std::size_t k = 0; k < nw; ++k) {
        if (a[nw + k] != 0) {
            return false;
        }
    }
    return true;
}

inline std::strong_ordering compare(const Word *a, const Word *b, std::size_t total) {
    for (std::size_t k = 0; k < total; ++k) {
        if (a[k] != b[k]) {
            return a[k] < b[k] ? std::strong_ordering::less : std::strong_ordering::greater;
        }
    }
    return std::strong_ordering::equal;
}

}  // namespace packed

class PauliWord {
  public:
    PauliWord() = default;

    /// Identity on `num_qubits` qubits.
    explicit PauliWord(std::size_t num_qubits)
        : n_(num_qubits), bits_(2 * words_for(num_qubits), 0) {
    }

    PauliWord(std::size_t num_qubits, std::span<const Word> packed_bits)
        : n_(num_qubits), bits_(packed_bits.begin(), packed_bits.end()) {
        if (bits_.size() != 2 * words_for(num_qubits)) {
            throw ArgumentError("packed Pauli word has wrong length");
        }
    }

    static PauliWord single(std::size_t num_qubits, std::size_t qubit, char letter) {
        PauliWord w(num_qubits);
        w.set(qubit, letter);
        return w;
    }

    std::size_t num_qubits() const {
        return n_;
    }
    std::size_t num_words() const {
        return bits_.size() / 2;
    }
    const Word *data() const {
        return bits_.data();
    }
    Word *data() {
        return bits_.data();
    }
    std::span<const Word> packed() const {
        return bits_;
    }

    bool z_bit(std::size_t q) const {
        return (bits_[q / 64] >> (q % 64)) & 1;
    }
    bool x_bit(std::size_t q) const {
        return (bits_[num_words() + q / 64] >> (q % 64)) & 1;
    }

    /// Pauli letter at `q`: one of I, X, Y, Z.
    char letter(std::size_t q) const {
        bool z = z_bit(q);
        bool x = x_bit(q);
        return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
    }

    void set(std::size_t q, char letter) {
        if (q >= n_) {
            throw ArgumentError("qubit index " + std::to_string(q) + " out of range for " +
                                std::to_string(n_) + " qubits");
        }
        bool z = letter == 'Z' || letter == 'Y';
        bool x = letter == 'X' || letter == 'Y';
        if (!z && !x && letter != 'I') {
            throw ArgumentError(std::string("unknown Pauli letter '") + letter + "'");
        }
        Word mask = Word{1} << (q % 64);
        Word &zw = bits_[q / 64];
        Word &xw = bits_[num_words() + q / 64];
        zw = z ? (zw | mask) : (zw & ~mask);
        xw = x ? (xw | mask) : (xw & ~mask);
    }

    bool is_identity() const {
        return std::all_of(bits_.begin(), bits_.end(), [](Word w) { return w == 0; });
    }

    /// Qubits where the word acts non-trivially, ascending.
    std::vector<std::size_t> support() const {
        std::vector<std::size_t> out;
        std::size_t nw = num_words();
        for (std::size_t k = 0; k < nw; ++k) {
            Word any = bits_[k] | bits_[nw + k];
            while (any) {
                out.push_back(64 * k + static_cast<std::size_t>(std::countr_zero(any)));
                any &= any - 1;
            }
        }
        return out;
    }

    friend bool operator==(const PauliWord &a, const PauliWord &b) = default;
    friend std::strong_ordering operator<=>(const PauliWord &a, const PauliWord &b) {
        if (auto c = a.n_ <=> b.n_; c != 0) {
            return c;
        }
        return packed::compare(a.data(), b.data(), a.bits_.size());
    }

  private:
    std::size_t n_ = 0;
    std::vector<Word> bits_;
};

/// A Pauli word with an exact phase i^phase (phase in 0..3).
struct PhasedWord {
    PauliWord word;
    int phase = 0;

    cplx phase_value() const {
        return i_pow(phase);
    }
    friend bool operator==(const PhasedWord &, const PhasedWord &) = default;
};

struct PauliClass {
    std::size_t weight = 0;
    bool z_type = true;
};

inline void require_same_size(const PauliWord &a, const PauliWord &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw ArgumentError("Pauli size mismatch: " + std::to_string(a.num_qubits()) + " vs " +
                            std::to_string(b.num_qubits()));
    }
}

/// op(a) * op(b) = i^phase * op(result).
inline PhasedWord pauli_mul(const PauliWord &a, const PauliWord &b) {
    require_same_size(a, b);
    PhasedWord out{PauliWord(a.num_qubits()), 0};
    out.phase = packed::multiply(a.data(), b.data(), out.word.data(), a.num_words());
    return out;
}

/// Phased product; phases add.
inline PhasedWord pauli_mul(const PhasedWord &a, const PhasedWord &b) {
    PhasedWord out = pauli_mul(a.word, b.word);
    out.phase = (out.phase + a.phase + b.phase) & 3;
    return out;
}

inline bool anticommutes(const PauliWord &a, const PauliWord &b) {
    require_same_size(a, b);
    return packed::anticommutes(a.data(), b.data(), a.num_words());
}

inline PauliClass classify(const PauliWord &a) {
    std::size_t nw = a.num_words();
    PauliClass c;
    for (std::size_t k = 0; k < nw; ++k) {
        c.weight += static_cast<std::size_t>(std::popcount(a.data()[k] | a.data()[nw + k]));
    }
    c.z_type = packed::is_z_type(a.data(), nw);
    return c;
}

/// Parses whitespace-separated `<letter><index>` tokens, e.g. "X0 Y1 Z2".
/// A lone "I" (or empty text) is the identity.
inline PauliWord parse_pauli(std::string_view text, std::size_t num_qubits) {
    PauliWord w(num_qubits);
    std::size_t pos = 0;
    bool saw_identity = false;
    bool saw_other = false;
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == ','; };
    while (pos < text.size()) {
        if (is_space(text[pos])) {
            ++pos;
            continue;
        }
        std::size_t start = pos;
        char letter = text[pos];
        if (letter == 'x' || letter == 'y' || letter == 'z') {
            letter = static_cast<char>(letter - 'a' + 'A');
        }
        ++pos;
        if (letter == 'I' && (pos == text.size() || is_space(text[pos]))) {
            saw_identity = true;
            continue;
        }
        if (letter != 'X' && letter != 'Y' && letter != 'Z') {
            throw ParseError("bad Pauli letter '" + std::string(1, text[start]) + "' at position " +
                                 std::to_string(start),
                             start);
        }
        std::size_t digits_start = pos;
        std::size_t index = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            index = index * 10 + static_cast<std::size_t>(text[pos] - '0');
            if (index > (std::size_t{1} << 40)) {
                throw ParseError("qubit index too large at position " + std::to_string(digits_start),
                                 digits_start);
            }
            ++pos;
        }
        if (pos == digits_start || (pos < text.size() && !is_space(text[pos]))) {
            throw ParseError("expected qubit index after '" + std::string(1, letter) + "' at position " +
                                 std::to_string(digits_start),
                             digits_start);
        }
        if (index >= num_qubits) {
            throw ParseError("qubit index " + std::to_string(index) + " >= " + std::to_string(num_qubits) +
                                 " at position " + std::to_string(start),
                             start);
        }
        if (w.letter(index) != 'I') {
            throw ParseError("duplicate qubit index " + std::to_string(index) + " at position " +
                                 std::to_string(start),
                             start);
        }
        w.set(index, letter);
        saw_other = true;
    }
    if (saw_identity && saw_other) {
        throw ParseError("identity token mixed with Pauli tokens", 0);
    }
    return w;
}

/// Canonical text: tokens in ascending qubit order; "I" for the identity.
inline std::string format_pauli(const PauliWord &w) {
    std::string out;
    for (std::size_t q : w.support()) {
        if (!out.empty()) {
            out += ' ';
        }
        out += w.letter(q);
        out += std::to_string(q);
    }
    return out.empty() ? std::string("I") : out;
}

}  // namespace hexsim
