// Copyright 2026 The Heisennet Authors
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

#include <algorithm>
#include <bit>
#include <compare>
#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace heisennet {

using Complex = std::complex<double>;

/// Coefficients with modulus below this are dropped after every operation.
inline constexpr double kPruneTolerance = 1e-12;
/// Coefficientwise tolerance used when comparing operator expressions.
inline constexpr double kEqualityTolerance = 1e-10;
inline constexpr std::size_t kMaxQubits = 32;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) {
    return "IXYZ"[static_cast<int>(p)];
}

inline Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I':
        case '_':
            return Pauli::I;
        case 'X':
            return Pauli::X;
        case 'Y':
            return Pauli::Y;
        case 'Z':
            return Pauli::Z;
    }
    throw std::invalid_argument(std::string("not a Pauli letter: '") + c + "'");
}

/// A tensor product of single-qubit Pauli letters on a fixed number of qubits.
///
/// Letters are stored as x/z bit masks: X = (1,0), Y = (1,1), Z = (0,1).
/// Ordering is lexicographic with qubit 0 most significant and I < X < Y < Z.
class PauliWord {
   public:
    PauliWord() = default;
    explicit PauliWord(std::size_t n) : n_(check_size(n)) {
    }

    static PauliWord from_string(std::string_view text) {
        PauliWord w(text.size());
        for (std::size_t q = 0; q < text.size(); q++) {
            w.set(q, pauli_from_char(text[q]));
        }
        return w;
    }

    static PauliWord single(std::size_t n, std::size_t qubit, Pauli p) {
        PauliWord w(n);
        w.set(qubit, p);
        return w;
    }

    static PauliWord from_bits(std::size_t n, std::uint32_t xs, std::uint32_t zs) {
        PauliWord w(n);
        std::uint32_t mask = n == 32 ? ~0u : ((1u << n) - 1u);
        w.xs_ = xs & mask;
        w.zs_ = zs & mask;
        return w;
    }

    std::size_t size() const {
        return n_;
    }

    Pauli operator[](std::size_t q) const {
        bool x = (xs_ >> q) & 1u;
        bool z = (zs_ >> q) & 1u;
        if (x) {
            return z ? Pauli::Y : Pauli::X;
        }
        return z ? Pauli::Z : Pauli::I;
    }

    void set(std::size_t q, Pauli p) {
        if (q >= n_) {
            throw std::out_of_range("qubit index " + std::to_string(q) + " outside word of length " + std::to_string(n_));
        }
        std::uint32_t bit = 1u << q;
        xs_ &= ~bit;
        zs_ &= ~bit;
        if (p == Pauli::X || p == Pauli::Y) {
            xs_ |= bit;
        }
        if (p == Pauli::Z || p == Pauli::Y) {
            zs_ |= bit;
        }
    }

    std::uint32_t x_bits() const {
        return xs_;
    }
    std::uint32_t z_bits() const {
        return zs_;
    }
    std::uint32_t support_mask() const {
        return xs_ | zs_;
    }
    bool is_identity() const {
        return (xs_ | zs_) == 0;
    }
    /// True when every letter is I or Z, i.e. the word is diagonal in the computational basis.
    bool is_diagonal() const {
        return xs_ == 0;
    }

    std::string str() const {
        std::string out(n_, 'I');
        for (std::size_t q = 0; q < n_; q++) {
            out[q] = pauli_char((*this)[q]);
        }
        return out;
    }

    friend bool operator==(const PauliWord &a, const PauliWord &b) {
        return a.n_ == b.n_ && a.xs_ == b.xs_ && a.zs_ == b.zs_;
    }

    friend std::strong_ordering operator<=>(const PauliWord &a, const PauliWord &b) {
        if (a.n_ != b.n_) {
            return a.n_ <=> b.n_;
        }
        std::uint32_t diff = (a.xs_ ^ b.xs_) | (a.zs_ ^ b.zs_);
        if (diff == 0) {
            return std::strong_ordering::equal;
        }
        auto q = static_cast<std::size_t>(std::countr_zero(diff));
        return static_cast<int>(a[q]) <=> static_cast<int>(b[q]);
    }

   private:
    static std::uint8_t check_size(std::size_t n) {
        if (n > kMaxQubits) {
            throw std::invalid_argument(
                "at most " + std::to_string(kMaxQubits) + " qubits supported, got " + std::to_string(n));
        }
        return static_cast<std::uint8_t>(n);
    }

    std::uint8_t n_ = 0;
    std::uint32_t xs_ = 0;
    std::uint32_t zs_ = 0;
};

struct PauliWordHash {
    std::size_t operator()(const PauliWord &w) const noexcept {
        std::uint64_t k = (static_cast<std::uint64_t>(w.x_bits()) << 32) | w.z_bits();
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdULL;
        k ^= k >> 33;
        return static_cast<std::size_t>(k);
    }
};

/// Multiplies a coefficient by i^k exactly (no rounding).
inline Complex times_i_power(Complex c, int k) {
    switch (k & 3) {
        case 0:
            return c;
        case 1:
            return {-c.imag(), c.real()};
        case 2:
            return {-c.real(), -c.imag()};
        default:
            return {c.imag(), -c.real()};
    }
}

/// Result of multiplying two Pauli words: p*q = i^phase * word.
struct WordProduct {
    int phase = 0;
    PauliWord word;

    Complex phase_value() const {
        return times_i_power(Complex{1.0, 0.0}, phase);
    }
};

namespace detail {

// Y = i X Z, so a word is i^{popcount(x&z)} X^x Z^z. Moving Z^{z1} past X^{x2}
// contributes (-1)^{popcount(z1&x2)}.
inline WordProduct word_mul_unchecked(const PauliWord &p, const PauliWord &q) {
    std::uint32_t x = p.x_bits() ^ q.x_bits();
    std::uint32_t z = p.z_bits() ^ q.z_bits();
    int k = std::popcount(p.x_bits() & p.z_bits()) + std::popcount(q.x_bits() & q.z_bits()) +
            2 * std::popcount(p.z_bits() & q.x_bits()) - std::popcount(x & z);
    return {((k % 4) + 4) % 4, PauliWord::from_bits(p.size(), x, z)};
}

}  // namespace detail

inline WordProduct word_mul(const PauliWord &p, const PauliWord &q) {
    if (p.size() != q.size()) {
        throw std::invalid_argument(
            "Pauli word length mismatch: " + std::to_string(p.size()) + " vs " + std::to_string(q.size()));
    }
    return detail::word_mul_unchecked(p, q);
}

/// A finite complex-weighted sum of Pauli words, kept pruned and in canonical word order.
class OperatorExpr {
   public:
    using Term = std::pair<PauliWord, Complex>;

    OperatorExpr() = default;
    /// The zero operator on n qubits.
    explicit OperatorExpr(std::size_t n) : n_(n) {
        if (n > kMaxQubits) {
            throw std::invalid_argument("too many qubits: " + std::to_string(n));
        }
    }

    static OperatorExpr zero(std::size_t n) {
        return OperatorExpr(n);
    }

    static OperatorExpr identity(std::size_t n, Complex c = 1.0) {
        return from_word(PauliWord(n), c);
    }

    static OperatorExpr from_word(const PauliWord &w, Complex c = 1.0) {
        OperatorExpr out(w.size());
        if (std::abs(c) >= kPruneTolerance) {
            out.terms_.emplace_back(w, c);
        }
        return out;
    }

    static OperatorExpr letter(std::size_t n, std::size_t qubit, Pauli p, Complex c = 1.0) {
        return from_word(PauliWord::single(n, qubit, p), c);
    }

    /// Parses a word string like "IXZ" into a single-term expression.
    static OperatorExpr word(std::string_view text, Complex c = 1.0) {
        return from_word(PauliWord::from_string(text), c);
    }

    /// Builds an expression from arbitrary (possibly repeated) terms, summing duplicates.
    static OperatorExpr from_terms(std::size_t n, std::span<const Term> terms);

    std::size_t num_qubits() const {
        return n_;
    }
    const std::vector<Term> &terms() const {
        return terms_;
    }
    std::size_t num_terms() const {
        return terms_.size();
    }
    bool is_zero() const {
        return terms_.empty();
    }

    Complex coeff(const PauliWord &w) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), w, [](const Term &t, const PauliWord &k) {
            return t.first < k;
        });
        if (it != terms_.end() && it->first == w) {
            return it->second;
        }
        return 0.0;
    }

    Complex identity_coeff() const {
        return coeff(PauliWord(n_));
    }

    /// Term maps identical, coefficient for coefficient, with no tolerance.
    bool exactly_equals(const OperatorExpr &other) const {
        return n_ == other.n_ && terms_ == other.terms_;
    }

    /// Largest coefficient-wise modulus of (this - other).
    double max_deviation(const OperatorExpr &other) const;

    bool approx_equals(const OperatorExpr &other, double tol = kEqualityTolerance) const {
        return n_ == other.n_ && max_deviation(other) <= tol;
    }

    friend bool operator==(const OperatorExpr &a, const OperatorExpr &b) {
        return a.approx_equals(b);
    }

    friend OperatorExpr operator*(const OperatorExpr &a, const OperatorExpr &b);
    friend OperatorExpr operator+(const OperatorExpr &a, const OperatorExpr &b);
    friend OperatorExpr operator-(const OperatorExpr &a, const OperatorExpr &b);
    friend OperatorExpr operator*(Complex c, const OperatorExpr &a) {
        OperatorExpr out(a.n_);
        out.terms_.reserve(a.terms_.size());
        for (const auto &[w, v] : a.terms_) {
            out.terms_.emplace_back(w, c * v);
        }
        out.prune();
        return out;
    }
    friend OperatorExpr adjoint(const OperatorExpr &a);
    friend OperatorExpr operator-(const OperatorExpr &a) {
        OperatorExpr out = a;
        for (auto &t : out.terms_) {
            t.second = -t.second;
        }
        return out;
    }

   private:
    friend class TermAccumulator;

    void prune() {
        std::erase_if(terms_, [](const Term &t) {
            return std::abs(t.second) < kPruneTolerance;
        });
    }

    void normalize() {
        prune();
        std::sort(terms_.begin(), terms_.end(), [](const Term &a, const Term &b) {
            return a.first < b.first;
        });
    }

    std::size_t n_ = 0;
    std::vector<Term> terms_;
};

/// Sums terms into a fresh OperatorExpr. Large products on few qubits go
/// through a flat table indexed by the word bits; everything else is
/// collected, sorted and merged.
class TermAccumulator {
   public:
    TermAccumulator(std::size_t n, std::size_t expected_terms)
        : n_(n), dense_(n <= kDenseLimit && expected_terms * 4 >= (std::size_t{1} << (2 * n))) {
        if (dense_) {
            table_.assign(std::size_t{1} << (2 * n), Complex{0.0, 0.0});
            used_.assign(table_.size(), false);
        } else {
            list_.reserve(expected_terms);
        }
    }

    void add(const PauliWord &w, Complex c) {
        if (dense_) {
            std::size_t k = (static_cast<std::size_t>(w.z_bits()) << n_) | w.x_bits();
            if (!used_[k]) {
                used_[k] = true;
                touched_.push_back(k);
            }
            table_[k] += c;
        } else {
            list_.emplace_back(w, c);
        }
    }

    OperatorExpr finish() {
        OperatorExpr out(n_);
        if (dense_) {
            out.terms_.reserve(touched_.size());
            auto mask = static_cast<std::uint32_t>((std::size_t{1} << n_) - 1);
            for (std::size_t k : touched_) {
                auto xs = static_cast<std::uint32_t>(k) & mask;
                auto zs = static_cast<std::uint32_t>(k >> n_);
                out.terms_.emplace_back(PauliWord::from_bits(n_, xs, zs), table_[k]);
            }
            out.normalize();
            return out;
        }
        std::stable_sort(list_.begin(), list_.end(), [](const auto &a, const auto &b) {
            return a.first < b.first;
        });
        for (const auto &t : list_) {
            if (!out.terms_.empty() && out.terms_.back().first == t.first) {
                out.terms_.back().second += t.second;
            } else {
                out.terms_.push_back(t);
            }
        }
        out.prune();
        return out;
    }

   private:
    static constexpr std::size_t kDenseLimit = 10;
    std::size_t n_;
    bool dense_;
    std::vector<Complex> table_;
    std::vector<bool> used_;
    std::vector<std::size_t> touched_;
    std::vector<std::pair<PauliWord, Complex>> list_;
};

inline OperatorExpr OperatorExpr::from_terms(std::size_t n, std::span<const Term> terms) {
    TermAccumulator acc(n, terms.size());
    for (const auto &[w, c] : terms) {
        if (w.size() != n) {
            throw std::invalid_argument("term length does not match qubit count");
        }
        acc.add(w, c);
    }
    return acc.finish();
}

namespace detail {

inline void require_same_size(const OperatorExpr &a, const OperatorExpr &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument(
            "operator qubit count mismatch: " + std::to_string(a.num_qubits()) + " vs " +
            std::to_string(b.num_qubits()));
    }
}

}  // namespace detail

inline OperatorExpr operator*(const OperatorExpr &a, const OperatorExpr &b) {
    detail::require_same_size(a, b);
    TermAccumulator acc(a.n_, a.terms_.size() * b.terms_.size());
    for (const auto &[wa, ca] : a.terms_) {
        for (const auto &[wb, cb] : b.terms_) {
            auto p = detail::word_mul_unchecked(wa, wb);
            acc.add(p.word, times_i_power(ca * cb, p.phase));
        }
    }
    return acc.finish();
}

inline OperatorExpr operator+(const OperatorExpr &a, const OperatorExpr &b) {
    detail::require_same_size(a, b);
    OperatorExpr out(a.n_);
    out.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto ia = a.terms_.begin();
    auto ib = b.terms_.begin();
    while (ia != a.terms_.end() || ib != b.terms_.end()) {
        if (ib == b.terms_.end() || (ia != a.terms_.end() && ia->first < ib->first)) {
            out.terms_.push_back(*ia++);
        } else if (ia == a.terms_.end() || ib->first < ia->first) {
            out.terms_.push_back(*ib++);
        } else {
            out.terms_.emplace_back(ia->first, ia->second + ib->second);
            ++ia;
            ++ib;
        }
    }
    out.prune();
    return out;
}

inline OperatorExpr operator-(const OperatorExpr &a, const OperatorExpr &b) {
    return a + (-b);
}

inline double OperatorExpr::max_deviation(const OperatorExpr &other) const {
    detail::require_same_size(*this, other);
    double worst = 0.0;
    auto ia = terms_.begin();
    auto ib = other.terms_.begin();
    while (ia != terms_.end() || ib != other.terms_.end()) {
        if (ib == other.terms_.end() || (ia != terms_.end() && ia->first < ib->first)) {
            worst = std::max(worst, std::abs(ia->second));
            ++ia;
        } else if (ia == terms_.end() || ib->first < ia->first) {
            worst = std::max(worst, std::abs(ib->second));
            ++ib;
        } else {
            worst = std::max(worst, std::abs(ia->second - ib->second));
            ++ia;
            ++ib;
        }
    }
    return worst;
}

inline OperatorExpr op_mul(const OperatorExpr &a, const OperatorExpr &b) {
    return a * b;
}

/// a + c*b
inline OperatorExpr op_add(const OperatorExpr &a, Complex c, const OperatorExpr &b) {
    return a + c * b;
}

inline OperatorExpr adjoint(const OperatorExpr &a) {
    // Pauli words are self-adjoint; only coefficients change, so order and pruning carry over.
    OperatorExpr out = a;
    for (auto &t : out.terms_) {
        t.second = std::conj(t.second);
    }
    return out;
}

/// Vacuum expectation <0|a|0>: only words built from I and Z contribute, each with weight +1.
inline Complex vacuum_expectation(const OperatorExpr &a) {
    Complex total = 0.0;
    for (const auto &[w, c] : a.terms()) {
        if (w.is_diagonal()) {
            total += c;
        }
    }
    return total;
}

inline bool is_hermitian(const OperatorExpr &a, double tol = kEqualityTolerance) {
    for (const auto &[w, c] : a.terms()) {
        if (std::abs(c.imag()) > tol) {
            return false;
        }
    }
    return true;
}

inline bool is_unitary(const OperatorExpr &u, double tol = kEqualityTolerance) {
    return (adjoint(u) * u).approx_equals(OperatorExpr::identity(u.num_qubits()), tol);
}

/// Qubits on which some stored word has a non-identity letter, ascending.
inline std::vector<std::size_t> support(const OperatorExpr &a) {
    std::uint32_t mask = 0;
    for (const auto &t : a.terms()) {
        mask |= t.first.support_mask();
    }
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < a.num_qubits(); q++) {
        if ((mask >> q) & 1u) {
            out.push_back(q);
        }
    }
    return out;
}

/// Places a k-qubit expression onto the given qubits of an n-qubit register.
inline OperatorExpr embed(const OperatorExpr &local, std::size_t n, std::span<const std::size_t> qubits) {
    if (qubits.size() != local.num_qubits()) {
        throw std::invalid_argument("embedding needs one target qubit per local qubit");
    }
    std::vector<OperatorExpr::Term> terms;
    terms.reserve(local.num_terms());
    for (const auto &[w, c] : local.terms()) {
        PauliWord g(n);
        for (std::size_t j = 0; j < qubits.size(); j++) {
            g.set(qubits[j], w[j]);
        }
        terms.emplace_back(g, c);
    }
    return OperatorExpr::from_terms(n, terms);
}

/// Inverse of embed: reads the letters on `qubits`. Throws if a term acts outside them.
inline OperatorExpr restrict_to(const OperatorExpr &a, std::span<const std::size_t> qubits) {
    std::uint32_t allowed = 0;
    for (auto q : qubits) {
        allowed |= 1u << q;
    }
    std::vector<OperatorExpr::Term> terms;
    for (const auto &[w, c] : a.terms()) {
        if (w.support_mask() & ~allowed) {
            throw std::invalid_argument("operator acts outside the requested qubits");
        }
        PauliWord local(qubits.size());
        for (std::size_t j = 0; j < qubits.size(); j++) {
            local.set(j, w[qubits[j]]);
        }
        terms.emplace_back(local, c);
    }
    return OperatorExpr::from_terms(qubits.size(), terms);
}

/// Pads an expression with identity letters up to n qubits.
inline OperatorExpr widen(const OperatorExpr &a, std::size_t n) {
    std::vector<std::size_t> qubits(a.num_qubits());
    for (std::size_t q = 0; q < qubits.size(); q++) {
        qubits[q] = q;
    }
    return embed(a, n, qubits);
}

/// Divides out the phase of the largest-modulus coefficient (first such in canonical order).
inline OperatorExpr strip_global_phase(const OperatorExpr &a) {
    if (a.is_zero()) {
        return a;
    }
    const OperatorExpr::Term *best = &a.terms().front();
    for (const auto &t : a.terms()) {
        if (std::abs(t.second) > std::abs(best->second) + kPruneTolerance) {
            best = &t;
        }
    }
    Complex phase = best->second / std::abs(best->second);
    return std::conj(phase) * a;
}

}  // namespace heisennet
