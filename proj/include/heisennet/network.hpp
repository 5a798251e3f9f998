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

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "heisennet/pauli.hpp"

namespace heisennet {

enum class Axis { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<Axis, 3> kAxes = {Axis::X, Axis::Y, Axis::Z};

inline Pauli axis_letter(Axis a) {
    switch (a) {
        case Axis::X:
            return Pauli::X;
        case Axis::Y:
            return Pauli::Y;
        default:
            return Pauli::Z;
    }
}

inline char axis_char(Axis a) {
    return "xyz"[static_cast<int>(a)];
}

/// The Heisenberg-picture observables (q_x, q_y, q_z) of one qubit at one time,
/// written over the time-zero letters of the whole register.
struct Descriptor {
    OperatorExpr x;
    OperatorExpr y;
    OperatorExpr z;

    const OperatorExpr &operator[](Axis a) const {
        switch (a) {
            case Axis::X:
                return x;
            case Axis::Y:
                return y;
            default:
                return z;
        }
    }
    OperatorExpr &operator[](Axis a) {
        return const_cast<OperatorExpr &>(std::as_const(*this)[a]);
    }

    /// Returns the component for a Pauli letter; I maps to the identity.
    OperatorExpr for_letter(Pauli p) const {
        switch (p) {
            case Pauli::X:
                return x;
            case Pauli::Y:
                return y;
            case Pauli::Z:
                return z;
            default:
                return OperatorExpr::identity(x.num_qubits());
        }
    }

    bool exactly_equals(const Descriptor &o) const {
        return x.exactly_equals(o.x) && y.exactly_equals(o.y) && z.exactly_equals(o.z);
    }
    double max_deviation(const Descriptor &o) const {
        return std::max({x.max_deviation(o.x), y.max_deviation(o.y), z.max_deviation(o.z)});
    }
};

/// All descriptors of a register at one time.
using DescriptorSlice = std::vector<Descriptor>;

enum class GateKind { Not, Cnot, Hadamard, Phase, Toffoli, Custom };

/// A gate of the fixed library. Qubit indices are 0-based. For CNOT the order
/// is (control, target); for TOFFOLI (control, control, target).
struct Gate {
    GateKind kind = GateKind::Not;
    std::vector<std::size_t> qubits;
    double theta = 0.0;
    // Custom gates only: the unitary over qubits.size() local letters, and where it came from.
    OperatorExpr unitary;
    std::string source;

    static Gate not_gate(std::size_t a) {
        return {GateKind::Not, {a}, 0.0, {}, {}};
    }
    static Gate cnot(std::size_t control, std::size_t target) {
        return {GateKind::Cnot, {control, target}, 0.0, {}, {}};
    }
    static Gate hadamard(std::size_t a) {
        return {GateKind::Hadamard, {a}, 0.0, {}, {}};
    }
    static Gate phase(std::size_t a, double theta) {
        return {GateKind::Phase, {a}, theta, {}, {}};
    }
    static Gate toffoli(std::size_t c1, std::size_t c2, std::size_t target) {
        return {GateKind::Toffoli, {c1, c2, target}, 0.0, {}, {}};
    }
    static Gate custom(OperatorExpr local_unitary, std::vector<std::size_t> qubits, std::string source = "") {
        return {GateKind::Custom, std::move(qubits), 0.0, std::move(local_unitary), std::move(source)};
    }

    std::size_t arity() const {
        return qubits.size();
    }

    /// NOT, CNOT, H and TOFFOLI conjugate with dyadic coefficients, so their
    /// descriptor updates are exact in floating point.
    bool exact_arithmetic() const {
        return kind != GateKind::Phase && kind != GateKind::Custom;
    }

    std::string name() const {
        switch (kind) {
            case GateKind::Not:
                return "not";
            case GateKind::Cnot:
                return "cnot";
            case GateKind::Hadamard:
                return "h";
            case GateKind::Phase:
                return "phase";
            case GateKind::Toffoli:
                return "toffoli";
            default:
                return "custom";
        }
    }

    /// Human-readable form with 1-based qubit labels, e.g. "cnot(1,2)".
    std::string str() const {
        std::ostringstream out;
        out << name() << "(";
        if (kind == GateKind::Custom) {
            out << (source.empty() ? "<inline>" : source) << ", ";
        }
        for (std::size_t j = 0; j < qubits.size(); j++) {
            out << (j ? "," : "") << qubits[j] + 1;
        }
        if (kind == GateKind::Phase) {
            out.precision(17);
            out << "," << theta;
        }
        out << ")";
        return out.str();
    }

    friend bool operator==(const Gate &a, const Gate &b) {
        return a.kind == b.kind && a.qubits == b.qubits && a.theta == b.theta && a.unitary.exactly_equals(b.unitary);
    }
};

using Step = std::vector<Gate>;

/// A quantum computational network: a qubit count and an ordered list of steps,
/// each a set of gates with pairwise disjoint supports.
struct Network {
    std::size_t num_qubits = 0;
    std::vector<Step> steps;

    std::size_t depth() const {
        return steps.size();
    }

    friend bool operator==(const Network &a, const Network &b) = default;
};

/// Per step, the qubits whose descriptor triple changed during that step.
struct LocalityLedger {
    std::vector<std::vector<std::size_t>> changed;

    friend bool operator==(const LocalityLedger &a, const LocalityLedger &b) = default;
};

/// Descriptor slices for t = 0 .. depth.
struct DescriptorHistory {
    std::size_t num_qubits = 0;
    std::vector<DescriptorSlice> slices;

    std::size_t num_times() const {
        return slices.size();
    }
    const DescriptorSlice &at(std::size_t t) const {
        if (t >= slices.size()) {
            throw std::out_of_range("time " + std::to_string(t) + " not recorded (history has " +
                                    std::to_string(slices.size()) + " slices)");
        }
        return slices[t];
    }
    const DescriptorSlice &final_slice() const {
        return slices.back();
    }
};

struct RunResult {
    DescriptorHistory history;
    LocalityLedger ledger;
};

struct StepResult {
    DescriptorSlice next;
    std::vector<std::size_t> changed;
};

/// Reduced density operator of a qubit subset, written over time-zero letters
/// supported on that subset.
struct DensityOperator {
    std::vector<std::size_t> subset;
    OperatorExpr op;

    /// The same operator over |subset| local letters.
    OperatorExpr local() const {
        return restrict_to(op, subset);
    }
    Complex trace() const {
        return op.identity_coeff() * std::ldexp(1.0, static_cast<int>(subset.size()));
    }
};

namespace detail {

inline std::uint32_t qubit_mask(std::span<const std::size_t> qubits) {
    std::uint32_t m = 0;
    for (auto q : qubits) {
        m |= 1u << q;
    }
    return m;
}

}  // namespace detail

inline void validate_gate(const Gate &g, std::size_t n) {
    std::size_t expected = 0;
    switch (g.kind) {
        case GateKind::Not:
        case GateKind::Hadamard:
        case GateKind::Phase:
            expected = 1;
            break;
        case GateKind::Cnot:
            expected = 2;
            break;
        case GateKind::Toffoli:
            expected = 3;
            break;
        case GateKind::Custom:
            expected = g.qubits.size();
            if (expected == 0) {
                throw std::invalid_argument("custom gate needs at least one qubit");
            }
            break;
    }
    if (g.qubits.size() != expected) {
        throw std::invalid_argument(g.name() + " gate takes " + std::to_string(expected) + " qubit(s), got " +
                                    std::to_string(g.qubits.size()));
    }
    std::set<std::size_t> seen;
    for (auto q : g.qubits) {
        if (q >= n) {
            throw std::out_of_range("qubit " + std::to_string(q + 1) + " out of range for " + std::to_string(n) +
                                    "-qubit network in " + g.str());
        }
        if (!seen.insert(q).second) {
            throw std::invalid_argument("repeated qubit in " + g.str());
        }
    }
    if (g.kind == GateKind::Phase && !std::isfinite(g.theta)) {
        throw std::invalid_argument("phase angle must be finite");
    }
    if (g.kind == GateKind::Custom) {
        if (g.unitary.num_qubits() != g.qubits.size()) {
            throw std::invalid_argument("custom unitary acts on " + std::to_string(g.unitary.num_qubits()) +
                                        " letters but the gate lists " + std::to_string(g.qubits.size()) +
                                        " qubits");
        }
        if (!is_unitary(g.unitary)) {
            throw std::invalid_argument("custom gate operator is not unitary: " + g.str());
        }
    }
}

/// Throws if two gates of the step share a qubit.
inline void validate_step(const Step &step, std::size_t n) {
    std::uint32_t used = 0;
    for (const auto &g : step) {
        validate_gate(g, n);
        std::uint32_t m = detail::qubit_mask(g.qubits);
        if (used & m) {
            throw std::invalid_argument("overlapping gate supports in one step at " + g.str());
        }
        used |= m;
    }
}

inline void validate_network(const Network &net) {
    if (net.num_qubits == 0) {
        throw std::invalid_argument("network needs at least one qubit");
    }
    if (net.num_qubits > kMaxQubits) {
        throw std::invalid_argument("network has too many qubits");
    }
    for (const auto &s : net.steps) {
        validate_step(s, net.num_qubits);
    }
}

/// Union of the gate qubits of a step, ascending.
inline std::vector<std::size_t> step_support(const Step &step) {
    std::set<std::size_t> all;
    for (const auto &g : step) {
        all.insert(g.qubits.begin(), g.qubits.end());
    }
    return {all.begin(), all.end()};
}

inline DescriptorSlice initial_descriptors(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("need at least one qubit");
    }
    DescriptorSlice out;
    out.reserve(n);
    for (std::size_t a = 0; a < n; a++) {
        out.push_back({OperatorExpr::letter(n, a, Pauli::X), OperatorExpr::letter(n, a, Pauli::Y),
                       OperatorExpr::letter(n, a, Pauli::Z)});
    }
    return out;
}

/// The gate's unitary as a function of its own qubits' descriptors, written
/// over arity() local letters (local qubit j is gate.qubits[j]).
inline OperatorExpr local_unitary(const Gate &g) {
    const double s = std::numbers::sqrt2 / 2;
    switch (g.kind) {
        case GateKind::Not:
            return OperatorExpr::word("X");
        case GateKind::Cnot:
            return 0.5 * (OperatorExpr::word("II") + OperatorExpr::word("IX") + OperatorExpr::word("ZI") -
                          OperatorExpr::word("ZX"));
        case GateKind::Hadamard:
            return OperatorExpr::word("X", s) + OperatorExpr::word("Z", s);
        case GateKind::Phase:
            return OperatorExpr::word("I", std::cos(g.theta / 2)) +
                   OperatorExpr::word("Z", Complex{0.0, -std::sin(g.theta / 2)});
        case GateKind::Toffoli: {
            // 1 - |11><11| (1 - X) with |1><1| = (1 - Z)/2.
            auto controls = OperatorExpr::word("III") - OperatorExpr::word("ZII") - OperatorExpr::word("IZI") +
                            OperatorExpr::word("ZZI");
            auto flip = OperatorExpr::word("III") - OperatorExpr::word("IIX");
            return OperatorExpr::word("III") - 0.25 * (controls * flip);
        }
        default:
            return g.unitary;
    }
}

/// Images U^dag sigma U of every local letter, indexed [local qubit][axis].
/// Hadamard and phase use closed forms; the rest multiply out exactly.
inline std::vector<std::array<OperatorExpr, 3>> local_conjugation_table(const Gate &g) {
    std::size_t k = g.arity();
    std::vector<std::array<OperatorExpr, 3>> table(k);
    if (g.kind == GateKind::Hadamard) {
        table[0] = {OperatorExpr::word("Z"), OperatorExpr::word("Y", -1.0), OperatorExpr::word("X")};
        return table;
    }
    if (g.kind == GateKind::Phase) {
        double c = std::cos(g.theta);
        double s = std::sin(g.theta);
        table[0] = {OperatorExpr::word("X", c) + OperatorExpr::word("Y", -s),
                    OperatorExpr::word("Y", c) + OperatorExpr::word("X", s), OperatorExpr::word("Z")};
        return table;
    }
    OperatorExpr u = local_unitary(g);
    OperatorExpr ud = adjoint(u);
    for (std::size_t j = 0; j < k; j++) {
        for (auto a : kAxes) {
            table[j][static_cast<int>(a)] = ud * OperatorExpr::letter(k, j, axis_letter(a)) * u;
        }
    }
    return table;
}

/// Substitutes descriptor components for letters: each local letter on local
/// qubit j becomes the matching component of qubits[j]'s descriptor.
inline OperatorExpr substitute(const OperatorExpr &local, std::span<const std::size_t> qubits,
                               const DescriptorSlice &slice) {
    if (local.num_qubits() != qubits.size()) {
        throw std::invalid_argument("substitution needs one qubit per local letter");
    }
    std::size_t n = slice.empty() ? 0 : slice.front().x.num_qubits();
    std::vector<OperatorExpr> products;
    std::vector<Complex> weights;
    std::size_t expected = 0;
    for (const auto &[w, c] : local.terms()) {
        std::optional<OperatorExpr> prod;
        for (std::size_t j = 0; j < qubits.size(); j++) {
            Pauli p = w[j];
            if (p == Pauli::I) {
                continue;
            }
            const auto &d = slice.at(qubits[j]);
            const OperatorExpr &factor = d[static_cast<Axis>(static_cast<int>(p) - 1)];
            prod = prod ? *prod * factor : factor;
        }
        products.push_back(prod ? std::move(*prod) : OperatorExpr::identity(n));
        weights.push_back(c);
        expected += products.back().num_terms();
    }
    TermAccumulator acc(n, expected);
    for (std::size_t i = 0; i < products.size(); i++) {
        for (const auto &[w, c] : products[i].terms()) {
            acc.add(w, weights[i] * c);
        }
    }
    return acc.finish();
}

/// Substitutes time-t descriptors into a recipe written over all n register letters.
inline OperatorExpr assemble(const OperatorExpr &recipe, const DescriptorSlice &slice) {
    std::vector<std::size_t> all(recipe.num_qubits());
    for (std::size_t q = 0; q < all.size(); q++) {
        all[q] = q;
    }
    if (all.size() != slice.size()) {
        throw std::invalid_argument("recipe qubit count does not match the descriptor slice");
    }
    return substitute(recipe, all, slice);
}

/// U_G evaluated on the current descriptors of its qubits, over time-zero letters.
inline OperatorExpr gate_unitary(const Gate &g, const DescriptorSlice &current) {
    validate_gate(g, current.size());
    return substitute(local_unitary(g), g.qubits, current);
}

/// Conjugates every participating qubit's descriptor by its gate's unitary.
/// Descriptors of other qubits are copied unchanged.
inline StepResult apply_step(const DescriptorSlice &current, const Step &step) {
    validate_step(step, current.size());
    StepResult out{current, {}};
    for (const auto &g : step) {
        auto table = local_conjugation_table(g);
        for (std::size_t j = 0; j < g.arity(); j++) {
            std::size_t q = g.qubits[j];
            for (auto a : kAxes) {
                out.next[q][a] = substitute(table[j][static_cast<int>(a)], g.qubits, current);
            }
        }
        for (auto q : g.qubits) {
            bool same = g.exact_arithmetic() ? out.next[q].exactly_equals(current[q])
                                             : out.next[q].max_deviation(current[q]) <= kEqualityTolerance;
            if (!same) {
                out.changed.push_back(q);
            }
        }
    }
    std::sort(out.changed.begin(), out.changed.end());
    return out;
}

inline RunResult run(const Network &net) {
    validate_network(net);
    RunResult out;
    out.history.num_qubits = net.num_qubits;
    out.history.slices.reserve(net.depth() + 1);
    out.history.slices.push_back(initial_descriptors(net.num_qubits));
    for (const auto &step : net.steps) {
        auto r = apply_step(out.history.slices.back(), step);
        out.history.slices.push_back(std::move(r.next));
        out.ledger.changed.push_back(std::move(r.changed));
    }
    return out;
}

/// The word P(t) assembled from time-t descriptor components for a time-zero word P.
inline OperatorExpr evolve_word(const PauliWord &w, const DescriptorSlice &slice) {
    return assemble(OperatorExpr::from_word(w), slice);
}

/// rho_S(t) = 2^{-|S|} sum_P <P(t)> P(0) over the 4^|S| words P supported on S.
inline DensityOperator reduced_density(const DescriptorHistory &history, std::vector<std::size_t> subset,
                                       std::size_t t) {
    const auto &slice = history.at(t);
    std::size_t n = history.num_qubits;
    if (subset.empty()) {
        throw std::invalid_argument("density subset must be nonempty");
    }
    std::sort(subset.begin(), subset.end());
    if (std::adjacent_find(subset.begin(), subset.end()) != subset.end()) {
        throw std::invalid_argument("density subset has repeated qubits");
    }
    if (subset.back() >= n) {
        throw std::out_of_range("density subset qubit " + std::to_string(subset.back() + 1) + " out of range");
    }
    const double scale = std::ldexp(1.0, -static_cast<int>(subset.size()));
    std::vector<OperatorExpr::Term> terms;
    // Depth-first over letters so that shared prefixes are multiplied once.
    auto visit = [&](auto &self, std::size_t depth, PauliWord word, const OperatorExpr &evolved) -> void {
        if (depth == subset.size()) {
            Complex e = vacuum_expectation(evolved);
            if (std::abs(e) >= kPruneTolerance) {
                terms.emplace_back(word, scale * e);
            }
            return;
        }
        std::size_t q = subset[depth];
        self(self, depth + 1, word, evolved);
        for (auto a : kAxes) {
            PauliWord w = word;
            w.set(q, axis_letter(a));
            self(self, depth + 1, w, evolved * slice[q][a]);
        }
    };
    visit(visit, 0, PauliWord(n), OperatorExpr::identity(n));
    return {subset, OperatorExpr::from_terms(n, terms)};
}

inline Gate inverse_gate(const Gate &g) {
    Gate inv = g;
    if (g.kind == GateKind::Phase) {
        inv.theta = -g.theta;
    } else if (g.kind == GateKind::Custom) {
        inv.unitary = adjoint(g.unitary);
        if (!g.source.empty()) {
            inv.source = g.source + "^dag";
        }
    }
    return inv;
}

/// Steps in reverse order with every gate replaced by its inverse.
inline Network invert_network(const Network &net) {
    Network out{net.num_qubits, {}};
    for (auto it = net.steps.rbegin(); it != net.steps.rend(); ++it) {
        Step s;
        for (const auto &g : *it) {
            s.push_back(inverse_gate(g));
        }
        out.steps.push_back(std::move(s));
    }
    return out;
}

/// Runs `preparation` first, then `main`.
inline Network prepend(const Network &preparation, const Network &main) {
    if (preparation.num_qubits != main.num_qubits) {
        throw std::invalid_argument("cannot prepend a " + std::to_string(preparation.num_qubits) +
                                    "-qubit network to a " + std::to_string(main.num_qubits) + "-qubit network");
    }
    Network out = preparation;
    out.steps.insert(out.steps.end(), main.steps.begin(), main.steps.end());
    return out;
}

/// Product of the step's gate unitaries in local form, over time-zero letters.
/// This is the Schrodinger-picture operator that maps psi(t) to psi(t+1).
inline OperatorExpr fresh_step_unitary(const Step &step, std::size_t n) {
    OperatorExpr u = OperatorExpr::identity(n);
    for (const auto &g : step) {
        u = u * embed(local_unitary(g), n, g.qubits);
    }
    return u;
}

}  // namespace heisennet
