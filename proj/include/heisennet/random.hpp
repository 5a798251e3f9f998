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
#include <numeric>
#include <random>

#include "heisennet/gauge.hpp"

namespace heisennet {

struct GateMix {
    bool hadamard = true;
    bool phase = false;
    bool toffoli = false;
    /// Probability that a free qubit starts a gate in a given step.
    double fill = 0.6;
};

inline GateMix clifford_mix() {
    return {};
}

inline GateMix mixed_mix() {
    return {true, true, true, 0.6};
}

/// Random network: each step shuffles the qubits and greedily places gates
/// on free ones, so supports within a step are disjoint by construction.
template <typename Rng>
Network random_network(Rng &rng, std::size_t n, std::size_t depth, const GateMix &mix = {}) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    Network net{n, {}};
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t s = 0; s < depth; s++) {
        std::shuffle(order.begin(), order.end(), rng);
        Step step;
        std::size_t i = 0;
        while (i < n) {
            if (unit(rng) >= mix.fill) {
                i++;
                continue;
            }
            std::size_t free = n - i;
            std::vector<GateKind> kinds{GateKind::Not};
            if (mix.hadamard) {
                kinds.push_back(GateKind::Hadamard);
            }
            if (mix.phase) {
                kinds.push_back(GateKind::Phase);
            }
            if (free >= 2) {
                kinds.push_back(GateKind::Cnot);
                kinds.push_back(GateKind::Cnot);
            }
            if (free >= 3 && mix.toffoli) {
                kinds.push_back(GateKind::Toffoli);
            }
            GateKind k = kinds[std::uniform_int_distribution<std::size_t>(0, kinds.size() - 1)(rng)];
            switch (k) {
                case GateKind::Not:
                    step.push_back(Gate::not_gate(order[i]));
                    i += 1;
                    break;
                case GateKind::Hadamard:
                    step.push_back(Gate::hadamard(order[i]));
                    i += 1;
                    break;
                case GateKind::Phase:
                    step.push_back(Gate::phase(order[i], angle(rng)));
                    i += 1;
                    break;
                case GateKind::Cnot:
                    step.push_back(Gate::cnot(order[i], order[i + 1]));
                    i += 2;
                    break;
                default:
                    step.push_back(Gate::toffoli(order[i], order[i + 1], order[i + 2]));
                    i += 3;
                    break;
            }
        }
        net.steps.push_back(std::move(step));
    }
    return net;
}

/// A random unitary that maps |0> to a phase times |0>: a product of CNOT,
/// CZ, S and Z factors, each of which fixes |0> up to phase.
template <typename Rng>
OperatorExpr random_vacuum_fixing_clifford(Rng &rng, std::size_t n, std::size_t factors) {
    OperatorExpr v = OperatorExpr::identity(n);
    std::uniform_int_distribution<std::size_t> qubit(0, n - 1);
    std::uniform_int_distribution<int> kind(0, n >= 2 ? 3 : 1);
    for (std::size_t f = 0; f < factors; f++) {
        int k = kind(rng);
        std::size_t a = qubit(rng);
        OperatorExpr factor;
        if (k == 0) {
            factor = embed(local_unitary(Gate::phase(0, std::numbers::pi / 2)), n, std::array{a});
        } else if (k == 1) {
            factor = OperatorExpr::letter(n, a, Pauli::Z);
        } else {
            std::size_t b = qubit(rng);
            while (b == a) {
                b = qubit(rng);
            }
            if (k == 2) {
                factor = embed(local_unitary(Gate::cnot(0, 1)), n, std::array{a, b});
            } else {
                factor = 0.5 * (OperatorExpr::identity(n) + OperatorExpr::letter(n, a, Pauli::Z) +
                                OperatorExpr::letter(n, b, Pauli::Z) -
                                OperatorExpr::letter(n, a, Pauli::Z) * OperatorExpr::letter(n, b, Pauli::Z));
            }
        }
        v = v * factor;
    }
    return v;
}

template <typename Rng>
GaugeTransform random_clifford_gauge(Rng &rng, std::size_t n, std::size_t num_times, std::size_t factors = 4) {
    std::vector<OperatorExpr> vs;
    for (std::size_t t = 0; t < num_times; t++) {
        vs.push_back(random_vacuum_fixing_clifford(rng, n, factors));
    }
    return validate_gauge(std::move(vs));
}

/// Random Pauli-word recipe (possibly a short sum) for probing histories.
template <typename Rng>
OperatorExpr random_recipe(Rng &rng, std::size_t n, std::size_t terms = 2) {
    std::uniform_int_distribution<int> letter(0, 3);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    OperatorExpr out(n);
    for (std::size_t k = 0; k < terms; k++) {
        PauliWord w(n);
        for (std::size_t q = 0; q < n; q++) {
            w.set(q, static_cast<Pauli>(letter(rng)));
        }
        out = out + OperatorExpr::from_word(w, coeff(rng));
    }
    return out;
}

}  // namespace heisennet
