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

#include <gtest/gtest.h>

#include <functional>

#include "heisennet/network.hpp"
#include "heisennet/text_format.hpp"
#include "support.hpp"

using namespace heisennet;
using heisennet::testkit::Rng;

namespace {

OperatorExpr W(std::string_view s, Complex c = 1.0) {
    return OperatorExpr::word(s, c);
}

Network two_qubit(std::vector<Step> steps) {
    return Network{2, std::move(steps)};
}

void expect_algebra(const DescriptorSlice &slice, double tol) {
    const Complex i{0.0, 1.0};
    std::size_t n = slice.size();
    auto one = OperatorExpr::identity(n);
    for (std::size_t a = 0; a < n; a++) {
        const auto &d = slice[a];
        EXPECT_TRUE((d.x * d.y).approx_equals(i * d.z, tol));
        EXPECT_TRUE((d.y * d.z).approx_equals(i * d.x, tol));
        EXPECT_TRUE((d.z * d.x).approx_equals(i * d.y, tol));
        for (auto ax : kAxes) {
            EXPECT_TRUE((d[ax] * d[ax]).approx_equals(one, tol));
        }
        for (std::size_t b = a + 1; b < n; b++) {
            for (auto ax : kAxes) {
                for (auto bx : kAxes) {
                    EXPECT_TRUE((d[ax] * slice[b][bx]).approx_equals(slice[b][bx] * d[ax], tol));
                }
            }
        }
    }
}

TEST(InitialDescriptors, FreshLetters) {
    auto one = initial_descriptors(1);
    EXPECT_TRUE(one[0].x.exactly_equals(W("X")));
    EXPECT_TRUE(one[0].y.exactly_equals(W("Y")));
    EXPECT_TRUE(one[0].z.exactly_equals(W("Z")));
    auto two = initial_descriptors(2);
    EXPECT_TRUE(two[1].x.exactly_equals(W("IX")));
    EXPECT_TRUE(two[1].y.exactly_equals(W("IY")));
    EXPECT_TRUE(two[1].z.exactly_equals(W("IZ")));
    expect_algebra(initial_descriptors(4), 0.0);
    EXPECT_THROW(initial_descriptors(0), std::invalid_argument);
}

TEST(GateUnitary, FreshForms) {
    auto fresh = initial_descriptors(2);
    EXPECT_TRUE(gate_unitary(Gate::not_gate(0), fresh).exactly_equals(W("XI")));
    auto cnot = gate_unitary(Gate::cnot(0, 1), fresh);
    EXPECT_TRUE(cnot.exactly_equals(0.5 * (W("II") + W("IX") + W("ZI") - W("ZX"))));
    auto h = gate_unitary(Gate::hadamard(0), initial_descriptors(1));
    EXPECT_TRUE(is_unitary(h));
    dense::Matrix hm(2, 2);
    hm << 1, 1, 1, -1;
    hm /= std::sqrt(2.0);
    EXPECT_LT(testkit::matrix_gap(dense::to_matrix(h), hm), 1e-15);
}

TEST(GateUnitary, AgreesWithTextbookMatrices) {
    // Fresh-letter forms against the oracle's independent matrices, up to global phase.
    std::vector<Gate> gates{Gate::not_gate(0),   Gate::hadamard(0),   Gate::phase(0, 0.7),
                            Gate::phase(0, -2.1), Gate::cnot(0, 1),    Gate::cnot(1, 0),
                            Gate::toffoli(0, 1, 2), Gate::toffoli(2, 0, 1)};
    for (const auto &g : gates) {
        std::size_t n = g.kind == GateKind::Toffoli ? 3 : (g.kind == GateKind::Cnot ? 2 : 1);
        auto u = gate_unitary(g, initial_descriptors(n));
        EXPECT_TRUE(is_unitary(u)) << g.str();
        auto id = dense::Matrix::Identity(1 << n, 1 << n);
        dense::Vector basis_ref;
        dense::Matrix ref(1 << n, 1 << n);
        for (Eigen::Index c = 0; c < (1 << n); c++) {
            ref.col(c) = dense::apply_gate(id.col(c), dense::gate_matrix(g), g.qubits, n);
        }
        auto mine = dense::to_matrix(u);
        // Remove global phase using the largest entry.
        Eigen::Index r0, c0;
        ref.cwiseAbs().maxCoeff(&r0, &c0);
        Complex phase = ref(r0, c0) / mine(r0, c0);
        EXPECT_NEAR(std::abs(phase), 1.0, 1e-12);
        EXPECT_LT(testkit::matrix_gap(phase * mine, ref), 1e-12) << g.str();
    }
}

TEST(ConjugationTable, MatchesDirectConjugation) {
    std::vector<Gate> gates{Gate::not_gate(0), Gate::hadamard(0), Gate::phase(0, 0.3), Gate::cnot(0, 1),
                            Gate::toffoli(0, 1, 2)};
    for (const auto &g : gates) {
        auto u = local_unitary(g);
        auto ud = adjoint(u);
        auto table = local_conjugation_table(g);
        for (std::size_t j = 0; j < g.arity(); j++) {
            for (auto ax : kAxes) {
                auto sigma = OperatorExpr::letter(g.arity(), j, axis_letter(ax));
                EXPECT_TRUE(table[j][static_cast<int>(ax)].approx_equals(ud * sigma * u, 1e-14)) << g.str();
            }
        }
    }
}

TEST(ApplyStep, NotFlipsYAndZ) {
    auto r = apply_step(initial_descriptors(1), {Gate::not_gate(0)});
    EXPECT_TRUE(r.next[0].x.exactly_equals(W("X")));
    EXPECT_TRUE(r.next[0].y.exactly_equals(W("Y", -1.0)));
    EXPECT_TRUE(r.next[0].z.exactly_equals(W("Z", -1.0)));
    EXPECT_EQ(r.changed, (std::vector<std::size_t>{0}));
}

TEST(ApplyStep, CnotCopiesControlZOntoTarget) {
    auto r = apply_step(initial_descriptors(2), {Gate::cnot(0, 1)});
    EXPECT_TRUE(r.next[1].z.exactly_equals(W("ZZ")));
    EXPECT_TRUE(r.next[0].x.exactly_equals(W("XX")));
    EXPECT_TRUE(r.next[0].z.exactly_equals(W("ZI")));
    EXPECT_TRUE(r.next[1].x.exactly_equals(W("IX")));
}

TEST(ApplyStep, EmptyStepChangesNothing) {
    auto fresh = initial_descriptors(3);
    auto r = apply_step(fresh, {});
    EXPECT_TRUE(r.changed.empty());
    for (std::size_t a = 0; a < 3; a++) {
        EXPECT_TRUE(r.next[a].exactly_equals(fresh[a]));
    }
}

TEST(ApplyStep, RejectsOverlapsAndBadGates) {
    auto fresh = initial_descriptors(2);
    EXPECT_THROW(apply_step(fresh, {Gate::not_gate(0), Gate::hadamard(0)}), std::invalid_argument);
    EXPECT_THROW(apply_step(fresh, {Gate::cnot(0, 0)}), std::invalid_argument);
    EXPECT_THROW(apply_step(fresh, {Gate::not_gate(2)}), std::out_of_range);
    EXPECT_THROW(apply_step(fresh, {Gate::phase(0, std::nan(""))}), std::invalid_argument);
    EXPECT_THROW(apply_step(fresh, {Gate::custom(W("X") + W("Z"), {0})}), std::invalid_argument);
    EXPECT_THROW(apply_step(fresh, {Gate::custom(W("XX"), {0})}), std::invalid_argument);
}

TEST(Run, CopyingNetwork) {
    auto net = two_qubit({{Gate::not_gate(0)}, {Gate::cnot(0, 1)}});
    auto r = run(net);
    const auto &q = r.history.at(2);
    EXPECT_TRUE(q[0].x.exactly_equals(W("XX")));
    EXPECT_TRUE(q[0].y.exactly_equals(W("YX", -1.0)));
    EXPECT_TRUE(q[0].z.exactly_equals(W("ZI", -1.0)));
    EXPECT_TRUE(q[1].x.exactly_equals(W("IX")));
    EXPECT_TRUE(q[1].y.exactly_equals(W("ZY", -1.0)));
    EXPECT_TRUE(q[1].z.exactly_equals(W("ZZ", -1.0)));
    EXPECT_EQ(r.ledger.changed, (std::vector<std::vector<std::size_t>>{{0}, {0, 1}}));
}

TEST(Run, IndependentNetwork) {
    auto net = two_qubit({{Gate::not_gate(0)}, {Gate::not_gate(1)}});
    auto r = run(net);
    const auto &q = r.history.at(2);
    EXPECT_TRUE(q[0].x.exactly_equals(W("XI")));
    EXPECT_TRUE(q[0].y.exactly_equals(W("YI", -1.0)));
    EXPECT_TRUE(q[0].z.exactly_equals(W("ZI", -1.0)));
    EXPECT_TRUE(q[1].x.exactly_equals(W("IX")));
    EXPECT_TRUE(q[1].y.exactly_equals(W("IY", -1.0)));
    EXPECT_TRUE(q[1].z.exactly_equals(W("IZ", -1.0)));
    EXPECT_EQ(r.ledger.changed, (std::vector<std::vector<std::size_t>>{{0}, {1}}));
}

TEST(Run, HistoryAccessIsChecked) {
    auto r = run(two_qubit({{Gate::not_gate(0)}}));
    EXPECT_EQ(r.history.num_times(), 2u);
    EXPECT_THROW(r.history.at(2), std::out_of_range);
}

TEST(ReducedDensity, Examples) {
    auto copying = run(two_qubit({{Gate::not_gate(0)}, {Gate::cnot(0, 1)}})).history;
    auto rho0 = reduced_density(copying, {0}, 0);
    EXPECT_TRUE(rho0.local().approx_equals(0.5 * (W("I") + W("Z")), 0.0));
    auto rho2 = reduced_density(copying, {1}, 2);
    EXPECT_TRUE(rho2.local().approx_equals(0.5 * (W("I") - W("Z")), 0.0));
    EXPECT_DOUBLE_EQ(rho2.trace().real(), 1.0);

    auto bell = run(two_qubit({{Gate::hadamard(0)}, {Gate::cnot(0, 1)}})).history;
    auto half = reduced_density(bell, {1}, 2);
    EXPECT_TRUE(half.local().approx_equals(0.5 * W("I"), 1e-15));
    auto both = reduced_density(bell, {0, 1}, 2);
    EXPECT_TRUE(both.local().approx_equals(0.25 * (W("II") + W("XX") - W("YY") + W("ZZ")), 1e-15));
}

TEST(ReducedDensity, Errors) {
    auto h = run(two_qubit({{Gate::not_gate(0)}})).history;
    EXPECT_THROW(reduced_density(h, {}, 0), std::invalid_argument);
    EXPECT_THROW(reduced_density(h, {2}, 0), std::out_of_range);
    EXPECT_THROW(reduced_density(h, {0, 0}, 0), std::invalid_argument);
    EXPECT_THROW(reduced_density(h, {0}, 5), std::out_of_range);
}

TEST(InvertNetwork, Examples) {
    EXPECT_EQ(inverse_gate(Gate::not_gate(0)), Gate::not_gate(0));
    EXPECT_EQ(inverse_gate(Gate::phase(0, 0.4)), Gate::phase(0, -0.4));
    auto copying = two_qubit({{Gate::not_gate(0)}, {Gate::cnot(0, 1)}});
    EXPECT_EQ(invert_network(copying), two_qubit({{Gate::cnot(0, 1)}, {Gate::not_gate(0)}}));
}

TEST(Prepend, Examples) {
    auto copying = two_qubit({{Gate::not_gate(0)}, {Gate::cnot(0, 1)}});
    EXPECT_EQ(prepend(Network{2, {}}, copying), copying);
    auto bell = prepend(two_qubit({{Gate::hadamard(0)}}), two_qubit({{Gate::cnot(0, 1)}}));
    EXPECT_EQ(bell.depth(), 2u);
    auto h = run(bell).history;
    const auto &q = h.at(2);
    EXPECT_NEAR(vacuum_expectation(q[0].z * q[1].z).real(), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(vacuum_expectation(q[0].z)), 0.0, 1e-15);
    EXPECT_THROW(prepend(Network{3, {}}, copying), std::invalid_argument);
}

// Properties over random networks.

TEST(Properties, AlgebraHoldsAtEveryTime) {
    Rng rng(31);
    for (int k = 0; k < 60; k++) {
        auto net = random_network(rng, 1 + k % 4, 6, mixed_mix());
        auto h = run(net).history;
        for (std::size_t t = 0; t < h.num_times(); t++) {
            expect_algebra(h.at(t), 1e-10);
        }
    }
}

TEST(Properties, OutsideDescriptorsAreUntouchedBitExactly) {
    Rng rng(32);
    for (int k = 0; k < 200; k++) {
        auto net = random_network(rng, 1 + k % 6, 1 + k % 10, mixed_mix());
        auto r = run(net);
        for (std::size_t s = 0; s < net.depth(); s++) {
            auto sup = step_support(net.steps[s]);
            for (std::size_t a = 0; a < net.num_qubits; a++) {
                if (std::find(sup.begin(), sup.end(), a) == sup.end()) {
                    EXPECT_TRUE(r.history.at(s + 1)[a].exactly_equals(r.history.at(s)[a]));
                }
            }
            for (auto a : r.ledger.changed[s]) {
                EXPECT_NE(std::find(sup.begin(), sup.end(), a), sup.end());
            }
        }
    }
}

TEST(Properties, ParameterIndependenceAcrossDisjointBlocks) {
    // Two blocks that never share a gate; changing angles in one block must
    // leave the other block's histories identical term for term.
    Rng rng(33);
    for (int k = 0; k < 50; k++) {
        std::size_t na = 1 + k % 3, nb = 1 + (k / 3) % 3;
        auto a = random_network(rng, na, 6, mixed_mix());
        auto b = random_network(rng, nb, 6, mixed_mix());
        auto combine = [&](const Network &left) {
            Network net{na + nb, {}};
            for (std::size_t s = 0; s < 6; s++) {
                Step step = left.steps[s];
                for (Gate g : b.steps[s]) {
                    for (auto &q : g.qubits) {
                        q += na;
                    }
                    step.push_back(g);
                }
                net.steps.push_back(step);
            }
            return net;
        };
        Network a2 = a;
        for (auto &step : a2.steps) {
            for (auto &g : step) {
                if (g.kind == GateKind::Phase) {
                    g.theta += 0.77;
                }
            }
        }
        auto h1 = run(combine(a)).history;
        auto h2 = run(combine(a2)).history;
        for (std::size_t t = 0; t < h1.num_times(); t++) {
            for (std::size_t q = na; q < na + nb; q++) {
                EXPECT_TRUE(h1.at(t)[q].exactly_equals(h2.at(t)[q]));
            }
        }
    }
}

TEST(Properties, RunningForwardThenBackRestoresFreshDescriptors) {
    Rng rng(34);
    for (int k = 0; k < 50; k++) {
        auto net = random_network(rng, 1 + k % 5, 8, clifford_mix());
        auto h = run(prepend(net, invert_network(net))).history;
        for (std::size_t a = 0; a < net.num_qubits; a++) {
            EXPECT_TRUE(h.final_slice()[a].exactly_equals(h.at(0)[a]));
        }
    }
}

// One-step networks over the gate library are identified by their descriptor map.
std::vector<Step> all_single_steps(std::size_t n) {
    std::vector<Gate> gates;
    for (std::size_t a = 0; a < n; a++) {
        gates.push_back(Gate::not_gate(a));
        gates.push_back(Gate::hadamard(a));
        for (double th : {std::numbers::pi / 4, std::numbers::pi / 2, 1.0, -2.5}) {
            gates.push_back(Gate::phase(a, th));
        }
        for (std::size_t b = 0; b < n; b++) {
            if (b != a) {
                gates.push_back(Gate::cnot(a, b));
                for (std::size_t c = b + 1; c < n; c++) {
                    if (c != a) {
                        gates.push_back(Gate::toffoli(b, c, a));
                    }
                }
            }
        }
    }
    std::vector<Step> steps;
    // All subsets of gates with disjoint supports, each in a canonical order.
    std::function<void(std::size_t, Step, std::uint32_t)> grow = [&](std::size_t from, Step cur, std::uint32_t used) {
        steps.push_back(cur);
        for (std::size_t i = from; i < gates.size(); i++) {
            auto m = detail::qubit_mask(gates[i].qubits);
            if (m & used) {
                continue;
            }
            Step next = cur;
            next.push_back(gates[i]);
            grow(i + 1, next, used | m);
        }
    };
    grow(0, {}, 0);
    return steps;
}

TEST(Properties, SingleStepDynamicsAreRecoverable) {
    for (std::size_t n = 1; n <= 3; n++) {
        auto steps = all_single_steps(n);
        std::vector<DescriptorSlice> maps;
        for (const auto &s : steps) {
            maps.push_back(apply_step(initial_descriptors(n), s).next);
        }
        std::size_t collisions = 0;
        for (std::size_t i = 0; i < maps.size(); i++) {
            for (std::size_t j = i + 1; j < maps.size(); j++) {
                double dev = 0.0;
                for (std::size_t a = 0; a < n; a++) {
                    dev = std::max(dev, maps[i][a].max_deviation(maps[j][a]));
                }
                if (dev < 1e-9) {
                    collisions++;
                    ADD_FAILURE() << "indistinguishable steps " << i << " and " << j;
                }
            }
        }
        EXPECT_EQ(collisions, 0u) << "n=" << n << " over " << steps.size() << " steps";
    }
}

TEST(Properties, CustomGateMatchesLibraryGate) {
    // A CNOT supplied as a custom unitary behaves exactly like the library gate.
    auto u = 0.5 * (W("II") + W("IX") + W("ZI") - W("ZX"));
    Rng rng(35);
    for (int k = 0; k < 20; k++) {
        auto pre = random_network(rng, 3, 3, mixed_mix());
        auto lib = pre;
        auto cus = pre;
        lib.steps.push_back({Gate::cnot(2, 0)});
        cus.steps.push_back({Gate::custom(u, {2, 0})});
        auto a = run(lib).history.final_slice();
        auto b = run(cus).history.final_slice();
        for (std::size_t q = 0; q < 3; q++) {
            EXPECT_LT(a[q].max_deviation(b[q]), 1e-12);
        }
    }
}

}  // namespace
