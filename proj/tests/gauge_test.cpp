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

#include "heisennet/gauge.hpp"
#include "heisennet/scenarios.hpp"
#include "support.hpp"

using namespace heisennet;
using heisennet::testkit::Rng;

namespace {

OperatorExpr W(std::string_view s, Complex c = 1.0) {
    return OperatorExpr::word(s, c);
}

OperatorExpr copy_gauge_v2() {
    return 0.5 * (W("II") + W("ZI") + W("IX") - W("ZX"));
}

Network copying() {
    return Network{2, {{Gate::not_gate(0)}, {Gate::cnot(0, 1)}}};
}

std::vector<Probe> component_probes(std::size_t n, std::size_t times) {
    std::vector<Probe> out;
    for (std::size_t t = 0; t < times; t++) {
        for (std::size_t a = 0; a < n; a++) {
            for (auto ax : kAxes) {
                out.push_back({OperatorExpr::letter(n, a, axis_letter(ax)), t, ""});
            }
        }
    }
    return out;
}

TEST(ValidateGauge, Examples) {
    auto id = identity_gauge(2, 3);
    for (double p : id.phases) {
        EXPECT_EQ(p, 0.0);
    }
    auto g = validate_gauge({OperatorExpr::identity(2), OperatorExpr::identity(2), copy_gauge_v2()});
    EXPECT_EQ(g.phases[2], 0.0);
    EXPECT_THROW(validate_gauge({OperatorExpr::identity(1), W("X")}), GaugeError);
}

TEST(ValidateGauge, RecordsPhaseAndRejectsNonUnitary) {
    auto g = validate_gauge({W("Z", Complex{0.0, 1.0})});
    EXPECT_NEAR(g.phases[0], std::numbers::pi / 2, 1e-15);
    EXPECT_THROW(validate_gauge({W("I") + W("Z")}), GaugeError);
    EXPECT_THROW(validate_gauge({local_unitary(Gate::hadamard(0))}), GaugeError);
    EXPECT_THROW(validate_gauge({}), GaugeError);
    EXPECT_THROW(validate_gauge({OperatorExpr::identity(1), OperatorExpr::identity(2)}), GaugeError);
}

TEST(TransformHistory, IdentityAndGlobalPhaseChangeNothing) {
    auto h = run(copying()).history;
    auto same = transform_history(h, identity_gauge(2, 3));
    auto phase = Complex{std::cos(0.3), std::sin(0.3)};
    auto rotated = transform_history(
        h, validate_gauge(std::vector<OperatorExpr>(3, OperatorExpr::identity(2, phase))));
    for (std::size_t t = 0; t < 3; t++) {
        for (std::size_t a = 0; a < 2; a++) {
            EXPECT_TRUE(same.at(t)[a].exactly_equals(h.at(t)[a]));
            EXPECT_LT(rotated.at(t)[a].max_deviation(h.at(t)[a]), 1e-15);
        }
    }
}

TEST(TransformHistory, CopyGaugeGivesIndependentDescriptors) {
    auto h = run(copying()).history;
    auto g = validate_gauge({OperatorExpr::identity(2), OperatorExpr::identity(2), copy_gauge_v2()});
    auto primed = transform_history(h, g);
    const auto &q = primed.at(2);
    EXPECT_TRUE(q[0].x.exactly_equals(W("XI")));
    EXPECT_TRUE(q[0].y.exactly_equals(W("YI", -1.0)));
    EXPECT_TRUE(q[0].z.exactly_equals(W("ZI", -1.0)));
    EXPECT_TRUE(q[1].x.exactly_equals(W("IX")));
    EXPECT_TRUE(q[1].y.exactly_equals(W("IY", -1.0)));
    EXPECT_TRUE(q[1].z.exactly_equals(W("IZ", -1.0)));
}

TEST(TransformHistory, TimeMismatchThrows) {
    EXPECT_THROW(transform_history(run(copying()).history, identity_gauge(2, 2)), GaugeError);
}

TEST(CheckInvariance, CopyPairProbes) {
    auto h = run(copying()).history;
    auto g = validate_gauge({OperatorExpr::identity(2), OperatorExpr::identity(2), copy_gauge_v2()});
    auto primed = transform_history(h, g);
    std::vector<Probe> probes{{OperatorExpr::letter(2, 0, Pauli::Z), 2, "q1z(2)"}};
    for (std::size_t t = 0; t < 3; t++) {
        probes.push_back({OperatorExpr::letter(2, 1, Pauli::X), t, "q2x"});
    }
    auto r = check_invariance(h, primed, probes);
    EXPECT_TRUE(r.passed());
    EXPECT_EQ(r.comparisons[0].original, Complex(-1.0));
    EXPECT_EQ(r.comparisons[0].transformed, Complex(-1.0));
    for (std::size_t k = 1; k < 4; k++) {
        EXPECT_EQ(r.comparisons[k].original, Complex(0.0));
    }
}

TEST(CheckInvariance, RandomCliffordGaugesAgainstDenseOracle) {
    Rng rng(51);
    for (int k = 0; k < 40; k++) {
        auto net = random_network(rng, 3, 4, mixed_mix());
        auto h = run(net).history;
        auto g = random_clifford_gauge(rng, 3, h.num_times());
        auto primed = transform_history(h, g);
        std::vector<Probe> probes;
        for (std::size_t t = 0; t < h.num_times(); t++) {
            probes.push_back({random_recipe(rng, 3, 3), t, ""});
        }
        auto r = check_invariance(h, primed, probes);
        EXPECT_TRUE(r.passed()) << r.max_deviation;
        // Dense reference for the original side.
        auto states = dense::schrodinger_run(net);
        for (const auto &c : r.comparisons) {
            const auto &p = probes[&c - r.comparisons.data()];
            auto m = dense::to_matrix(p.recipe);
            EXPECT_LT(std::abs(dense::expectation(states[p.time], m) - c.original), 1e-10);
        }
    }
}

TEST(CheckInvariance, NonFixingUnitaryBreaksInvariance) {
    // Bypassing validation with a Hadamard shows the phase condition matters.
    auto h = run(copying()).history;
    GaugeTransform bad{{OperatorExpr::identity(2), OperatorExpr::identity(2),
                        embed(local_unitary(Gate::hadamard(0)), 2, std::vector<std::size_t>{1})},
                       {0, 0, 0}};
    auto primed = transform_history(h, bad);
    auto r = check_invariance(h, primed, component_probes(2, 3));
    EXPECT_FALSE(r.passed());
}

TEST(TransformHistory, PreservesAlgebra) {
    Rng rng(52);
    const Complex i{0.0, 1.0};
    for (int k = 0; k < 20; k++) {
        auto net = random_network(rng, 3, 3, mixed_mix());
        auto h = run(net).history;
        auto primed = transform_history(h, random_clifford_gauge(rng, 3, h.num_times()));
        for (std::size_t t = 0; t < primed.num_times(); t++) {
            for (const auto &d : primed.at(t)) {
                EXPECT_TRUE((d.x * d.y).approx_equals(i * d.z, 1e-12));
                EXPECT_TRUE((d.x * d.x).approx_equals(OperatorExpr::identity(3), 1e-12));
            }
        }
    }
}

TEST(Compose, EqualsSequentialTransformation) {
    Rng rng(53);
    for (int k = 0; k < 20; k++) {
        auto net = random_network(rng, 3, 3, mixed_mix());
        auto h = run(net).history;
        auto g = random_clifford_gauge(rng, 3, h.num_times());
        auto f = random_clifford_gauge(rng, 3, h.num_times());
        auto twice = transform_history(transform_history(h, g), f);
        auto once = transform_history(h, compose(g, f));
        for (std::size_t t = 0; t < h.num_times(); t++) {
            for (std::size_t a = 0; a < 3; a++) {
                EXPECT_LT(twice.at(t)[a].max_deviation(once.at(t)[a]), 1e-12);
            }
        }
    }
    EXPECT_THROW(compose(identity_gauge(1, 2), identity_gauge(1, 3)), GaugeError);
}

TEST(StepMapSupport, IdentityGaugeGivesGateSupports) {
    Rng rng(54);
    for (int k = 0; k < 20; k++) {
        auto net = random_network(rng, 4, 5, mixed_mix());
        auto g = identity_gauge(4, net.depth() + 1);
        for (std::size_t s = 0; s < net.depth(); s++) {
            auto got = step_map_support(net, g, s);
            // PHASE(theta) can be the identity up to phase only at theta = 0 mod 2 pi; random angles avoid it.
            EXPECT_EQ(got, step_support(net.steps[s]));
        }
    }
    Network cnot{2, {{Gate::hadamard(0)}, {Gate::cnot(0, 1)}}};
    EXPECT_EQ(step_map_support(cnot, identity_gauge(2, 3), 1), (std::vector<std::size_t>{0, 1}));
}

TEST(StepMapSupport, CopyPairUnderCopyGauge) {
    auto g = validate_gauge({OperatorExpr::identity(2), OperatorExpr::identity(2), copy_gauge_v2()});
    EXPECT_EQ(step_map_support(copying(), g, 0), (std::vector<std::size_t>{0}));
    EXPECT_EQ(step_map_support(copying(), g, 1), (std::vector<std::size_t>{1}));
    EXPECT_EQ(step_map_support(copying(), identity_gauge(2, 3), 1), (std::vector<std::size_t>{0, 1}));
    // The law for the second step is a NOT on qubit 2, up to phase.
    auto k = transformed_step_law(copying(), g, 1);
    EXPECT_TRUE(k.approx_equals(W("IX"), 1e-15) || k.approx_equals(W("IX", -1.0), 1e-15));
    EXPECT_THROW(step_map_support(copying(), g, 2), std::out_of_range);
}

TEST(StepMapSupport, EntanglingGaugeSpreadsAProductNetwork) {
    // Two single-qubit steps; an entangling gauge at t=1 makes the law act on both qubits.
    Network product{2, {{Gate::hadamard(0)}, {Gate::hadamard(1)}}};
    auto cz = 0.5 * (W("II") + W("ZI") + W("IZ") - W("ZZ"));
    auto g = validate_gauge({OperatorExpr::identity(2), cz, OperatorExpr::identity(2)});
    EXPECT_EQ(step_map_support(product, g, 0), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(step_map_support(product, g, 1), (std::vector<std::size_t>{0, 1}));
}

TEST(StepMapSupport, LawReproducesTransformedDescriptors) {
    // Substituting q'(t) into K and conjugating q'(t) must give q'(t+1).
    Rng rng(55);
    for (int k = 0; k < 25; k++) {
        auto net = random_network(rng, 3, 4, mixed_mix());
        auto h = run(net).history;
        auto g = random_clifford_gauge(rng, 3, h.num_times());
        auto primed = transform_history(h, g);
        for (std::size_t s = 0; s < net.depth(); s++) {
            auto m = assemble(transformed_step_law(net, g, s), primed.at(s));
            auto md = adjoint(m);
            for (std::size_t a = 0; a < 3; a++) {
                for (auto ax : kAxes) {
                    auto next = md * primed.at(s)[a][ax] * m;
                    EXPECT_LT(next.max_deviation(primed.at(s + 1)[a][ax]), 1e-10);
                }
            }
        }
    }
}

}  // namespace
