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

#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "heisennet/gauge.hpp"

namespace heisennet {

inline constexpr double kDiscriminationThreshold = 1e-6;

/// The two-qubit pair: `interacting` = [NOT(Q1); CNOT(Q1->Q2)],
/// `independent` = [NOT(Q1); NOT(Q2)], and the gauge V = (1, 1, CNOT-form)
/// that maps the first description onto the second.
struct Fig2Pair {
    Network interacting;
    Network independent;
    GaugeTransform gauge;
};

inline Fig2Pair fig2_pair() {
    Network a{2, {{Gate::not_gate(0)}, {Gate::cnot(0, 1)}}};
    Network b{2, {{Gate::not_gate(0)}, {Gate::not_gate(1)}}};
    // V(2) = 1/2 (1 + q1z + q2x - q1z q2x)
    OperatorExpr v2 = 0.5 * (OperatorExpr::word("II") + OperatorExpr::word("ZI") + OperatorExpr::word("IX") -
                             OperatorExpr::word("ZX"));
    auto g = validate_gauge({OperatorExpr::identity(2), OperatorExpr::identity(2), v2});
    return {a, b, g};
}

/// The "value" observable z_a = (1 - q_az)/2 as a recipe on n qubits.
inline OperatorExpr value_recipe(std::size_t n, std::size_t qubit) {
    return 0.5 * (OperatorExpr::identity(n) - OperatorExpr::letter(n, qubit, Pauli::Z));
}

/// A z-basis copy of `target` onto `ancilla`.
inline Gate measurement_gate(std::size_t target, std::size_t ancilla) {
    if (target == ancilla) {
        throw std::invalid_argument("measurement ancilla must differ from its target");
    }
    return Gate::cnot(target, ancilla);
}

/// True if no gate in steps [0, before_step) touches `qubit`.
inline bool is_untouched(const Network &net, std::size_t qubit, std::size_t before_step) {
    for (std::size_t s = 0; s < std::min(before_step, net.depth()); s++) {
        for (const auto &g : net.steps[s]) {
            if (std::find(g.qubits.begin(), g.qubits.end(), qubit) != g.qubits.end()) {
                return false;
            }
        }
    }
    return true;
}

/// A gate interposed as its own step before base step `position`
/// (position == depth means after the last step).
struct Insertion {
    std::size_t position = 0;
    Gate gate;
    bool measurement = false;
};

/// An observable recipe read at a time of the extended network; nullopt means the final time.
struct Readout {
    OperatorExpr recipe;
    std::optional<std::size_t> time;
    std::string label;
};

/// A network-independent experiment: extra ancilla qubits, interposed gates and readouts.
struct ProbePlan {
    std::string label;
    std::size_t ancillas = 0;
    std::vector<Insertion> insertions;
    std::vector<Readout> readouts;
};

struct ProbeOutcome {
    std::string label;
    std::vector<std::string> readout_labels;
    std::vector<double> values;
    std::vector<std::string> warnings;
};

/// The base network widened by the plan's ancillas with the insertions interposed.
inline Network extend_network(const Network &base, const ProbePlan &plan) {
    Network out{base.num_qubits + plan.ancillas, {}};
    for (const auto &ins : plan.insertions) {
        if (ins.position > base.depth()) {
            throw std::out_of_range("insertion position " + std::to_string(ins.position) + " beyond depth " +
                                    std::to_string(base.depth()));
        }
    }
    for (std::size_t p = 0; p <= base.depth(); p++) {
        for (const auto &ins : plan.insertions) {
            if (ins.position == p) {
                out.steps.push_back({ins.gate});
            }
        }
        if (p < base.depth()) {
            out.steps.push_back(base.steps[p]);
        }
    }
    validate_network(out);
    return out;
}

inline ProbeOutcome run_probe(const Network &base, const ProbePlan &plan) {
    Network net = extend_network(base, plan);
    ProbeOutcome out{plan.label, {}, {}, {}};
    // Insertion i lands at extended step position + (number of insertions placed before it).
    for (std::size_t i = 0; i < plan.insertions.size(); i++) {
        const auto &ins = plan.insertions[i];
        if (!ins.measurement) {
            continue;
        }
        std::size_t step_index = ins.position;
        for (std::size_t j = 0; j < plan.insertions.size(); j++) {
            const auto &other = plan.insertions[j];
            if (other.position < ins.position || (other.position == ins.position && j < i)) {
                step_index++;
            }
        }
        std::size_t ancilla = ins.gate.qubits.back();
        if (!is_untouched(net, ancilla, step_index)) {
            out.warnings.push_back("measurement ancilla " + std::to_string(ancilla + 1) + " is not fresh");
        }
    }
    auto result = run(net);
    for (const auto &r : plan.readouts) {
        std::size_t t = r.time.value_or(net.depth());
        OperatorExpr recipe = widen(r.recipe, net.num_qubits);
        Complex e = vacuum_expectation(assemble(recipe, result.history.at(t)));
        out.readout_labels.push_back(r.label);
        out.values.push_back(e.real());
    }
    return out;
}

/// Readouts of every qubit's value observable at the final time.
inline std::vector<Readout> final_value_readouts(std::size_t n) {
    std::vector<Readout> out;
    for (std::size_t q = 0; q < n; q++) {
        out.push_back({value_recipe(n, q), std::nullopt, "z" + std::to_string(q + 1)});
    }
    return out;
}

/// The undisturbed plan followed by every single insertion of NOT, H or
/// PHASE(pi/2) at every step boundary on every qubit; readouts are the final
/// values of all qubits.
inline std::vector<ProbePlan> default_probe_family(std::size_t n, std::size_t depth) {
    std::vector<ProbePlan> family;
    family.push_back({"undisturbed", 0, {}, final_value_readouts(n)});
    for (std::size_t p = 0; p <= depth; p++) {
        for (std::size_t q = 0; q < n; q++) {
            for (const Gate &g : {Gate::not_gate(q), Gate::hadamard(q), Gate::phase(q, std::numbers::pi / 2)}) {
                family.push_back({"insert " + g.str() + " at boundary " + std::to_string(p), 0, {{p, g, false}},
                                  final_value_readouts(n)});
            }
        }
    }
    return family;
}

struct DiscriminationVerdict {
    bool distinguished = false;
    std::optional<std::size_t> plan_index;
    std::string plan_label;
    double gap = 0.0;
    std::size_t plans_tried = 0;
    std::optional<ProbeOutcome> outcome_a;
    std::optional<ProbeOutcome> outcome_b;
};

/// First plan whose readouts differ between the two networks by more than the threshold.
inline DiscriminationVerdict discriminate(const Network &a, const Network &b, std::span<const ProbePlan> family,
                                          double threshold = kDiscriminationThreshold) {
    if (a.num_qubits != b.num_qubits) {
        throw std::invalid_argument("networks have different qubit counts");
    }
    DiscriminationVerdict v;
    for (std::size_t i = 0; i < family.size(); i++) {
        v.plans_tried++;
        auto ra = run_probe(a, family[i]);
        auto rb = run_probe(b, family[i]);
        double gap = 0.0;
        for (std::size_t k = 0; k < ra.values.size(); k++) {
            gap = std::max(gap, std::abs(ra.values[k] - rb.values[k]));
        }
        if (gap > threshold) {
            v.distinguished = true;
            v.plan_index = i;
            v.plan_label = family[i].label;
            v.gap = gap;
            v.outcome_a = std::move(ra);
            v.outcome_b = std::move(rb);
            return v;
        }
    }
    return v;
}

/// Conditions on the control qubits' z-values; outcome[k] is the value of controls[k].
struct RelativeQuery {
    std::vector<std::size_t> controls;
    std::vector<bool> outcome;
    OperatorExpr observable;
    std::size_t time = 0;
};

/// Projector recipe prod_a (1 + (-1)^{o_a} q_az)/2 over the controls.
inline OperatorExpr branch_projector_recipe(std::size_t n, std::span<const std::size_t> controls,
                                            const std::vector<bool> &outcome) {
    if (controls.size() != outcome.size()) {
        throw std::invalid_argument("outcome length must equal the number of controls");
    }
    OperatorExpr pi = OperatorExpr::identity(n);
    for (std::size_t k = 0; k < controls.size(); k++) {
        double sign = outcome[k] ? -1.0 : 1.0;
        pi = pi * (0.5 * (OperatorExpr::identity(n) + OperatorExpr::letter(n, controls[k], Pauli::Z, sign)));
    }
    return pi;
}

inline double branch_probability(const DescriptorHistory &history, std::span<const std::size_t> controls,
                                 const std::vector<bool> &outcome, std::size_t time) {
    auto pi = assemble(branch_projector_recipe(history.num_qubits, controls, outcome), history.at(time));
    return vacuum_expectation(pi).real();
}

/// <Pi A Pi> / <Pi> with Pi the branch projector built from time-t descriptors.
inline double relative_expectation(const DescriptorHistory &history, const RelativeQuery &q) {
    const auto &slice = history.at(q.time);
    std::size_t n = history.num_qubits;
    OperatorExpr pi = assemble(branch_projector_recipe(n, q.controls, q.outcome), slice);
    OperatorExpr a = assemble(widen(q.observable, n), slice);
    if (!(pi * a).approx_equals(a * pi)) {
        throw std::invalid_argument("queried observable does not commute with the control z-observables");
    }
    double p = vacuum_expectation(pi).real();
    if (p < kPruneTolerance) {
        throw std::domain_error("relative state has zero probability");
    }
    return vacuum_expectation(pi * a * pi).real() / p;
}

/// Controls occupy qubits [0, num_controls); targets follow. Branch index i
/// selects control k's value as bit (num_controls - 1 - k) of i, so control 0
/// is the most significant bit of |i>.
struct RandomizerSpec {
    std::size_t num_controls = 1;
    std::size_t num_targets = 1;
    /// Optional preparation of the target register, over num_targets qubits.
    Network target_preparation;
    /// One unitary per branch over num_targets local letters.
    std::vector<OperatorExpr> branches;
};

inline std::vector<bool> branch_bits(std::size_t index, std::size_t num_controls) {
    std::vector<bool> bits(num_controls);
    for (std::size_t k = 0; k < num_controls; k++) {
        bits[k] = (index >> (num_controls - 1 - k)) & 1;
    }
    return bits;
}

inline void validate_randomizer(const RandomizerSpec &spec) {
    if (spec.num_controls == 0 || spec.num_targets == 0) {
        throw std::invalid_argument("randomizer needs at least one control and one target");
    }
    if (spec.branches.size() != (std::size_t{1} << spec.num_controls)) {
        throw std::invalid_argument("need 2^controls = " + std::to_string(std::size_t{1} << spec.num_controls) +
                                    " branch unitaries, got " + std::to_string(spec.branches.size()));
    }
    for (std::size_t i = 0; i < spec.branches.size(); i++) {
        if (spec.branches[i].num_qubits() != spec.num_targets) {
            throw std::invalid_argument("branch " + std::to_string(i) + " must act on the target register only");
        }
        if (!is_unitary(spec.branches[i])) {
            throw std::invalid_argument("branch " + std::to_string(i) + " is not unitary");
        }
    }
    if (!spec.target_preparation.steps.empty() && spec.target_preparation.num_qubits != spec.num_targets) {
        throw std::invalid_argument("target preparation must act on the target register");
    }
}

/// sum_i |i><i| (x) U_i as a local operator over controls then targets.
inline OperatorExpr controlled_unitary(const RandomizerSpec &spec) {
    validate_randomizer(spec);
    std::size_t n = spec.num_controls + spec.num_targets;
    std::vector<std::size_t> controls(spec.num_controls);
    std::iota(controls.begin(), controls.end(), 0);
    std::vector<std::size_t> targets(spec.num_targets);
    std::iota(targets.begin(), targets.end(), spec.num_controls);
    OperatorExpr total(n);
    for (std::size_t i = 0; i < spec.branches.size(); i++) {
        auto proj = branch_projector_recipe(n, controls, branch_bits(i, spec.num_controls));
        total = total + proj * embed(spec.branches[i], n, targets);
    }
    return total;
}

namespace detail {

inline Network randomizer_network(const RandomizerSpec &spec, std::optional<std::size_t> direct_branch) {
    std::size_t n = spec.num_controls + spec.num_targets;
    Network net{n, {}};
    for (const auto &step : spec.target_preparation.steps) {
        Step shifted;
        for (Gate g : step) {
            for (auto &q : g.qubits) {
                q += spec.num_controls;
            }
            shifted.push_back(std::move(g));
        }
        net.steps.push_back(std::move(shifted));
    }
    Step device;
    for (std::size_t k = 0; k < spec.num_controls; k++) {
        if (!direct_branch) {
            device.push_back(Gate::hadamard(k));
        } else if (branch_bits(*direct_branch, spec.num_controls)[k]) {
            device.push_back(Gate::not_gate(k));
        }
    }
    net.steps.push_back(std::move(device));
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    net.steps.push_back({Gate::custom(controlled_unitary(spec), all, "controlled-unitary")});
    return net;
}

}  // namespace detail

/// Hadamards on the controls, then the controlled unitary.
inline Network build_randomizer_network(const RandomizerSpec &spec) {
    return detail::randomizer_network(spec, std::nullopt);
}

/// The same network with the randomizer replaced by NOTs preparing |branch>.
inline Network build_direct_network(const RandomizerSpec &spec, std::size_t branch) {
    return detail::randomizer_network(spec, branch);
}

struct BranchComparison {
    std::vector<bool> outcome;
    double probability = 0.0;
    double max_deviation = 0.0;
};

struct RandomizerReport {
    std::vector<BranchComparison> branches;
    double max_deviation = 0.0;
    double probability_sum = 0.0;
    std::size_t probes_per_branch = 0;

    bool passed(double tol = kEqualityTolerance) const {
        return max_deviation <= tol && std::abs(probability_sum - 1.0) <= 1e-12;
    }
};

/// Every non-identity Pauli word on the target register, as recipes on the full register.
inline std::vector<OperatorExpr> target_probe_set(std::size_t num_controls, std::size_t num_targets) {
    std::size_t n = num_controls + num_targets;
    std::vector<OperatorExpr> out;
    for (std::size_t code = 1; code < (std::size_t{1} << (2 * num_targets)); code++) {
        PauliWord w(n);
        for (std::size_t j = 0; j < num_targets; j++) {
            w.set(num_controls + j, static_cast<Pauli>((code >> (2 * j)) & 3));
        }
        out.push_back(OperatorExpr::from_word(w));
    }
    return out;
}

/// Compares every branch's relative expectations in the randomized network
/// against the unconditional expectations of the direct-preparation run.
inline RandomizerReport randomizer_scenario(const RandomizerSpec &spec) {
    validate_randomizer(spec);
    Network randomized = build_randomizer_network(spec);
    auto history = run(randomized).history;
    std::size_t final_time = randomized.depth();
    std::vector<std::size_t> controls(spec.num_controls);
    std::iota(controls.begin(), controls.end(), 0);
    auto probes = target_probe_set(spec.num_controls, spec.num_targets);

    RandomizerReport report;
    report.probes_per_branch = probes.size();
    for (std::size_t i = 0; i < spec.branches.size(); i++) {
        BranchComparison bc{branch_bits(i, spec.num_controls), 0.0, 0.0};
        bc.probability = branch_probability(history, controls, bc.outcome, final_time);
        report.probability_sum += bc.probability;
        auto direct = run(build_direct_network(spec, i)).history;
        for (const auto &p : probes) {
            double rel = relative_expectation(history, {controls, bc.outcome, p, final_time});
            double ref = vacuum_expectation(assemble(p, direct.final_slice())).real();
            bc.max_deviation = std::max(bc.max_deviation, std::abs(rel - ref));
        }
        report.max_deviation = std::max(report.max_deviation, bc.max_deviation);
        report.branches.push_back(std::move(bc));
    }
    return report;
}

struct TimeReverseReport {
    bool exact_arithmetic = true;
    bool restored = false;
    double max_deviation = 0.0;
    bool ledger_palindrome = false;
    LocalityLedger ledger;

    bool passed() const {
        return restored && ledger_palindrome;
    }
};

/// Runs the network followed by its inverse. Descriptors must return to their
/// t=0 values (bit-exactly when every gate is exact) and the doubled ledger
/// must read the original ledger forwards then backwards.
inline TimeReverseReport time_reverse_check(const Network &net, double tol = kEqualityTolerance) {
    TimeReverseReport report;
    for (const auto &s : net.steps) {
        for (const auto &g : s) {
            report.exact_arithmetic = report.exact_arithmetic && g.exact_arithmetic();
        }
    }
    auto forward = run(net);
    auto doubled = run(prepend(net, invert_network(net)));
    const auto &initial = doubled.history.at(0);
    const auto &last = doubled.history.final_slice();
    bool bit_exact = true;
    for (std::size_t a = 0; a < net.num_qubits; a++) {
        report.max_deviation = std::max(report.max_deviation, last[a].max_deviation(initial[a]));
        bit_exact = bit_exact && last[a].exactly_equals(initial[a]);
    }
    report.restored = report.exact_arithmetic ? bit_exact : report.max_deviation <= tol;
    auto expected = forward.ledger.changed;
    expected.insert(expected.end(), forward.ledger.changed.rbegin(), forward.ledger.changed.rend());
    report.ledger_palindrome = doubled.ledger.changed == expected;
    report.ledger = std::move(doubled.ledger);
    return report;
}

}  // namespace heisennet
