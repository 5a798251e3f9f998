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

#include <string>
#include <vector>

#include "heisennet/network.hpp"

namespace heisennet {

class GaugeError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// A time-indexed family of unitaries V(t) with V(t)|0> = e^{i phi(t)} |0>.
/// Each V(t) is written over time-zero letters.
struct GaugeTransform {
    std::vector<OperatorExpr> vs;
    std::vector<double> phases;

    std::size_t num_times() const {
        return vs.size();
    }
};

/// Accepts iff every V(t) is unitary and |<0|V(t)|0>| = 1; records phi(t) = arg <0|V(t)|0>.
inline GaugeTransform validate_gauge(std::vector<OperatorExpr> vs, double tol = kEqualityTolerance) {
    if (vs.empty()) {
        throw GaugeError("gauge needs one unitary per recorded time");
    }
    GaugeTransform g;
    for (std::size_t t = 0; t < vs.size(); t++) {
        if (vs[t].num_qubits() != vs.front().num_qubits()) {
            throw GaugeError("gauge unitaries disagree on qubit count at t=" + std::to_string(t));
        }
        if (!is_unitary(vs[t], tol)) {
            throw GaugeError("V(" + std::to_string(t) + ") is not unitary");
        }
        Complex e = vacuum_expectation(vs[t]);
        if (std::abs(std::abs(e) - 1.0) > tol) {
            throw GaugeError("V(" + std::to_string(t) + ") does not fix |0> up to phase: |<0|V|0>| = " +
                             std::to_string(std::abs(e)));
        }
        g.phases.push_back(std::arg(e));
    }
    g.vs = std::move(vs);
    return g;
}

inline GaugeTransform identity_gauge(std::size_t n, std::size_t num_times) {
    return validate_gauge(std::vector<OperatorExpr>(num_times, OperatorExpr::identity(n)));
}

/// Pointwise product: transforming by `first` and then by `second` equals
/// transforming once by V(t) = first(t) * second(t).
inline GaugeTransform compose(const GaugeTransform &first, const GaugeTransform &second) {
    if (first.num_times() != second.num_times()) {
        throw GaugeError("cannot compose gauges over different time ranges");
    }
    std::vector<OperatorExpr> vs;
    for (std::size_t t = 0; t < first.num_times(); t++) {
        vs.push_back(first.vs[t] * second.vs[t]);
    }
    return validate_gauge(std::move(vs));
}

/// q'(t) = V(t)^dag q(t) V(t) for every component at every time.
inline DescriptorHistory transform_history(const DescriptorHistory &history, const GaugeTransform &g) {
    if (g.num_times() != history.num_times()) {
        throw GaugeError("gauge has " + std::to_string(g.num_times()) + " times but history has " +
                         std::to_string(history.num_times()));
    }
    DescriptorHistory out{history.num_qubits, {}};
    for (std::size_t t = 0; t < history.num_times(); t++) {
        const auto &v = g.vs[t];
        if (v.num_qubits() != history.num_qubits) {
            throw GaugeError("gauge qubit count does not match history");
        }
        OperatorExpr vd = adjoint(v);
        DescriptorSlice slice;
        for (const auto &d : history.at(t)) {
            slice.push_back({vd * d.x * v, vd * d.y * v, vd * d.z * v});
        }
        out.slices.push_back(std::move(slice));
    }
    return out;
}

/// An observable assembled from the descriptor components at one time. The
/// recipe's letters stand for the components (letter X on qubit a means q_ax(t)).
struct Probe {
    OperatorExpr recipe;
    std::size_t time = 0;
    std::string label;
};

inline Complex probe_expectation(const DescriptorHistory &history, const Probe &p) {
    return vacuum_expectation(assemble(p.recipe, history.at(p.time)));
}

struct ProbeComparison {
    std::string label;
    std::size_t time = 0;
    Complex original;
    Complex transformed;
    double deviation = 0.0;
};

struct InvarianceReport {
    std::vector<ProbeComparison> comparisons;
    double max_deviation = 0.0;
    double tolerance = kEqualityTolerance;

    bool passed() const {
        return max_deviation <= tolerance;
    }
};

inline InvarianceReport check_invariance(const DescriptorHistory &original, const DescriptorHistory &transformed,
                                         std::span<const Probe> probes, double tol = kEqualityTolerance) {
    if (original.num_times() != transformed.num_times()) {
        throw std::invalid_argument("histories cover different times");
    }
    InvarianceReport report;
    report.tolerance = tol;
    for (const auto &p : probes) {
        ProbeComparison c{p.label, p.time, probe_expectation(original, p), probe_expectation(transformed, p), 0.0};
        c.deviation = std::abs(c.original - c.transformed);
        report.max_deviation = std::max(report.max_deviation, c.deviation);
        report.comparisons.push_back(std::move(c));
    }
    return report;
}

/// The law of motion of the transformed description for one step, as a
/// function of the primed descriptors at time `step`: the operator K over
/// fresh letters such that substituting q'(t) into K gives the operator that
/// conjugates q'(t) into q'(t+1). With W(t) the product of the fresh step
/// unitaries before `step`, K = U(step) W(t) V(t+1) V(t)^dag W(t)^dag.
/// For the identity gauge K is just the product of the step's gates.
inline OperatorExpr transformed_step_law(const Network &net, const GaugeTransform &g, std::size_t step) {
    if (step >= net.depth()) {
        throw std::out_of_range("step " + std::to_string(step) + " not in network of depth " +
                                std::to_string(net.depth()));
    }
    if (g.num_times() != net.depth() + 1) {
        throw GaugeError("gauge must cover every recorded time of the network");
    }
    std::size_t n = net.num_qubits;
    OperatorExpr drift = g.vs[step + 1] * adjoint(g.vs[step]);
    for (std::size_t s = 0; s < step; s++) {
        OperatorExpr u = fresh_step_unitary(net.steps[s], n);
        drift = u * drift * adjoint(u);
    }
    return strip_global_phase(fresh_step_unitary(net.steps[step], n) * drift);
}

/// Qubits the transformed law of motion acts on during `step`.
inline std::vector<std::size_t> step_map_support(const Network &net, const GaugeTransform &g, std::size_t step) {
    return support(transformed_step_law(net, g, step));
}

}  // namespace heisennet
