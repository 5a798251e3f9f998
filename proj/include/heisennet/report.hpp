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

// JSON and plain-text renderings of results. Qubits are 1-based in every
// report. Output is a pure function of the input, so reruns are byte
// identical.

#pragma once

#include <cstdio>
#include <sstream>
#include <string>

#include "heisennet/dense_oracle.hpp"
#include "heisennet/text_format.hpp"

namespace heisennet::report {

using Json = nlohmann::ordered_json;

inline Json qubit_list(std::span<const std::size_t> qs) {
    Json out = Json::array();
    for (auto q : qs) {
        out.push_back(q + 1);
    }
    return out;
}

inline Json descriptor_json(const Descriptor &d) {
    return Json{{"x", operator_to_json(d.x)}, {"y", operator_to_json(d.y)}, {"z", operator_to_json(d.z)}};
}

inline Json slice_json(const DescriptorSlice &slice) {
    Json out = Json::array();
    for (std::size_t a = 0; a < slice.size(); a++) {
        Json d = descriptor_json(slice[a]);
        Json entry{{"qubit", a + 1}};
        entry.update(d);
        out.push_back(std::move(entry));
    }
    return out;
}

inline Json history_json(const DescriptorHistory &h) {
    Json out = Json::array();
    for (std::size_t t = 0; t < h.num_times(); t++) {
        out.push_back(Json{{"t", t}, {"descriptors", slice_json(h.at(t))}});
    }
    return out;
}

inline Json ledger_json(const LocalityLedger &ledger) {
    Json out = Json::array();
    for (const auto &changed : ledger.changed) {
        out.push_back(qubit_list(changed));
    }
    return out;
}

inline Json network_json(const Network &net) {
    Json steps = Json::array();
    for (const auto &step : net.steps) {
        Json gates = Json::array();
        for (const auto &g : step) {
            gates.push_back(g.str());
        }
        steps.push_back(std::move(gates));
    }
    return Json{{"qubits", net.num_qubits}, {"steps", std::move(steps)}};
}

inline Json density_json(const DensityOperator &rho, std::size_t time) {
    return Json{{"subset", qubit_list(rho.subset)}, {"t", time}, {"rho", operator_to_json(rho.local())}};
}

inline Json complex_json(Complex c) {
    return Json::array({clean_zero(c.real()), clean_zero(c.imag())});
}

inline Json cross_check_json(const dense::CrossCheckReport &r) {
    return Json{{"expectation_deviation", r.expectation_deviation},
                {"operator_deviation", r.operator_deviation},
                {"density_deviation", r.density_deviation},
                {"max_deviation", r.max_deviation()},
                {"expectation_checks", r.expectation_checks},
                {"density_checks", r.density_checks}};
}

inline Json invariance_json(const InvarianceReport &r) {
    Json rows = Json::array();
    for (const auto &c : r.comparisons) {
        rows.push_back(Json{{"label", c.label},
                            {"t", c.time},
                            {"original", complex_json(c.original)},
                            {"transformed", complex_json(c.transformed)},
                            {"deviation", c.deviation}});
    }
    return Json{{"passed", r.passed()}, {"max_deviation", r.max_deviation}, {"tolerance", r.tolerance},
                {"probes", std::move(rows)}};
}

inline Json probe_outcome_json(const ProbeOutcome &o) {
    Json values = Json::array();
    for (std::size_t k = 0; k < o.values.size(); k++) {
        values.push_back(Json{{"readout", o.readout_labels[k]}, {"value", clean_zero(o.values[k])}});
    }
    return Json{{"plan", o.label}, {"readouts", std::move(values)}, {"warnings", o.warnings}};
}

inline Json verdict_json(const DiscriminationVerdict &v) {
    Json out{{"distinguished", v.distinguished}, {"plans_tried", v.plans_tried}};
    if (v.plan_index) {
        out["plan_index"] = *v.plan_index;
        out["plan"] = v.plan_label;
        out["gap"] = v.gap;
        out["outcome_a"] = probe_outcome_json(*v.outcome_a);
        out["outcome_b"] = probe_outcome_json(*v.outcome_b);
    }
    return out;
}

inline std::string bits_string(const std::vector<bool> &bits) {
    std::string s;
    for (bool b : bits) {
        s += b ? '1' : '0';
    }
    return s;
}

inline Json randomizer_json(const RandomizerReport &r) {
    Json rows = Json::array();
    for (const auto &b : r.branches) {
        rows.push_back(Json{{"branch", bits_string(b.outcome)},
                            {"probability", b.probability},
                            {"max_deviation", b.max_deviation}});
    }
    return Json{{"passed", r.passed()},
                {"max_deviation", r.max_deviation},
                {"probability_sum", r.probability_sum},
                {"probes_per_branch", r.probes_per_branch},
                {"branches", std::move(rows)}};
}

inline Json time_reverse_json(const TimeReverseReport &r) {
    return Json{{"passed", r.passed()},
                {"exact_arithmetic", r.exact_arithmetic},
                {"restored", r.restored},
                {"max_deviation", r.max_deviation},
                {"ledger_palindrome", r.ledger_palindrome},
                {"ledger", ledger_json(r.ledger)}};
}

inline Json vector_json(const billiards::Vec &v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); i++) {
        out.push_back(clean_zero(v(i)));
    }
    return out;
}

inline Json trajectory_json(const billiards::Trajectory &tr) {
    Json events = Json::array();
    for (const auto &e : tr.events) {
        Json ev{{"t", e.t}, {"i", e.i + 1}};
        if (e.j) {
            ev["j"] = *e.j + 1;
        } else {
            ev["wall"] = true;
        }
        events.push_back(std::move(ev));
    }
    Json knots = Json::array();
    for (const auto &k : tr.knots) {
        knots.push_back(Json{{"t", k.t}, {"x", vector_json(k.x)}, {"v", vector_json(k.v)}});
    }
    return Json{{"horizon", tr.horizon}, {"events", std::move(events)}, {"knots", std::move(knots)}};
}

/// Two position columns per sample time: first trajectory then second.
inline std::string trajectory_pair_csv(const billiards::Trajectory &a, const billiards::Trajectory &b,
                                       double dt = billiards::kDefaultSampleDt) {
    auto ts = a.sample_times(dt);
    auto tb = b.sample_times(dt);
    ts.insert(ts.end(), tb.begin(), tb.end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    std::ostringstream out;
    out.precision(17);
    auto n = a.knots.front().x.size();
    out << "t";
    for (Eigen::Index i = 0; i < n; i++) {
        out << ",formal_x" << i + 1;
    }
    for (Eigen::Index i = 0; i < n; i++) {
        out << ",content_x" << i + 1;
    }
    out << "\n";
    double horizon = std::min(a.horizon, b.horizon);
    for (double t : ts) {
        if (t > horizon) {
            continue;
        }
        out << t;
        for (const auto *tr : {&a, &b}) {
            auto x = tr->position_at(t);
            for (Eigen::Index i = 0; i < n; i++) {
                out << "," << clean_zero(x(i));
            }
        }
        out << "\n";
    }
    return out.str();
}

// Plain-text helpers.

inline std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", clean_zero(v));
    return buf;
}

/// Compact human form, e.g. "XX - 0.5*YZ + (0+1i)*ZI".
inline std::string format_operator(const OperatorExpr &a) {
    if (a.is_zero()) {
        return "0";
    }
    std::string out;
    bool first = true;
    for (const auto &[w, c] : a.terms()) {
        std::string coeff;
        bool negative = false;
        if (c.imag() == 0.0) {
            negative = c.real() < 0;
            double m = std::abs(c.real());
            coeff = m == 1.0 ? "" : format_real(m) + "*";
        } else {
            coeff = "(" + format_real(c.real()) + (c.imag() < 0 ? "-" : "+") + format_real(std::abs(c.imag())) + "i)*";
        }
        if (first) {
            out += negative ? "-" : "";
        } else {
            out += negative ? " - " : " + ";
        }
        out += coeff + w.str();
        first = false;
    }
    return out;
}

inline std::string descriptor_table(const DescriptorHistory &h) {
    std::ostringstream out;
    for (std::size_t t = 0; t < h.num_times(); t++) {
        for (std::size_t a = 0; a < h.num_qubits; a++) {
            const auto &d = h.at(t)[a];
            out << "t=" << t << " Q" << a + 1 << "  x: " << format_operator(d.x) << "  y: " << format_operator(d.y)
                << "  z: " << format_operator(d.z) << "\n";
        }
    }
    return out.str();
}

inline std::string ledger_table(const LocalityLedger &ledger) {
    std::ostringstream out;
    for (std::size_t s = 0; s < ledger.changed.size(); s++) {
        out << "step " << s + 1 << " changed:";
        for (auto q : ledger.changed[s]) {
            out << " Q" << q + 1;
        }
        if (ledger.changed[s].empty()) {
            out << " none";
        }
        out << "\n";
    }
    return out.str();
}

inline std::string dump(const Json &j) {
    return j.dump(2) + "\n";
}

}  // namespace heisennet::report
