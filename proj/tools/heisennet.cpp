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

// heisennet: command-line driver. Exit codes: 0 ok, 1 a verification
// failed, 2 bad usage or unreadable input.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "heisennet/report.hpp"

namespace fs = std::filesystem;
using namespace heisennet;
using report::Json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct Outcome {
    Json json;
    std::string text;
    bool ok = true;
    std::vector<std::pair<std::string, std::string>> extra_files;  // name, contents
};

struct Options {
    double tol = kEqualityTolerance;
    std::string out_dir;
    bool json_stdout = false;
};

std::string check_line(const std::string &what, bool ok) {
    return std::string(ok ? "ok    " : "FAIL  ") + what + "\n";
}

// Probes for gauge invariance: every descriptor component and every product of
// two components on distinct qubits, at every recorded time.
std::vector<Probe> invariance_probes(std::size_t n, std::size_t times) {
    std::vector<Probe> probes;
    for (std::size_t t = 0; t < times; t++) {
        for (std::size_t a = 0; a < n; a++) {
            for (auto ax : kAxes) {
                probes.push_back({OperatorExpr::letter(n, a, axis_letter(ax)), t,
                                  std::string("q") + std::to_string(a + 1) + axis_char(ax)});
                for (std::size_t b = a + 1; b < n; b++) {
                    for (auto bx : kAxes) {
                        probes.push_back({OperatorExpr::letter(n, a, axis_letter(ax)) *
                                              OperatorExpr::letter(n, b, axis_letter(bx)),
                                          t,
                                          std::string("q") + std::to_string(a + 1) + axis_char(ax) + "*q" +
                                              std::to_string(b + 1) + axis_char(bx)});
                    }
                }
            }
        }
    }
    return probes;
}

Outcome cmd_run(const std::string &path, bool oracle, const std::vector<std::string> &densities, const Options &opt) {
    Network net = load_network(path);
    auto result = run(net);
    Outcome out;
    out.json = Json{{"command", "run"}, {"network", report::network_json(net)}};
    out.json["descriptors"] = report::history_json(result.history);
    out.json["ledger"] = report::ledger_json(result.ledger);
    out.text = report::descriptor_table(result.history) + report::ledger_table(result.ledger);
    Json rhos = Json::array();
    for (const auto &spec : densities) {
        std::vector<std::size_t> subset;
        for (auto item : detail::split(spec, ',')) {
            subset.push_back(detail::parse_qubit(item, net.num_qubits, 0));
        }
        auto t = net.depth();
        auto rho = reduced_density(result.history, subset, t);
        rhos.push_back(report::density_json(rho, t));
        out.text += "rho(" + spec + ") at t=" + std::to_string(t) + ": " + report::format_operator(rho.local()) + "\n";
    }
    if (!densities.empty()) {
        out.json["densities"] = std::move(rhos);
    }
    if (oracle) {
        auto cc = dense::cross_check(result.history, net, dense::DensitySubsets::All);
        bool pass = cc.max_deviation() <= opt.tol;
        out.json["oracle_check"] = report::cross_check_json(cc);
        out.json["oracle_check"]["passed"] = pass;
        out.text += check_line("oracle cross-check, max deviation " + report::format_real(cc.max_deviation()), pass);
        out.ok = pass;
    }
    return out;
}

Outcome cmd_gauge(const std::string &net_path, const std::string &gauge_path, const Options &opt) {
    Network net = load_network(net_path);
    auto g = load_gauge(gauge_path, net.num_qubits, opt.tol);
    auto history = run(net).history;
    auto transformed = transform_history(history, g);
    auto probes = invariance_probes(net.num_qubits, history.num_times());
    auto inv = check_invariance(history, transformed, probes, opt.tol);
    Json phases = Json::array();
    for (double p : g.phases) {
        phases.push_back(clean_zero(p));
    }
    Json supports = Json::array();
    std::ostringstream text;
    text << report::descriptor_table(transformed);
    for (std::size_t s = 0; s < net.depth(); s++) {
        auto orig = step_support(net.steps[s]);
        auto mapped = step_map_support(net, g, s);
        supports.push_back(Json{{"step", s + 1},
                                {"gate_support", report::qubit_list(orig)},
                                {"transformed_support", report::qubit_list(mapped)}});
        text << "step " << s + 1 << " gate support " << report::qubit_list(orig).dump() << ", transformed law support "
             << report::qubit_list(mapped).dump() << "\n";
    }
    text << check_line("expectations invariant over " + std::to_string(probes.size()) + " probes, max deviation " +
                           report::format_real(inv.max_deviation),
                       inv.passed());
    Outcome out;
    out.json = Json{{"command", "gauge"},
                    {"network", report::network_json(net)},
                    {"phases", std::move(phases)},
                    {"transformed_descriptors", report::history_json(transformed)},
                    {"step_supports", std::move(supports)},
                    {"invariance", report::invariance_json(inv)}};
    out.text = text.str();
    out.ok = inv.passed();
    return out;
}

Outcome cmd_probe(const std::string &path, const std::string &family, const std::string &against, const Options &) {
    if (family != "default") {
        throw CLI::ValidationError("--family", "unknown probe family '" + family + "'");
    }
    Network net = load_network(path);
    auto plans = default_probe_family(net.num_qubits, net.depth());
    Outcome out;
    out.json = Json{{"command", "probe"}, {"network", report::network_json(net)}, {"family", family}};
    std::ostringstream text;
    if (against.empty()) {
        Json outcomes = Json::array();
        for (const auto &plan : plans) {
            auto o = run_probe(net, plan);
            outcomes.push_back(report::probe_outcome_json(o));
            text << o.label << ":";
            for (double v : o.values) {
                text << " " << report::format_real(v);
            }
            text << "\n";
        }
        out.json["outcomes"] = std::move(outcomes);
    } else {
        Network other = load_network(against);
        auto v = discriminate(net, other, plans);
        out.json["against"] = report::network_json(other);
        out.json["verdict"] = report::verdict_json(v);
        if (v.distinguished) {
            text << "distinguished by plan " << *v.plan_index << " (" << v.plan_label << "), gap "
                 << report::format_real(v.gap) << "\n";
        } else {
            text << "not distinguished by any of " << v.plans_tried << " plans\n";
        }
    }
    out.text = text.str();
    return out;
}

Outcome cmd_randomizer(const std::string &path, const Options &opt) {
    auto spec = randomizer_from_json(nlohmann::json::parse(read_file(path)));
    auto r = randomizer_scenario(spec);
    Outcome out;
    out.json = Json{{"command", "randomizer"},
                    {"network", report::network_json(build_randomizer_network(spec))},
                    {"report", report::randomizer_json(r)}};
    std::ostringstream text;
    for (const auto &b : r.branches) {
        text << "branch " << report::bits_string(b.outcome) << "  p=" << report::format_real(b.probability)
             << "  max deviation " << report::format_real(b.max_deviation) << "\n";
    }
    out.ok = r.passed(opt.tol);
    text << check_line("relative states match direct preparation, probability sum " +
                           report::format_real(r.probability_sum),
                       out.ok);
    out.text = text.str();
    return out;
}

Outcome cmd_reverse(const std::string &path, const Options &opt) {
    Network net = load_network(path);
    auto r = time_reverse_check(net, opt.tol);
    Outcome out;
    out.json = Json{{"command", "reverse"}, {"network", report::network_json(net)}, {"report", report::time_reverse_json(r)}};
    out.text = report::ledger_table(r.ledger) +
               check_line("t=0 descriptors restored, max deviation " + report::format_real(r.max_deviation), r.restored) +
               check_line("ledger reads forwards then backwards", r.ledger_palindrome);
    out.ok = r.passed();
    return out;
}

Outcome cmd_billiard(const std::string &path, const Options &opt) {
    auto spec = parse_billiard_spec(read_file(path));
    auto tr = billiards::BilliardTransform::from_matrix(spec.v);
    auto original = billiards::evolve_original(spec.state, spec.horizon);
    auto rep = billiards::divergence_report(spec.state, spec.dx, tr, spec.horizon);

    double energy_drift = 0.0;
    double momentum_drift = 0.0;
    for (const auto &k : original.knots) {
        energy_drift = std::max(energy_drift, std::abs(billiards::kinetic_energy(k.v) -
                                                       billiards::kinetic_energy(original.knots.front().v)));
        momentum_drift = std::max(momentum_drift,
                                  std::abs(billiards::momentum(k.v) - billiards::momentum(original.knots.front().v)));
    }
    bool conserved = energy_drift <= opt.tol && momentum_drift <= opt.tol;

    Outcome out;
    out.json = Json{{"command", "billiard"},
                    {"r", spec.state.r},
                    {"horizon", spec.horizon},
                    {"dx", report::vector_json(spec.dx)},
                    {"original", report::trajectory_json(original)},
                    {"formal", report::trajectory_json(rep.formal)},
                    {"content_preserving", report::trajectory_json(rep.content_preserving)},
                    {"gap", rep.gap},
                    {"gap_over_diameter", rep.gap / (2 * spec.state.r)},
                    {"energy_drift", energy_drift},
                    {"momentum_drift", momentum_drift}};
    std::ostringstream text;
    text << "original events " << original.events.size() << ", formal events " << rep.formal.events.size()
         << ", content-preserving events " << rep.content_preserving.events.size() << "\n";
    text << "max trajectory gap " << report::format_real(rep.gap) << " (" << report::format_real(rep.gap / (2 * spec.state.r))
         << " diameters)\n";
    text << check_line("energy and momentum conserved", conserved);
    out.text = text.str();
    out.ok = conserved;
    out.extra_files.emplace_back("billiard.csv", report::trajectory_pair_csv(rep.formal, rep.content_preserving));
    return out;
}

Outcome cmd_fig2(const Options &opt) {
    auto pair = fig2_pair();
    auto a = run(pair.interacting);
    auto b = run(pair.independent);
    std::ostringstream text;
    bool ok = true;
    auto check = [&](const std::string &what, bool pass) {
        text << check_line(what, pass);
        ok = ok && pass;
    };

    text << "interacting network\n" << report::descriptor_table(a.history) << report::ledger_table(a.ledger);
    text << "independent network\n" << report::descriptor_table(b.history) << report::ledger_table(b.ledger);

    // Reduced densities of the interacting network: |00> -> |10> -> |11>.
    Json rhos = Json::array();
    const char *expected_states[] = {"00", "10", "11"};
    double density_dev = 0.0;
    for (std::size_t t = 0; t < a.history.num_times(); t++) {
        auto rho = reduced_density(a.history, {0, 1}, t);
        rhos.push_back(report::density_json(rho, t));
        OperatorExpr ref = OperatorExpr::identity(2, 0.25);
        for (std::size_t q = 0; q < 2; q++) {
            double s = expected_states[t][q] == '1' ? -1.0 : 1.0;
            ref = ref * (OperatorExpr::identity(2) + OperatorExpr::letter(2, q, Pauli::Z, s));
        }
        density_dev = std::max(density_dev, rho.op.max_deviation(ref));
        text << "t=" << t << " rho: " << report::format_operator(rho.local()) << "\n";
    }
    check("density sequence |00> -> |10> -> |11>, deviation " + report::format_real(density_dev), density_dev < 1e-12);

    auto transformed = transform_history(a.history, pair.gauge);
    bool same = true;
    for (std::size_t t = 0; t < transformed.num_times(); t++) {
        for (std::size_t q = 0; q < 2; q++) {
            same = same && transformed.at(t)[q].max_deviation(b.history.at(t)[q]) <= opt.tol;
        }
    }
    check("gauge maps interacting descriptors onto independent ones", same);
    check("gauge phase at t=2 is 0", std::abs(pair.gauge.phases[2]) <= opt.tol);

    auto plans = default_probe_family(2, pair.interacting.depth());
    auto verdict = discriminate(pair.interacting, pair.independent, plans);
    check("probing distinguishes the pair (" + verdict.plan_label + "), gap " + report::format_real(verdict.gap),
          verdict.distinguished && verdict.gap >= 1.0 - opt.tol);

    Json diff = Json::array();
    for (std::size_t s = 0; s < pair.interacting.depth(); s++) {
        diff.push_back(Json{{"step", s + 1},
                            {"interacting", report::qubit_list(a.ledger.changed[s])},
                            {"independent", report::qubit_list(b.ledger.changed[s])},
                            {"transformed_law_support", report::qubit_list(step_map_support(pair.interacting, pair.gauge, s))}});
    }
    Json phases = Json::array();
    for (double p : pair.gauge.phases) {
        phases.push_back(clean_zero(p));
    }
    Json gauge = Json::array();
    for (const auto &v : pair.gauge.vs) {
        gauge.push_back(operator_to_json(v));
    }

    Outcome out;
    out.json = Json{{"command", "fig2"},
                    {"interacting", Json{{"network", report::network_json(pair.interacting)},
                                         {"descriptors", report::history_json(a.history)},
                                         {"ledger", report::ledger_json(a.ledger)}}},
                    {"independent", Json{{"network", report::network_json(pair.independent)},
                                         {"descriptors", report::history_json(b.history)},
                                         {"ledger", report::ledger_json(b.ledger)}}},
                    {"ledger_difference", std::move(diff)},
                    {"densities", std::move(rhos)},
                    {"gauge", Json{{"unitaries", std::move(gauge)}, {"phases", std::move(phases)}}},
                    {"verdict", report::verdict_json(verdict)},
                    {"passed", ok}};
    out.text = text.str();
    out.ok = ok;
    return out;
}

void emit(const std::string &name, const Outcome &out, const Options &opt) {
    std::string dir = opt.out_dir;
    if (dir.empty()) {
        if (const char *env = std::getenv("HEISENNET_REPORT_DIR")) {
            dir = env;
        }
    }
    if (opt.json_stdout) {
        std::cout << report::dump(out.json);
    } else {
        std::cout << out.text;
    }
    if (dir.empty()) {
        return;
    }
    fs::create_directories(dir);
    auto write = [&](const std::string &file, const std::string &contents) {
        std::ofstream f(fs::path(dir) / file, std::ios::binary);
        f << contents;
        if (!f) {
            throw std::runtime_error("cannot write " + (fs::path(dir) / file).string());
        }
    };
    write(name + ".json", report::dump(out.json));
    write(name + ".txt", out.text);
    for (const auto &[file, contents] : out.extra_files) {
        write(file, contents);
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Heisenberg-picture quantum network simulator"};
    app.require_subcommand(1);
    Options opt;
    app.add_option("--out", opt.out_dir, "Directory for JSON and text reports (default: $HEISENNET_REPORT_DIR)");
    app.add_option("--tol", opt.tol, "Verification tolerance")->check(CLI::PositiveNumber);
    app.add_flag("--json", opt.json_stdout, "Print the JSON report instead of the text summary");

    std::string net_path, gauge_path, spec_path, family = "default", against;
    bool oracle = false;
    std::vector<std::string> densities;

    auto *run_cmd = app.add_subcommand("run", "Evolve descriptors through a network");
    run_cmd->add_option("network", net_path)->required()->check(CLI::ExistingFile);
    run_cmd->add_flag("--oracle-check", oracle, "Cross-check against the dense Schrodinger simulator");
    run_cmd->add_option("--density", densities, "Report the final reduced density of qubits, e.g. 1,2");

    auto *gauge_cmd = app.add_subcommand("gauge", "Apply a gauge transformation and check invariance");
    gauge_cmd->add_option("network", net_path)->required()->check(CLI::ExistingFile);
    gauge_cmd->add_option("gauge", gauge_path)->required()->check(CLI::ExistingFile);

    auto *probe_cmd = app.add_subcommand("probe", "Run a family of measurement probes");
    probe_cmd->add_option("network", net_path)->required()->check(CLI::ExistingFile);
    probe_cmd->add_option("--family", family, "Probe family");
    probe_cmd->add_option("--against", against, "Second network to discriminate from")->check(CLI::ExistingFile);

    auto *rand_cmd = app.add_subcommand("randomizer", "Relative states of a randomized preparation");
    rand_cmd->add_option("spec", spec_path)->required()->check(CLI::ExistingFile);

    auto *rev_cmd = app.add_subcommand("reverse", "Run a network followed by its inverse");
    rev_cmd->add_option("network", net_path)->required()->check(CLI::ExistingFile);

    auto *bill_cmd = app.add_subcommand("billiard", "Compare formal and content-preserving billiard dynamics");
    bill_cmd->add_option("spec", spec_path)->required()->check(CLI::ExistingFile);

    auto *fig2_cmd = app.add_subcommand("fig2", "Reproduce the two-qubit interacting/independent example");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        Outcome out;
        std::string name;
        if (*run_cmd) {
            name = "run";
            out = cmd_run(net_path, oracle, densities, opt);
        } else if (*gauge_cmd) {
            name = "gauge";
            out = cmd_gauge(net_path, gauge_path, opt);
        } else if (*probe_cmd) {
            name = "probe";
            out = cmd_probe(net_path, family, against, opt);
        } else if (*rand_cmd) {
            name = "randomizer";
            out = cmd_randomizer(spec_path, opt);
        } else if (*rev_cmd) {
            name = "reverse";
            out = cmd_reverse(net_path, opt);
        } else if (*bill_cmd) {
            name = "billiard";
            out = cmd_billiard(spec_path, opt);
        } else if (*fig2_cmd) {
            name = "fig2";
            out = cmd_fig2(opt);
        }
        emit(name, out, opt);
        return out.ok ? kExitOk : kExitFailed;
    } catch (const CLI::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailed;
    }
}
