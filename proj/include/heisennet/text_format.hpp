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

// File formats. Networks are line based:
//
//   # comment
//   qubits 2
//   step: not(1)
//   step: cnot(1,2); h(3)
//
// Qubits are numbered from 1 in files. Operators are JSON lists of
// ["IXZ", re, im] records; a gauge file is a JSON list of operators, one per
// recorded time.

#pragma once

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "heisennet/billiards.hpp"
#include "heisennet/gauge.hpp"
#include "heisennet/scenarios.hpp"

namespace heisennet {

class ParseError : public std::runtime_error {
   public:
    ParseError(std::size_t line, const std::string &what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const {
        return line_;
    }

   private:
    std::size_t line_;
};

inline std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        return std::nullopt;
    }
    return v;
}

// A number, or a multiple of pi written as [-][k*]pi[/m].
inline std::optional<double> parse_angle(std::string_view s) {
    s = trim(s);
    if (auto v = parse_double(s)) {
        return v;
    }
    double sign = 1.0;
    if (!s.empty() && s.front() == '-') {
        sign = -1.0;
        s.remove_prefix(1);
    }
    auto pi_at = s.find("pi");
    if (pi_at == std::string_view::npos) {
        return std::nullopt;
    }
    double k = 1.0;
    if (pi_at > 0) {
        auto head = s.substr(0, pi_at);
        if (head.back() != '*') {
            return std::nullopt;
        }
        auto kv = parse_double(head.substr(0, head.size() - 1));
        if (!kv) {
            return std::nullopt;
        }
        k = *kv;
    }
    auto tail = trim(s.substr(pi_at + 2));
    double m = 1.0;
    if (!tail.empty()) {
        if (tail.front() != '/') {
            return std::nullopt;
        }
        auto mv = parse_double(tail.substr(1));
        if (!mv || *mv == 0.0) {
            return std::nullopt;
        }
        m = *mv;
    }
    return sign * k * std::numbers::pi / m;
}

inline std::size_t parse_qubit(std::string_view s, std::size_t n, std::size_t line) {
    s = trim(s);
    std::size_t q = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), q);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw ParseError(line, "bad qubit index '" + std::string(s) + "'");
    }
    if (q < 1 || q > n) {
        throw ParseError(line, "qubit " + std::to_string(q) + " out of range 1.." + std::to_string(n));
    }
    return q - 1;
}

}  // namespace detail

inline OperatorExpr operator_from_json(const nlohmann::json &j, std::optional<std::size_t> n = std::nullopt) {
    if (!j.is_array()) {
        throw std::invalid_argument("operator must be a list of [pauli, re, im] records");
    }
    std::vector<OperatorExpr::Term> terms;
    std::optional<std::size_t> width = n;
    for (const auto &rec : j) {
        if (!rec.is_array() || rec.size() != 3 || !rec[0].is_string() || !rec[1].is_number() || !rec[2].is_number()) {
            throw std::invalid_argument("operator record must be [pauli, re, im]");
        }
        auto w = PauliWord::from_string(rec[0].get<std::string>());
        if (width && w.size() != *width) {
            throw std::invalid_argument("operator record '" + w.str() + "' has wrong length");
        }
        width = w.size();
        terms.push_back({w, Complex{rec[1].get<double>(), rec[2].get<double>()}});
    }
    if (!width) {
        throw std::invalid_argument("empty operator needs an explicit qubit count");
    }
    return OperatorExpr::from_terms(*width, terms);
}

inline double clean_zero(double v) {
    return v == 0.0 ? 0.0 : v;
}

/// Canonical serialization: records in canonical word order, -0 written as 0.
inline nlohmann::ordered_json operator_to_json(const OperatorExpr &a) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto &[w, c] : a.terms()) {
        out.push_back({w.str(), clean_zero(c.real()), clean_zero(c.imag())});
    }
    return out;
}

inline OperatorExpr load_operator(const std::filesystem::path &path, std::optional<std::size_t> n = std::nullopt) {
    try {
        return operator_from_json(nlohmann::json::parse(read_file(path)), n);
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

inline GaugeTransform gauge_from_json(const nlohmann::json &j, std::size_t n, double tol = kEqualityTolerance) {
    if (!j.is_array()) {
        throw GaugeError("gauge file must be a list of operators, one per time");
    }
    std::vector<OperatorExpr> vs;
    for (const auto &op : j) {
        vs.push_back(operator_from_json(op, n));
    }
    return validate_gauge(std::move(vs), tol);
}

inline GaugeTransform load_gauge(const std::filesystem::path &path, std::size_t n, double tol = kEqualityTolerance) {
    try {
        return gauge_from_json(nlohmann::json::parse(read_file(path)), n, tol);
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

/// Parses the line-based network format. Custom gate files are resolved
/// relative to `base_dir`.
inline Network parse_network(std::string_view text, const std::filesystem::path &base_dir = ".") {
    Network net{0, {}};
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        line_no++;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        if (!have_header) {
            if (!line.starts_with("qubits")) {
                throw ParseError(line_no, "expected 'qubits N' header");
            }
            auto count = detail::trim(line.substr(6));
            std::size_t n = 0;
            auto [ptr, ec] = std::from_chars(count.data(), count.data() + count.size(), n);
            if (ec != std::errc{} || ptr != count.data() + count.size() || n == 0 || n > kMaxQubits) {
                throw ParseError(line_no, "qubit count must be an integer in 1.." + std::to_string(kMaxQubits));
            }
            net.num_qubits = n;
            have_header = true;
            continue;
        }
        if (!line.starts_with("step:")) {
            throw ParseError(line_no, "expected 'step:' line");
        }
        Step step;
        auto body = detail::trim(line.substr(5));
        if (!body.empty()) {
            for (auto item : detail::split(body, ';')) {
                if (item.empty()) {
                    continue;
                }
                auto open = item.find('(');
                if (open == std::string_view::npos || item.back() != ')') {
                    throw ParseError(line_no, "malformed gate '" + std::string(item) + "'");
                }
                std::string name(detail::trim(item.substr(0, open)));
                auto args = detail::split(item.substr(open + 1, item.size() - open - 2), ',');
                auto want = [&](std::size_t k) {
                    if (args.size() != k) {
                        throw ParseError(line_no, name + " takes " + std::to_string(k) + " arguments");
                    }
                };
                auto qubit = [&](std::size_t i) {
                    return detail::parse_qubit(args[i], net.num_qubits, line_no);
                };
                if (name == "not") {
                    want(1);
                    step.push_back(Gate::not_gate(qubit(0)));
                } else if (name == "h") {
                    want(1);
                    step.push_back(Gate::hadamard(qubit(0)));
                } else if (name == "cnot") {
                    want(2);
                    step.push_back(Gate::cnot(qubit(0), qubit(1)));
                } else if (name == "toffoli") {
                    want(3);
                    step.push_back(Gate::toffoli(qubit(0), qubit(1), qubit(2)));
                } else if (name == "phase") {
                    want(2);
                    auto theta = detail::parse_angle(args[1]);
                    if (!theta || !std::isfinite(*theta)) {
                        throw ParseError(line_no, "bad angle '" + std::string(args[1]) + "'");
                    }
                    step.push_back(Gate::phase(qubit(0), *theta));
                } else if (name == "custom") {
                    if (args.size() < 2) {
                        throw ParseError(line_no, "custom takes a file and at least one qubit");
                    }
                    std::vector<std::size_t> qs;
                    for (std::size_t i = 1; i < args.size(); i++) {
                        qs.push_back(qubit(i));
                    }
                    std::string file(args[0]);
                    OperatorExpr u;
                    try {
                        u = load_operator(base_dir / file, qs.size());
                    } catch (const std::exception &e) {
                        throw ParseError(line_no, e.what());
                    }
                    step.push_back(Gate::custom(std::move(u), std::move(qs), file));
                } else {
                    throw ParseError(line_no, "unknown gate '" + name + "'");
                }
            }
        }
        try {
            validate_step(step, net.num_qubits);
        } catch (const std::exception &e) {
            throw ParseError(line_no, e.what());
        }
        net.steps.push_back(std::move(step));
    }
    if (!have_header) {
        throw ParseError(line_no, "missing 'qubits N' header");
    }
    return net;
}

inline Network load_network(const std::filesystem::path &path) {
    return parse_network(read_file(path), path.parent_path());
}

/// Inverse of parse_network. Custom gates print their source file name, so
/// the round trip needs that file next to the output.
inline std::string print_network(const Network &net) {
    std::ostringstream out;
    out << "qubits " << net.num_qubits << "\n";
    for (const auto &step : net.steps) {
        out << "step:";
        for (std::size_t k = 0; k < step.size(); k++) {
            if (step[k].kind == GateKind::Custom && step[k].source.empty()) {
                throw std::invalid_argument("custom gate without a source file cannot be printed");
            }
            out << (k ? "; " : " ") << step[k].str();
        }
        out << "\n";
    }
    return out.str();
}

/// Billiard spec: one "key values..." per line. Keys: n, r, x, v, V (row
/// major), horizon, dx, walls (lo hi).
struct BilliardSpec {
    billiards::BilliardState state;
    billiards::Mat v;
    billiards::Vec dx;
    double horizon = 10.0;
};

inline BilliardSpec parse_billiard_spec(std::string_view text) {
    BilliardSpec spec;
    std::optional<std::size_t> n;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::map<std::string, std::pair<std::size_t, std::vector<double>>> fields;
    while (std::getline(in, raw)) {
        line_no++;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        std::istringstream words{std::string(detail::trim(line))};
        std::string key;
        if (!(words >> key)) {
            continue;
        }
        std::vector<double> vals;
        std::string tok;
        while (words >> tok) {
            auto v = detail::parse_double(tok);
            if (!v) {
                throw ParseError(line_no, "bad number '" + tok + "'");
            }
            vals.push_back(*v);
        }
        if (fields.contains(key)) {
            throw ParseError(line_no, "duplicate key '" + key + "'");
        }
        fields[key] = {line_no, vals};
    }
    auto get = [&](const std::string &key, std::optional<std::size_t> count) -> const std::vector<double> & {
        auto it = fields.find(key);
        if (it == fields.end()) {
            throw ParseError(0, "billiard spec is missing '" + key + "'");
        }
        if (count && it->second.second.size() != *count) {
            throw ParseError(it->second.first, "'" + key + "' needs " + std::to_string(*count) + " values");
        }
        return it->second.second;
    };
    for (const auto &[key, entry] : fields) {
        static const std::set<std::string> known{"n", "r", "x", "v", "V", "horizon", "dx", "walls"};
        if (!known.contains(key)) {
            throw ParseError(entry.first, "unknown key '" + key + "'");
        }
    }
    double nd = get("n", 1)[0];
    if (nd < 1 || nd != std::floor(nd)) {
        throw ParseError(fields["n"].first, "n must be a positive integer");
    }
    auto size = static_cast<std::size_t>(nd);
    auto vec = [&](const std::string &key) {
        const auto &vals = get(key, size);
        return billiards::Vec(Eigen::Map<const billiards::Vec>(vals.data(), static_cast<Eigen::Index>(size)));
    };
    spec.state.x = vec("x");
    spec.state.v = vec("v");
    spec.state.r = get("r", 1)[0];
    if (spec.state.r <= 0) {
        throw ParseError(fields["r"].first, "radius must be positive");
    }
    spec.horizon = fields.contains("horizon") ? get("horizon", 1)[0] : 10.0;
    spec.dx = fields.contains("dx") ? vec("dx") : billiards::Vec::Zero(static_cast<Eigen::Index>(size));
    auto k = static_cast<Eigen::Index>(size);
    if (fields.contains("V")) {
        const auto &vals = get("V", size * size);
        spec.v = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(vals.data(), k, k);
    } else {
        spec.v = billiards::Mat::Identity(k, k);
    }
    if (fields.contains("walls")) {
        const auto &w = get("walls", 2);
        if (w[0] >= w[1]) {
            throw ParseError(fields["walls"].first, "walls need lo < hi");
        }
        spec.state.walls = billiards::Walls{w[0], w[1]};
    }
    return spec;
}

/// Randomizer spec (JSON): {"controls": c, "targets": m, "preparation":
/// "<network text over the targets>", "branches": [operator, ...]}.
inline RandomizerSpec randomizer_from_json(const nlohmann::json &j) {
    RandomizerSpec spec;
    spec.num_controls = j.at("controls").get<std::size_t>();
    spec.num_targets = j.at("targets").get<std::size_t>();
    if (j.contains("preparation")) {
        spec.target_preparation = parse_network(j.at("preparation").get<std::string>());
    }
    for (const auto &b : j.at("branches")) {
        spec.branches.push_back(operator_from_json(b, spec.num_targets));
    }
    validate_randomizer(spec);
    return spec;
}

}  // namespace heisennet
