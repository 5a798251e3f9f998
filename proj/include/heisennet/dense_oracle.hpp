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

// Schrodinger-picture reference simulator. Everything here is plain matrix
// arithmetic on dense state vectors; it never calls OperatorExpr
// multiplication, so agreement with the descriptor engine is independent
// evidence. Basis ordering: qubit 0 is the most significant bit, so |1,0>
// means qubit 0 holds 1 and qubit 1 holds 0.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "heisennet/network.hpp"

namespace heisennet::dense {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr std::size_t kMaxStateQubits = 10;
inline constexpr std::size_t kMaxCrossCheckQubits = 5;

inline void require_dense_size(std::size_t n, std::size_t limit = kMaxStateQubits) {
    if (n > limit) {
        throw std::invalid_argument("dense oracle limited to " + std::to_string(limit) + " qubits, got " +
                                    std::to_string(n));
    }
}

inline Matrix pauli_matrix(Pauli p) {
    Matrix m(2, 2);
    const Complex i{0.0, 1.0};
    switch (p) {
        case Pauli::I:
            m << 1, 0, 0, 1;
            break;
        case Pauli::X:
            m << 0, 1, 1, 0;
            break;
        case Pauli::Y:
            m << 0, -i, i, 0;
            break;
        case Pauli::Z:
            m << 1, 0, 0, -1;
            break;
    }
    return m;
}

inline Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); r++) {
        for (Eigen::Index c = 0; c < a.cols(); c++) {
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        }
    }
    return out;
}

/// Sum over terms of coefficient times the Kronecker product of 2x2 Pauli matrices.
inline Matrix to_matrix(const OperatorExpr &a) {
    std::size_t n = a.num_qubits();
    require_dense_size(n);
    Eigen::Index dim = Eigen::Index{1} << n;
    Matrix out = Matrix::Zero(dim, dim);
    for (const auto &[w, c] : a.terms()) {
        Matrix m = Matrix::Identity(1, 1);
        for (std::size_t q = 0; q < n; q++) {
            m = kron(m, pauli_matrix(w[q]));
        }
        out += c * m;
    }
    return out;
}

/// Standard computational-basis matrix of a gate, local qubit 0 most significant.
inline Matrix gate_matrix(const Gate &g) {
    const Complex i{0.0, 1.0};
    switch (g.kind) {
        case GateKind::Not:
            return pauli_matrix(Pauli::X);
        case GateKind::Hadamard: {
            Matrix m(2, 2);
            m << 1, 1, 1, -1;
            return m / std::numbers::sqrt2;
        }
        case GateKind::Phase: {
            Matrix m = Matrix::Zero(2, 2);
            m(0, 0) = std::exp(-i * (g.theta / 2));
            m(1, 1) = std::exp(i * (g.theta / 2));
            return m;
        }
        case GateKind::Cnot: {
            Matrix m = Matrix::Identity(4, 4);
            m(2, 2) = m(3, 3) = 0;
            m(2, 3) = m(3, 2) = 1;
            return m;
        }
        case GateKind::Toffoli: {
            Matrix m = Matrix::Identity(8, 8);
            m(6, 6) = m(7, 7) = 0;
            m(6, 7) = m(7, 6) = 1;
            return m;
        }
        default:
            return to_matrix(g.unitary);
    }
}

inline std::size_t bit_of(std::size_t q, std::size_t n) {
    return n - 1 - q;
}

/// Applies a k-qubit matrix to the listed qubits of an n-qubit state.
inline Vector apply_gate(const Vector &psi, const Matrix &m, std::span<const std::size_t> qubits, std::size_t n) {
    std::size_t k = qubits.size();
    std::size_t local_dim = std::size_t{1} << k;
    std::size_t gate_mask = 0;
    for (auto q : qubits) {
        gate_mask |= std::size_t{1} << bit_of(q, n);
    }
    auto full_index = [&](std::size_t base, std::size_t local) {
        std::size_t idx = base;
        for (std::size_t j = 0; j < k; j++) {
            if ((local >> (k - 1 - j)) & 1) {
                idx |= std::size_t{1} << bit_of(qubits[j], n);
            }
        }
        return idx;
    };
    Vector out = psi;
    Vector in_local(static_cast<Eigen::Index>(local_dim));
    for (std::size_t base = 0; base < (std::size_t{1} << n); base++) {
        if (base & gate_mask) {
            continue;
        }
        for (std::size_t l = 0; l < local_dim; l++) {
            in_local(static_cast<Eigen::Index>(l)) = psi(static_cast<Eigen::Index>(full_index(base, l)));
        }
        Vector res = m * in_local;
        for (std::size_t l = 0; l < local_dim; l++) {
            out(static_cast<Eigen::Index>(full_index(base, l))) = res(static_cast<Eigen::Index>(l));
        }
    }
    return out;
}

inline Vector zero_state(std::size_t n) {
    require_dense_size(n);
    Vector psi = Vector::Zero(Eigen::Index{1} << n);
    psi(0) = 1.0;
    return psi;
}

inline Vector apply_step(const Vector &psi, const Step &step, std::size_t n) {
    Vector out = psi;
    for (const auto &g : step) {
        out = apply_gate(out, gate_matrix(g), g.qubits, n);
    }
    return out;
}

/// States psi(0) = |0...0>, psi(1), ..., psi(depth).
inline std::vector<Vector> schrodinger_run(const Network &net) {
    require_dense_size(net.num_qubits);
    validate_network(net);
    std::vector<Vector> states{zero_state(net.num_qubits)};
    for (const auto &step : net.steps) {
        states.push_back(apply_step(states.back(), step, net.num_qubits));
    }
    return states;
}

/// Full unitaries W(0) = 1, W(t+1) = (step t matrix) W(t), built column by column.
inline std::vector<Matrix> evolution_operators(const Network &net) {
    std::size_t n = net.num_qubits;
    require_dense_size(n);
    Eigen::Index dim = Eigen::Index{1} << n;
    std::vector<Matrix> out{Matrix::Identity(dim, dim)};
    for (const auto &step : net.steps) {
        Matrix next(dim, dim);
        for (Eigen::Index c = 0; c < dim; c++) {
            next.col(c) = apply_step(out.back().col(c), step, n);
        }
        out.push_back(std::move(next));
    }
    return out;
}

inline Complex expectation(const Vector &psi, const Matrix &m) {
    return psi.dot(m * psi);
}

/// Reduced density matrix of `subset` (ascending; subset[0] most significant locally).
inline Matrix partial_trace(const Vector &psi, std::span<const std::size_t> subset, std::size_t n) {
    std::size_t k = subset.size();
    std::size_t keep_mask = 0;
    for (auto q : subset) {
        keep_mask |= std::size_t{1} << bit_of(q, n);
    }
    auto full_index = [&](std::size_t env, std::size_t local) {
        std::size_t idx = env;
        for (std::size_t j = 0; j < k; j++) {
            if ((local >> (k - 1 - j)) & 1) {
                idx |= std::size_t{1} << bit_of(subset[j], n);
            }
        }
        return idx;
    };
    auto local_dim = static_cast<Eigen::Index>(std::size_t{1} << k);
    Matrix rho = Matrix::Zero(local_dim, local_dim);
    for (std::size_t env = 0; env < (std::size_t{1} << n); env++) {
        if (env & keep_mask) {
            continue;
        }
        for (Eigen::Index r = 0; r < local_dim; r++) {
            Complex a = psi(static_cast<Eigen::Index>(full_index(env, static_cast<std::size_t>(r))));
            for (Eigen::Index c = 0; c < local_dim; c++) {
                Complex b = psi(static_cast<Eigen::Index>(full_index(env, static_cast<std::size_t>(c))));
                rho(r, c) += a * std::conj(b);
            }
        }
    }
    return rho;
}

inline bool is_positive_semidefinite(const Matrix &m, double tol = 1e-10) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    return solver.eigenvalues().minCoeff() >= -tol;
}

struct CrossCheckReport {
    double expectation_deviation = 0.0;  // <0|q(t)|0> vs <psi(t)|q(0)|psi(t)>
    double operator_deviation = 0.0;     // to_matrix(q(t)) vs W(t)^dag q(0) W(t)
    double density_deviation = 0.0;      // reduced_density vs partial trace
    std::size_t expectation_checks = 0;
    std::size_t density_checks = 0;

    double max_deviation() const {
        return std::max({expectation_deviation, operator_deviation, density_deviation});
    }
};

enum class DensitySubsets { SingleQubits, All };

/// Compares every descriptor component at every time against the Schrodinger
/// picture, and reduced densities against partial traces.
inline CrossCheckReport cross_check(const DescriptorHistory &history, const Network &net,
                                    DensitySubsets subsets = DensitySubsets::SingleQubits) {
    std::size_t n = net.num_qubits;
    require_dense_size(n, kMaxCrossCheckQubits);
    if (history.num_qubits != n || history.num_times() != net.depth() + 1) {
        throw std::invalid_argument("history does not belong to this network");
    }
    auto states = schrodinger_run(net);
    auto evolutions = evolution_operators(net);
    std::vector<std::vector<std::size_t>> density_sets;
    if (subsets == DensitySubsets::All) {
        for (std::size_t mask = 1; mask < (std::size_t{1} << n); mask++) {
            std::vector<std::size_t> s;
            for (std::size_t q = 0; q < n; q++) {
                if ((mask >> q) & 1) {
                    s.push_back(q);
                }
            }
            density_sets.push_back(std::move(s));
        }
    } else {
        for (std::size_t q = 0; q < n; q++) {
            density_sets.push_back({q});
        }
    }

    CrossCheckReport report;
    for (std::size_t t = 0; t < history.num_times(); t++) {
        const auto &psi = states[t];
        const auto &w = evolutions[t];
        for (std::size_t a = 0; a < n; a++) {
            for (auto axis : kAxes) {
                Matrix evolved = to_matrix(history.at(t)[a][axis]);
                Matrix fresh = to_matrix(OperatorExpr::letter(n, a, axis_letter(axis)));
                Complex heisenberg = evolved(0, 0);
                Complex schrodinger = expectation(psi, fresh);
                report.expectation_deviation = std::max(report.expectation_deviation, std::abs(heisenberg - schrodinger));
                Matrix reference = w.adjoint() * fresh * w;
                report.operator_deviation = std::max(report.operator_deviation, (evolved - reference).cwiseAbs().maxCoeff());
                report.expectation_checks++;
            }
        }
        for (const auto &s : density_sets) {
            Matrix mine = to_matrix(reduced_density(history, s, t).local());
            Matrix ref = partial_trace(psi, s, n);
            report.density_deviation = std::max(report.density_deviation, (mine - ref).cwiseAbs().maxCoeff());
            report.density_checks++;
        }
    }
    return report;
}

}  // namespace heisennet::dense
