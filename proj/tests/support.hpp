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

// Shared generators and reference implementations for the test binaries.

#pragma once

#include <random>

#include "heisennet/billiards.hpp"
#include "heisennet/dense_oracle.hpp"
#include "heisennet/random.hpp"

namespace heisennet::testkit {

using Rng = std::mt19937_64;

/// Random operator whose coefficients are dyadic multiples of {1, i}, so
/// that sums and products stay exact in floating point.
inline OperatorExpr random_dyadic_expr(Rng &rng, std::size_t n, std::size_t terms) {
    static const Complex pool[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {0.5, 0}, {-0.5, 0}, {0, 0.5}, {0.25, -0.25}};
    std::uniform_int_distribution<int> letter(0, 3);
    std::uniform_int_distribution<std::size_t> pick(0, std::size(pool) - 1);
    OperatorExpr out(n);
    for (std::size_t k = 0; k < terms; k++) {
        PauliWord w(n);
        for (std::size_t q = 0; q < n; q++) {
            w.set(q, static_cast<Pauli>(letter(rng)));
        }
        out = out + OperatorExpr::from_word(w, pool[pick(rng)]);
    }
    return out;
}

inline OperatorExpr random_complex_expr(Rng &rng, std::size_t n, std::size_t terms) {
    std::uniform_int_distribution<int> letter(0, 3);
    std::normal_distribution<double> g(0.0, 1.0);
    OperatorExpr out(n);
    for (std::size_t k = 0; k < terms; k++) {
        PauliWord w(n);
        for (std::size_t q = 0; q < n; q++) {
            w.set(q, static_cast<Pauli>(letter(rng)));
        }
        out = out + OperatorExpr::from_word(w, Complex{g(rng), g(rng)});
    }
    return out;
}

/// Random operator supported only on the listed qubits.
inline OperatorExpr random_expr_on(Rng &rng, std::size_t n, std::span<const std::size_t> qubits, std::size_t terms) {
    std::uniform_int_distribution<int> letter(0, 3);
    std::normal_distribution<double> g(0.0, 1.0);
    OperatorExpr out(n);
    for (std::size_t k = 0; k < terms; k++) {
        PauliWord w(n);
        for (auto q : qubits) {
            w.set(q, static_cast<Pauli>(letter(rng)));
        }
        out = out + OperatorExpr::from_word(w, Complex{g(rng), g(rng)});
    }
    return out;
}

inline double matrix_gap(const dense::Matrix &a, const dense::Matrix &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

/// Fixed-step reference integrator for the billiards: advance every ball by
/// dt, then undo any overlap by rewinding to the contact instant implied by
/// the penetration depth, bouncing, and re-advancing. Positions are
/// recorded every `record_every` steps.
struct FixedStepRecord {
    std::vector<double> times;
    std::vector<billiards::Vec> positions;
};

inline FixedStepRecord fixed_step_reference(const billiards::BilliardState &s, double horizon, double dt,
                                            std::size_t record_every) {
    billiards::Vec x = s.x;
    billiards::Vec v = s.v;
    const double r = s.r;
    const auto n = x.size();
    FixedStepRecord rec;
    auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
    rec.times.push_back(0.0);
    rec.positions.push_back(x);
    for (std::size_t k = 1; k <= steps; k++) {
        x += v * dt;
        while (true) {
            double best = 0.0;
            Eigen::Index bi = -1;
            Eigen::Index bj = -1;
            for (Eigen::Index i = 0; i < n; i++) {
                for (Eigen::Index j = i + 1; j < n; j++) {
                    double sep = x(j) - x(i);
                    double rel = v(j) - v(i);
                    // Penetrating and still closing (separation sign opposite to relative velocity).
                    if (std::abs(sep) < 2 * r && sep * rel < 0) {
                        double tau = (2 * r - std::abs(sep)) / std::abs(rel);
                        if (tau > best) {
                            best = tau;
                            bi = i;
                            bj = j;
                        }
                    }
                }
                if (s.walls) {
                    double lo = s.walls->lo + r - x(i);
                    double hi = x(i) - (s.walls->hi - r);
                    if (lo > 0 && v(i) < 0 && lo / -v(i) > best) {
                        best = lo / -v(i);
                        bi = i;
                        bj = -1;
                    }
                    if (hi > 0 && v(i) > 0 && hi / v(i) > best) {
                        best = hi / v(i);
                        bi = i;
                        bj = -1;
                    }
                }
            }
            if (bi < 0) {
                break;
            }
            x -= v * best;
            if (bj >= 0) {
                std::swap(v(bi), v(bj));
            } else {
                v(bi) = -v(bi);
            }
            x += v * best;
        }
        if (k % record_every == 0) {
            rec.times.push_back(static_cast<double>(k) * dt);
            rec.positions.push_back(x);
        }
    }
    return rec;
}

}  // namespace heisennet::testkit
