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

// One-dimensional equal-mass billiards, and the same system seen through an
// invertible linear change of variables x' = V x. Bounces exchange
// velocities; optional walls reflect.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace heisennet::billiards {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kEventTimeTolerance = 1e-12;
inline constexpr double kDefaultSampleDt = 1e-3;

struct Walls {
    double lo = 0.0;
    double hi = 0.0;
};

struct BilliardState {
    Vec x;
    Vec v;
    double r = 0.5;
    std::optional<Walls> walls;

    std::size_t size() const {
        return static_cast<std::size_t>(x.size());
    }
};

/// A collision between balls i < j, or a wall bounce of ball i (j unset).
struct Event {
    double t = 0.0;
    std::size_t i = 0;
    std::optional<std::size_t> j;
};

struct Knot {
    double t = 0.0;
    Vec x;
    Vec v;
};

/// Piecewise-linear motion: each knot starts a straight segment that runs to the next knot.
struct Trajectory {
    std::vector<Knot> knots;
    std::vector<Event> events;
    double horizon = 0.0;

    Vec position_at(double t) const {
        auto it = std::upper_bound(knots.begin(), knots.end(), t, [](double s, const Knot &k) {
            return s < k.t;
        });
        const Knot &k = it == knots.begin() ? knots.front() : *std::prev(it);
        return k.x + k.v * (t - k.t);
    }

    Vec velocity_at(double t) const {
        auto it = std::upper_bound(knots.begin(), knots.end(), t, [](double s, const Knot &k) {
            return s < k.t;
        });
        return (it == knots.begin() ? knots.front() : *std::prev(it)).v;
    }

    /// Times at multiples of dt up to the horizon plus every event time, ascending.
    std::vector<double> sample_times(double dt = kDefaultSampleDt) const {
        std::vector<double> ts;
        auto steps = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
        for (std::size_t k = 0; k <= steps; k++) {
            ts.push_back(static_cast<double>(k) * dt);
        }
        for (const auto &e : events) {
            ts.push_back(e.t);
        }
        ts.push_back(horizon);
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        return ts;
    }
};

struct BilliardTransform {
    Mat v;
    Mat v_inv;

    static BilliardTransform from_matrix(const Mat &v) {
        if (v.rows() != v.cols()) {
            throw std::invalid_argument("transform matrix must be square");
        }
        Eigen::FullPivLU<Mat> lu(v);
        if (!lu.isInvertible()) {
            throw std::invalid_argument("transform matrix is singular");
        }
        BilliardTransform t{v, lu.inverse()};
        double err = (t.v * t.v_inv - Mat::Identity(v.rows(), v.cols())).cwiseAbs().maxCoeff();
        if (err > 1e-10) {
            throw std::invalid_argument("transform inverse is inaccurate (" + std::to_string(err) + ")");
        }
        return t;
    }

    static BilliardTransform identity(std::size_t n) {
        auto k = static_cast<Eigen::Index>(n);
        return {Mat::Identity(k, k), Mat::Identity(k, k)};
    }
};

namespace detail {

// Separation coordinates are linear in time: d(t) = d0 + dv t. Contact when |d| = 2r while closing.
inline std::optional<double> contact_time(double d0, double dv, double r) {
    if (d0 > 0 && dv < 0) {
        return std::max(0.0, (d0 - 2 * r) / -dv);
    }
    if (d0 < 0 && dv > 0) {
        return std::max(0.0, (-d0 - 2 * r) / dv);
    }
    return std::nullopt;
}

inline std::optional<double> wall_time(double u0, double du, double r, const Walls &w) {
    if (du < 0) {
        return std::max(0.0, (u0 - r - w.lo) / -du);
    }
    if (du > 0) {
        return std::max(0.0, (w.hi - r - u0) / du);
    }
    return std::nullopt;
}

inline void check_no_overlap(const Vec &x, double r, const std::optional<Walls> &walls, const char *what) {
    const double slack = 1e-12;
    for (Eigen::Index i = 0; i < x.size(); i++) {
        for (Eigen::Index j = i + 1; j < x.size(); j++) {
            if (std::abs(x(i) - x(j)) < 2 * r - slack) {
                throw std::invalid_argument(std::string(what) + ": balls " + std::to_string(i + 1) + " and " +
                                            std::to_string(j + 1) + " overlap");
            }
        }
        if (walls && (x(i) - r < walls->lo - slack || x(i) + r > walls->hi + slack)) {
            throw std::invalid_argument(std::string(what) + ": ball " + std::to_string(i + 1) + " outside walls");
        }
    }
}

// Shared event loop. `pulled` maps the simulated coordinates to ball
// positions (identity for the original system, V^-1 for the formal one);
// `bounce` applies a velocity update in simulated coordinates.
template <typename Pull, typename Bounce>
Trajectory event_loop(Vec x, Vec v, double r, const std::optional<Walls> &walls, double horizon, Pull pulled,
                      Bounce bounce) {
    Trajectory traj;
    traj.horizon = horizon;
    double t = 0.0;
    traj.knots.push_back({t, x, v});
    const auto n = x.size();
    while (true) {
        Vec u = pulled(x);
        Vec du = pulled(v);
        struct Candidate {
            double dt;
            std::size_t i;
            std::optional<std::size_t> j;
        };
        std::vector<Candidate> cands;
        for (Eigen::Index i = 0; i < n; i++) {
            for (Eigen::Index j = i + 1; j < n; j++) {
                if (auto dt = contact_time(u(j) - u(i), du(j) - du(i), r)) {
                    cands.push_back({*dt, static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
                }
            }
        }
        if (walls) {
            for (Eigen::Index i = 0; i < n; i++) {
                if (auto dt = wall_time(u(i), du(i), r, *walls)) {
                    cands.push_back({*dt, static_cast<std::size_t>(i), std::nullopt});
                }
            }
        }
        double next = std::numeric_limits<double>::infinity();
        for (const auto &c : cands) {
            next = std::min(next, c.dt);
        }
        if (t + next > horizon) {
            break;
        }
        x += v * next;
        t += next;
        // Simultaneous events: pairs in ascending (i, j) order, then walls by ball index.
        std::vector<Candidate> now;
        for (const auto &c : cands) {
            if (c.dt <= next + kEventTimeTolerance) {
                now.push_back(c);
            }
        }
        std::sort(now.begin(), now.end(), [](const Candidate &a, const Candidate &b) {
            if (a.j.has_value() != b.j.has_value()) {
                return a.j.has_value();
            }
            return std::pair(a.i, a.j.value_or(0)) < std::pair(b.i, b.j.value_or(0));
        });
        for (const auto &c : now) {
            Vec cur = pulled(v);
            bool closing = c.j ? (cur(static_cast<Eigen::Index>(*c.j)) - cur(static_cast<Eigen::Index>(c.i))) *
                                         (pulled(x)(static_cast<Eigen::Index>(*c.j)) -
                                          pulled(x)(static_cast<Eigen::Index>(c.i))) <
                                     0
                               : true;
            if (!closing) {
                continue;
            }
            if (!c.j) {
                double vi = cur(static_cast<Eigen::Index>(c.i));
                double ui = pulled(x)(static_cast<Eigen::Index>(c.i));
                bool into_wall = (vi < 0 && ui < 0.5 * (walls->lo + walls->hi)) ||
                                 (vi > 0 && ui > 0.5 * (walls->lo + walls->hi));
                if (!into_wall) {
                    continue;
                }
            }
            v = bounce(v, c.i, c.j);
            traj.events.push_back({t, c.i, c.j});
        }
        traj.knots.push_back({t, x, v});
    }
    return traj;
}

}  // namespace detail

/// Exact event-driven evolution: straight lines, velocity exchange at contact.
inline Trajectory evolve_original(const BilliardState &s, double horizon) {
    if (s.x.size() != s.v.size()) {
        throw std::invalid_argument("positions and velocities differ in length");
    }
    detail::check_no_overlap(s.x, s.r, s.walls, "initial state");
    return detail::event_loop(
        s.x, s.v, s.r, s.walls, horizon,
        [](const Vec &a) {
            return a;
        },
        [](Vec v, std::size_t i, std::optional<std::size_t> j) {
            auto ii = static_cast<Eigen::Index>(i);
            if (j) {
                std::swap(v(ii), v(static_cast<Eigen::Index>(*j)));
            } else {
                v(ii) = -v(ii);
            }
            return v;
        });
}

/// Pointwise relabeling x'(t) = V x(t), v'(t) = V v(t).
inline Trajectory content_preserving_view(const Trajectory &traj, const Mat &v) {
    Trajectory out = traj;
    for (auto &k : out.knots) {
        k.x = v * k.x;
        k.v = v * k.v;
    }
    return out;
}

/// Primed balls moving under the formal law: straight lines in primed
/// coordinates, pair (i, j) changes course when
/// |sum_k (Vinv_ik - Vinv_jk) x'_k| = 2r, and the update is
/// v' <- V S Vinv v' with S the specular exchange (or wall reflection).
inline Trajectory evolve_formal(const BilliardState &primed, const BilliardTransform &tr, double horizon) {
    if (primed.x.size() != tr.v.rows()) {
        throw std::invalid_argument("transform size does not match ball count");
    }
    detail::check_no_overlap(tr.v_inv * primed.x, primed.r, primed.walls, "pulled-back primed state");
    return detail::event_loop(
        primed.x, primed.v, primed.r, primed.walls, horizon,
        [&](const Vec &a) {
            return Vec(tr.v_inv * a);
        },
        [&](Vec vp, std::size_t i, std::optional<std::size_t> j) {
            Vec u = tr.v_inv * vp;
            auto ii = static_cast<Eigen::Index>(i);
            if (j) {
                std::swap(u(ii), u(static_cast<Eigen::Index>(*j)));
            } else {
                u(ii) = -u(ii);
            }
            return Vec(tr.v * u);
        });
}

/// Sup-norm distance between two trajectories over the shorter horizon,
/// evaluated at every knot and sample time of either.
inline double trajectory_gap(const Trajectory &a, const Trajectory &b, double dt = kDefaultSampleDt) {
    double horizon = std::min(a.horizon, b.horizon);
    std::vector<double> ts = a.sample_times(dt);
    auto tb = b.sample_times(dt);
    ts.insert(ts.end(), tb.begin(), tb.end());
    for (const auto *tr : {&a, &b}) {
        for (const auto &k : tr->knots) {
            ts.push_back(k.t);
        }
    }
    double gap = 0.0;
    for (double t : ts) {
        if (t > horizon) {
            continue;
        }
        gap = std::max(gap, (a.position_at(t) - b.position_at(t)).cwiseAbs().maxCoeff());
    }
    return gap;
}

struct DivergenceReport {
    Trajectory formal;             // primed balls under the formal law, started at V x + dx
    Trajectory content_preserving; // the original balls, started at x + dx, in ball positions
    double gap = 0.0;
};

/// Perturbs both systems' ball positions by the same dx and compares where
/// each theory says the balls are: the formal theory's primed variables
/// versus the content-preserving theory's physical balls.
inline DivergenceReport divergence_report(const BilliardState &s, const Vec &dx, const BilliardTransform &tr,
                                          double horizon) {
    if (dx.size() != s.x.size()) {
        throw std::invalid_argument("perturbation length does not match ball count");
    }
    BilliardState primed{tr.v * s.x + dx, tr.v * s.v, s.r, s.walls};
    BilliardState physical{s.x + dx, s.v, s.r, s.walls};
    detail::check_no_overlap(physical.x, s.r, s.walls, "perturbed state");
    DivergenceReport rep;
    rep.formal = evolve_formal(primed, tr, horizon);
    rep.content_preserving = evolve_original(physical, horizon);
    rep.gap = trajectory_gap(rep.formal, rep.content_preserving);
    return rep;
}

inline double kinetic_energy(const Vec &v) {
    return 0.5 * v.squaredNorm();
}

inline double momentum(const Vec &v) {
    return v.sum();
}

}  // namespace heisennet::billiards
