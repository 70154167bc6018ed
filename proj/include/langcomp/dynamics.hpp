#pragma once

// Trajectories of the competition model, convergence detection and matching
// of end states to the closed-form equilibria.

#include <limits>
#include <optional>
#include <vector>

#include "langcomp/equilibria.hpp"
#include "langcomp/errors.hpp"
#include "langcomp/integrator.hpp"
#include "langcomp/model.hpp"

namespace langcomp {

struct Trajectory {
    std::vector<double> times;
    std::vector<PopulationState> states;
    ModelParams params;
    PopulationState initial_condition{0.0, 0.0, 1.0};
    double max_drift = 0.0;  // largest |sum - 1| seen before renormalization
    std::size_t accepted_steps = 0;
};

/// Clip-and-renormalize for triples that are on the simplex up to roundoff.
inline PopulationState project_simplex(const Vec3& raw) {
    for (double v : raw) {
        if (!(v >= -1e-9)) throw DomainError("component far below zero: not a simplex point");
    }
    Vec3 y = raw;
    const double sum = y[0] + y[1] + y[2];
    if (!(std::abs(sum - 1.0) <= 1e-6)) throw DomainError("components do not sum to 1");
    detail::renormalize(y);
    return PopulationState(y);
}

namespace detail {

inline Trajectory to_trajectory(const SimplexPath& path, const ModelParams& p, const PopulationState& ic) {
    Trajectory tr;
    tr.params = p;
    tr.initial_condition = ic;
    tr.times = path.times;
    tr.states.reserve(path.states.size());
    for (const auto& v : path.states) tr.states.emplace_back(v);
    tr.max_drift = path.max_drift;
    tr.accepted_steps = path.accepted_steps;
    return tr;
}

inline void require_positive_ic(const PopulationState& ic) {
    if (!ic.strictly_interior()) {
        throw DomainError("initial condition must have m1, m2, b > 0");
    }
}

}  // namespace detail

/// Trajectory from a strictly positive initial condition to opts.max_time.
/// Throws IntegrationError (carrying the partial path) on step-size underflow.
inline Trajectory integrate(const ModelParams& p, const PopulationState& ic,
                            const IntegratorOptions& opts = {}) {
    require_valid(p);
    detail::require_positive_ic(ic);
    auto rhs = [&p](const Vec3& u) { return rhs_kernel(p, u); };
    return detail::to_trajectory(integrate_on_simplex(rhs, ic.values(), opts), p, ic);
}

inline constexpr double kMatchTolerance = 1e-4;

/// Nearest equilibrium to `s` within `tol` (Euclidean). States with b < tol
/// match the E4 segment unless they sit on a vertex E1/E2. Among E3, E5,
/// E6, E7 the closest wins, ties going to the lower index.
inline std::optional<EquilibriumKind> match_equilibrium(const ModelParams& p, const PopulationState& s,
                                                        double tol = kMatchTolerance) {
    if (s.b() < tol) {
        if (distance(s.values(), {1.0, 0.0, 0.0}) < tol) return EquilibriumKind::E1;
        if (distance(s.values(), {0.0, 1.0, 0.0}) < tol) return EquilibriumKind::E2;
        return EquilibriumKind::E4;
    }
    std::vector<std::pair<EquilibriumKind, PopulationState>> candidates;
    candidates.emplace_back(EquilibriumKind::E3, PopulationState(0.0, 0.0, 1.0));
    if (!delta_exponent(p).degenerate()) {
        candidates.emplace_back(EquilibriumKind::E5, e5_coords(p));
        candidates.emplace_back(EquilibriumKind::E6, e6_coords(p));
        candidates.emplace_back(EquilibriumKind::E7, e7_coords(p));
    }
    std::optional<EquilibriumKind> best;
    double best_dist = tol;
    for (const auto& [kind, point] : candidates) {
        const double d = distance(s.values(), point.values());
        if (d < best_dist) {
            best_dist = d;
            best = kind;
        }
    }
    return best;
}

struct ConvergenceResult {
    PopulationState final_state{0.0, 0.0, 1.0};
    std::optional<EquilibriumKind> matched;
    double time = 0.0;
    bool converged = false;  // ||rhs||_inf fell below the epsilon before max_time
    std::size_t accepted_steps = 0;
};

/// Integrate until ||rhs||_inf < opts.convergence_epsilon or opts.max_time,
/// then match the end state. A stationary initial condition (for example a
/// point of the E4 segment) returns immediately with time 0.
inline ConvergenceResult converge(const ModelParams& p, const PopulationState& ic,
                                  const IntegratorOptions& opts = {}, double match_tol = kMatchTolerance) {
    require_valid(p);
    opts.validate();
    ConvergenceResult r;
    if (max_abs(rhs_kernel(p, ic.values())) < opts.convergence_epsilon) {
        r.final_state = ic;
        r.converged = true;
        r.matched = match_equilibrium(p, ic, match_tol);
        return r;
    }
    detail::require_positive_ic(ic);
    IntegratorOptions o = opts;
    o.record_every = std::numeric_limits<std::size_t>::max();
    const double eps = opts.convergence_epsilon;
    auto rhs = [&p](const Vec3& u) { return rhs_kernel(p, u); };
    const auto path = integrate_on_simplex(rhs, ic.values(), o,
                                           [eps](double, const Vec3&, const Vec3& dy) { return max_abs(dy) < eps; });
    r.final_state = PopulationState(path.states.back());
    r.time = path.times.back();
    r.converged = max_abs(rhs_kernel(p, r.final_state.values())) < eps;
    r.accepted_steps = path.accepted_steps;
    r.matched = match_equilibrium(p, r.final_state, match_tol);
    return r;
}

}  // namespace langcomp
