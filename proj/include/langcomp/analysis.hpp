#pragma once

// Parameter sweeps along alpha - beta and s_B, estimation of the coexistence
// threshold d, basin maps and the regime table.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "langcomp/dynamics.hpp"
#include "langcomp/equilibria.hpp"
#include "langcomp/model.hpp"
#include "langcomp/parallel.hpp"

namespace langcomp {

/// Parameters held fixed while alpha - beta and s_B vary.
struct GapBase {
    double s_m1 = 0.3;
    double s_m2 = 0.7;
    double lambda = 400.0;
    double beta = 1.1;
    double alpha_floor = 1.1;  // used when beta + gap would put alpha below 1
};

/// Model parameters with alpha - beta = gap. Keeps beta = base.beta unless
/// that would need alpha < 1; then alpha = base.alpha_floor and beta absorbs
/// the gap (alpha = 1.1, beta = 3.6 at gap = -2.5).
inline ModelParams params_for_gap(const GapBase& base, double s_b, double gap) {
    ModelParams p;
    p.s_m1 = base.s_m1;
    p.s_m2 = base.s_m2;
    p.s_b = s_b;
    p.lambda = base.lambda;
    if (base.beta + gap >= 1.0) {
        p.beta = base.beta;
        p.alpha = base.beta + gap;
    } else {
        p.alpha = base.alpha_floor;
        p.beta = base.alpha_floor - gap;
    }
    return p;
}

/// Integrator settings for attractor identification. The approach to boundary
/// equilibria is algebraic (m ~ t^(-1/beta)) rather than exponential, so runs
/// need far longer horizons than the plotting default.
inline IntegratorOptions attractor_options() {
    IntegratorOptions o;
    o.max_time = 2.0e4;
    o.rtol = 1e-9;
    o.atol = 1e-12;
    return o;
}

/// Triangular lattice of strictly interior initial conditions: n nodes per
/// side, every component at least `margin`.
inline std::vector<PopulationState> standard_ic_grid(std::size_t n, double margin = 0.05) {
    if (n < 2) throw ValidationError("IC grid needs at least 2 nodes per side");
    if (!(margin > 0.0 && 3.0 * margin < 1.0)) throw ValidationError("IC grid margin must lie in (0, 1/3)");
    const double h = (1.0 - 3.0 * margin) / static_cast<double>(n - 1);
    std::vector<PopulationState> out;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; i + j < n; ++j) {
            const double m1 = margin + static_cast<double>(i) * h;
            const double m2 = margin + static_cast<double>(j) * h;
            out.emplace_back(m1, m2, 1.0 - m1 - m2);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Threshold d

/// E7 counts as a resolved stable attractor when it is linearly stable and
/// every coordinate exceeds the attractor-matching tolerance. Closer to the
/// boundary than that, trajectories settle within matching distance of a
/// boundary state and cannot be told apart from E4/E5/E6/E3.
inline bool e7_resolved_attractor(const ModelParams& p, double match_tol = kMatchTolerance) {
    if (delta_exponent(p).degenerate()) return false;
    const auto e7 = equilibrium(p, EquilibriumKind::E7);
    if (e7.stability != Stability::stable) return false;
    const auto& v = e7.coords.values();
    return std::min({v[0], v[1], v[2]}) >= match_tol;
}

struct ThresholdEstimate {
    double s_b = 0.0;
    bool found = false;
    double d = 0.0;      // bracket midpoint when found
    double lower = 0.0;  // gap at which E7 is still a resolved attractor
    double upper = 0.0;  // gap at which it is not
    double width = 0.0;
    int evaluations = 0;
};

/// Bisection on alpha - beta in (0, 1) for the loss of E7 as a resolved
/// stable attractor. `found` is false when the predicate does not change
/// across the bracket.
inline ThresholdEstimate threshold_d(const GapBase& base, double s_b, double resolution = 0.02,
                                     double match_tol = kMatchTolerance) {
    if (!(resolution > 0.0)) throw ValidationError("resolution must be positive");
    ThresholdEstimate est;
    est.s_b = s_b;
    auto resolved = [&](double gap) {
        ++est.evaluations;
        return e7_resolved_attractor(params_for_gap(base, s_b, gap), match_tol);
    };
    double lo = 0.0;
    double hi = 1.0 - 1e-6;  // stay off the degenerate line alpha - beta = 1
    require_valid(params_for_gap(base, s_b, lo));
    est.lower = lo;
    est.upper = hi;
    if (!resolved(lo) || resolved(hi)) {
        est.width = hi - lo;
        return est;
    }
    while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        (resolved(mid) ? lo : hi) = mid;
    }
    est.found = true;
    est.lower = lo;
    est.upper = hi;
    est.width = hi - lo;
    est.d = 0.5 * (lo + hi);
    return est;
}

// ---------------------------------------------------------------------------
// Regime table

enum class Scenario {
    coexistence_e7,
    lower_status_dies_e6,
    monolinguals_die_e3,
    bilinguals_die_e4,
    bistable_e3_e4,
    bifurcation_band_unresolved,
};

inline const char* to_string(Scenario s) {
    switch (s) {
        case Scenario::coexistence_e7: return "coexistence-E7";
        case Scenario::lower_status_dies_e6: return "lower-status-dies-E6";
        case Scenario::monolinguals_die_e3: return "monolinguals-die-E3";
        case Scenario::bilinguals_die_e4: return "bilinguals-die-E4";
        case Scenario::bistable_e3_e4: return "bistable-E3-E4";
        case Scenario::bifurcation_band_unresolved: return "bifurcation-band-unresolved";
    }
    return "?";
}

/// Gaps within this distance below 1 count as the limit alpha - beta -> 1-.
inline constexpr double kNearOneGap = 1e-3;

/// Expected long-run regime from (alpha - beta, s_B) relative to the
/// threshold d and the status ordering. The lower-status monolingual group is
/// whichever of M1, M2 has the smaller status; E6 names its extinction.
inline Scenario scenario_classify(const ModelParams& p, double d, double near_one = kNearOneGap) {
    require_valid(p);
    const double gap = p.alpha_minus_beta();
    if (gap < d) return Scenario::coexistence_e7;
    if (gap > 1.0) return Scenario::bistable_e3_e4;
    if (delta_exponent(p).degenerate()) return Scenario::bifurcation_band_unresolved;
    const double s_lo = std::min(p.s_m1, p.s_m2);
    const double s_hi = std::max(p.s_m1, p.s_m2);
    if (s_lo == s_hi) return Scenario::bifurcation_band_unresolved;
    const bool limit = 1.0 - gap < near_one;
    const double sb = p.s_b;
    if (sb <= s_lo) return Scenario::bilinguals_die_e4;
    if (sb < s_hi) return limit ? Scenario::bilinguals_die_e4 : Scenario::lower_status_dies_e6;
    if (sb == s_hi) return Scenario::lower_status_dies_e6;
    return limit ? Scenario::monolinguals_die_e3 : Scenario::lower_status_dies_e6;
}

// ---------------------------------------------------------------------------
// Basins

struct BasinCell {
    PopulationState ic{0.0, 0.0, 1.0};
    std::optional<EquilibriumKind> label;  // empty: no equilibrium within tolerance at the end
    bool converged = false;
};

struct BasinMap {
    std::size_t grid_n = 0;
    double margin = 0.05;
    std::vector<BasinCell> cells;  // standard_ic_grid order

    std::size_t count(EquilibriumKind k) const {
        return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [k](const BasinCell& c) {
            return c.label && *c.label == k;
        }));
    }
    std::size_t unresolved() const {
        return static_cast<std::size_t>(
            std::count_if(cells.begin(), cells.end(), [](const BasinCell& c) { return !c.label; }));
    }
};

inline BasinMap basin_map(const ModelParams& p, std::size_t grid_n, const IntegratorOptions& opts = attractor_options(),
                          unsigned threads = default_thread_count(), double margin = 0.05,
                          double match_tol = kMatchTolerance) {
    require_valid(p);
    BasinMap map;
    map.grid_n = grid_n;
    map.margin = margin;
    const auto ics = standard_ic_grid(grid_n, margin);
    map.cells.resize(ics.size());
    parallel_for(ics.size(), threads, [&](std::size_t i) {
        const auto r = converge(p, ics[i], opts, match_tol);
        map.cells[i] = {ics[i], r.matched, r.converged};
    });
    return map;
}

// ---------------------------------------------------------------------------
// E7 locus

struct LocusPoint {
    double s_b = 0.0;
    PopulationState e7{0.0, 0.0, 1.0};
};

inline std::vector<LocusPoint> e7_locus(const ModelParams& base, const std::vector<double>& s_b_values) {
    const auto delta = delta_exponent(base);
    if (delta.degenerate()) throw DegenerateExponentError();
    if (!(*delta.value > 0.0)) throw DomainError("E7 locus requires alpha - beta < 1");
    std::vector<LocusPoint> out;
    out.reserve(s_b_values.size());
    for (double sb : s_b_values) {
        ModelParams p = base;
        p.s_b = sb;
        require_valid(p);
        out.push_back({sb, e7_coords(p)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepAxes {
    std::vector<double> gaps;  // alpha - beta
    std::vector<double> s_b;
    GapBase base;
    std::size_t ic_grid_n = 0;  // 0: equilibria and stability only
    IntegratorOptions opts = attractor_options();
    double match_tol = kMatchTolerance;
    unsigned threads = default_thread_count();
};

struct SweepRecord {
    double gap = 0.0;
    ModelParams params;
    bool degenerate = false;  // alpha - beta = 1: no E5, E6, E7
    std::vector<std::pair<EquilibriumKind, Stability>> stability;
    bool e7_resolved = false;
    std::vector<std::optional<EquilibriumKind>> attractors;  // per standard IC grid node

    std::optional<Stability> stability_of(EquilibriumKind k) const {
        for (const auto& [kind, s] : stability)
            if (kind == k) return s;
        return std::nullopt;
    }
    std::size_t attractor_count(EquilibriumKind k) const {
        return static_cast<std::size_t>(
            std::count_if(attractors.begin(), attractors.end(), [k](const auto& a) { return a && *a == k; }));
    }
};

/// Cartesian product gaps x s_b, gap-major. Records are filled in parallel
/// into fixed slots, so the order never depends on scheduling.
inline std::vector<SweepRecord> sweep(const SweepAxes& axes) {
    const std::size_t n = axes.gaps.size() * axes.s_b.size();
    std::vector<SweepRecord> out(n);
    if (n == 0) return out;
    const auto ics = axes.ic_grid_n > 0 ? standard_ic_grid(axes.ic_grid_n) : std::vector<PopulationState>{};
    for (std::size_t i = 0; i < n; ++i) {
        auto& rec = out[i];
        rec.gap = axes.gaps[i / axes.s_b.size()];
        rec.params = params_for_gap(axes.base, axes.s_b[i % axes.s_b.size()], rec.gap);
        require_valid(rec.params);
        rec.degenerate = delta_exponent(rec.params).degenerate();
        rec.attractors.resize(ics.size());
    }
    // one work item per (record, IC) pair plus one per record for equilibria
    const std::size_t per = ics.size() + 1;
    parallel_for(n * per, axes.threads, [&](std::size_t w) {
        auto& rec = out[w / per];
        const std::size_t slot = w % per;
        if (slot == 0) {
            if (rec.degenerate) return;
            for (const auto& e : equilibria_all(rec.params)) rec.stability.emplace_back(e.kind, e.stability);
            rec.e7_resolved = e7_resolved_attractor(rec.params, axes.match_tol);
        } else {
            rec.attractors[slot - 1] = converge(rec.params, ics[slot - 1], axes.opts, axes.match_tol).matched;
        }
    });
    return out;
}

}  // namespace langcomp
