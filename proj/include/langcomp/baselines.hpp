#pragma once

// Mean-field versions of three earlier competition models, for side-by-side
// runs: Wang-Minett (X, Y, bilingual Z), Mira-Paredes (X, Y, bilingual B with
// an interlinguistic similarity k) and Vazquez et al. (X, Y, bilingual Z
// with a volatility exponent). State layout is always (x, y, bilingual).

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>
#include <variant>

#include "langcomp/errors.hpp"
#include "langcomp/integrator.hpp"
#include "langcomp/linalg.hpp"

namespace langcomp::baselines {

struct MWParams {
    double s_x = 0.6;  // s_y = 1 - s_x
    double c_zx = 1.0, c_zy = 1.0, c_xz = 1.0, c_yz = 1.0;
    double a = 1.31;
    double mu = 0.5;

    void validate() const {
        if (!(s_x > 0.0 && s_x < 1.0)) throw ValidationError("s_x must lie in (0, 1)");
        if (!(c_zx >= 0.0 && c_zy >= 0.0 && c_xz >= 0.0 && c_yz >= 0.0))
            throw ValidationError("switch rates must be nonnegative");
        if (!(mu > 0.0 && mu < 1.0)) throw ValidationError("mu must lie in (0, 1)");
        if (!std::isfinite(a)) throw ValidationError("a must be finite");
    }
};

struct MPParams {
    double s_x = 0.6;
    double c = 1.0;
    double k = 0.5;  // similarity of the two languages
    double a = 1.31;

    void validate() const {
        if (!(s_x > 0.0 && s_x < 1.0)) throw ValidationError("s_x must lie in (0, 1)");
        if (!(c > 0.0)) throw ValidationError("c must be positive");
        if (!(k >= 0.0 && k <= 1.0)) throw ValidationError("k must lie in [0, 1]");
        if (!std::isfinite(a)) throw ValidationError("a must be finite");
    }
};

struct VazParams {
    double S = 0.5;  // prestige of X
    double a = 1.0;  // volatility

    void validate() const {
        if (!(S > 0.0 && S < 1.0)) throw ValidationError("S must lie in (0, 1)");
        if (!(a > 0.0) || !std::isfinite(a)) throw ValidationError("a must be positive");
    }
};

namespace detail {

/// Trial stages of the integrator can dip a hair below zero; powers of a
/// negative base are not defined, so rates see the clipped state.
inline Vec3 clip(const Vec3& s) { return {std::max(s[0], 0.0), std::max(s[1], 0.0), std::max(s[2], 0.0)}; }

}  // namespace detail

/// X and Y speakers only pass through Z. Newcomers (rate mu) are recruited
/// from Z; adults (rate 1 - mu) drop their language into Z.
inline Vec3 mw_rhs(const MWParams& p, const Vec3& state) {
    const Vec3 s = detail::clip(state);
    const double x = s[0], y = s[1], z = s[2];
    const double s_y = 1.0 - p.s_x;
    const double xa = std::pow(x, p.a), ya = std::pow(y, p.a);
    const double dx = p.mu * z * p.c_zx * p.s_x * xa - (1.0 - p.mu) * x * p.c_xz * s_y * ya;
    const double dy = p.mu * z * p.c_zy * s_y * ya - (1.0 - p.mu) * y * p.c_yz * p.s_x * xa;
    return {dx, dy, -(dx + dy)};
}

/// Rates of the Mira-Paredes model. Bilinguals drop a language at the same
/// rate monolinguals of the other language switch away from it.
struct MPRates {
    double yx, yb, xy, xb, bx, by;
};

inline MPRates mp_rates(const MPParams& p, const Vec3& state) {
    const Vec3 s = detail::clip(state);
    const double s_y = 1.0 - p.s_x;
    const double pull_x = p.c * p.s_x * std::pow(1.0 - s[1], p.a);
    const double pull_y = p.c * s_y * std::pow(1.0 - s[0], p.a);
    MPRates r{};
    r.yx = (1.0 - p.k) * pull_x;
    r.yb = p.k * pull_x;
    r.xy = (1.0 - p.k) * pull_y;
    r.xb = p.k * pull_y;
    r.bx = r.yx;
    r.by = r.xy;
    return r;
}

inline Vec3 mp_rhs(const MPParams& p, const Vec3& state) {
    const Vec3 s = detail::clip(state);
    const double x = s[0], y = s[1], b = s[2];
    const auto r = mp_rates(p, s);
    const double dx = y * r.yx + b * r.bx - x * (r.xy + r.xb);
    const double dy = x * r.xy + b * r.by - y * (r.yx + r.yb);
    return {dx, dy, -(dx + dy)};
}

/// Mean field of the voter-like model: neighbour densities are the global
/// ones. No direct X <-> Y switches.
inline Vec3 vaz_meanfield_rhs(const VazParams& p, const Vec3& state) {
    const Vec3 s = detail::clip(state);
    const double x = s[0], y = s[1], z = s[2];
    const double dx = z * p.S * std::pow(1.0 - y, p.a) - x * (1.0 - p.S) * std::pow(y, p.a);
    const double dy = z * (1.0 - p.S) * std::pow(1.0 - x, p.a) - y * p.S * std::pow(x, p.a);
    return {dx, dy, -(dx + dy)};
}

using BaselineParams = std::variant<MWParams, MPParams, VazParams>;

inline const char* model_name(const BaselineParams& p) {
    switch (p.index()) {
        case 0: return "mw";
        case 1: return "mp";
        default: return "vaz";
    }
}

inline Vec3 baseline_rhs(const BaselineParams& params, const Vec3& s) {
    return std::visit(
        [&s](const auto& p) -> Vec3 {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, MWParams>) return mw_rhs(p, s);
            else if constexpr (std::is_same_v<T, MPParams>) return mp_rhs(p, s);
            else return vaz_meanfield_rhs(p, s);
        },
        params);
}

inline void validate(const BaselineParams& params) {
    std::visit([](const auto& p) { p.validate(); }, params);
}

/// Integrates a baseline with the same integrator and simplex projection as
/// the main model.
inline SimplexPath simulate_baseline(const BaselineParams& params, const Vec3& ic, const IntegratorOptions& opts = {}) {
    validate(params);
    for (double v : ic)
        if (!(v >= 0.0)) throw DomainError("initial condition components must be nonnegative");
    if (!(std::abs(ic[0] + ic[1] + ic[2] - 1.0) <= 1e-12)) throw DomainError("initial condition must sum to 1");
    auto rhs = [&params](const Vec3& u) { return baseline_rhs(params, u); };
    return integrate_on_simplex(rhs, ic, opts);
}

}  // namespace langcomp::baselines
