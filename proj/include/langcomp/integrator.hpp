#pragma once

// Explicit Runge-Kutta integration of three-component flows that conserve
// x + y + z = 1. Each accepted step is clipped at zero and renormalized onto
// the simplex; the pre-projection drift of the component sum is tracked.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "langcomp/errors.hpp"
#include "langcomp/linalg.hpp"

namespace langcomp {

enum class Method { rk4_fixed, rk45_adaptive };

inline const char* to_string(Method m) { return m == Method::rk4_fixed ? "rk4" : "rk45"; }

struct IntegratorOptions {
    Method method = Method::rk45_adaptive;
    double step = 1e-3;  // rk4 step
    double rtol = 1e-10;
    double atol = 1e-12;
    double initial_step = 1e-6;
    double min_step = 1e-14;
    double max_time = 50.0;
    double convergence_epsilon = 1e-10;
    std::size_t record_every = 1;  // keep every n-th accepted step; the last is always kept

    void validate() const {
        if (!(step > 0.0)) throw ValidationError("step must be positive");
        if (!(rtol > 0.0) || !(atol > 0.0)) throw ValidationError("tolerances must be positive");
        if (!(initial_step > 0.0) || !(min_step > 0.0)) throw ValidationError("step bounds must be positive");
        if (!(max_time > 0.0) || !std::isfinite(max_time)) throw ValidationError("max_time must be positive");
        if (!(convergence_epsilon > 0.0)) throw ValidationError("convergence_epsilon must be positive");
        if (record_every == 0) throw ValidationError("record_every must be at least 1");
    }
};

struct SimplexPath {
    std::vector<double> times;
    std::vector<Vec3> states;
    double max_drift = 0.0;
    std::size_t accepted_steps = 0;
    bool stopped_early = false;
};

/// Step size collapsed below the floor; `partial` holds the path so far.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, SimplexPath partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const SimplexPath& partial() const { return partial_; }

private:
    SimplexPath partial_;
};

namespace detail {

inline Vec3 axpy(const Vec3& y, double h, std::initializer_list<std::pair<double, const Vec3*>> terms) {
    Vec3 out = y;
    for (std::size_t i = 0; i < 3; ++i) {
        double acc = 0.0;
        for (const auto& [c, k] : terms) acc += c * (*k)[i];
        out[i] += h * acc;
    }
    return out;
}

/// Clip negatives and divide by the sum. Returns true if anything was clipped.
inline bool renormalize(Vec3& y) {
    bool clipped = false;
    for (auto& v : y) {
        if (v < 0.0) {
            v = 0.0;
            clipped = true;
        }
    }
    const double sum = y[0] + y[1] + y[2];
    for (auto& v : y) v /= sum;
    return clipped;
}

inline double sum_drift(const Vec3& y) { return std::abs((y[0] + y[1] + y[2]) - 1.0); }

}  // namespace detail

/// Integrate dy/dt = rhs(y) from t = 0 to opts.max_time, or until
/// stop(t, y, dy) returns true after an accepted step.
template <class Rhs, class Stop>
SimplexPath integrate_on_simplex(Rhs&& rhs, Vec3 y, const IntegratorOptions& opts, Stop&& stop) {
    opts.validate();
    SimplexPath path;
    path.times.push_back(0.0);
    path.states.push_back(y);

    double t = 0.0;
    const double t_end = opts.max_time;
    auto record = [&](bool force) {
        if (force || path.accepted_steps % opts.record_every == 0) {
            if (path.times.back() != t) {
                path.times.push_back(t);
                path.states.push_back(y);
            }
        }
    };

    if (opts.method == Method::rk4_fixed) {
        while (t < t_end) {
            const double h = std::min(opts.step, t_end - t);
            const Vec3 k1 = rhs(y);
            const Vec3 k2 = rhs(detail::axpy(y, 0.5 * h, {{1.0, &k1}}));
            const Vec3 k3 = rhs(detail::axpy(y, 0.5 * h, {{1.0, &k2}}));
            const Vec3 k4 = rhs(detail::axpy(y, h, {{1.0, &k3}}));
            const Vec3 y_new = detail::axpy(y, h / 6.0, {{1.0, &k1}, {2.0, &k2}, {2.0, &k3}, {1.0, &k4}});
            if (!std::isfinite(y_new[0] + y_new[1] + y_new[2])) {
                throw IntegrationError("non-finite state at t = " + std::to_string(t), std::move(path));
            }
            y = y_new;
            path.max_drift = std::max(path.max_drift, detail::sum_drift(y));
            detail::renormalize(y);
            t = (t_end - t <= opts.step) ? t_end : t + h;
            ++path.accepted_steps;
            if (stop(t, y, rhs(y))) {
                path.stopped_early = t < t_end;
                record(true);
                return path;
            }
            record(t >= t_end);
        }
        return path;
    }

    // Dormand-Prince 5(4), first-same-as-last. The flow is autonomous, so
    // stage times are not needed.
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    double h = std::min(opts.initial_step, t_end);
    Vec3 k1 = rhs(y);
    while (t < t_end) {
        if (h < opts.min_step * std::max(1.0, t)) {
            throw IntegrationError("step size underflow at t = " + std::to_string(t), std::move(path));
        }
        const bool last = h >= t_end - t;
        if (last) h = t_end - t;

        const Vec3 k2 = rhs(detail::axpy(y, h, {{a21, &k1}}));
        const Vec3 k3 = rhs(detail::axpy(y, h, {{a31, &k1}, {a32, &k2}}));
        const Vec3 k4 = rhs(detail::axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
        const Vec3 k5 = rhs(detail::axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
        const Vec3 k6 = rhs(detail::axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
        Vec3 y_new = detail::axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const Vec3 k7 = rhs(y_new);

        double err = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double scale = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err = std::max(err, std::abs(e) / scale);
        }
        // std::max drops NaN operands, so non-finite stages are caught here
        if (!std::isfinite(err) || !std::isfinite(y_new[0] + y_new[1] + y_new[2]))
            err = std::numeric_limits<double>::max();

        if (err <= 1.0) {
            path.max_drift = std::max(path.max_drift, detail::sum_drift(y_new));
            const bool clipped = detail::renormalize(y_new);
            y = y_new;
            t = last ? t_end : t + h;
            k1 = clipped ? rhs(y) : k7;
            ++path.accepted_steps;
            if (stop(t, y, k1)) {
                path.stopped_early = t < t_end;
                record(true);
                return path;
            }
            record(t >= t_end);
            const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h *= grow;
        } else {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
        }
    }
    return path;
}

template <class Rhs>
SimplexPath integrate_on_simplex(Rhs&& rhs, Vec3 y, const IntegratorOptions& opts) {
    return integrate_on_simplex(std::forward<Rhs>(rhs), y, opts,
                                [](double, const Vec3&, const Vec3&) { return false; });
}

}  // namespace langcomp
