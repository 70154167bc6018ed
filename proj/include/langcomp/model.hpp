#pragma once

// Three-group language competition model: two monolingual groups M1, M2 and
// a bilingual group B on the simplex m1 + m2 + b = 1. Every transition passes
// through B; the rate from group i to group j is
//
//     P(i -> j) = lambda * s_j * (fraction_j)^alpha * (fraction_i)^beta
//
// and the flux is the source fraction times that rate.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "langcomp/errors.hpp"
#include "langcomp/linalg.hpp"

namespace langcomp {

struct ModelParams {
    double s_m1 = 0.3;
    double s_m2 = 0.7;
    double s_b = 0.1;
    double lambda = 400.0;
    double alpha = 1.1;  // ease of attraction
    double beta = 3.6;   // ease of survival

    double alpha_minus_beta() const { return alpha - beta; }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Every violated range constraint, empty when the parameters are usable.
inline std::vector<std::string> validate_params(const ModelParams& p) {
    std::vector<std::string> errors;
    if (!(p.s_m1 > 0.0 && p.s_m1 < 1.0)) errors.emplace_back("s_m1 must lie in (0, 1)");
    if (!(p.s_m2 > 0.0 && p.s_m2 < 1.0)) errors.emplace_back("s_m2 must lie in (0, 1)");
    if (!(p.s_b > 0.0 && p.s_b <= 1.0)) errors.emplace_back("s_b must lie in (0, 1]");
    if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) errors.emplace_back("lambda must be positive");
    if (!(p.alpha >= 1.0) || !std::isfinite(p.alpha)) errors.emplace_back("alpha below 1");
    if (!(p.beta >= 1.0) || !std::isfinite(p.beta)) errors.emplace_back("beta below 1");
    return errors;
}

inline void require_valid(const ModelParams& p) {
    const auto errors = validate_params(p);
    if (errors.empty()) return;
    std::string msg = "invalid model parameters:";
    for (const auto& e : errors) msg += " " + e + ";";
    throw ValidationError(msg);
}

inline constexpr double kSimplexTolerance = 1e-12;

/// A point (m1, m2, b) of the population simplex.
class PopulationState {
public:
    /// Components must be nonnegative and sum to 1 within 1e-12; the stored
    /// triple is renormalized by its sum.
    PopulationState(double m1, double m2, double b) {
        if (!(m1 >= 0.0 && m2 >= 0.0 && b >= 0.0)) {
            throw DomainError("population fractions must be nonnegative");
        }
        const double sum = m1 + m2 + b;
        if (!(std::abs(sum - 1.0) <= kSimplexTolerance)) {
            throw DomainError("population fractions must sum to 1, got " + std::to_string(sum));
        }
        v_ = {m1 / sum, m2 / sum, b / sum};
    }

    explicit PopulationState(const Vec3& v) : PopulationState(v[0], v[1], v[2]) {}

    /// Simplex-reduced coordinates with b = 1 - m1 - m2.
    static PopulationState from_reduced(double m1, double m2) {
        if (!(m1 >= 0.0 && m2 >= 0.0)) throw DomainError("reduced coordinates must be nonnegative");
        if (m1 + m2 > 1.0 + kSimplexTolerance) throw DomainError("reduced coordinates require m1 + m2 <= 1");
        return PopulationState(m1, m2, std::max(0.0, 1.0 - m1 - m2));
    }

    double m1() const { return v_[0]; }
    double m2() const { return v_[1]; }
    double b() const { return v_[2]; }
    const Vec3& values() const { return v_; }

    bool strictly_interior() const { return v_[0] > 0.0 && v_[1] > 0.0 && v_[2] > 0.0; }

    friend bool operator==(const PopulationState&, const PopulationState&) = default;

private:
    Vec3 v_{};
};

/// Time derivative of a state. `frozen` marks states where every transition
/// flux vanishes identically (b = 0, or both monolingual groups empty), so a
/// zero derivative there reflects halted dynamics rather than a balance.
struct StateDerivative {
    double dm1 = 0.0;
    double dm2 = 0.0;
    double db = 0.0;
    bool frozen = false;

    Vec3 values() const { return {dm1, dm2, db}; }
};

enum class Group { M1, M2, B };

inline const char* to_string(Group g) {
    switch (g) {
        case Group::M1: return "M1";
        case Group::M2: return "M2";
        case Group::B: return "B";
    }
    return "?";
}

namespace detail {

inline double fraction_of(const PopulationState& s, Group g) {
    switch (g) {
        case Group::M1: return s.m1();
        case Group::M2: return s.m2();
        case Group::B: return s.b();
    }
    return 0.0;
}

inline double status_of(const ModelParams& p, Group g) {
    switch (g) {
        case Group::M1: return p.s_m1;
        case Group::M2: return p.s_m2;
        case Group::B: return p.s_b;
    }
    return 0.0;
}

}  // namespace detail

/// Per-capita rate of moving from group `from` to group `to`.
inline double transition_rate(const ModelParams& p, Group from, Group to, const PopulationState& s) {
    if (from == to) throw UnsupportedTransitionError("transition requires distinct groups");
    if (from != Group::B && to != Group::B) {
        throw UnsupportedTransitionError(std::string("no direct transition ") + to_string(from) + " -> " +
                                         to_string(to) + "; monolinguals move only through B");
    }
    require_valid(p);
    return p.lambda * detail::status_of(p, to) * std::pow(detail::fraction_of(s, to), p.alpha) *
           std::pow(detail::fraction_of(s, from), p.beta);
}

/// Unchecked right-hand side on a raw triple. Negative components (integrator
/// overshoot) are read as 0, so a zero component has zero derivative.
inline Vec3 rhs_kernel(const ModelParams& p, const Vec3& u) noexcept {
    const double m1 = std::max(u[0], 0.0);
    const double m2 = std::max(u[1], 0.0);
    const double b = std::max(u[2], 0.0);
    const double b_alpha = std::pow(b, p.alpha);
    const double b_beta1 = std::pow(b, p.beta) * b;
    const double dm1 = p.lambda * (p.s_m1 * std::pow(m1, p.alpha) * b_beta1 -
                                   p.s_b * b_alpha * std::pow(m1, p.beta) * m1);
    const double dm2 = p.lambda * (p.s_m2 * std::pow(m2, p.alpha) * b_beta1 -
                                   p.s_b * b_alpha * std::pow(m2, p.beta) * m2);
    return {dm1, dm2, -(dm1 + dm2)};
}

inline StateDerivative rhs_full(const ModelParams& p, const PopulationState& s) {
    require_valid(p);
    const Vec3 d = rhs_kernel(p, s.values());
    const bool frozen = s.b() == 0.0 || (s.m1() == 0.0 && s.m2() == 0.0);
    return {d[0], d[1], d[2], frozen};
}

/// (dm1, dm2) of the two-dimensional system obtained by eliminating b.
inline std::pair<double, double> rhs_reduced(const ModelParams& p, double m1, double m2) {
    const auto s = PopulationState::from_reduced(m1, m2);
    const auto d = rhs_full(p, s);
    return {d.dm1, d.dm2};
}

}  // namespace langcomp
