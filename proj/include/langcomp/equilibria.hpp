#pragma once

// Closed-form equilibria, Jacobians and linear stability.
//
// With delta = 1 / (beta - alpha + 1) and r_i = (s_Mi / s_B)^delta, a state
// with m_i, b > 0 balances group i exactly when m_i / b = r_i. The interior
// point E7 is (r1, r2, 1) / (1 + r1 + r2); E5 and E6 keep only one
// monolingual group. Coordinates are evaluated from log r_i so that the
// large exponents near alpha - beta -> 1 saturate cleanly instead of
// overflowing.

#include <array>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "langcomp/errors.hpp"
#include "langcomp/linalg.hpp"
#include "langcomp/model.hpp"

namespace langcomp {

enum class EquilibriumKind { E1, E2, E3, E4, E5, E6, E7 };

inline const char* to_string(EquilibriumKind k) {
    static constexpr const char* names[] = {"E1", "E2", "E3", "E4", "E5", "E6", "E7"};
    return names[static_cast<int>(k)];
}

inline std::optional<EquilibriumKind> equilibrium_kind_from_string(const std::string& s) {
    for (int i = 0; i < 7; ++i) {
        const auto k = static_cast<EquilibriumKind>(i);
        if (s == to_string(k)) return k;
    }
    return std::nullopt;
}

/// `nonhyperbolic` covers isolated equilibria whose reduced Jacobian has an
/// eigenvalue with numerically zero real part and none positive; linear
/// analysis cannot decide those.
enum class Stability { stable, unstable, saddle, degenerate_line, undefined_dynamics, nonhyperbolic };

inline const char* to_string(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        case Stability::saddle: return "saddle";
        case Stability::degenerate_line: return "degenerate-line";
        case Stability::undefined_dynamics: return "undefined-dynamics";
        case Stability::nonhyperbolic: return "nonhyperbolic";
    }
    return "?";
}

/// Eigenvalues with |Re| below this are treated as zero.
inline constexpr double kZeroEigenvalueTolerance = 1e-9;

/// Below this |beta - alpha + 1| the exponent is reported degenerate.
inline constexpr double kDegenerateDenominator = 1e-12;

struct DeltaExponent {
    std::optional<double> value;

    bool degenerate() const { return !value.has_value(); }
    double get() const {
        if (!value) throw DegenerateExponentError();
        return *value;
    }
};

inline DeltaExponent delta_exponent(double alpha, double beta) {
    const double denom = -alpha + beta + 1.0;
    if (std::abs(denom) < kDegenerateDenominator) return {};
    return {1.0 / denom};
}

inline DeltaExponent delta_exponent(const ModelParams& p) { return delta_exponent(p.alpha, p.beta); }

using Eigenpair2 = std::array<std::complex<double>, 2>;

struct EquilibriumPoint {
    EquilibriumKind kind{};
    PopulationState coords{0.0, 0.0, 1.0};
    Eigenpair2 eigenvalues{};
    Stability stability = Stability::undefined_dynamics;
    /// True for E4, whose coords are one representative of the segment
    /// {(t, 1 - t, 0) : 0 < t < 1}.
    bool family = false;
};

/// Sampler for the E4 segment of boundary equilibria.
inline PopulationState e4_point(double t) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("E4 parameter t must lie in (0, 1)");
    return PopulationState(t, 1.0 - t, 0.0);
}

namespace detail {

/// Normalized exp(logs) with the largest term factored out.
template <std::size_t N>
std::array<double, N> softmax(const std::array<double, N>& logs) {
    double top = logs[0];
    for (double l : logs) top = std::max(top, l);
    std::array<double, N> out{};
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = std::exp(logs[i] - top);
        sum += out[i];
    }
    for (auto& v : out) v /= sum;
    return out;
}

inline double log_ratio(const ModelParams& p, double delta, double s_mono) {
    return delta * (std::log(s_mono) - std::log(p.s_b));
}

}  // namespace detail

inline PopulationState e5_coords(const ModelParams& p) {
    const double d = delta_exponent(p).get();
    const auto w = detail::softmax<2>({detail::log_ratio(p, d, p.s_m1), 0.0});
    return PopulationState(w[0], 0.0, w[1]);
}

inline PopulationState e6_coords(const ModelParams& p) {
    const double d = delta_exponent(p).get();
    const auto w = detail::softmax<2>({detail::log_ratio(p, d, p.s_m2), 0.0});
    return PopulationState(0.0, w[0], w[1]);
}

inline PopulationState e7_coords(const ModelParams& p) {
    const double d = delta_exponent(p).get();
    const auto w =
        detail::softmax<3>({detail::log_ratio(p, d, p.s_m1), detail::log_ratio(p, d, p.s_m2), 0.0});
    return PopulationState(w[0], w[1], w[2]);
}

namespace detail {

struct GroupPartials {
    double d_mono;  // d(dm_i/dt)/d(m_i)
    double d_b;     // d(dm_i/dt)/d(b)
};

// dm_i/dt = lambda (s_i m^a b^(beta+1) - s_B b^a m^(beta+1))
inline GroupPartials group_partials(const ModelParams& p, double s_mono, double m, double b) {
    const double a = p.alpha;
    const double be = p.beta;
    const double d_mono = p.lambda * (a * s_mono * std::pow(m, a - 1.0) * std::pow(b, be + 1.0) -
                                      (be + 1.0) * p.s_b * std::pow(b, a) * std::pow(m, be));
    const double d_b = p.lambda * ((be + 1.0) * s_mono * std::pow(m, a) * std::pow(b, be) -
                                   a * p.s_b * std::pow(b, a - 1.0) * std::pow(m, be + 1.0));
    return {d_mono, d_b};
}

}  // namespace detail

/// Jacobian of (dm1, dm2, db) with respect to (m1, m2, b), the three fractions
/// treated as independent.
inline Mat3 jacobian_full(const ModelParams& p, const PopulationState& s) {
    require_valid(p);
    const auto f = detail::group_partials(p, p.s_m1, s.m1(), s.b());
    const auto g = detail::group_partials(p, p.s_m2, s.m2(), s.b());
    return {{{f.d_mono, 0.0, f.d_b},
             {0.0, g.d_mono, g.d_b},
             {-f.d_mono, -g.d_mono, -(f.d_b + g.d_b)}}};
}

/// Jacobian of the reduced system in (m1, m2) with b = 1 - m1 - m2.
inline Mat2 jacobian_reduced(const ModelParams& p, double m1, double m2) {
    const auto s = PopulationState::from_reduced(m1, m2);
    require_valid(p);
    const auto f = detail::group_partials(p, p.s_m1, s.m1(), s.b());
    const auto g = detail::group_partials(p, p.s_m2, s.m2(), s.b());
    return {{{f.d_mono - f.d_b, -f.d_b}, {-g.d_b, g.d_mono - g.d_b}}};
}

inline Mat2 jacobian_reduced(const ModelParams& p, const PopulationState& s) {
    return jacobian_reduced(p, s.m1(), s.m2());
}

inline Stability classify_eigenvalues(const Eigenpair2& ev) {
    int positive = 0;
    int negative = 0;
    for (const auto& e : ev) {
        if (e.real() > kZeroEigenvalueTolerance) {
            ++positive;
        } else if (e.real() < -kZeroEigenvalueTolerance) {
            ++negative;
        }
    }
    if (positive > 0 && negative > 0) return Stability::saddle;
    if (positive > 0) return Stability::unstable;
    if (negative == 2) return Stability::stable;
    return Stability::nonhyperbolic;
}

/// Linear stability from the reduced 2x2 Jacobian. The full 3x3 Jacobian has
/// the same spectrum plus the zero eigenvalue that belongs to the simplex
/// constraint; that one is removed by working in reduced coordinates.
inline Stability classify_stability(const ModelParams& p, const EquilibriumPoint& e) {
    switch (e.kind) {
        case EquilibriumKind::E1:
        case EquilibriumKind::E2: return Stability::undefined_dynamics;
        case EquilibriumKind::E4: return Stability::degenerate_line;
        default: break;
    }
    return classify_eigenvalues(eigenvalues(jacobian_reduced(p, e.coords)));
}

namespace detail {

inline EquilibriumPoint make_point(const ModelParams& p, EquilibriumKind kind, const PopulationState& s,
                                   bool family = false) {
    EquilibriumPoint e;
    e.kind = kind;
    e.coords = s;
    e.family = family;
    e.eigenvalues = eigenvalues(jacobian_reduced(p, s));
    e.stability = classify_stability(p, e);
    return e;
}

}  // namespace detail

/// E1..E7 in order. E4 carries the midpoint of its segment as representative.
inline std::vector<EquilibriumPoint> equilibria_all(const ModelParams& p) {
    require_valid(p);
    if (delta_exponent(p).degenerate()) throw DegenerateExponentError();
    std::vector<EquilibriumPoint> out;
    out.reserve(7);
    out.push_back(detail::make_point(p, EquilibriumKind::E1, PopulationState(1.0, 0.0, 0.0)));
    out.push_back(detail::make_point(p, EquilibriumKind::E2, PopulationState(0.0, 1.0, 0.0)));
    out.push_back(detail::make_point(p, EquilibriumKind::E3, PopulationState(0.0, 0.0, 1.0)));
    out.push_back(detail::make_point(p, EquilibriumKind::E4, e4_point(0.5), true));
    out.push_back(detail::make_point(p, EquilibriumKind::E5, e5_coords(p)));
    out.push_back(detail::make_point(p, EquilibriumKind::E6, e6_coords(p)));
    out.push_back(detail::make_point(p, EquilibriumKind::E7, e7_coords(p)));
    return out;
}

inline EquilibriumPoint equilibrium(const ModelParams& p, EquilibriumKind kind) {
    return equilibria_all(p).at(static_cast<std::size_t>(kind));
}

// ---------------------------------------------------------------------------
// Printed sufficient-condition predicates. The factors can over- or underflow
// for large |delta|, so each is carried as a logarithm and the sign of the
// product is taken from the 1/(-delta) prefactor.

struct TraceConditionReport {
    double delta = 0.0;
    double inv_neg_delta = 0.0;
    double log_factor_m1 = 0.0;  // log (s_M1/s_B)^(-delta)
    double log_factor_m2 = 0.0;  // log (s_M2/s_B)^(-delta)
    double log_factor_sum = 0.0;  // log of the four-term status sum
    bool factors_positive = true;
    double expression = 0.0;
    bool satisfied = false;
    double numeric_trace = 0.0;  // trace of the reduced Jacobian at E7, for comparison
};

namespace detail {

inline double log_sum_exp(std::initializer_list<double> logs) {
    double top = -std::numeric_limits<double>::infinity();
    for (double l : logs) top = std::max(top, l);
    if (!std::isfinite(top)) return top;
    double sum = 0.0;
    for (double l : logs) sum += std::exp(l - top);
    return top + std::log(sum);
}

}  // namespace detail

inline TraceConditionReport e7_trace_condition(const ModelParams& p) {
    require_valid(p);
    const double d = delta_exponent(p).get();
    const double ls1 = std::log(p.s_m1);
    const double ls2 = std::log(p.s_m2);
    const double lsb = std::log(p.s_b);
    const double a = p.alpha;
    const double be = p.beta;

    TraceConditionReport r;
    r.delta = d;
    r.inv_neg_delta = 1.0 / -d;
    r.log_factor_m1 = -d * (ls1 - lsb);
    r.log_factor_m2 = -d * (ls2 - lsb);
    r.log_factor_sum = detail::log_sum_exp({d * ((be + 1.0) * ls1 - a * lsb), d * ((be + 1.0) * ls2 - a * lsb),
                                            d * (be * ls1 - (a - 1.0) * lsb), d * (be * ls2 - (a - 1.0) * lsb)});
    // exponentials of finite logs are positive
    r.factors_positive = std::isfinite(r.log_factor_m1) && std::isfinite(r.log_factor_m2) &&
                         std::isfinite(r.log_factor_sum);
    r.expression = r.inv_neg_delta * std::exp(r.log_factor_m1 + r.log_factor_m2 + r.log_factor_sum);
    r.satisfied = r.factors_positive && r.expression < 0.0;
    r.numeric_trace = trace(jacobian_reduced(p, e7_coords(p)));
    return r;
}

struct BoundaryConditionReport {
    EquilibriumKind which = EquilibriumKind::E6;
    double delta = 0.0;
    double inv_neg_delta = 0.0;
    double log_factor = 0.0;      // log (s/s_B)^(-delta)
    double log_factor_sum = 0.0;  // log of the two-term status sum
    bool factors_positive = true;
    double expression = 0.0;
    bool satisfied = false;
    Eigenpair2 numeric_eigenvalues{};
};

/// Printed conditions for E5 (which = E5, status s_M1) or E6 (status s_M2).
inline BoundaryConditionReport boundary_conditions(const ModelParams& p, EquilibriumKind which) {
    if (which != EquilibriumKind::E5 && which != EquilibriumKind::E6) {
        throw ValidationError("boundary conditions exist only for E5 and E6");
    }
    require_valid(p);
    const double d = delta_exponent(p).get();
    const double s = which == EquilibriumKind::E5 ? p.s_m1 : p.s_m2;
    const double ls = std::log(s);
    const double lsb = std::log(p.s_b);

    BoundaryConditionReport r;
    r.which = which;
    r.delta = d;
    r.inv_neg_delta = 1.0 / -d;
    r.log_factor = -d * (ls - lsb);
    r.log_factor_sum = detail::log_sum_exp({d * ((p.beta + 2.0) * ls - (p.alpha + 1.0) * lsb),
                                            d * ((p.beta + 1.0) * ls - p.alpha * lsb)});
    r.factors_positive = std::isfinite(r.log_factor) && std::isfinite(r.log_factor_sum);
    r.expression = r.inv_neg_delta * std::exp(r.log_factor + r.log_factor_sum);
    r.satisfied = r.factors_positive && r.expression < 0.0;
    const auto coords = which == EquilibriumKind::E5 ? e5_coords(p) : e6_coords(p);
    r.numeric_eigenvalues = eigenvalues(jacobian_reduced(p, coords));
    return r;
}

struct E3LimitReport {
    PopulationState limit{0.0, 0.0, 1.0};
    PopulationState finite{0.0, 0.0, 1.0};  // E7 at the given alpha - beta
};

/// As alpha - beta -> 1 from below with s_B above both monolingual statuses,
/// E7 tends to the all-bilingual state E3.
inline E3LimitReport e3_limit(const ModelParams& p) {
    require_valid(p);
    if (!(p.s_b > std::max(p.s_m1, p.s_m2))) {
        throw ValidationError("E3 limit requires s_b above both monolingual statuses");
    }
    const double d = delta_exponent(p).get();
    if (!(d > 0.0)) throw DomainError("E3 limit is approached only for alpha - beta < 1");
    return {PopulationState(0.0, 0.0, 1.0), e7_coords(p)};
}

}  // namespace langcomp
