#pragma once

// Pairwise conversation capacity of two bilingual speakers and the social
// status a bilingual group derives from it.

#include <algorithm>
#include <string>

#include "langcomp/errors.hpp"

namespace langcomp {

/// Fraction of each language's vocabulary one person commands.
struct CompetencyProfile {
    double c_m1 = 0.0;
    double c_m2 = 0.0;
};

/// Shared usable vocabulary of two speakers, per language.
struct MutualityPair {
    double x_m1 = 0.0;
    double x_m2 = 0.0;
};

namespace detail {

inline void require_unit_interval(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError(std::string(what) + " must lie in [0, 1], got " + std::to_string(v));
    }
}

}  // namespace detail

inline void validate(const CompetencyProfile& p) {
    detail::require_unit_interval(p.c_m1, "competency c_m1");
    detail::require_unit_interval(p.c_m2, "competency c_m2");
}

/// Per-language minimum of the two speakers' competencies.
inline MutualityPair mutuality(const CompetencyProfile& p1, const CompetencyProfile& p2) {
    validate(p1);
    validate(p2);
    return {std::min(p1.c_m1, p2.c_m1), std::min(p1.c_m2, p2.c_m2)};
}

/// Status of a bilingual as the mutuality-weighted sum of the monolingual
/// statuses. Requires s_m1, s_m2 in (0,1) with s_m1 + s_m2 <= 1 so the
/// result stays in (0,1]; a pair sharing no vocabulary has no status.
inline double bilingual_status(const MutualityPair& m, double s_m1, double s_m2) {
    detail::require_unit_interval(m.x_m1, "mutuality x_m1");
    detail::require_unit_interval(m.x_m2, "mutuality x_m2");
    if (!(s_m1 > 0.0 && s_m1 < 1.0)) throw ValidationError("status s_m1 must lie in (0, 1)");
    if (!(s_m2 > 0.0 && s_m2 < 1.0)) throw ValidationError("status s_m2 must lie in (0, 1)");
    if (s_m1 + s_m2 > 1.0 + 1e-12) throw ValidationError("statuses s_m1 + s_m2 must not exceed 1");
    if (m.x_m1 == 0.0 && m.x_m2 == 0.0) throw NoCommunicationError();
    return s_m1 * m.x_m1 + s_m2 * m.x_m2;
}

}  // namespace langcomp
