#pragma once

#include "langcomp/langcomp.hpp"
#include "oracles.hpp"

inline langcomp::ModelParams to_model(const oracle::P& p) {
    langcomp::ModelParams m;
    m.s_m1 = p.s1;
    m.s_m2 = p.s2;
    m.s_b = p.sb;
    m.lambda = p.lambda;
    m.alpha = p.alpha;
    m.beta = p.beta;
    return m;
}

inline oracle::P to_oracle(const langcomp::ModelParams& m) {
    return {m.s_m1, m.s_m2, m.s_b, m.lambda, m.alpha, m.beta};
}

inline langcomp::ModelParams fig_params(double s_b, double alpha, double beta) {
    langcomp::ModelParams p;
    p.s_m1 = 0.3;
    p.s_m2 = 0.7;
    p.s_b = s_b;
    p.lambda = 400.0;
    p.alpha = alpha;
    p.beta = beta;
    return p;
}

/// |a - b| relative to max(|a|, |b|, floor).
inline double rel_err(double a, double b, double floor = 1e-300) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}
