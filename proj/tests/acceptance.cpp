// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "langcomp/langcomp.hpp"
#include "oracles.hpp"

using namespace langcomp;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        notes.push_back(std::string(ok ? "  [ok] " : "  [x]  ") + what);
        pass = pass && ok;
    }
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ModelParams fig(double s_b, double alpha, double beta) {
    ModelParams p;
    p.s_m1 = 0.3;
    p.s_m2 = 0.7;
    p.s_b = s_b;
    p.lambda = 400.0;
    p.alpha = alpha;
    p.beta = beta;
    return p;
}

oracle::P as_oracle(const ModelParams& p) { return {p.s_m1, p.s_m2, p.s_b, p.lambda, p.alpha, p.beta}; }

ModelParams from_oracle(const oracle::P& o) {
    ModelParams p;
    p.s_m1 = o.s1;
    p.s_m2 = o.s2;
    p.s_b = o.sb;
    p.lambda = o.lambda;
    p.alpha = o.alpha;
    p.beta = o.beta;
    return p;
}

Outcome e7_oracle() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto p = fig(0.1, 1.1, 3.6);
    const auto all = equilibria_all(p);
    const auto e7 = all[6].coords;
    const auto ref = oracle::e7(as_oracle(p));
    o.require(distance(e7.values(), {ref[0], ref[1], ref[2]}) < 1e-12, "closed form agrees with the power formula");
    const auto d = rhs_full(p, e7);
    const double res = std::max({std::abs(d.dm1), std::abs(d.dm2), std::abs(d.db)});
    o.require(res < 1e-10, fmt("||rhs(E7)||_inf = %.3g < 1e-10", res));
    const auto tr = integrate(p, PopulationState(0.5, 0.3, 0.2));
    const double dist = distance(tr.states.back().values(), e7.values());
    o.require(dist < 1e-6, fmt("trajectory from (0.5, 0.3, 0.2) ends %.3g from E7 (< 1e-6)", dist));
    const double secs = seconds_since(t0);
    o.require(secs < 5.0, fmt("runtime %.3f s < 5 s", secs));
    return o;
}

Outcome char_poly_identity() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    int cases = 0;
    for (int k = 0; k < 20; ++k) {
        const auto p = from_oracle(oracle::random_params(rng));
        for (int i = 0; i < 100; ++i) {
            const auto x = oracle::interior_point(rng);
            const auto J1 = jacobian_full(p, PopulationState(x[0], x[1], x[2]));
            const auto J2 = jacobian_reduced(p, x[0], x[1]);
            const auto c1 = characteristic_polynomial(J1);
            const auto c2 = characteristic_polynomial(J2);
            double norm = 1.0;
            for (const auto& row : J1)
                for (double v : row) norm = std::max(norm, std::abs(v));
            // coefficient of lambda^(3-d) scales like norm^d
            for (int d = 1; d <= 3; ++d) {
                const double rhs = d < 3 ? c2[d] : 0.0;
                worst = std::max(worst, std::abs(c1[d] - rhs) / std::pow(norm, d));
            }
            ++cases;
        }
    }
    o.require(cases == 2000, fmt("%d cases (100 states x 20 parameter sets)", cases));
    o.require(worst <= 1e-8, fmt("worst relative coefficient mismatch %.3g <= 1e-8", worst));
    const double secs = seconds_since(t0);
    o.require(secs < 10.0, fmt("runtime %.3f s < 10 s", secs));
    return o;
}

Outcome threshold_band() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const GapBase base;  // s_m = (0.3, 0.7), beta = 1.1
    for (int s = 1; s <= 10; ++s) {
        const auto e = threshold_d(base, s / 10.0, 0.02);
        o.require(e.found && e.d >= 0.45 && e.d <= 0.95,
                  fmt("s_b = %.1f: d = %.4f in [%.4f, %.4f]", s / 10.0, e.d, e.lower, e.upper));
    }
    const double secs = seconds_since(t0);
    o.require(secs < 120.0, fmt("runtime %.3f s < 120 s", secs));
    return o;
}

std::string census(const BasinMap& m) {
    std::string out;
    for (int k = 0; k < 7; ++k) {
        const auto kind = static_cast<EquilibriumKind>(k);
        if (const auto n = m.count(kind)) out += fmt("%s:%zu ", to_string(kind), n);
    }
    if (m.unresolved()) out += fmt("none:%zu ", m.unresolved());
    return out;
}

Outcome scenario_table() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const GapBase base;
    auto all_reach = [&](double gap, double sb, EquilibriumKind want, const char* what) {
        const auto m = basin_map(params_for_gap(base, sb, gap), 11);
        const bool ok = m.count(want) == m.cells.size();
        o.require(ok, fmt("%s at (alpha-beta = %g, s_b = %g): %s", what, gap, sb, census(m).c_str()));
        if (!ok && want != EquilibriumKind::E7) {
            const auto p = params_for_gap(base, sb, gap);
            const auto e7 = e7_coords(p);
            const auto target = equilibrium(p, want).coords;
            o.notes.push_back(fmt("         E7 = (%.4g, %.4g, %.4g), %.3g from %s", e7.m1(), e7.m2(), e7.b(),
                                  distance(e7.values(), target.values()), to_string(want)));
        }
    };
    all_reach(0.9, 0.6, EquilibriumKind::E6, "E6 attractor");
    all_reach(0.9, 0.1, EquilibriumKind::E4, "E4 attractor");
    all_reach(0.9999, 0.5, EquilibriumKind::E4, "E4 attractor");
    all_reach(0.9999, 0.9, EquilibriumKind::E3, "E3 attractor");
    for (double sb : {0.1, 0.9}) {
        const auto m = basin_map(params_for_gap(base, sb, 2.9), 11);
        const auto n3 = m.count(EquilibriumKind::E3), n4 = m.count(EquilibriumKind::E4);
        o.require(n3 > 0 && n4 > 0 && n3 + n4 == m.cells.size(),
                  fmt("E3/E4 bistability at (alpha-beta = 2.9, s_b = %g): %s", sb, census(m).c_str()));
    }
    all_reach(-2.5, 0.1, EquilibriumKind::E7, "E7 global attraction");
    const double secs = seconds_since(t0);
    o.require(secs < 180.0, fmt("runtime %.3f s < 180 s", secs));
    return o;
}

Outcome e5_never_stable() {
    Outcome o;
    SweepAxes axes;
    for (int g = -60; g <= 60; ++g) axes.gaps.push_back(g * 0.05);
    for (int s = 1; s <= 10; ++s) axes.s_b.push_back(s / 10.0);
    std::size_t checked = 0, stable = 0;
    for (const auto& r : sweep(axes)) {
        if (r.degenerate) continue;
        ++checked;
        if (r.stability_of(EquilibriumKind::E5) == Stability::stable) ++stable;
    }
    o.require(checked > 1000, fmt("%zu sweep points (alpha-beta in [-3, 3], s_b in 0.1..1.0)", checked));
    o.require(stable == 0, fmt("E5 stable at %zu of them", stable));
    return o;
}

Outcome monotone_locus() {
    Outcome o;
    std::vector<double> sb;
    for (int i = 1; i <= 10; ++i) sb.push_back(i / 10.0);
    const auto locus = e7_locus(fig(0.1, 1.1, 3.6), sb);
    bool inc = true;
    for (std::size_t i = 1; i < locus.size(); ++i) inc = inc && locus[i].e7.b() > locus[i - 1].e7.b();
    o.require(inc, fmt("b* from %.4f (s_b = 0.1) to %.4f (s_b = 1.0), strictly increasing", locus.front().e7.b(),
                       locus.back().e7.b()));
    return o;
}

Outcome jacobian_fd() {
    Outcome o;
    std::mt19937_64 rng(77);
    double worst_full = 0.0, worst_red = 0.0;
    for (int k = 0; k < 50; ++k) {
        const auto op = oracle::random_params(rng);
        const auto p = from_oracle(op);
        const auto x = oracle::interior_point(rng, 0.05);
        const auto Jf = jacobian_full(p, PopulationState(x[0], x[1], x[2]));
        const auto Ff = oracle::fd_jacobian<3>([&](const oracle::V3& u) { return oracle::rhs(op, u[0], u[1], u[2]); }, x);
        double diff = 0.0, scale = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                diff = std::max(diff, std::abs(Jf[i][j] - Ff[i][j]));
                scale = std::max(scale, std::abs(Ff[i][j]));
            }
        worst_full = std::max(worst_full, diff / scale);
        const auto Jr = jacobian_reduced(p, x[0], x[1]);
        const auto Fr = oracle::fd_jacobian<2>(
            [&](const std::array<double, 2>& u) {
                const auto d = oracle::rhs(op, u[0], u[1], 1.0 - u[0] - u[1]);
                return std::array<double, 2>{d[0], d[1]};
            },
            {x[0], x[1]});
        diff = scale = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                diff = std::max(diff, std::abs(Jr[i][j] - Fr[i][j]));
                scale = std::max(scale, std::abs(Fr[i][j]));
            }
        worst_red = std::max(worst_red, diff / scale);
    }
    o.require(worst_full <= 1e-6, fmt("full Jacobian: worst relative error %.3g over 50 points", worst_full));
    o.require(worst_red <= 1e-6, fmt("reduced Jacobian: worst relative error %.3g over 50 points", worst_red));
    return o;
}

Outcome baseline_properties() {
    Outcome o;
    using namespace baselines;
    const MWParams sets[] = {{0.6, 1.0, 1.0, 1.0, 1.0, 1.31, 0.5},
                             {0.4, 1.0, 1.0, 1.0, 1.0, 1.31, 0.5},
                             {0.55, 1.2, 0.8, 1.0, 1.1, 1.5, 0.4},
                             {0.7, 0.9, 1.0, 1.3, 0.7, 2.0, 0.6},
                             {0.45, 1.0, 1.5, 0.5, 1.0, 1.2, 0.5}};
    int dominated = 0;
    for (const auto& p : sets) {
        IntegratorOptions opts;
        opts.max_time = 5000.0;
        const auto y = simulate_baseline(p, {0.4, 0.4, 0.2}, opts).states.back();
        if (std::min(y[0], y[1]) < 1e-3) ++dominated;
    }
    o.require(dominated == 5, fmt("Wang-Minett monolingual dominance on %d of 5 asymmetric sets", dominated));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.05, 0.95), a(0.5, 3.0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const auto x = oracle::interior_point(rng, 0.0);
        const Vec3 s{x[0], x[1], x[2]};
        for (const auto& d : {mw_rhs({u(rng), u(rng), u(rng), u(rng), u(rng), a(rng), u(rng)}, s),
                              mp_rhs({u(rng), u(rng), u(rng), a(rng)}, s), vaz_meanfield_rhs({u(rng), a(rng)}, s)})
            worst = std::max(worst, std::abs(d[0] + d[1] + d[2]));
    }
    o.require(worst == 0.0, fmt("largest |dx + dy + dz| over 3000 evaluations: %.3g", worst));
    return o;
}

Outcome determinism() {
    Outcome o;
    const auto root = fs::temp_directory_path() / "langcomp_acceptance";
    fs::remove_all(root);
    std::vector<std::string> runs;
    for (const char* sub : {"a", "b"}) {
        const std::string dir = (root / sub).string();
        const char* argv[] = {"langcomp", "reproduce", "E7_1", "--out-dir", dir.c_str()};
        std::ostringstream out, err;
        o.require(cli::run(5, argv, out, err) == 0, fmt("reproduce E7_1 into %s", sub));
    }
    std::size_t files = 0;
    bool same = true;
    for (const auto& entry : fs::directory_iterator(root / "a" / "E7_1")) {
        ++files;
        const auto other = root / "b" / "E7_1" / entry.path().filename();
        same = same && fs::exists(other) && io::read_file(entry.path()) == io::read_file(other);
    }
    o.require(files > 0 && same, fmt("%zu data files byte-identical across runs", files));
    fs::remove_all(root);
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"equilibrium-oracle agreement (E7)", e7_oracle},
        {"characteristic-polynomial identity", char_poly_identity},
        {"threshold band", threshold_band},
        {"scenario table", scenario_table},
        {"E5 non-stability", e5_never_stable},
        {"monotone E7 locus", monotone_locus},
        {"Jacobian finite-difference checks", jacobian_fd},
        {"baseline properties", baseline_properties},
        {"determinism of reproduce E7_1", determinism},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        std::printf("%s %s\n", o.pass ? "PASS" : "FAIL", name.c_str());
        for (const auto& n : o.notes) std::printf("%s\n", n.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed;
}
