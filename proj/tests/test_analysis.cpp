#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "support.hpp"

using namespace langcomp;
using Catch::Approx;

TEST_CASE("IC lattice is interior, triangular and ordered") {
    const auto g = standard_ic_grid(11);
    CHECK(g.size() == 66);
    for (const auto& s : g) {
        CHECK(s.m1() >= 0.05 - 1e-15);
        CHECK(s.m2() >= 0.05 - 1e-15);
        CHECK(s.b() >= 0.05 - 1e-12);
    }
    CHECK(g.front().m1() == Approx(0.05));
    CHECK(g.back().m1() == Approx(0.9));
    CHECK(standard_ic_grid(2).size() == 3);
    CHECK_THROWS_AS(standard_ic_grid(1), ValidationError);
}

TEST_CASE("gap parametrization keeps both exponents at least 1") {
    const GapBase base;
    const auto p = params_for_gap(base, 0.1, -2.5);
    CHECK(p.alpha == Approx(1.1));
    CHECK(p.beta == Approx(3.6));
    const auto q = params_for_gap(base, 0.6, 0.9);
    CHECK(q.alpha == Approx(2.0));
    CHECK(q.beta == Approx(1.1));
    for (double gap : {-3.0, -0.05, 0.0, 0.7, 2.9}) {
        const auto r = params_for_gap(base, 0.5, gap);
        CHECK(r.alpha_minus_beta() == Approx(gap).margin(1e-12));
        CHECK(validate_params(r).empty());
    }
}

TEST_CASE("threshold estimates fall inside the coexistence band") {
    const GapBase base;
    for (int s = 1; s <= 10; ++s) {
        const auto e = threshold_d(base, s / 10.0, 0.02);
        REQUIRE(e.found);
        CHECK(e.width <= 0.02);
        CHECK(e.d >= 0.45);
        CHECK(e.d <= 0.95);
        // bracket ends really sit on either side
        CHECK(e7_resolved_attractor(params_for_gap(base, s / 10.0, e.lower)));
        CHECK_FALSE(e7_resolved_attractor(params_for_gap(base, s / 10.0, e.upper)));
    }
}

TEST_CASE("E7 stops being a resolved attractor once it reaches matching distance of the boundary") {
    const GapBase base;
    const auto p = params_for_gap(base, 1.0, 0.88);
    const auto e7 = equilibrium(p, EquilibriumKind::E7);
    CHECK(e7.stability == Stability::stable);
    CHECK(e7.coords.m1() < kMatchTolerance);
    CHECK_FALSE(e7_resolved_attractor(p));
}

TEST_CASE("scenario table") {
    const double d = 0.8;
    auto at = [](double gap, double sb) { return params_for_gap(GapBase{}, sb, gap); };
    CHECK(scenario_classify(at(-2.5, 0.1), d) == Scenario::coexistence_e7);
    CHECK(scenario_classify(at(0.9, 0.6), d) == Scenario::lower_status_dies_e6);
    CHECK(scenario_classify(at(0.9, 0.7), d) == Scenario::lower_status_dies_e6);
    CHECK(scenario_classify(at(0.9, 0.9), d) == Scenario::lower_status_dies_e6);
    CHECK(scenario_classify(at(0.9, 0.1), d) == Scenario::bilinguals_die_e4);
    CHECK(scenario_classify(at(0.9, 0.3), d) == Scenario::bilinguals_die_e4);
    CHECK(scenario_classify(at(0.9999, 0.5), d) == Scenario::bilinguals_die_e4);
    CHECK(scenario_classify(at(0.9999, 0.9), d) == Scenario::monolinguals_die_e3);
    CHECK(scenario_classify(at(2.9, 0.1), d) == Scenario::bistable_e3_e4);
    CHECK(scenario_classify(at(1.0, 0.5), d) == Scenario::bifurcation_band_unresolved);
    CHECK(std::string(to_string(Scenario::bistable_e3_e4)) == "bistable-E3-E4");
}

TEST_CASE("basins in the bistable regime split between E3 and E4") {
    for (double sb : {0.1, 0.9}) {
        const auto map = basin_map(params_for_gap(GapBase{}, sb, 2.9), 11, attractor_options(), 2);
        CHECK(map.cells.size() == 66);
        CHECK(map.count(EquilibriumKind::E3) > 0);
        CHECK(map.count(EquilibriumKind::E4) > 0);
        CHECK(map.count(EquilibriumKind::E3) + map.count(EquilibriumKind::E4) == 66);
    }
    // a higher bilingual status enlarges the E3 basin
    const auto lo = basin_map(params_for_gap(GapBase{}, 0.1, 2.9), 11, attractor_options(), 1);
    const auto hi = basin_map(params_for_gap(GapBase{}, 0.9, 2.9), 11, attractor_options(), 1);
    CHECK(hi.count(EquilibriumKind::E3) > lo.count(EquilibriumKind::E3));
}

TEST_CASE("basin maps do not depend on the thread count") {
    const auto p = params_for_gap(GapBase{}, 0.5, 2.9);
    const auto a = basin_map(p, 6, attractor_options(), 1);
    const auto b = basin_map(p, 6, attractor_options(), 3);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) CHECK(a.cells[i].label == b.cells[i].label);
}

TEST_CASE("E7 locus: bilingual share grows with s_B") {
    std::vector<double> sb;
    for (int i = 1; i <= 10; ++i) sb.push_back(i / 10.0);
    const auto locus = e7_locus(fig_params(0.1, 1.1, 3.6), sb);
    REQUIRE(locus.size() == 10);
    for (std::size_t i = 1; i < locus.size(); ++i) {
        CHECK(locus[i].e7.b() > locus[i - 1].e7.b());
        CHECK(locus[i].e7.m1() < locus[i - 1].e7.m1());
        CHECK(locus[i].e7.m2() < locus[i - 1].e7.m2());
    }
    CHECK_THROWS_AS(e7_locus(fig_params(0.1, 4.0, 1.1), sb), DomainError);
}

TEST_CASE("sweep records come out in axis order with coexistence below d") {
    SweepAxes axes;
    axes.gaps = {-2.5, 0.2, 0.5};
    axes.s_b = {0.2, 0.8};
    axes.ic_grid_n = 4;
    axes.threads = 2;
    const auto recs = sweep(axes);
    REQUIRE(recs.size() == 6);
    CHECK(recs[0].gap == -2.5);
    CHECK(recs[1].params.s_b == 0.8);
    CHECK(recs[2].gap == 0.2);
    for (const auto& r : recs) {
        const auto d = threshold_d(axes.base, r.params.s_b);
        REQUIRE(r.gap < d.d);
        CHECK(r.stability_of(EquilibriumKind::E7) == Stability::stable);
        CHECK(r.e7_resolved);
        CHECK(r.attractor_count(EquilibriumKind::E7) == r.attractors.size());
    }
}

TEST_CASE("sweeps mark the degenerate line") {
    SweepAxes axes;
    axes.gaps = {1.0};
    axes.s_b = {0.5};
    const auto recs = sweep(axes);
    CHECK(recs[0].degenerate);
    CHECK(recs[0].stability.empty());
    CHECK_FALSE(recs[0].e7_resolved);
}

TEST_CASE("parallel_for visits every index once and rethrows failures") {
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::set<int>(hits.begin(), hits.end()) == std::set<int>{1});
    CHECK_THROWS_AS(parallel_for(10, 3,
                                 [](std::size_t i) {
                                     if (i == 7) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}
