// Prints the long-run regime at a few (alpha - beta, s_B) points: the
// predicted scenario next to what an IC lattice actually converges to.

#include <cstdio>

#include "langcomp/langcomp.hpp"

using namespace langcomp;

int main() {
    const GapBase base;
    const auto d = threshold_d(base, 0.5);
    std::printf("threshold d(s_B = 0.5) ~ %.3f\n\n", d.d);
    std::printf("%8s %5s  %-28s %4s %4s %4s %4s %4s %5s\n", "a-b", "s_B", "scenario", "E3", "E4", "E5", "E6", "E7",
                "none");
    const double points[][2] = {{-2.5, 0.1}, {0.5, 0.5}, {0.9, 0.1}, {0.9, 0.6},
                                {0.9999, 0.5}, {0.9999, 0.9}, {2.9, 0.1}, {2.9, 0.9}};
    for (const auto& pt : points) {
        const auto p = params_for_gap(base, pt[1], pt[0]);
        const auto dd = threshold_d(base, pt[1]);
        const auto map = basin_map(p, 6);
        std::printf("%8.4f %5.2f  %-28s %4zu %4zu %4zu %4zu %4zu %5zu\n", pt[0], pt[1],
                    to_string(scenario_classify(p, dd.d)), map.count(EquilibriumKind::E3),
                    map.count(EquilibriumKind::E4), map.count(EquilibriumKind::E5), map.count(EquilibriumKind::E6),
                    map.count(EquilibriumKind::E7), map.unresolved());
    }
}
