#pragma once

// Command-line front end. `run` is separate from main so tests can drive it
// with captured streams.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "langcomp/langcomp.hpp"

namespace langcomp::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitValidation = 2;

struct ParamFlags {
    std::string file;
    std::optional<double> s_m1, s_m2, s_b, lambda, alpha, beta;

    void attach(CLI::App* app) {
        app->add_option("--params", file, "parameter file (key = value lines)");
        app->add_option("--s-m1", s_m1, "status of M1");
        app->add_option("--s-m2", s_m2, "status of M2");
        app->add_option("--s-b", s_b, "status of B");
        app->add_option("--lambda", lambda, "rate scale");
        app->add_option("--alpha", alpha, "attraction exponent");
        app->add_option("--beta", beta, "retention exponent");
    }

    /// Defaults, then file values, then inline overrides.
    ModelParams resolve(bool validate = true, ModelParams defaults = {}) const {
        ModelParams p = file.empty() ? defaults : io::load_params(file, defaults);
        if (s_m1) p.s_m1 = *s_m1;
        if (s_m2) p.s_m2 = *s_m2;
        if (s_b) p.s_b = *s_b;
        if (lambda) p.lambda = *lambda;
        if (alpha) p.alpha = *alpha;
        if (beta) p.beta = *beta;
        if (validate) require_valid(p);
        return p;
    }
};

struct IntegratorFlags {
    std::string method = "rk45";
    double rtol = 1e-10;
    double atol = 1e-12;
    double step = 1e-3;
    double t_end = 50.0;

    void attach(CLI::App* app) {
        app->add_option("--method", method, "rk45 (adaptive) or rk4 (fixed step)")
            ->check(CLI::IsMember({"rk4", "rk45"}));
        app->add_option("--rtol", rtol, "relative tolerance (rk45)");
        app->add_option("--atol", atol, "absolute tolerance (rk45)");
        app->add_option("--step", step, "step size (rk4)");
        app->add_option("--t-end", t_end, "final time");
    }

    IntegratorOptions resolve() const {
        IntegratorOptions o;
        o.method = method == "rk4" ? Method::rk4_fixed : Method::rk45_adaptive;
        o.rtol = rtol;
        o.atol = atol;
        o.step = step;
        o.max_time = t_end;
        o.validate();
        return o;
    }
};

// ---------------------------------------------------------------------------
// Serialization

inline PopulationState parse_ic(const std::string& text) {
    const auto v = io::parse_list(text, "initial condition");
    if (v.size() == 2) {
        if (!(v[0] >= 0.0 && v[1] >= 0.0 && v[0] + v[1] <= 1.0 + kSimplexTolerance))
            throw ValidationError("initial condition must satisfy m1, m2 >= 0 and m1 + m2 <= 1");
        return PopulationState::from_reduced(v[0], v[1]);
    }
    if (v.size() != 3) throw ValidationError("initial condition needs 3 components m1,m2,b");
    return PopulationState(v[0], v[1], v[2]);
}

inline std::string trajectory_csv(const std::vector<double>& times, const std::vector<Vec3>& states) {
    io::CsvWriter csv({"t", "m1", "m2", "b"});
    for (std::size_t i = 0; i < times.size(); ++i) csv.row({times[i], states[i][0], states[i][1], states[i][2]});
    return csv.str();
}

inline std::string trajectory_csv(const Trajectory& tr) {
    std::vector<Vec3> v;
    v.reserve(tr.states.size());
    for (const auto& s : tr.states) v.push_back(s.values());
    return trajectory_csv(tr.times, v);
}

/// Direction field on the lattice m1, m2 in {0, h, ..., 1}, m1 + m2 <= 1.
inline std::string portrait_csv(const ModelParams& p, int divisions = 20) {
    io::CsvWriter csv({"m1", "m2", "dm1", "dm2"});
    for (int i = 0; i <= divisions; ++i) {
        for (int j = 0; i + j <= divisions; ++j) {
            const double m1 = static_cast<double>(i) / divisions;
            const double m2 = static_cast<double>(j) / divisions;
            const double b = std::max(0.0, 1.0 - m1 - m2);
            const Vec3 d = rhs_kernel(p, {m1, m2, b});
            csv.row({m1, m2, d[0], d[1]});
        }
    }
    return csv.str();
}

inline std::string label_of(const std::optional<EquilibriumKind>& k) { return k ? to_string(*k) : "none"; }

inline std::string basin_csv(const BasinMap& map) {
    io::CsvWriter csv({"m1", "m2", "label"});
    for (const auto& c : map.cells) csv.row_text({io::fmt(c.ic.m1()), io::fmt(c.ic.m2()), label_of(c.label)});
    return csv.str();
}

inline Json params_json(const ModelParams& p) {
    return Json{{"s_m1", p.s_m1}, {"s_m2", p.s_m2}, {"s_b", p.s_b},
                {"lambda", p.lambda}, {"alpha", p.alpha}, {"beta", p.beta}};
}

inline Json state_json(const PopulationState& s) { return Json{{"m1", s.m1()}, {"m2", s.m2()}, {"b", s.b()}}; }

inline Json eigen_json(const Eigenpair2& ev) {
    Json out = Json::array();
    for (const auto& z : ev) out.push_back(Json{{"re", z.real()}, {"im", z.imag()}});
    return out;
}

/// Throws DegenerateExponentError on alpha - beta = 1, where E5..E7 do not exist.
inline Json equilibria_json(const ModelParams& p) {
    Json doc;
    doc["params"] = params_json(p);
    doc["delta"] = delta_exponent(p).get();
    Json list = Json::array();
    for (const auto& e : equilibria_all(p)) {
        list.push_back(Json{{"kind", to_string(e.kind)}, {"m1", e.coords.m1()}, {"m2", e.coords.m2()},
                            {"b", e.coords.b()}, {"stability", to_string(e.stability)},
                            {"eigenvalues", eigen_json(e.eigenvalues)}, {"family", e.family}});
    }
    doc["equilibria"] = list;
    return doc;
}

inline Json stability_json(const ModelParams& p) {
    Json doc = equilibria_json(p);
    const auto tr = e7_trace_condition(p);
    doc["e7_trace_condition"] = Json{{"expression", tr.expression},
                                     {"satisfied", tr.satisfied},
                                     {"numeric_trace", tr.numeric_trace}};
    for (auto which : {EquilibriumKind::E5, EquilibriumKind::E6}) {
        const auto r = boundary_conditions(p, which);
        doc[std::string(to_string(which)) + "_condition"] =
            Json{{"expression", r.expression}, {"satisfied", r.satisfied},
                 {"numeric_eigenvalues", eigen_json(r.numeric_eigenvalues)}};
    }
    doc["e7_resolved_attractor"] = e7_resolved_attractor(p);
    return doc;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Figure bundles

struct FigureRun {
    std::string name;  // file stem suffix
    ModelParams params;
    std::optional<PopulationState> ic;
    double t_end = 50.0;
    std::size_t basin_grid = 0;
};

struct FigureDef {
    std::string id;
    std::vector<FigureRun> runs;
    bool locus = false;
};

inline ModelParams figure_params(double s_b, double alpha, double beta) {
    ModelParams p;
    p.s_m1 = 0.3;
    p.s_m2 = 0.7;
    p.s_b = s_b;
    p.lambda = 400.0;
    p.alpha = alpha;
    p.beta = beta;
    return p;
}

inline const std::vector<std::string>& figure_ids() {
    static const std::vector<std::string> ids = {"E7_1", "E7_diff", "E2_sB_0.6", "E4_sB_0.1",
                                                 "E4_sB_0.5", "E7_sB_0.99", "E7E4"};
    return ids;
}

inline std::optional<FigureDef> figure(const std::string& id) {
    if (id == "E7_1") return FigureDef{id, {{"", figure_params(0.1, 1.1, 3.6), PopulationState(0.5, 0.3, 0.2)}}};
    if (id == "E7_diff") {
        FigureDef f{id, {}, true};
        for (int i = 1; i <= 10; ++i) {
            char name[16];
            std::snprintf(name, sizeof name, "_sB_%.1f", i / 10.0);
            f.runs.push_back({name, figure_params(i / 10.0, 1.1, 3.6), PopulationState(0.5, 0.3, 0.2)});
        }
        return f;
    }
    if (id == "E2_sB_0.6") return FigureDef{id, {{"", figure_params(0.6, 2.0, 1.1), PopulationState(0.6, 0.25, 0.15), 200.0}}};
    if (id == "E4_sB_0.1") return FigureDef{id, {{"", figure_params(0.1, 2.0, 1.1), PopulationState(0.5, 0.1, 0.4), 200.0}}};
    if (id == "E4_sB_0.5")
        return FigureDef{id, {{"", figure_params(0.5, 2.0999, 1.1), PopulationState(0.8, 0.15, 0.05), 200.0}}};
    if (id == "E7_sB_0.99")
        return FigureDef{id, {{"", figure_params(0.9, 2.0999, 1.1), PopulationState(0.45, 0.45, 0.1), 200.0}}};
    if (id == "E7E4") {
        return FigureDef{id,
                         {{"_sB_0.1", figure_params(0.1, 4.0, 1.1), std::nullopt, 50.0, 21},
                          {"_sB_0.9", figure_params(0.9, 4.0, 1.1), std::nullopt, 50.0, 21}}};
    }
    return std::nullopt;
}

/// Writes every data file of a figure into dir and returns the file names.
inline std::vector<std::string> write_figure(const FigureDef& fig, const fs::path& dir, unsigned threads) {
    std::vector<std::string> files;
    Json manifest;
    manifest["figure"] = fig.id;
    Json runs = Json::array();
    auto emit = [&](const std::string& name, const std::string& content) {
        io::atomic_write(dir / name, content);
        files.push_back(name);
    };
    for (const auto& run : fig.runs) {
        Json r;
        r["params"] = params_json(run.params);
        emit("portrait" + run.name + ".csv", portrait_csv(run.params));
        emit("equilibria" + run.name + ".json", dump(equilibria_json(run.params)));
        r["portrait"] = "portrait" + run.name + ".csv";
        r["equilibria"] = "equilibria" + run.name + ".json";
        if (run.ic) {
            IntegratorOptions o;
            o.max_time = run.t_end;
            const auto tr = integrate(run.params, *run.ic, o);
            emit("trajectory" + run.name + ".csv", trajectory_csv(tr));
            r["ic"] = state_json(*run.ic);
            r["trajectory"] = "trajectory" + run.name + ".csv";
        }
        if (run.basin_grid > 0) {
            const auto map = basin_map(run.params, run.basin_grid, attractor_options(), threads);
            emit("basin" + run.name + ".csv", basin_csv(map));
            r["basin"] = "basin" + run.name + ".csv";
        }
        runs.push_back(r);
    }
    if (fig.locus) {
        std::vector<double> sb;
        for (int i = 1; i <= 10; ++i) sb.push_back(i / 10.0);
        io::CsvWriter csv({"s_b", "m1", "m2", "b"});
        for (const auto& pt : e7_locus(fig.runs.front().params, sb))
            csv.row({pt.s_b, pt.e7.m1(), pt.e7.m2(), pt.e7.b()});
        emit("locus.csv", csv.str());
        manifest["locus"] = "locus.csv";
    }
    manifest["runs"] = runs;
    emit("bundle.json", dump(manifest));
    return files;
}

// ---------------------------------------------------------------------------

/// Model defaults with the exponent the gap analyses hold fixed.
inline ModelParams gap_defaults() {
    ModelParams p;
    p.beta = GapBase{}.beta;
    return p;
}

inline std::vector<double> default_s_b_axis() {
    std::vector<double> v;
    for (int i = 1; i <= 10; ++i) v.push_back(i / 10.0);
    return v;
}

inline std::vector<double> parse_axis(const std::string& text, std::vector<double> fallback) {
    return text.empty() ? fallback : io::parse_list(text, "axis");
}

/// Writes to `out` when a path is given, else to the stream.
inline void deliver(const std::string& out, const std::string& content, std::ostream& stream) {
    if (out.empty()) stream << content;
    else io::atomic_write(out, content);
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Three-group language competition toolkit"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    std::function<void()> action;
    unsigned threads = default_thread_count();

    // status
    auto* status = app.add_subcommand("status", "bilingual status from two competency profiles");
    std::string prof1, prof2;
    double st_m1 = 0.3, st_m2 = 0.7;
    status->add_option("--speaker1", prof1, "c_m1,c_m2 of the first speaker")->required();
    status->add_option("--speaker2", prof2, "c_m1,c_m2 of the second speaker")->required();
    status->add_option("--s-m1", st_m1, "status of M1");
    status->add_option("--s-m2", st_m2, "status of M2");
    status->callback([&] {
        action = [&] {
            auto profile = [](const std::string& t) {
                const auto v = io::parse_list(t, "competency profile");
                if (v.size() != 2) throw ValidationError("competency profile needs 2 values");
                return CompetencyProfile{v[0], v[1]};
            };
            const auto m = mutuality(profile(prof1), profile(prof2));
            const double sb = bilingual_status(m, st_m1, st_m2);
            out << dump(Json{{"mutuality", {m.x_m1, m.x_m2}}, {"s_b", sb}});
        };
    });

    // simulate
    auto* simulate = app.add_subcommand("simulate", "integrate one trajectory, CSV t,m1,m2,b");
    ParamFlags sim_params;
    IntegratorFlags sim_int;
    std::string sim_ic, sim_out;
    sim_params.attach(simulate);
    sim_int.attach(simulate);
    simulate->add_option("--ic", sim_ic, "initial condition m1,m2,b")->required();
    simulate->add_option("--out", sim_out, "output CSV (default stdout)");
    simulate->callback([&] {
        action = [&] {
            const auto p = sim_params.resolve();
            const auto ic = parse_ic(sim_ic);
            deliver(sim_out, trajectory_csv(integrate(p, ic, sim_int.resolve())), out);
        };
    });

    // equilibria / stability
    auto* equilibria = app.add_subcommand("equilibria", "closed-form equilibria with stability, JSON");
    ParamFlags eq_params;
    std::string eq_out;
    eq_params.attach(equilibria);
    equilibria->add_option("--out", eq_out, "output JSON (default stdout)");
    equilibria->callback([&] { action = [&] { deliver(eq_out, dump(equilibria_json(eq_params.resolve())), out); }; });

    auto* stability = app.add_subcommand("stability", "equilibria plus the analytic stability conditions, JSON");
    ParamFlags stab_params;
    std::string stab_out;
    stab_params.attach(stability);
    stability->add_option("--out", stab_out, "output JSON (default stdout)");
    stability->callback([&] { action = [&] { deliver(stab_out, dump(stability_json(stab_params.resolve())), out); }; });

    // threshold
    auto* threshold = app.add_subcommand("threshold", "estimate d(s_b) by bisection on alpha - beta");
    ParamFlags thr_params;
    std::string thr_sb, thr_out;
    double thr_res = 0.02;
    thr_params.attach(threshold);
    threshold->add_option("--s-b-values", thr_sb, "comma-separated s_b values (default 0.1..1.0)");
    threshold->add_option("--resolution", thr_res, "bisection resolution");
    threshold->add_option("--out", thr_out, "output CSV (default stdout)");
    threshold->callback([&] {
        action = [&] {
            const auto p = thr_params.resolve(false, gap_defaults());
            GapBase base{p.s_m1, p.s_m2, p.lambda, p.beta};
            io::CsvWriter csv({"s_b", "found", "d", "lower", "upper"});
            for (double sb : parse_axis(thr_sb, default_s_b_axis())) {
                const auto e = threshold_d(base, sb, thr_res);
                csv.row_text({io::fmt(sb), e.found ? "1" : "0", io::fmt(e.d), io::fmt(e.lower), io::fmt(e.upper)});
            }
            deliver(thr_out, csv.str(), out);
        };
    });

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "stability and attractors over alpha - beta x s_b");
    ParamFlags sw_params;
    std::string sw_gaps, sw_sb, sw_out;
    std::size_t sw_grid = 0;
    sw_params.attach(sweep_cmd);
    sweep_cmd->add_option("--gaps", sw_gaps, "comma-separated alpha - beta values")->required();
    sweep_cmd->add_option("--s-b-values", sw_sb, "comma-separated s_b values (default 0.1..1.0)");
    sweep_cmd->add_option("--grid", sw_grid, "IC lattice nodes per side (0: no integration)");
    sweep_cmd->add_option("--out", sw_out, "output CSV (default stdout)");
    sweep_cmd->callback([&] {
        action = [&] {
            const auto p = sw_params.resolve(false, gap_defaults());
            SweepAxes axes;
            axes.base = GapBase{p.s_m1, p.s_m2, p.lambda, p.beta};
            axes.gaps = io::parse_list(sw_gaps, "gaps");
            axes.s_b = parse_axis(sw_sb, default_s_b_axis());
            axes.ic_grid_n = sw_grid;
            axes.threads = threads;
            std::vector<std::string> header = {"alpha_minus_beta", "s_b", "alpha", "beta"};
            for (int k = 0; k < 7; ++k) header.push_back(to_string(static_cast<EquilibriumKind>(k)));
            for (const char* h : {"e7_resolved", "n_E3", "n_E4", "n_E5", "n_E6", "n_E7", "n_none"}) header.push_back(h);
            io::CsvWriter csv(header);
            for (const auto& rec : sweep(axes)) {
                std::vector<std::string> row = {io::fmt(rec.gap), io::fmt(rec.params.s_b), io::fmt(rec.params.alpha),
                                                io::fmt(rec.params.beta)};
                for (int k = 0; k < 7; ++k) {
                    const auto s = rec.stability_of(static_cast<EquilibriumKind>(k));
                    row.push_back(s ? to_string(*s) : "none");
                }
                row.push_back(rec.e7_resolved ? "1" : "0");
                for (auto k : {EquilibriumKind::E3, EquilibriumKind::E4, EquilibriumKind::E5, EquilibriumKind::E6,
                               EquilibriumKind::E7})
                    row.push_back(std::to_string(rec.attractor_count(k)));
                std::size_t none = 0;
                for (const auto& a : rec.attractors) none += a ? 0 : 1;
                row.push_back(std::to_string(none));
                csv.row_text(row);
            }
            deliver(sw_out, csv.str(), out);
        };
    });

    // basin
    auto* basin = app.add_subcommand("basin", "attractor label per interior IC, CSV m1,m2,label");
    ParamFlags bas_params;
    std::size_t bas_grid = 11;
    double bas_t_end = attractor_options().max_time;
    std::string bas_out;
    bas_params.attach(basin);
    basin->add_option("--grid", bas_grid, "IC lattice nodes per side");
    basin->add_option("--t-end", bas_t_end, "integration horizon per IC");
    basin->add_option("--out", bas_out, "output CSV (default stdout)");
    basin->callback([&] {
        action = [&] {
            auto o = attractor_options();
            o.max_time = bas_t_end;
            deliver(bas_out, basin_csv(basin_map(bas_params.resolve(), bas_grid, o, threads)), out);
        };
    });

    // locus
    auto* locus = app.add_subcommand("locus", "E7 coordinates as s_b varies, CSV s_b,m1,m2,b");
    ParamFlags loc_params;
    std::string loc_sb, loc_out;
    loc_params.attach(locus);
    locus->add_option("--s-b-values", loc_sb, "comma-separated s_b values (default 0.1..1.0)");
    locus->add_option("--out", loc_out, "output CSV (default stdout)");
    locus->callback([&] {
        action = [&] {
            io::CsvWriter csv({"s_b", "m1", "m2", "b"});
            for (const auto& pt : e7_locus(loc_params.resolve(), parse_axis(loc_sb, default_s_b_axis())))
                csv.row({pt.s_b, pt.e7.m1(), pt.e7.m2(), pt.e7.b()});
            deliver(loc_out, csv.str(), out);
        };
    });

    // baseline
    auto* baseline = app.add_subcommand("baseline", "integrate a comparison model, CSV t,m1,m2,b");
    std::string bl_model, bl_ic, bl_out;
    std::vector<std::string> bl_sets;
    IntegratorFlags bl_int;
    baseline->add_option("--model", bl_model, "mw, mp or vaz")->required()->check(CLI::IsMember({"mw", "mp", "vaz"}));
    baseline->add_option("--set", bl_sets, "model parameter as key=value (repeatable)");
    baseline->add_option("--ic", bl_ic, "initial condition x,y,bilingual")->required();
    baseline->add_option("--out", bl_out, "output CSV (default stdout)");
    bl_int.attach(baseline);
    baseline->callback([&] {
        action = [&] {
            std::string text;
            for (const auto& s : bl_sets) text += s + "\n";
            const auto kv = io::parse_key_values(text);
            auto take = [&kv](std::map<std::string, double*> fields) {
                for (const auto& [k, v] : kv) {
                    auto it = fields.find(k);
                    if (it == fields.end()) throw ValidationError("unknown baseline parameter '" + k + "'");
                    *it->second = v;
                }
            };
            baselines::BaselineParams params;
            if (bl_model == "mw") {
                baselines::MWParams p;
                take({{"s_x", &p.s_x}, {"c_zx", &p.c_zx}, {"c_zy", &p.c_zy}, {"c_xz", &p.c_xz},
                      {"c_yz", &p.c_yz}, {"a", &p.a}, {"mu", &p.mu}});
                params = p;
            } else if (bl_model == "mp") {
                baselines::MPParams p;
                take({{"s_x", &p.s_x}, {"c", &p.c}, {"k", &p.k}, {"a", &p.a}});
                params = p;
            } else {
                baselines::VazParams p;
                take({{"S", &p.S}, {"a", &p.a}});
                params = p;
            }
            const auto v = io::parse_list(bl_ic, "initial condition");
            if (v.size() != 3) throw ValidationError("initial condition needs 3 components");
            const auto path = baselines::simulate_baseline(params, {v[0], v[1], v[2]}, bl_int.resolve());
            deliver(bl_out, trajectory_csv(path.times, path.states), out);
        };
    });

    // reproduce
    auto* reproduce = app.add_subcommand("reproduce", "write the data bundle of one figure");
    std::string fig_id, fig_dir = "figures";
    reproduce->add_option("figure", fig_id, "figure id")->required();
    reproduce->add_option("--out-dir", fig_dir, "bundle parent directory");
    reproduce->callback([&] {
        action = [&] {
            const auto fig = figure(fig_id);
            if (!fig) {
                std::string known;
                for (const auto& id : figure_ids()) known += (known.empty() ? "" : ", ") + id;
                throw ValidationError("unknown figure '" + fig_id + "' (known: " + known + ")");
            }
            const fs::path dir = fs::path(fig_dir) / fig->id;
            for (const auto& f : write_figure(*fig, dir, threads)) out << (dir / f).string() << "\n";
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitValidation;
    }

    try {
        action();
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace langcomp::cli
