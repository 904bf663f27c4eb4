#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

#include "sscl/config.hpp"
#include "sscl/io.hpp"

namespace sscl {

inline constexpr double kTolDefect = 1e-2;
inline constexpr double kTolBln = 1e-2;

namespace detail {

inline void write_summary(const std::filesystem::path& dir, const RunConfig& c, bool pass,
                          const nlohmann::json& metrics) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["pass"] = pass;
    j["master_seed"] = c.master_seed;
    j["n_paths"] = c.n_paths;
    j["config"] = config_echo(c);
    j["metrics"] = metrics;
    std::ofstream out(dir / "summary.json");
    out << j.dump(2) << "\n";
    std::cout << (dir / "summary.json").string() << "\n";
}

inline bool nonincreasing(const std::vector<double>& v, double tol = 0.0) {
    for (size_t i = 0; i + 1 < v.size(); ++i)
        if (v[i + 1] > v[i] + tol) return false;
    return true;
}

}  // namespace detail

// Executes the configured experiment, writes its artifacts, prints the JSON
// summary path. Returns 0 iff every acceptance predicate in the run passed.
inline int execute(const RunConfig& c) {
    namespace fs = std::filesystem;
    fs::path dir(c.output_dir);
    fs::create_directories(dir);
    auto echo = config_echo(c);

    switch (c.experiment) {
        case ExperimentKind::Solve: {
            EnsembleSetup setup = make_setup(c);
            ScenarioData d = make_scenario(setup.grid, c.data);
            SolverConfig cfg = setup.cfg;
            cfg.xi.N = detail::resolve_xi_N(cfg, d.u0, d.b);
            SpeedCap cap = make_speed_cap(setup.flux, cfg.xi.N);
            detail::TimeGrid tg = detail::make_time_grid(*setup.grid, cap, cfg, cfg.eps);
            WienerPath path = sample_path(derive_path_seed(c.master_seed, 0), tg.n_steps,
                                          tg.dt, setup.noise.K());
            Trajectory t = run(setup.grid, cfg, d.u0, d.b, setup.flux, setup.noise, path);
            std::vector<std::vector<double>> us, vs;
            for (const Field& f : t.u_snapshots) us.push_back(f.values);
            for (const Field& f : t.v_snapshots) vs.push_back(f.values);
            write_snapshots(dir / "u_snapshots.csv", echo, t.times, us);
            write_snapshots(dir / "v_snapshots.csv", echo, t.times, vs);
            nlohmann::json m;
            m["n_steps"] = t.n_steps;
            m["dt"] = t.dt;
            m["sup_lp2"] = t.sup_lp2;
            m["kinetic_mass"] = t.defect_hist.total();
            detail::write_summary(dir, c, true, m);
            return 0;
        }
        case ExperimentKind::Contraction: {
            EnsembleSetup setup = make_setup(c);
            ScenarioData d1 = make_scenario(setup.grid, c.data);
            ScenarioData d2 = make_scenario(setup.grid, c.data2);
            ContractionReport rep = contraction_experiment(setup, d1, d2, c.n_paths);
            std::vector<std::vector<double>> rows;
            for (size_t k = 0; k < rep.times.size(); ++k)
                rows.push_back({rep.times[k], rep.lhs[k], rep.rhs_init, rep.rhs_boundary[k],
                                rep.ci_halfwidth[k]});
            write_csv(dir / "contraction.csv", echo,
                      {"t", "lhs", "rhs_init", "rhs_boundary", "ci95"}, rows);
            nlohmann::json m;
            m["rhs_init"] = rep.rhs_init;
            m["M_b"] = rep.M_b;
            m["margin"] = rep.margin;
            m["max_excess"] = rep.max_excess;
            m["n_aborted"] = rep.n_aborted;
            detail::write_summary(dir, c, rep.pass, m);
            return rep.pass ? 0 : 1;
        }
        case ExperimentKind::Reduction: {
            EnsembleSetup setup = make_setup(c);
            ScenarioData d = make_scenario(setup.grid, c.data);
            ReductionReport rep = reduction_experiment(setup, d, c.n_paths);
            std::vector<std::vector<double>> rows;
            for (size_t k = 0; k < rep.times.size(); ++k)
                rows.push_back({rep.times[k], rep.gap[k]});
            write_csv(dir / "reduction.csv", echo, {"t", "gap"}, rows);
            bool pass = rep.indicator_max == 0.0;
            nlohmann::json m;
            m["indicator_max"] = rep.indicator_max;
            m["gap_final"] = rep.gap.back();
            detail::write_summary(dir, c, pass, m);
            return pass ? 0 : 1;
        }
        case ExperimentKind::Sweep: {
            EnsembleSetup setup = make_setup(c);
            ScenarioData d = make_scenario(setup.grid, c.data);
            SweepReport rep = viscosity_sweep(setup, d, c.eps_list, c.n_paths);
            std::vector<std::vector<double>> rows;
            for (size_t k = 0; k < rep.cauchy_l1.size(); ++k)
                rows.push_back({rep.eps_list[k], rep.eps_list[k + 1], rep.cauchy_l1[k],
                                rep.cauchy_ci[k]});
            write_csv(dir / "sweep.csv", echo, {"eps_hi", "eps_lo", "cauchy_l1", "ci95"}, rows);
            std::vector<std::vector<double>> erows;
            for (const EnergyRow& r : rep.energy_rows)
                erows.push_back({r.eps, r.mean_sup_lp2, r.ci_sup_lp2, r.mean_sup_lp4,
                                 r.mean_diss2, r.mean_diss2_sq});
            write_csv(dir / "energy.csv", echo,
                      {"eps", "sup_lp2", "sup_lp2_ci95", "sup_lp4", "diss2", "diss2_sq"}, erows);
            bool pass = true;
            for (size_t k = 0; k + 1 < rep.cauchy_l1.size(); ++k)
                if (rep.cauchy_l1[k + 1] >
                    rep.cauchy_l1[k] + rep.cauchy_ci[k] + rep.cauchy_ci[k + 1])
                    pass = false;
            nlohmann::json m;
            m["cauchy"] = rep.cauchy_l1;
            detail::write_summary(dir, c, pass, m);
            return pass ? 0 : 1;
        }
        case ExperimentKind::Kinetic: {
            EnsembleSetup setup = make_setup(c);
            ScenarioData d = make_scenario(setup.grid, c.data);
            KineticReport rep = kinetic_experiment(setup, d, c.n_paths,
                                                   c.layer_width_cells * setup.grid->dx);
            std::vector<std::vector<double>> rows;
            for (size_t j = 0; j < rep.xi.size(); ++j)
                rows.push_back({rep.xi[j], rep.mu_m_vals[j], rep.mu_nu_vals[j],
                                rep.mu_m_slope[j], rep.mu_nu_slope[j]});
            write_csv(dir / "kinetic_mu.csv", echo,
                      {"xi", "mu_m", "mu_nu", "mu_m_slope", "mu_nu_slope"}, rows);
            auto write_side = [&](const KineticSideReport& sr, const std::string& name) {
                std::vector<std::vector<double>> srows;
                for (size_t k = 0; k < sr.times.size(); ++k)
                    for (size_t j = 0; j < rep.xi.size(); ++j)
                        srows.push_back({sr.times[k], rep.xi[j], sr.f_bar[k][j],
                                         sr.m_bar_plus[k][j], sr.bln[k][j]});
                write_csv(dir / ("kinetic_trace_" + name + ".csv"), echo,
                          {"t", "xi", "f_bar_plus", "m_bar_plus", "bln_value"}, srows);
            };
            write_side(rep.left, "left");
            write_side(rep.right, "right");
            bool pass = detail::nonincreasing(rep.mu_m_vals) &&
                        detail::nonincreasing(rep.mu_nu_vals) &&
                        rep.left.defect_min >= -kTolDefect &&
                        rep.right.defect_min >= -kTolDefect &&
                        rep.left.bln_min >= -kTolBln && rep.right.bln_min >= -kTolBln;
            nlohmann::json m;
            m["total_mass"] = rep.total_mass;
            m["tail_levels"] = rep.tail_levels;
            m["tail_mass"] = rep.tail_mass;
            m["defect_min_left"] = rep.left.defect_min;
            m["defect_min_right"] = rep.right.defect_min;
            m["bln_min_left"] = rep.left.bln_min;
            m["bln_min_right"] = rep.right.bln_min;
            detail::write_summary(dir, c, pass, m);
            return pass ? 0 : 1;
        }
        case ExperimentKind::Validate: {
            ValidationReport rep = deterministic_validation(parse_validation_suite(c.suite),
                                                            c.n_cells);
            nlohmann::json m;
            std::vector<std::string> cols;
            std::vector<double> row;
            for (const auto& [k, v] : rep.metrics) {
                m[k] = v;
                cols.push_back(k);
                row.push_back(v);
            }
            write_csv(dir / ("validate_" + rep.name + ".csv"), echo, cols, {row});
            detail::write_summary(dir, c, rep.pass, m);
            return rep.pass ? 0 : 1;
        }
    }
    return 2;
}

}  // namespace sscl
