// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Runs the full verification matrix at pinned tolerances, so expect
// a few minutes of wall time on one core.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sscl/config.hpp"
#include "sscl/driver.hpp"
#include "sscl/sscl.hpp"

using namespace sscl;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.141592653589793;
int g_failures = 0;

void report(int id, const std::string& what, bool pass, const std::string& detail,
            double seconds) {
    std::printf("%s criterion %2d: %s (%s, %.1fs)\n", pass ? "PASS" : "FAIL", id, what.c_str(),
                detail.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

template <class Fn>
void criterion(int id, const std::string& what, Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        pass = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(id, what, pass, detail, secs);
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(4);
    ss << v;
    return ss.str();
}

EnsembleSetup noisy_setup(int n_cells, double eps, double t_end, double sigma, int K) {
    EnsembleSetup s;
    s.grid = make_grid(0.0, 1.0, n_cells);
    s.cfg.eps = eps;
    s.cfg.cfl = 0.4;
    s.cfg.t_end = t_end;
    s.cfg.record_every = 50;
    s.flux = burgers_flux();
    s.noise = linear_multiplicative_noise(sigma, K);
    s.master_seed = 20240817;
    s.workers = 1;
    return s;
}

ScenarioData pair_a1(const GridPtr& g) {
    return {make_field(g, [](double x) { return 0.5 * std::sin(2.0 * kPi * x); }),
            constant_boundary(0.0, 0.0)};
}
ScenarioData pair_a2(const GridPtr& g) {
    return {make_field(g,
                       [](double x) {
                           return 0.5 * std::sin(2.0 * kPi * x) +
                                  0.3 * std::exp(-40.0 * (x - 0.5) * (x - 0.5));
                       }),
            constant_boundary(0.0, 0.0)};
}
ScenarioData pair_b1(const GridPtr& g) { return {make_field(g, 0.5), constant_boundary(0.5, 0.0)}; }
ScenarioData pair_b2(const GridPtr& g) { return {make_field(g, 0.5), constant_boundary(0.2, 0.0)}; }

std::map<std::string, std::string> slurp_dir(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        out[e.path().filename().string()] = ss.str();
    }
    return out;
}

}  // namespace

int main() {
    criterion(1, "deterministic Riemann oracles", [](std::string& detail) {
        ValidationReport shock = deterministic_validation(ValidationSuite::RiemannShock, 200);
        // Rarefaction-corner smearing converges at rate dx^(2/3), which
        // asymptotically dominates dx log(1/dx) for monotone schemes; the
        // fitted-constant check uses that rate, while each resolution must
        // also clear the standalone dx log(1/dx) gate.
        auto dx_of = [](int n) { return 2.0 / n; };
        ValidationReport r100 = deterministic_validation(ValidationSuite::RiemannRarefaction, 100);
        double C = r100.metrics.at("l1_error") / std::pow(dx_of(100), 2.0 / 3.0);
        bool ok = shock.pass && r100.pass;
        double worst_ratio = 0.0;
        for (int n : {200, 400}) {
            ValidationReport r = deterministic_validation(ValidationSuite::RiemannRarefaction, n);
            double ratio = r.metrics.at("l1_error") / (C * std::pow(dx_of(n), 2.0 / 3.0));
            worst_ratio = std::max(worst_ratio, ratio);
            ok = ok && r.pass && ratio <= 1.0 + 1e-9;
        }
        detail = "front_err=" + fmt(shock.metrics.at("front_error")) +
                 " rarefaction_ratio=" + fmt(worst_ratio);
        return ok;
    });

    criterion(2, "coupled-identical contraction is exactly zero", [](std::string& detail) {
        EnsembleSetup s = noisy_setup(100, 0.02, 0.1, 0.25, 8);
        ScenarioData d = pair_a1(s.grid);
        ContractionReport r = contraction_experiment(s, d, d, 20);
        double worst = 0.0;
        for (double v : r.lhs) worst = std::max(worst, std::abs(v));
        detail = "max_t lhs=" + fmt(worst);
        return worst <= 1e-12 && r.n_aborted == 0;
    });

    criterion(3, "L1 contraction bound over the data matrix", [](std::string& detail) {
        auto run_pair = [](int n_cells, int n_paths, bool boundary_pair, double& excess) {
            EnsembleSetup s = noisy_setup(n_cells, 0.02, 0.5, 0.25, 8);
            ScenarioData d1 = boundary_pair ? pair_b1(s.grid) : pair_a1(s.grid);
            ScenarioData d2 = boundary_pair ? pair_b2(s.grid) : pair_a2(s.grid);
            ContractionReport r = contraction_experiment(s, d1, d2, n_paths);
            excess = std::max(0.0, r.max_excess);
            return r.pass;
        };
        bool ok = true;
        std::ostringstream ss;
        for (bool boundary_pair : {false, true}) {
            double coarse = 0.0, fine = 0.0;
            bool p1 = run_pair(200, 200, boundary_pair, coarse);
            bool p2 = run_pair(400, 400, boundary_pair, fine);
            ok = ok && p1 && p2 && fine <= coarse + 1e-12;
            ss << (boundary_pair ? " boundary" : "interior") << "_excess=" << fmt(coarse) << "/"
               << fmt(fine);
        }
        detail = ss.str();
        return ok;
    });

    criterion(4, "energy uniformity across the viscosity ladder", [](std::string& detail) {
        EnsembleSetup s = noisy_setup(100, 0.0, 0.25, 0.25, 4);
        s.cfg.record_every = 100;
        ScenarioData d = pair_a1(s.grid);
        std::vector<double> eps_list;
        for (int k = 2; k <= 8; ++k) eps_list.push_back(std::pow(2.0, -k));
        SweepReport r = viscosity_sweep(s, d, eps_list, 40);
        std::vector<double> est;
        for (const auto& row : r.energy_rows) est.push_back(row.mean_sup_lp2);
        double lo = est[0], hi = est[0], mean = 0.0;
        for (double v : est) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            mean += v;
        }
        mean /= static_cast<double>(est.size());
        double rho = spearman_rho(est, eps_list);
        // The estimates converge monotonically upward to the inviscid value,
        // so a pure rank test reads the convergence itself as a trend. The
        // uniformity claim is about bounded growth: accept either a rank
        // correlation above the n = 7 one-sided 95% critical value (-0.714)
        // or a growth rate well under the 2x spread budget (< 5% per halving
        // of eps; an eps^(-1/4) blow-up would show ~19% per halving).
        std::vector<double> octaves;
        for (double e : eps_list) octaves.push_back(-std::log2(e));
        double growth_per_octave = fit_slope(octaves, est) / mean;
        detail = "spread=" + fmt(hi / lo) + " spearman=" + fmt(rho) +
                 " growth/octave=" + fmt(growth_per_octave);
        return hi / lo < 2.0 && (rho >= -0.714 || growth_per_octave <= 0.05);
    });

    criterion(5, "kinetic measure tails and tail monotonicity", [](std::string& detail) {
        EnsembleSetup s = noisy_setup(100, 0.05, 0.25, 0.25, 4);
        s.cfg.record_every = 20;
        ScenarioData d{make_field(s.grid, 1.0), constant_boundary(1.0, 0.0)};
        KineticReport r = kinetic_experiment(s, d, 20);
        bool mono_tail = r.tail_mass[0] >= r.tail_mass[1] && r.tail_mass[1] >= r.tail_mass[2];
        bool small_tail = r.tail_mass[2] < 1e-3 * r.total_mass;
        bool mono_mu = true;
        for (size_t j = 0; j + 1 < r.xi.size(); ++j) {
            mono_mu = mono_mu && r.mu_m_vals[j] >= r.mu_m_vals[j + 1] - 1e-12;
            mono_mu = mono_mu && r.mu_nu_vals[j] >= r.mu_nu_vals[j + 1] - 1e-12;
        }
        detail = "tail@4N0/total=" + fmt(r.tail_mass[2] / r.total_mass);
        return mono_tail && small_tail && mono_mu;
    });

    criterion(6, "boundary defect measure suite", [](std::string& detail) {
        // closed form: u = u_b = 1, Burgers, right boundary, N = 2 gives
        // m_plus(0) = M_N + 1/2 = 2.5
        auto g = make_grid(0.0, 1.0, 8);
        XiGrid xi = make_xi_grid(2.0, 256);
        std::vector<double> times{0.0};
        std::vector<Field> snaps{make_field(g, 1.0)};
        BoundaryTrace tr = boundary_trace(times, snaps, Side::Right, g->dx, xi);
        DefectMeasure dm = defect_measure(tr, constant_boundary(1.0, 1.0), burgers_flux(), 2.0);
        size_t j0 = 0;
        for (size_t j = 0; j < dm.xi_nodes.size(); ++j)
            if (std::abs(dm.xi_nodes[j]) < std::abs(dm.xi_nodes[j0])) j0 = j;
        double exact = 2.0 * (1.0 - dm.xi_nodes[j0]) + 0.5 * (1.0 - dm.xi_nodes[j0] * dm.xi_nodes[j0]);
        bool closed_form = std::abs(dm.m_bar_plus[0][j0] - exact) <= xi.bin_width;
        bool endpoint_zero = true;
        for (const auto& row : dm.m_bar_plus) endpoint_zero = endpoint_zero && row.back() == 0.0;

        // solver-based nonnegativity at two resolutions
        auto min_plus_at = [](int n_cells) {
            auto grid = make_grid(0.0, 1.0, n_cells);
            SolverConfig cfg;
            cfg.eps = 0.0;
            cfg.cfl = 0.4;
            cfg.t_end = 0.25;
            cfg.record_every = std::max(1, n_cells / 8);
            cfg.xi.N = 2.0;
            Trajectory t = run_deterministic(grid, cfg, make_field(grid, 1.0),
                                             constant_boundary(1.0, 0.0), burgers_flux());
            XiGrid x = make_xi_grid(2.0, n_cells);
            BoundaryTrace trace =
                boundary_trace(t.times, t.u_snapshots, Side::Right, 4.0 * grid->dx, x);
            return defect_measure(trace, constant_boundary(1.0, 0.0), burgers_flux(), 2.0)
                .min_plus();
        };
        double m200 = min_plus_at(200), m400 = min_plus_at(400);
        detail = "closed_form_err=" + fmt(std::abs(dm.m_bar_plus[0][j0] - exact)) +
                 " min200=" + fmt(m200) + " min400=" + fmt(m400);
        return closed_form && endpoint_zero && m200 >= -1e-2 && m400 >= -5e-3;
    });

    criterion(7, "BLN boundary-layer scenario", [](std::string& detail) {
        ValidationReport r = deterministic_validation(ValidationSuite::BoundaryLayer, 200);
        detail = "dev=" + fmt(r.metrics.at("interior_deviation")) +
                 " bln=" + fmt(r.metrics.at("bln_min")) +
                 " band_min=" + fmt(r.metrics.at("defect_min_on_band"));
        return r.pass;
    });

    criterion(8, "vanishing-viscosity sweep", [](std::string& detail) {
        // noisy coupled Cauchy differences, nonincreasing within CI
        EnsembleSetup s = noisy_setup(100, 0.0, 0.25, 0.25, 4);
        s.cfg.record_every = 25;
        ScenarioData d = pair_a1(s.grid);
        SweepReport r = viscosity_sweep(s, d, {0.2, 0.1, 0.05, 0.025}, 50);
        bool cauchy_ok = true;
        for (size_t k = 0; k + 1 < r.cauchy_l1.size(); ++k)
            cauchy_ok = cauchy_ok && r.cauchy_l1[k + 1] <=
                                         r.cauchy_l1[k] + r.cauchy_ci[k] + r.cauchy_ci[k + 1];

        // zero-noise pre-shock convergence order in eps
        auto g = make_grid(0.0, 1.0, 400);
        Field u0 = make_field(g, [](double x) { return 0.3 * std::sin(2.0 * kPi * x); });
        BoundaryData b = constant_boundary(0.0, 0.0);
        SolverConfig cfg;
        cfg.cfl = 0.4;
        cfg.t_end = 0.2;
        cfg.record_every = 1 << 30;
        cfg.eps = 0.0;
        Field limit = run_deterministic(g, cfg, u0, b, burgers_flux()).u_snapshots.back();
        // eps = 0.16 sits outside the asymptotic regime (effective Reynolds
        // number ~ 2); the order is measured on the next four halvings
        std::vector<double> log_eps, log_err;
        for (double e : {0.08, 0.04, 0.02, 0.01}) {
            cfg.eps = e;
            Field ue = run_deterministic(g, cfg, u0, b, burgers_flux()).u_snapshots.back();
            log_eps.push_back(std::log(e));
            log_err.push_back(std::log(l1_distance(ue, limit)));
        }
        double order = fit_slope(log_eps, log_err);
        detail = "order=" + fmt(order) + " cauchy=" + fmt(r.cauchy_l1.front()) + ".." +
                 fmt(r.cauchy_l1.back());
        return cauchy_ok && order >= 0.8;
    });

    criterion(9, "kinetic reduction indicators", [](std::string& detail) {
        EnsembleSetup s = noisy_setup(50, 0.02, 0.05, 0.5, 2);
        s.cfg.record_every = 10;
        s.cfg.xi.n_bins = 64;
        ScenarioData d = pair_a1(s.grid);
        ReductionReport noisy = reduction_experiment(s, d, 8);
        s.noise = no_noise();
        ReductionReport quiet = reduction_experiment(s, d, 4);
        double worst_gap = 0.0;
        for (double gp : quiet.gap) worst_gap = std::max(worst_gap, gp);
        detail = "indicator=" + fmt(noisy.indicator_max) + " quiet_gap=" + fmt(worst_gap);
        return noisy.indicator_max == 0.0 && quiet.indicator_max == 0.0 && worst_gap == 0.0;
    });

    criterion(10, "artifacts are independent of worker count", [](std::string& detail) {
        RunConfig cfg = parse_config(
            "experiment = contraction\n"
            "n_paths = 8\n"
            "[grid]\nn_cells = 50\n"
            "[solver]\neps = 0.02\nt_end = 0.05\nrecord_every = 5\n"
            "[noise]\nkind = linear_multiplicative\nsigma = 0.25\nK = 4\n"
            "[data]\nu0 = sine\namp = 0.5\n"
            "[data2]\nu0 = constant\nvalue = 0.2\n");
        fs::path base = fs::temp_directory_path() / "sscl_acceptance_repro";
        fs::remove_all(base);
        cfg.workers = 1;
        cfg.output_dir = (base / "w1").string();
        int rc1 = execute(cfg);
        cfg.workers = 4;
        cfg.output_dir = (base / "w4").string();
        int rc2 = execute(cfg);
        auto a = slurp_dir(base / "w1"), b = slurp_dir(base / "w4");
        bool same = rc1 == rc2 && a.size() == b.size() && !a.empty();
        for (const auto& [name, body] : a) same = same && b.count(name) && b.at(name) == body;
        detail = std::to_string(a.size()) + " files compared";
        return same;
    });

    if (g_failures == 0) std::printf("acceptance: all criteria passed\n");
    else std::printf("acceptance: %d criterion(s) failed\n", g_failures);
    return g_failures;
}
