#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sscl/experiments.hpp"

namespace sscl {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Solve, Contraction, Reduction, Sweep, Kinetic, Validate };

inline ExperimentKind parse_experiment(const std::string& s) {
    if (s == "solve") return ExperimentKind::Solve;
    if (s == "contraction") return ExperimentKind::Contraction;
    if (s == "reduction") return ExperimentKind::Reduction;
    if (s == "sweep") return ExperimentKind::Sweep;
    if (s == "kinetic") return ExperimentKind::Kinetic;
    if (s == "validate") return ExperimentKind::Validate;
    throw ConfigError("unknown experiment: " + s);
}

// Initial profile / boundary profile specs resolved later against a grid.
struct DataSpec {
    std::string u0 = "constant";  // constant | riemann | sine
    double value = 0.0;           // constant
    double ul = 1.0, ur = 0.0, x0 = 0.0;  // riemann
    double amp = 0.5;
    int mode = 1;
    double offset = 0.0;  // sine: offset + amp sin(mode pi x)
    double b_left = 0.0;
    double b_right = 0.0;
};

struct RunConfig {
    ExperimentKind experiment = ExperimentKind::Solve;

    double x_left = 0.0, x_right = 1.0;
    int n_cells = 200;

    double eps = 0.02;
    double cfl = 0.5;
    double t_end = 0.5;
    std::string scheme = "godunov";
    int record_every = 10;
    double xi_N = 0.0;  // 0 = auto
    int xi_bins = 256;
    int layer_width_cells = 4;
    bool direct_bc = false;

    std::string flux_name = "burgers";
    double flux_c = 1.0;

    std::string noise_kind = "none";
    double sigma = 0.25;
    double alpha = 0.1;
    double beta = 0.1;
    int K = 8;
    double clip = 1e3;

    DataSpec data;
    DataSpec data2;
    bool has_data2 = false;

    std::vector<double> eps_list{0.2, 0.1, 0.05, 0.025};
    std::string suite = "riemann_shock";

    std::uint64_t master_seed = 12345;
    int n_paths = 100;
    int workers = 1;
    std::string output_dir = "out";
};

namespace detail {

using KVDoc = std::map<std::string, std::map<std::string, std::string>>;

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline KVDoc parse_ini(const std::string& text) {
    KVDoc doc;
    std::string section = "run";  // keys before any [section] belong to [run]
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            doc[section];
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        doc[section][key] = val;
    }
    return doc;
}

inline KVDoc parse_json_doc(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config JSON parse error: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config JSON: top level must be an object of sections");
    KVDoc doc;
    for (auto& [section, body] : j.items()) {
        if (!body.is_object()) throw ConfigError("config JSON: section '" + section + "' must be an object");
        for (auto& [key, val] : body.items()) {
            if (val.is_string())
                doc[section][key] = val.get<std::string>();
            else
                doc[section][key] = val.dump();
        }
    }
    return doc;
}

// Tracks consumption so unknown keys are rejected, naming the offender.
struct SectionReader {
    const std::string name;
    std::map<std::string, std::string> kv;
    std::map<std::string, bool> seen;

    std::optional<std::string> get(const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        seen[key] = true;
        return it->second;
    }
    double get_double(const std::string& key, double def) {
        auto v = get(key);
        if (!v) return def;
        try {
            size_t pos = 0;
            double d = std::stod(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("");
            return d;
        } catch (...) {
            throw ConfigError("config key '" + name + "." + key + "': expected a number, got '" + *v + "'");
        }
    }
    long long get_int(const std::string& key, long long def) {
        auto v = get(key);
        if (!v) return def;
        try {
            size_t pos = 0;
            long long i = std::stoll(*v, &pos);
            if (pos != v->size()) throw std::invalid_argument("");
            return i;
        } catch (...) {
            throw ConfigError("config key '" + name + "." + key + "': expected an integer, got '" + *v + "'");
        }
    }
    bool get_bool(const std::string& key, bool def) {
        auto v = get(key);
        if (!v) return def;
        if (*v == "true" || *v == "1") return true;
        if (*v == "false" || *v == "0") return false;
        throw ConfigError("config key '" + name + "." + key + "': expected true/false, got '" + *v + "'");
    }
    std::string get_string(const std::string& key, const std::string& def) {
        auto v = get(key);
        if (!v) return def;
        std::string s = *v;
        if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
        return s;
    }
    void finish() const {
        for (const auto& [k, v] : kv)
            if (!seen.count(k))
                throw ConfigError("config: unknown key '" + name + "." + k + "'");
    }
};

inline std::vector<double> parse_double_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::string t = s;
    if (t.size() >= 2 && t.front() == '[' && t.back() == ']') t = t.substr(1, t.size() - 2);
    std::istringstream in(t);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            throw ConfigError("config key '" + key + "': bad list element '" + item + "'");
        }
    }
    return out;
}

inline DataSpec read_data_spec(SectionReader& r) {
    DataSpec d;
    d.u0 = r.get_string("u0", d.u0);
    if (d.u0 != "constant" && d.u0 != "riemann" && d.u0 != "sine")
        throw ConfigError("config key '" + r.name + ".u0': unknown profile '" + d.u0 + "'");
    d.value = r.get_double("value", d.value);
    d.ul = r.get_double("ul", d.ul);
    d.ur = r.get_double("ur", d.ur);
    d.x0 = r.get_double("x0", d.x0);
    d.amp = r.get_double("amp", d.amp);
    d.mode = static_cast<int>(r.get_int("mode", d.mode));
    d.offset = r.get_double("offset", d.offset);
    d.b_left = r.get_double("b_left", d.b_left);
    d.b_right = r.get_double("b_right", d.b_right);
    return d;
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
    detail::KVDoc doc;
    std::string stripped = detail::trim(text);
    if (!stripped.empty() && stripped.front() == '{')
        doc = detail::parse_json_doc(text);
    else
        doc = detail::parse_ini(text);

    const std::vector<std::string> known_sections{"run",  "grid",  "solver", "flux",
                                                  "noise", "data", "data2",  "sweep",
                                                  "validate"};
    for (const auto& [sec, kv] : doc) {
        bool ok = false;
        for (const auto& k : known_sections) ok = ok || (k == sec);
        if (!ok) throw ConfigError("config: unknown section '[" + sec + "]'");
    }

    RunConfig c;
    auto reader = [&](const std::string& sec) {
        detail::SectionReader r{sec, doc.count(sec) ? doc[sec] : std::map<std::string, std::string>{}, {}};
        return r;
    };

    {
        auto r = reader("run");
        auto exp = r.get("experiment");
        if (exp) c.experiment = parse_experiment(detail::trim(*exp));
        c.master_seed = static_cast<std::uint64_t>(r.get_int("master_seed", 12345));
        c.n_paths = static_cast<int>(r.get_int("n_paths", c.n_paths));
        c.workers = static_cast<int>(r.get_int("workers", c.workers));
        c.output_dir = r.get_string("output_dir", c.output_dir);
        r.finish();
    }
    {
        auto r = reader("grid");
        c.x_left = r.get_double("x_left", c.x_left);
        c.x_right = r.get_double("x_right", c.x_right);
        c.n_cells = static_cast<int>(r.get_int("n_cells", c.n_cells));
        r.finish();
    }
    {
        auto r = reader("solver");
        c.eps = r.get_double("eps", c.eps);
        c.cfl = r.get_double("cfl", c.cfl);
        c.t_end = r.get_double("t_end", c.t_end);
        c.scheme = r.get_string("scheme", c.scheme);
        parse_flux_scheme(c.scheme);  // validate early
        c.record_every = static_cast<int>(r.get_int("record_every", c.record_every));
        c.xi_N = r.get_double("xi_N", c.xi_N);
        c.xi_bins = static_cast<int>(r.get_int("xi_bins", c.xi_bins));
        c.layer_width_cells = static_cast<int>(r.get_int("layer_width_cells", c.layer_width_cells));
        c.direct_bc = r.get_bool("direct_bc", c.direct_bc);
        r.finish();
    }
    {
        auto r = reader("flux");
        c.flux_name = r.get_string("name", c.flux_name);
        if (c.flux_name != "burgers" && c.flux_name != "linear" && c.flux_name != "cubic")
            throw ConfigError("config key 'flux.name': unknown flux '" + c.flux_name + "'");
        c.flux_c = r.get_double("c", c.flux_c);
        r.finish();
    }
    {
        auto r = reader("noise");
        c.noise_kind = r.get_string("kind", c.noise_kind);
        parse_noise_kind(c.noise_kind);
        c.sigma = r.get_double("sigma", c.sigma);
        c.alpha = r.get_double("alpha", c.alpha);
        c.beta = r.get_double("beta", c.beta);
        c.K = static_cast<int>(r.get_int("K", c.K));
        c.clip = r.get_double("clip", c.clip);
        r.finish();
    }
    {
        auto r = reader("data");
        c.data = detail::read_data_spec(r);
        r.finish();
    }
    if (doc.count("data2")) {
        auto r = reader("data2");
        c.data2 = detail::read_data_spec(r);
        c.has_data2 = true;
        r.finish();
    }
    {
        auto r = reader("sweep");
        auto lst = r.get("eps_list");
        if (lst) c.eps_list = detail::parse_double_list(*lst, "sweep.eps_list");
        r.finish();
    }
    {
        auto r = reader("validate");
        c.suite = r.get_string("suite", c.suite);
        parse_validation_suite(c.suite);
        r.finish();
    }

    if (c.experiment == ExperimentKind::Contraction && !c.has_data2)
        throw ConfigError("config: contraction experiment requires a [data2] section");
    if (c.n_paths < 1) throw ConfigError("config key 'run.n_paths': must be >= 1");
    if (c.workers < 1) throw ConfigError("config key 'run.workers': must be >= 1");
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// --- resolution of a RunConfig into solver objects ---------------------------

inline FluxModel make_flux(const RunConfig& c) {
    if (c.flux_name == "burgers") return burgers_flux();
    if (c.flux_name == "linear") return linear_flux(c.flux_c);
    return cubic_flux();
}

inline NoiseModel make_noise(const RunConfig& c) {
    NoiseKind kind = parse_noise_kind(c.noise_kind);
    NoiseModel n;
    switch (kind) {
        case NoiseKind::None: n = no_noise(); break;
        case NoiseKind::Additive: {
            std::vector<double> sig;
            for (int k = 1; k <= c.K; ++k) sig.push_back(c.sigma / k);
            n = additive_noise(sig);
            break;
        }
        case NoiseKind::LinearMultiplicative:
            n = linear_multiplicative_noise(c.sigma, c.K);
            break;
        case NoiseKind::AffineMultiplicative:
            n = affine_multiplicative_noise(c.alpha, c.beta, c.K);
            break;
        case NoiseKind::Custom:
            throw ConfigError("config: custom noise is a library-level feature, not configurable");
    }
    n.clip = c.clip;
    return n;
}

inline Field make_initial_field(const GridPtr& grid, const DataSpec& d) {
    if (d.u0 == "constant") return make_field(grid, d.value);
    if (d.u0 == "riemann")
        return make_field(grid, [&](double x) { return x < d.x0 ? d.ul : d.ur; });
    return make_field(grid, [&](double x) {
        return d.offset + d.amp * std::sin(d.mode * M_PI * (x - grid->x_left) /
                                           (grid->x_right - grid->x_left));
    });
}

inline ScenarioData make_scenario(const GridPtr& grid, const DataSpec& d) {
    ScenarioData s;
    s.u0 = make_initial_field(grid, d);
    s.b = constant_boundary(d.b_left, d.b_right);
    return s;
}

inline SolverConfig make_solver_config(const RunConfig& c) {
    SolverConfig s;
    s.eps = c.eps;
    s.cfl = c.cfl;
    s.t_end = c.t_end;
    s.scheme = parse_flux_scheme(c.scheme);
    s.K = c.K;
    s.seed = c.master_seed;
    s.record_every = c.record_every;
    s.xi.N = c.xi_N;
    s.xi.n_bins = c.xi_bins;
    s.direct_bc = c.direct_bc;
    s.validate();
    return s;
}

inline EnsembleSetup make_setup(const RunConfig& c) {
    EnsembleSetup e;
    e.grid = make_grid(c.x_left, c.x_right, c.n_cells);
    e.cfg = make_solver_config(c);
    e.flux = make_flux(c);
    e.noise = make_noise(c);
    e.master_seed = c.master_seed;
    e.n_paths = c.n_paths;
    e.workers = c.workers;
    return e;
}

// Resolved-config echo embedded in artifact headers. Excludes 'workers': the
// reproducibility contract is identical artifacts for any worker count.
inline std::map<std::string, std::string> config_echo(const RunConfig& c) {
    std::map<std::string, std::string> m;
    auto num = [](double v) {
        std::ostringstream ss;
        ss.precision(17);
        ss << v;
        return ss.str();
    };
    static const char* names[] = {"solve", "contraction", "reduction", "sweep", "kinetic",
                                  "validate"};
    m["experiment"] = names[static_cast<int>(c.experiment)];
    m["grid.x_left"] = num(c.x_left);
    m["grid.x_right"] = num(c.x_right);
    m["grid.n_cells"] = std::to_string(c.n_cells);
    m["solver.eps"] = num(c.eps);
    m["solver.cfl"] = num(c.cfl);
    m["solver.t_end"] = num(c.t_end);
    m["solver.scheme"] = c.scheme;
    m["solver.record_every"] = std::to_string(c.record_every);
    m["solver.xi_N"] = num(c.xi_N);
    m["solver.xi_bins"] = std::to_string(c.xi_bins);
    m["solver.layer_width_cells"] = std::to_string(c.layer_width_cells);
    m["solver.direct_bc"] = c.direct_bc ? "true" : "false";
    m["flux.name"] = c.flux_name;
    m["flux.c"] = num(c.flux_c);
    m["noise.kind"] = c.noise_kind;
    m["noise.sigma"] = num(c.sigma);
    m["noise.alpha"] = num(c.alpha);
    m["noise.beta"] = num(c.beta);
    m["noise.K"] = std::to_string(c.K);
    m["noise.clip"] = num(c.clip);
    m["data.u0"] = c.data.u0;
    m["data.b_left"] = num(c.data.b_left);
    m["data.b_right"] = num(c.data.b_right);
    m["run.master_seed"] = std::to_string(c.master_seed);
    m["run.n_paths"] = std::to_string(c.n_paths);
    return m;
}

}  // namespace sscl
