#include "ringdyn/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "ringdyn/curved_dynamics.hpp"
#include "ringdyn/errors.hpp"
#include "ringdyn/flat_dynamics.hpp"
#include "ringdyn/force_law.hpp"
#include "ringdyn/homographic.hpp"
#include "ringdyn/io.hpp"
#include "ringdyn/mass_model.hpp"
#include "ringdyn/ring_analysis.hpp"

namespace ringdyn {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    throw ValidationError(path + ": " + what, path);
}

void expect_object(const json& j, const std::string& path) {
    if (!j.is_object()) bad(path, "expected an object");
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional) {
    expect_object(j, path);
    for (const char* k : required)
        if (!j.contains(k)) bad(path, std::string("missing required key '") + k + "'");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : required)
            if (it.key() == k) known = true;
        for (const char* k : optional)
            if (it.key() == k) known = true;
        if (!known) bad(path + "." + it.key(), "unknown key");
    }
}

double get_number(const json& j, const std::string& path, const char* key) {
    const json& v = j.at(key);
    if (!v.is_number()) bad(path + "." + key, "expected a number");
    return v.get<double>();
}

double get_number_or(const json& j, const std::string& path, const char* key, double fallback) {
    return j.contains(key) ? get_number(j, path, key) : fallback;
}

long get_integer(const json& j, const std::string& path, const char* key) {
    const json& v = j.at(key);
    if (!v.is_number_integer()) bad(path + "." + key, "expected an integer");
    return v.get<long>();
}

long get_integer_or(const json& j, const std::string& path, const char* key, long fallback) {
    return j.contains(key) ? get_integer(j, path, key) : fallback;
}

std::string get_string(const json& j, const std::string& path, const char* key) {
    const json& v = j.at(key);
    if (!v.is_string()) bad(path + "." + key, "expected a string");
    return v.get<std::string>();
}

std::vector<double> get_number_array(const json& v, const std::string& path) {
    if (!v.is_array()) bad(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) bad(path + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

std::string resolve(const std::string& config_dir, const std::string& rel) {
    std::filesystem::path p(rel);
    if (p.is_absolute()) return rel;
    return (std::filesystem::path(config_dir) / p).string();
}

std::string artifact(const std::string& out_dir, const char* name) {
    return (std::filesystem::path(out_dir) / name).string();
}

ForceLaw parse_law_table(const std::string& file, const std::string& path) {
    std::ifstream in(file, std::ios::binary);
    if (!in) bad(path, "cannot open law table '" + file + "'");
    std::string line;
    if (!std::getline(in, line)) bad(path, "law table '" + file + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "s,f") bad(path, "law table header must be 's,f'");
    std::vector<double> s, f;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            bad(path, "law table line " + std::to_string(line_no) + " needs two fields");
        char* end = nullptr;
        std::string a = line.substr(0, comma), b = line.substr(comma + 1);
        double sv = std::strtod(a.c_str(), &end);
        if (end == a.c_str() || *end != '\0')
            bad(path, "law table line " + std::to_string(line_no) + ": bad abscissa");
        double fv = std::strtod(b.c_str(), &end);
        if (end == b.c_str() || *end != '\0')
            bad(path, "law table line " + std::to_string(line_no) + ": bad value");
        s.push_back(sv);
        f.push_back(fv);
    }
    return ForceLaw::tabulated(std::move(s), std::move(f));
}

ForceLaw parse_force_law(const json& j, const std::string& path,
                         const std::string& config_dir) {
    expect_object(j, path);
    if (!j.contains("kind")) bad(path, "missing required key 'kind'");
    std::string kind = get_string(j, path, "kind");
    ForceLaw law = ForceLaw::newtonian();
    if (kind == "newtonian") {
        check_keys(j, path, {"kind"}, {"domain_min"});
    } else if (kind == "quasihomogeneous") {
        check_keys(j, path, {"kind", "terms"}, {"domain_min"});
        const json& terms = j.at("terms");
        if (!terms.is_array() || terms.empty())
            bad(path + ".terms", "expected a non-empty array of [coeff, exponent] pairs");
        std::vector<ForceLaw::Term> parsed;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            std::string tp = path + ".terms[" + std::to_string(i) + "]";
            std::vector<double> pair = get_number_array(terms[i], tp);
            if (pair.size() != 2) bad(tp, "expected a [coeff, exponent] pair");
            parsed.push_back({pair[0], pair[1]});
        }
        law = ForceLaw::quasihomogeneous(std::move(parsed));
    } else if (kind == "tabulated") {
        check_keys(j, path, {"kind", "path"}, {"domain_min"});
        law = parse_law_table(resolve(config_dir, get_string(j, path, "path")),
                              path + ".path");
    } else {
        bad(path + ".kind", "expected newtonian, quasihomogeneous or tabulated");
    }
    if (j.contains("domain_min")) {
        double dm = get_number(j, path, "domain_min");
        if (!(dm > 0.0)) bad(path + ".domain_min", "must be positive");
        law.set_domain_min(dm);
    }
    return law;
}

RadiusProfile parse_radius(const json& j, const std::string& path) {
    expect_object(j, path);
    if (!j.contains("kind")) bad(path, "missing required key 'kind'");
    std::string kind = get_string(j, path, "kind");
    if (kind == "constant") {
        check_keys(j, path, {"kind", "value"}, {});
        return RadiusProfile::constant(get_number(j, path, "value"));
    }
    if (kind == "sinusoid") {
        check_keys(j, path, {"kind", "c0", "c1", "omega"}, {"phase"});
        return RadiusProfile::sinusoid(get_number(j, path, "c0"), get_number(j, path, "c1"),
                                       get_number(j, path, "omega"),
                                       get_number_or(j, path, "phase", 0.0));
    }
    if (kind == "table") {
        check_keys(j, path, {"kind", "times", "values"}, {});
        return RadiusProfile::tabulated(get_number_array(j.at("times"), path + ".times"),
                                        get_number_array(j.at("values"), path + ".values"));
    }
    bad(path + ".kind", "expected constant, sinusoid or table");
}

}  // namespace

json load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open config '" + path + "'", "$");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what(), "$");
    }
    if (!j.is_object()) throw ValidationError("$: config must be a JSON object", "$");
    return j;
}

void run_simulate(const json& config, const std::string& config_dir,
                  const std::string& out_dir) {
    check_keys(config, "$", {"space", "bodies", "t_end"},
               {"sigma", "masses", "mass_tables", "law", "t0", "rel_tol", "abs_tol",
                "sample_dt"});
    std::string space = get_string(config, "$", "space");
    if (space != "flat" && space != "curved")
        bad("$.space", "expected 'flat' or 'curved'");
    const bool curved = space == "curved";
    const std::size_t dims = curved ? 3 : 2;

    if (curved && !config.contains("sigma"))
        bad("$", "missing required key 'sigma' (curved scenarios need it)");
    if (!curved && config.contains("sigma"))
        bad("$.sigma", "only meaningful for curved scenarios");
    if (!curved && !config.contains("law"))
        bad("$", "missing required key 'law' (flat scenarios need it)");
    if (curved && config.contains("law"))
        bad("$.law", "curved dynamics carry their own interaction; no law applies");

    int sigma = 1;
    if (curved) {
        long s = get_integer(config, "$", "sigma");
        if (s != 1 && s != -1) bad("$.sigma", "expected 1 or -1");
        sigma = static_cast<int>(s);
    }

    const json& bodies = config.at("bodies");
    if (!bodies.is_array() || bodies.empty())
        bad("$.bodies", "expected a non-empty array");
    const std::size_t n = bodies.size();
    std::vector<double> pos, vel;
    for (std::size_t i = 0; i < n; ++i) {
        std::string bp = "$.bodies[" + std::to_string(i) + "]";
        check_keys(bodies[i], bp, {"position", "velocity"}, {});
        std::vector<double> p = get_number_array(bodies[i].at("position"), bp + ".position");
        std::vector<double> v = get_number_array(bodies[i].at("velocity"), bp + ".velocity");
        if (p.size() != dims) bad(bp + ".position", "expected " + std::to_string(dims) + " coordinates");
        if (v.size() != dims) bad(bp + ".velocity", "expected " + std::to_string(dims) + " coordinates");
        pos.insert(pos.end(), p.begin(), p.end());
        vel.insert(vel.end(), v.begin(), v.end());
    }

    const bool has_masses = config.contains("masses");
    const bool has_tables = config.contains("mass_tables");
    if (has_masses == has_tables)
        bad("$.masses", "provide exactly one of 'masses' and 'mass_tables'");
    MassModel masses = MassModel::constant({1.0});
    if (has_masses) {
        std::vector<double> m = get_number_array(config.at("masses"), "$.masses");
        if (m.size() != n) bad("$.masses", "expected one mass per body");
        masses = MassModel::constant(std::move(m));
    } else {
        const json& tables = config.at("mass_tables");
        if (!tables.is_array() || tables.size() != n)
            bad("$.mass_tables", "expected one table per body");
        std::vector<MassModel::Table> parsed(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::string tp = "$.mass_tables[" + std::to_string(i) + "]";
            check_keys(tables[i], tp, {"times", "values"}, {});
            parsed[i].times = get_number_array(tables[i].at("times"), tp + ".times");
            parsed[i].values = get_number_array(tables[i].at("values"), tp + ".values");
        }
        masses = MassModel::tabulated(std::move(parsed));
    }

    const double t0 = get_number_or(config, "$", "t0", 0.0);
    const double t_end = get_number(config, "$", "t_end");
    if (!(t_end > t0)) bad("$.t_end", "must exceed the start time");

    Trajectory traj;
    if (curved) {
        CurvedState state;
        state.t = t0;
        state.sigma = sigma;
        state.positions.resize(n);
        state.velocities.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            state.positions[i] = {pos[3 * i], pos[3 * i + 1], pos[3 * i + 2]};
            state.velocities[i] = {vel[3 * i], vel[3 * i + 1], vel[3 * i + 2]};
        }
        CurvedIntegrateOptions opts;
        opts.rel_tol = get_number_or(config, "$", "rel_tol", opts.rel_tol);
        opts.abs_tol = get_number_or(config, "$", "abs_tol", opts.abs_tol);
        opts.sample_dt = get_number_or(config, "$", "sample_dt", opts.sample_dt);
        traj = integrate_curved(state, masses, t_end, opts);
    } else {
        ForceLaw law = parse_force_law(config.at("law"), "$.law", config_dir);
        FlatState state;
        state.t = t0;
        state.positions.resize(n);
        state.velocities.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            state.positions[i] = {pos[2 * i], pos[2 * i + 1]};
            state.velocities[i] = {vel[2 * i], vel[2 * i + 1]};
        }
        IntegrateOptions opts;
        opts.rel_tol = get_number_or(config, "$", "rel_tol", opts.rel_tol);
        opts.abs_tol = get_number_or(config, "$", "abs_tol", opts.abs_tol);
        opts.sample_dt = get_number_or(config, "$", "sample_dt", opts.sample_dt);
        traj = integrate(state, masses, law, t_end, opts);
    }

    write_trajectory_csv(traj, artifact(out_dir, "trajectory.csv"));
    write_json(trajectory_diagnostics(traj), artifact(out_dir, "diagnostics.json"));
    write_plotdata_csv(traj, artifact(out_dir, "plotdata.csv"));
}

void run_construct(const json& config, const std::string& config_dir,
                   const std::string& out_dir) {
    check_keys(config, "$", {"n", "r", "a", "law", "span"},
               {"central_mass", "sample_dt"});
    HomographicProfile profile;
    long n = get_integer(config, "$", "n");
    if (n < 2) bad("$.n", "a ring needs at least 2 bodies");
    profile.n = static_cast<std::size_t>(n);
    profile.radius = parse_radius(config.at("r"), "$.r");
    profile.a = get_number(config, "$", "a");
    if (!std::isfinite(profile.a)) bad("$.a", "must be finite");
    if (config.contains("central_mass")) {
        double M = get_number(config, "$", "central_mass");
        if (!(M > 0.0)) bad("$.central_mass", "must be positive");
        profile.central_mass = M;
    }
    profile.law = parse_force_law(config.at("law"), "$.law", config_dir);

    std::vector<double> span = get_number_array(config.at("span"), "$.span");
    if (span.size() != 2 || !(span[1] > span[0]))
        bad("$.span", "expected [t0, t1] with t1 > t0");
    SynthesisOptions opts;
    opts.sample_dt = get_number_or(config, "$", "sample_dt", opts.sample_dt);
    if (!(opts.sample_dt > 0.0)) bad("$.sample_dt", "must be positive");

    Trajectory traj = synthesize_orbit(profile, span[0], span[1], opts);

    write_trajectory_csv(traj, artifact(out_dir, "trajectory.csv"));
    json report;
    report["max_residual"] = traj.max_residual;
    report["n"] = profile.n;
    report["samples"] = traj.samples();
    report["with_center"] = profile.central_mass.has_value();
    report["a"] = profile.a;
    write_json(report, artifact(out_dir, "residual_report.json"));
    write_plotdata_csv(traj, artifact(out_dir, "plotdata.csv"));
}

json run_analyze(const json& config, const std::string& config_dir,
                 const std::string& out_dir) {
    check_keys(config, "$", {"trajectory"}, {"ring_tol", "homographic_tol", "window"});
    const std::string traj_path = resolve(config_dir, get_string(config, "$", "trajectory"));
    const double ring_tol = get_number_or(config, "$", "ring_tol", 1e-6);
    if (!(ring_tol > 0.0)) bad("$.ring_tol", "must be positive");
    const double homographic_tol = get_number_or(config, "$", "homographic_tol", 1e-6);
    if (!(homographic_tol > 0.0)) bad("$.homographic_tol", "must be positive");
    long window = get_integer_or(config, "$", "window", 5);
    if (window < 1) bad("$.window", "must be at least 1");

    Trajectory traj = read_trajectory_csv(traj_path);

    json cls;
    try {
        GapSeries series = gap_series(traj, ring_tol);
        HomographicVerdict verdict = is_homographic(traj, ring_tol, homographic_tol);
        RingDecomposition first =
            traj.space == Trajectory::Space::Curved
                ? ring_decompose_curved(traj.curved_state(0), ring_tol)
                : decompose_flat(traj.flat_state(0), ring_tol);

        write_gap_series_csv(series, artifact(out_dir, "gap_series.csv"));

        cls["ring"] = true;
        cls["variant"] = first.with_center ? "with_center" : "all_on_circle";
        cls["n_ring"] = first.angles.size();
        cls["regular"] = is_regular(first, ring_tol);
        cls["homographic"] = verdict.homographic;
        cls["relative_equilibrium"] = verdict.relative_equilibrium;
        cls["alphas"] = verdict.alphas;
        cls["minima_times"] = detect_local_minima(series, static_cast<std::size_t>(window));
        cls["break_times"] = series.break_times;
        json limits = json::array();
        for (const auto& b : series.break_limits)
            limits.push_back({{"t", b.t},
                              {"left_rate", b.left_rate},
                              {"right_rate", b.right_rate}});
        cls["break_limits"] = limits;
    } catch (const NotARingError& e) {
        std::ofstream stub(artifact(out_dir, "gap_series.csv"), std::ios::binary);
        stub << "t,mu,argmin_j,r,weighted_rate,interval_id\n";
        cls = json{{"ring", false},
                   {"variant", nullptr},
                   {"n_ring", nullptr},
                   {"regular", false},
                   {"homographic", false},
                   {"relative_equilibrium", false},
                   {"alphas", json::array()},
                   {"minima_times", json::array()},
                   {"break_times", json::array()},
                   {"break_limits", json::array()},
                   {"reason", e.what()}};
    }
    write_json(cls, artifact(out_dir, "classification.json"));
    return cls;
}

void run_check_law(const json& config, const std::string& config_dir,
                   const std::string& out_dir) {
    const bool law_mode = config.contains("law");
    const bool kernel_mode = config.contains("kernel");
    if (law_mode == kernel_mode)
        bad("$", "provide exactly one of 'law' and 'kernel'");

    json report;
    if (law_mode) {
        check_keys(config, "$", {"law"}, {"s_min", "s_max", "grid_points"});
        ForceLaw law = parse_force_law(config.at("law"), "$.law", config_dir);
        double s_min = get_number_or(config, "$", "s_min", 1e-6);
        double s_max = get_number_or(config, "$", "s_max", 1e6);
        if (law.kind() == ForceLaw::Kind::Tabulated) {
            s_min = config.contains("s_min") ? s_min : law.table_min();
            s_max = config.contains("s_max") ? s_max : law.table_max();
        }
        long grid = get_integer_or(config, "$", "grid_points", 10000);
        if (!(s_min > 0.0) || !(s_max > s_min)) bad("$.s_min", "need 0 < s_min < s_max");
        if (grid < 2) bad("$.grid_points", "need at least 2 grid points");

        MonotonicityReport mono = check_sqrt_decreasing(law, s_min, s_max,
                                                        static_cast<int>(grid));
        bool positive = true;
        for (long i = 0; i < grid && positive; ++i) {
            double u = static_cast<double>(i) / static_cast<double>(grid - 1);
            double s = s_min * std::pow(s_max / s_min, u);
            if (!(law.raw(s) > 0.0)) positive = false;
        }
        report["mode"] = "law";
        report["positive"] = positive;
        report["decreasing"] = mono.decreasing;
        report["admissible"] = positive && mono.decreasing;
        report["first_violation"] =
            mono.first_violation ? json(*mono.first_violation) : json(nullptr);
    } else {
        check_keys(config, "$", {"kernel"}, {"grid_points"});
        const json& k = config.at("kernel");
        expect_object(k, "$.kernel");
        if (!k.contains("kind")) bad("$.kernel", "missing required key 'kind'");
        std::string kind = get_string(k, "$.kernel", "kind");
        long grid = get_integer_or(config, "$", "grid_points", 10000);
        if (grid < 2) bad("$.grid_points", "need at least 2 grid points");

        AngularKernel kernel = AngularKernel::curved(1, 1.0);
        if (kind == "flat") {
            check_keys(k, "$.kernel", {"kind", "radius", "law"}, {});
            kernel = AngularKernel::flat(parse_force_law(k.at("law"), "$.kernel.law", config_dir),
                                         get_number(k, "$.kernel", "radius"));
        } else if (kind == "curved") {
            check_keys(k, "$.kernel", {"kind", "sigma", "radius"}, {});
            long sigma = get_integer(k, "$.kernel", "sigma");
            if (sigma != 1 && sigma != -1) bad("$.kernel.sigma", "expected 1 or -1");
            kernel = AngularKernel::curved(static_cast<int>(sigma),
                                           get_number(k, "$.kernel", "radius"));
        } else {
            bad("$.kernel.kind", "expected 'flat' or 'curved'");
        }

        MonotonicityReport mono = check_g_decreasing(kernel, static_cast<int>(grid));
        report["mode"] = "kernel";
        report["kind"] = kind;
        report["decreasing"] = mono.decreasing;
        report["first_violation"] =
            mono.first_violation ? json(*mono.first_violation) : json(nullptr);
    }
    write_json(report, artifact(out_dir, "admissibility.json"));
}

void run_solve_config(const json& config, const std::string& config_dir,
                      const std::string& out_dir) {
    check_keys(config, "$", {"masses", "law"}, {"r", "A2", "starts", "seed"});
    std::vector<double> masses = get_number_array(config.at("masses"), "$.masses");
    ForceLaw law = parse_force_law(config.at("law"), "$.law", config_dir);

    SolveOptions opts;
    opts.r = get_number_or(config, "$", "r", 1.0);
    if (config.contains("A2")) {
        double a2 = get_number(config, "$", "A2");
        if (!(a2 > 0.0)) bad("$.A2", "must be positive");
        opts.A2 = a2;
    }
    opts.starts = static_cast<int>(get_integer_or(config, "$", "starts", 40));
    long seed = get_integer_or(config, "$", "seed", 0);
    if (seed < 0) bad("$.seed", "must be nonnegative");
    opts.seed = static_cast<std::uint64_t>(seed);

    if (const char* env = std::getenv("RINGDYN_SEED")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0')
            throw ValidationError("RINGDYN_SEED must be a nonnegative integer", "RINGDYN_SEED");
        opts.seed = static_cast<std::uint64_t>(v);
    }

    SolveReport result = solve_polygonal_configuration(masses, law, opts);

    auto dump_cfg = [](const PolygonalConfiguration& c) {
        return json{{"alphas", c.alphas},
                    {"A2", c.A2},
                    {"spin", std::sqrt(c.A2)},
                    {"residual", c.residual}};
    };
    json out;
    out["starts"] = result.starts;
    out["converged"] = result.converged;
    json sols = json::array(), stat = json::array();
    for (const auto& c : result.solutions) sols.push_back(dump_cfg(c));
    for (const auto& c : result.stationary) stat.push_back(dump_cfg(c));
    out["solutions"] = sols;
    out["stationary"] = stat;
    write_json(out, artifact(out_dir, "configurations.json"));
}

}  // namespace ringdyn
