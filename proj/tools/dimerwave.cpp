// Command-line front end: one subcommand per run, CSV/JSON artifacts in the output directory.

#include "dimerwave/dynamics.hpp"
#include "dimerwave/io.hpp"
#include "dimerwave/jost.hpp"
#include "dimerwave/nanopteron.hpp"
#include "dimerwave/periodic.hpp"
#include "dimerwave/verification.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dimerwave;

namespace {

constexpr const char* version = "0.1.0";

struct Options {
    std::string out_dir;
    std::string config;
    double c = 1.45;
    double mu = 0.0;
    std::string mu_grid;
    double L = 40.0;
    long n = 0;
    double a = 0.0;
    int modes = 16;
    double tol = 1e-10;
    int max_iter = 60;
    bool allow_inadmissible = false;
    std::string from;
    double t_end = 0.0;
    double dt = 0.0;
    long particles = 400;
    int stride = 10;
    double x0 = -30.0;
    bool snapshots = false;
    bool quick = false;
};

/// Provenance header: program, command and every option value of the active subcommand.
json header_for(const CLI::App& sub) {
    json params = json::object();
    for (const CLI::Option* o : sub.get_options()) {
        const std::string name = o->get_lnames().empty() ? o->get_name() : o->get_lnames().front();
        if (name == "help") continue;
        if (o->count() > 0)
            params[name] = o->as<std::string>();
        else if (!o->get_default_str().empty())
            params[name] = o->get_default_str();
    }
    return {{"program", "dimerwave"}, {"version", version}, {"command", sub.get_name()}, {"params", params}};
}

fs::path out_path(const Options& o, const std::string& name) { return fs::path(o.out_dir) / name; }

void require_mu(const Options& o) {
    if (!(o.mu > 0.0 && o.mu < 1.0)) throw InvalidInput("--mu must lie in (0, 1)");
}

Vec mu_list(const Options& o) {
    if (!o.mu_grid.empty()) return io::parse_mu_grid(o.mu_grid);
    require_mu(o);
    return {o.mu};
}

SolitaryWave base_wave(const Options& o) {
    ModelParams{o.c, 0.0}.validate();
    SolitaryOptions so;
    so.L = o.L;
    if (o.n > 0) {
        const double m = static_cast<double>(o.n) / (2.0 * o.L);
        if (m != std::floor(m) || m < 1.0) throw InvalidInput("--n must be a positive multiple of 2 L");
        so.per_unit = static_cast<int>(m);
    }
    return solve_monatomic(o.c, so);
}

json wave_json(const PeriodicWave& w) {
    return {{"mu", w.mu},           {"c", w.c},           {"a", w.a},
            {"omega_mu", w.omega_mu}, {"omega_a", w.omega_a}, {"upsilon", w.upsilon},
            {"z", w.z},             {"n_modes", w.n_modes}, {"residual", w.residual},
            {"tail", w.tail},       {"coeffs1", io::to_json(w.coeffs1)}, {"coeffs2", io::to_json(w.coeffs2)}};
}

PeriodicWave wave_from_json(const json& j) {
    PeriodicWave w;
    w.mu = j.at("mu");
    w.c = j.at("c");
    w.a = j.at("a");
    w.omega_mu = j.at("omega_mu");
    w.omega_a = j.at("omega_a");
    w.upsilon = j.at("upsilon");
    w.z = j.at("z");
    w.n_modes = j.at("n_modes");
    w.coeffs1 = io::vec_from_json(j.at("coeffs1"));
    w.coeffs2 = io::vec_from_json(j.at("coeffs2"));
    if (static_cast<int>(w.coeffs1.size()) != w.n_modes + 1 || w.coeffs2.size() != w.coeffs1.size())
        throw InvalidInput("periodic wave coefficients do not match n_modes");
    return w;
}

int cmd_solitary(const Options& o, const CLI::App& sub) {
    const SolitaryWave w = base_wave(o);
    const json h = header_for(sub);
    io::write_csv(out_path(o, "solitary.csv"), h, {"x", "sigma"}, {w.grid().coordinates(), w.profile.values});
    json doc = {{"header", h},          {"c", w.c},           {"L", w.grid().L},         {"n", w.grid().n},
                {"residual", w.residual}, {"b_c", w.b_c},     {"tail_r2", w.tail_r2},    {"iterations", w.iterations},
                {"used_newton", w.used_newton}, {"peak", w.profile.values[w.grid().center()]}};
    io::write_json(out_path(o, "solitary.json"), doc);
    std::cout << "sigma_c: c = " << o.c << ", L = " << w.grid().L << ", n = " << w.grid().n
              << ", residual = " << io::format_double(w.residual) << ", b_c = " << io::format_double(w.b_c) << "\n";
    return 0;
}

int cmd_dispersion(const Options& o, const CLI::App& sub) {
    const Vec mus = mu_list(o);
    Vec om, ups, ta, lp, lo, hi;
    for (double mu : mus) {
        const DispersionData d = solve_omega(mu, o.c);
        om.push_back(d.omega_mu);
        ups.push_back(d.upsilon_mu);
        ta.push_back(d.tau_mu);
        lp.push_back(d.lambda_plus_at_omega);
        lo.push_back(d.omega_lo);
        hi.push_back(d.omega_hi);
    }
    io::write_csv(out_path(o, "dispersion.csv"), header_for(sub),
                  {"mu", "omega_mu", "upsilon_mu", "tau_mu", "lambda_plus", "omega_lo", "omega_hi"},
                  {mus, om, ups, ta, lp, lo, hi});
    for (std::size_t i = 0; i < mus.size(); ++i)
        std::cout << "mu = " << io::format_double(mus[i]) << "  omega_mu = " << io::format_double(om[i]) << "  in ["
                  << io::format_double(lo[i]) << ", " << io::format_double(hi[i]) << "]\n";
    return 0;
}

int cmd_periodic(const Options& o, const CLI::App& sub) {
    require_mu(o);
    ModelParams{o.c, o.mu}.validate(true);
    if (o.modes < 16) throw InvalidInput("--modes must be at least 16");
    PeriodicOptions po;
    po.n_modes = o.modes;
    const PeriodicWave w = solve_periodic(o.mu, o.c, o.a, po);
    const json h = header_for(sub);
    json doc = wave_json(w);
    doc["header"] = h;
    doc["newton_steps"] = w.newton_steps;
    io::write_json(out_path(o, "periodic.json"), doc);
    const Grid g = w.period_grid();
    const TwoField p = w.sample(g);
    io::write_csv(out_path(o, "periodic.csv"), h, {"x", "p1", "p2"}, {g.coordinates(), p.f1, p.f2});
    std::cout << "periodic wave: omega_a = " << io::format_double(w.omega_a) << ", modes = " << w.n_modes
              << ", residual = " << io::format_double(w.residual) << "\n";
    return 0;
}

int cmd_jost(const Options& o, const CLI::App& sub) {
    require_mu(o);
    const SolitaryWave base = base_wave(o);
    const GammaData gd = gamma_for(o.mu, base);
    const KappaData kd = kappa(gd);
    const json h = header_for(sub);
    const JostData& z1 = gd.zeta1;
    const JostData& z0 = gd.zeta0;
    io::write_csv(out_path(o, "jost_polar.csv"), h, {"x", "r1", "phi1", "r0", "phi0"}, {z1.xs, z1.r, z1.phi, z0.r, z0.phi});
    io::write_csv(out_path(o, "jost_profiles.csv"), h, {"x", "zeta1", "zeta0", "gamma", "chi"},
                  {gd.grid.coordinates(), z1.zeta, z0.zeta, gd.gamma, kd.chi});
    json doc = {{"header", h},
                {"omega_mu", gd.disp.omega_mu},
                {"r_inf", z1.r_inf},
                {"phi_inf", z1.phi_inf},
                {"r0_inf", z0.r_inf},
                {"phi0_inf", z0.phi_inf},
                {"theta_inf", gd.theta_inf},
                {"rho_inf", gd.rho_inf},
                {"fit_residual", gd.fit_residual},
                {"neumann_terms", gd.neumann_terms_used},
                {"contraction", gd.contraction},
                {"used_krylov", gd.used_krylov},
                {"correction_norm", gd.correction_norm},
                {"adjoint_residual", gd.adjoint_residual},
                {"kappa", kd.kappa},
                {"comparator", kd.comparator},
                {"sin_term", kd.sin_term}};
    io::write_json(out_path(o, "jost.json"), doc);
    std::cout << "theta_inf = " << io::format_double(gd.theta_inf) << ", phi_inf = " << io::format_double(z1.phi_inf)
              << ", kappa = " << io::format_double(kd.kappa) << ", sin = " << io::format_double(kd.sin_term) << "\n";
    return 0;
}

int cmd_kappa_scan(const Options& o, const CLI::App& sub) {
    if (o.mu_grid.empty()) throw InvalidInput("--mu-grid is required");
    const Vec mus = io::parse_mu_grid(o.mu_grid);
    const SolitaryWave base = base_wave(o);
    Vec ka, cmp, sn, om, th, ph;
    for (double mu : mus) {
        const McPoint p = evaluate_mu(mu, base);
        ka.push_back(p.kappa);
        cmp.push_back(p.comparator);
        sn.push_back(p.sin_term);
        om.push_back(p.omega);
        th.push_back(p.theta);
        ph.push_back(p.phi_inf);
    }
    io::write_csv(out_path(o, "kappa_scan.csv"), header_for(sub),
                  {"mu", "kappa", "comparator", "sin_term", "omega_mu", "theta_inf", "phi_inf"}, {mus, ka, cmp, sn, om, th, ph});
    std::cout << "kappa scan: " << mus.size() << " points\n";
    return 0;
}

int cmd_mc_scan(const Options& o, const CLI::App& sub) {
    const Vec mus = io::parse_mu_grid(o.mu_grid.empty() ? "log:8e-4:0.1:61" : o.mu_grid);
    const SolitaryWave base = base_wave(o);
    const McScan sc = scan_Mc(base, mus);
    const json h = header_for(sub);
    Vec m, ph, sn, ka;
    for (const auto& p : sc.points) {
        m.push_back(p.mu);
        ph.push_back(p.phase);
        sn.push_back(p.sin_term);
        ka.push_back(p.kappa);
    }
    io::write_csv(out_path(o, "mc_points.csv"), h, {"mu", "phase", "sin_term", "kappa"}, {m, ph, sn, ka});
    json ivs = json::array();
    for (const auto& iv : sc.intervals)
        ivs.push_back({{"lo", iv.lo}, {"hi", iv.hi}, {"clipped_lo", iv.clipped_lo}, {"clipped_hi", iv.clipped_hi}});
    io::write_json(out_path(o, "mc_intervals.json"), {{"header", h}, {"intervals", ivs}});
    for (const auto& iv : sc.intervals)
        std::cout << "M_c interval: (" << io::format_double(iv.lo) << ", " << io::format_double(iv.hi) << ")"
                  << (iv.clipped_lo || iv.clipped_hi ? "  [clipped by scan range]" : "") << "\n";
    return 0;
}

int cmd_nanopteron(const Options& o, const CLI::App& sub) {
    require_mu(o);
    if (!(o.tol > 0.0) || o.max_iter < 1) throw InvalidInput("--tol must be positive and --max-iter at least 1");
    const SolitaryWave base = base_wave(o);
    const NanopteronSetup s = make_setup(o.mu, base);
    NanopteronOptions no;
    no.tol = o.tol;
    no.max_iter = o.max_iter;
    no.require_admissible = !o.allow_inadmissible;
    const NanopteronSolution sol = iterate(s, no);
    const PhysicalProfiles prof = assemble_physical(s, sol);
    const json h = header_for(sub);
    const Grid& g = s.grid();
    io::write_csv(out_path(o, "nanopteron.csv"), h, {"x", "sigma", "eta1", "eta2", "Phi1", "Phi2", "rho1", "rho2"},
                  {g.coordinates(), prof.sigma, sol.eta.f1, sol.eta.f2, prof.phi1, prof.phi2, prof.rho1(), prof.rho2()});
    json hist = json::array();
    for (const auto& r : sol.history)
        hist.push_back({{"eta1", r.eta1_norm}, {"eta2", r.eta2_norm}, {"a", r.a}, {"change", r.change}, {"ratio", r.ratio}});
    json doc = {{"header", h},
                {"mu", o.mu},
                {"c", o.c},
                {"a", sol.a},
                {"kappa", s.kappa.kappa},
                {"sin_term", s.kappa.sin_term},
                {"b_star", s.b_star},
                {"residual_full", sol.residual_full},
                {"solvability", sol.solvability},
                {"a_consistency", sol.a_consistency},
                {"iterates", sol.iterates},
                {"eta1_norm", sol.eta1_norm},
                {"eta2_norm", sol.eta2_norm},
                {"rho_form_residual", rho_form_residual(o.mu, o.c, g, prof.rho1(), prof.rho2(), 0.5 * g.L)},
                {"history", hist},
                {"profiles",
                 {{"L", g.L},
                  {"n", g.n},
                  {"sigma", io::to_json(prof.sigma)},
                  {"upsilon1", io::to_json(prof.upsilon1)},
                  {"upsilon2", io::to_json(prof.upsilon2)}}},
                {"wave", wave_json(sol.wave)}};
    io::write_json(out_path(o, "nanopteron.json"), doc);
    std::cout << "nanopteron: mu = " << o.mu << ", iterates = " << sol.iterates << ", a = " << io::format_double(sol.a)
              << ", residual = " << io::format_double(sol.residual_full) << "\n";
    return 0;
}

int cmd_simulate(const Options& o, const CLI::App& sub) {
    const json src = io::read_json(o.from);
    const double mu = src.at("mu"), c = src.at("c"), a = src.at("a");
    const json& pj = src.at("profiles");
    const Grid g(pj.at("L").get<double>(), pj.at("n").get<std::size_t>());
    if (g.per_unit() <= 0) throw InvalidInput("stored profiles are not on a lattice grid");
    const PeriodicWave wave = wave_from_json(src.at("wave"));
    SimConfig cfg;
    cfg.mu = mu;
    cfg.c = c;
    cfg.n_particles = o.particles;
    cfg.first_index = -(o.particles / 2);
    if (cfg.first_index % 2 != 0) cfg.first_index -= 1;
    cfg.dt = o.dt > 0.0 ? o.dt : SimConfig::default_dt(mu);
    cfg.t_end = o.t_end > 0.0 ? o.t_end : 50.0 / std::abs(c);
    cfg.stride = o.stride;
    cfg.snapshots = o.snapshots;
    long probe = static_cast<long>(std::floor(o.x0)) - 26;
    if (probe % 2 != 0) probe -= 1;
    if (probe > cfg.first_index + 1) cfg.probes = {probe};
    cfg.validate();
    const double reach = std::max(std::abs(cfg.first_index - o.x0), std::abs(cfg.first_index + cfg.n_particles - o.x0));
    const PhysicalProfiles prof = physical_from_parts(g, io::vec_from_json(pj.at("sigma")), io::vec_from_json(pj.at("upsilon1")),
                                                      io::vec_from_json(pj.at("upsilon2")), a, wave, reach + 4.0);
    const Trajectory tr = run(cfg, seed_from_wave(prof, cfg, o.x0));
    const NanopteronDiagnostics d = measure_nanopteron(tr, prof, cfg, o.x0, wave.omega_mu);
    const json h = header_for(sub);
    std::vector<std::string> names = {"t", "energy", "momentum", "dissipated"};
    std::vector<Vec> cols = {tr.times, tr.energy, tr.momentum, tr.dissipated};
    for (std::size_t q = 0; q < tr.probes.size(); ++q) {
        names.push_back("rho2_site_" + std::to_string(tr.probes[q]));
        cols.push_back(tr.probe_rho2[q]);
    }
    io::write_csv(out_path(o, "trajectory.csv"), h, names, cols);
    if (o.snapshots) {
        Vec t, site, y, v;
        for (std::size_t k = 0; k < tr.snapshots.size(); ++k)
            for (std::size_t i = 0; i < tr.snapshots[k].y.size(); ++i) {
                t.push_back(tr.times[k]);
                site.push_back(static_cast<double>(tr.snapshots[k].first_index + static_cast<long>(i)));
                y.push_back(tr.snapshots[k].y[i]);
                v.push_back(tr.snapshots[k].v[i]);
            }
        io::write_csv(out_path(o, "snapshots.csv"), h, {"t", "site", "y", "v"}, {t, site, y, v});
    }
    json doc = {{"header", h},
                {"mu", mu},
                {"c", c},
                {"dt", cfg.dt},
                {"t_end", cfg.t_end},
                {"steps", tr.steps},
                {"energy_drift", tr.energy_drift},
                {"momentum_drift", tr.momentum_drift},
                {"profile_error", d.profile_error},
                {"ripple_ahead", d.ripple_ahead},
                {"ripple_behind", d.ripple_behind},
                {"ripple_frequency", std::isfinite(d.ripple_frequency) ? json(d.ripple_frequency) : json(nullptr)},
                {"omega_mu", d.omega_mu},
                {"frequency_error", std::isfinite(d.frequency_error) ? json(d.frequency_error) : json(nullptr)},
                {"core_position", d.core_position}};
    io::write_json(out_path(o, "simulation.json"), doc);
    std::cout << "simulated " << tr.steps << " steps: profile error = " << io::format_double(d.profile_error)
              << ", energy drift = " << io::format_double(tr.energy_drift) << "\n";
    return 0;
}

int cmd_verify_all(const Options& o, const CLI::App& sub) {
    ModelParams{o.c, 0.0}.validate();
    const auto reports = run_suite(o.quick ? Level::quick : Level::full, o.c);
    std::cout << report_table(reports);
    io::write_json(out_path(o, "verify.json"), {{"header", header_for(sub)}, {"checks", report_json(reports)}});
    const bool all = std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.pass; });
    std::cout << (all ? "all checks passed\n" : "some checks failed\n");
    return all ? 0 : 1;
}

/// Turn key=value lines into flag tokens; '#' starts a comment.
std::vector<std::string> config_tokens(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open config file " + path);
    std::vector<std::string> toks;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidInput("config line " + std::to_string(lineno) + " is not key=value");
        std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        std::replace(key.begin(), key.end(), '_', '-');
        if (val == "true") {
            toks.push_back("--" + key);
        } else if (val != "false") {
            toks.push_back("--" + key);
            toks.push_back(val);
        }
    }
    return toks;
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Nanopteron traveling waves in mass-dimer FPUT lattices"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    const std::map<std::string, std::string> help = {
        {"solitary", "monatomic solitary wave sigma_c"},
        {"dispersion", "critical frequency omega_mu, upsilon_mu, tau_mu"},
        {"periodic", "periodic traveling wave a p_mu^a"},
        {"jost", "Jost solutions, gamma_mu, theta_inf and kappa_mu"},
        {"kappa-scan", "kappa_mu and its closed form along a mu grid"},
        {"mc-scan", "admissible intervals |sin(omega theta)| > 1/2"},
        {"nanopteron", "full fixed point sigma + a p + eta"},
        {"simulate", "lattice dynamics seeded with a computed wave"},
        {"verify-all", "run all acceptance checks"}};
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, text] : help) {
        CLI::App* s = app.add_subcommand(name, text);
        s->add_option("--out", o.out_dir, "output directory (default $DIMERWAVE_OUTPUT_DIR or .)");
        s->add_option("--config", o.config, "key=value file; command-line flags override it");
        subs[name] = s;
    }
    auto add_c = [&](CLI::App* s, bool required) {
        auto* opt = s->add_option("--c", o.c, "wave speed, sqrt(2) < |c| <= 1.6");
        if (required) opt->required();
    };
    auto add_grid = [&](CLI::App* s) {
        s->add_option("--L", o.L, "initial half length of the core grid (doubled until the tail decays)")->capture_default_str();
        s->add_option("--n", o.n, "points on the core grid (multiple of 2 L)");
    };
    add_c(subs["solitary"], true);
    add_grid(subs["solitary"]);
    add_c(subs["dispersion"], true);
    subs["dispersion"]->add_option("--mu", o.mu, "mass ratio");
    subs["dispersion"]->add_option("--mu-grid", o.mu_grid, "log:a:b:n or list:x,y,...");
    add_c(subs["periodic"], true);
    subs["periodic"]->add_option("--mu", o.mu, "mass ratio")->required();
    subs["periodic"]->add_option("--a", o.a, "amplitude")->capture_default_str();
    subs["periodic"]->add_option("--modes", o.modes, "initial Fourier modes")->capture_default_str();
    add_c(subs["jost"], true);
    subs["jost"]->add_option("--mu", o.mu, "mass ratio")->required();
    add_grid(subs["jost"]);
    add_c(subs["kappa-scan"], true);
    subs["kappa-scan"]->add_option("--mu-grid", o.mu_grid, "log:a:b:n or list:x,y,...")->required();
    add_c(subs["mc-scan"], true);
    subs["mc-scan"]->add_option("--mu-grid", o.mu_grid, "scan grid (default log:8e-4:0.1:61)");
    add_c(subs["nanopteron"], true);
    subs["nanopteron"]->add_option("--mu", o.mu, "mass ratio")->required();
    subs["nanopteron"]->add_option("--tol", o.tol, "iteration tolerance")->capture_default_str();
    subs["nanopteron"]->add_option("--max-iter", o.max_iter, "iteration limit")->capture_default_str();
    subs["nanopteron"]->add_flag("--allow-inadmissible", o.allow_inadmissible, "attempt mu outside M_c");
    add_grid(subs["nanopteron"]);
    subs["simulate"]->add_option("--from", o.from, "nanopteron.json written by the nanopteron command")->required();
    subs["simulate"]->add_option("--t-end", o.t_end, "final time (default 50 / c)");
    subs["simulate"]->add_option("--dt", o.dt, "time step (default 0.01 sqrt(mu))");
    subs["simulate"]->add_option("--particles", o.particles, "number of particles (even)")->capture_default_str();
    subs["simulate"]->add_option("--stride", o.stride, "record every stride steps")->capture_default_str();
    subs["simulate"]->add_option("--x0", o.x0, "initial wave position")->capture_default_str();
    subs["simulate"]->add_flag("--snapshots", o.snapshots, "write full states at every record");
    add_c(subs["verify-all"], false);
    subs["verify-all"]->add_flag("--quick", o.quick, "reduced sweeps");

    // Config values go right after the subcommand so later command-line flags win.
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        for (std::size_t i = 0; i < args.size(); ++i) {
            std::string path;
            if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
            if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
            if (path.empty()) continue;
            const auto pos = std::find_if(args.begin(), args.end(), [&](const std::string& a) { return subs.count(a) > 0; });
            if (pos == args.end()) break;
            const auto toks = config_tokens(path);
            args.insert(pos + 1, toks.begin(), toks.end());
            break;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 2;
    }
    if (o.out_dir.empty()) o.out_dir = io::default_output_dir().string();

    try {
        for (const auto& [name, s] : subs) {
            if (!s->parsed()) continue;
            if (name == "solitary") return cmd_solitary(o, *s);
            if (name == "dispersion") return cmd_dispersion(o, *s);
            if (name == "periodic") return cmd_periodic(o, *s);
            if (name == "jost") return cmd_jost(o, *s);
            if (name == "kappa-scan") return cmd_kappa_scan(o, *s);
            if (name == "mc-scan") return cmd_mc_scan(o, *s);
            if (name == "nanopteron") return cmd_nanopteron(o, *s);
            if (name == "simulate") return cmd_simulate(o, *s);
            if (name == "verify-all") return cmd_verify_all(o, *s);
        }
    } catch (const InvalidInput& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
