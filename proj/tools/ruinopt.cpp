#include "annuity/checks.hpp"
#include "annuity/fd_solver.hpp"
#include "annuity/mc_simulate.hpp"
#include "annuity/regime.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

namespace {

using namespace annuity;

struct CommonOpts {
    ModelParams params;
    bool restricted = false;
    std::string out;
    std::string config;
    std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--r", o.params.r, "riskless rate");
    cmd->add_option("--mu", o.params.mu, "risky drift");
    cmd->add_option("--sigma", o.params.sigma, "risky volatility");
    cmd->add_option("--lambda-s", o.params.lambda_s, "subjective hazard rate");
    cmd->add_option("--lambda-o", o.params.lambda_o, "objective (pricing) hazard rate");
    cmd->add_option("--c", o.params.c, "consumption rate");
    cmd->add_option("--p", o.params.p, "surrender charge fraction");
    cmd->add_flag("--restricted", o.restricted, "impose the no-borrowing restriction w >= 0");
    cmd->add_option("--out", o.out, "output path (default stdout)");
    cmd->add_option("--config", o.config, "flat key=value parameter file; flags take precedence");
    cmd->add_option("--seed", o.seed, "RNG seed");
}

// Flags win over the config file: only keys whose flag was not passed apply.
void apply_config(CLI::App* cmd, CommonOpts& o) {
    if (o.config.empty()) return;
    std::ifstream in(o.config);
    if (!in) throw std::invalid_argument("cannot open config file: " + o.config);
    std::map<std::string, double*> keys = {
        {"r", &o.params.r},           {"mu", &o.params.mu},
        {"sigma", &o.params.sigma},   {"lambda_s", &o.params.lambda_s},
        {"lambda_o", &o.params.lambda_o}, {"c", &o.params.c},
        {"p", &o.params.p}};
    std::map<std::string, std::string> flag_of = {
        {"r", "--r"},           {"mu", "--mu"},     {"sigma", "--sigma"},
        {"lambda_s", "--lambda-s"}, {"lambda_o", "--lambda-o"}, {"c", "--c"},
        {"p", "--p"}};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        }
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        auto it = keys.find(key);
        if (it == keys.end())
            throw std::invalid_argument("config: unknown key '" + key + "'");
        if (cmd->count(flag_of[key]) == 0) *it->second = std::stod(val);
    }
}

std::ostream& open_out(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::invalid_argument("cannot open output path: " + path);
    return file;
}

// Investment amount for CSV output, defined by continuity at the interval
// endpoints and, in the purchase region, by the post-purchase boundary state.
double curve_pi(const RegimeSolution& sol, double w, double a) {
    if (sol.regime() == Regime::restricted_low_p) {
        const auto& s = sol.restricted_low();
        if (!s.in_region_d1(w, a)) {
            auto j = s.jump_purchase(w, a);
            if (j.post.a >= sol.params().c * (1.0 - 1e-9)) return 0.0;
            a = j.post.a;
            w = std::min(j.post.w, s.purchase_boundary(a));
        }
    }
    double wl = sol.lower_level(a);
    double wh = (sol.regime() == Regime::restricted_low_p)
                    ? sol.restricted_low().purchase_boundary(a)
                    : sol.safe_level(a);
    double nudge = 1e-12 * (sol.safe_level(a) - wl + 1.0);
    double lo = (sol.regime() == Regime::unrestricted) ? wl + nudge : 0.0;
    double wq = std::min(std::max(w, lo), wh - nudge);
    return sol.pi_star(wq, a);
}

int cmd_constants(const CommonOpts& o) {
    o.params.validate();
    DerivedConstants k = derive_constants(o.params);
    std::ofstream file;
    std::ostream& os = open_out(o.out, file);
    os << std::setprecision(17);
    os << "a_bar " << k.a_bar << "\n";
    os << "m " << k.m << "\n";
    os << "b1 " << k.b1 << "\n";
    os << "b2 " << k.b2 << "\n";
    double x = solve_x_high(o.params, k);
    double pstar = p_star_high(o.params, k, x);
    os << "p_star " << pstar << "\n";
    os << "regime " << regime_name(classify(o.params, o.restricted)) << "\n";
    return 0;
}

int cmd_curve(const CommonOpts& o, double a, int n) {
    RegimeSolution sol = RegimeSolution::solve(o.params, o.restricted);
    double wl = sol.lower_level(a), wh = sol.safe_level(a);
    std::ofstream file;
    std::ostream& os = open_out(o.out, file);
    os << std::setprecision(17);
    os << "w,psi,pi_star\n";
    for (int i = 0; i < n; ++i) {
        double w = wl + (wh - wl) * i / (n - 1.0);
        os << w << "," << sol.psi(w, a) << "," << curve_pi(sol, w, a) << "\n";
    }
    return 0;
}

int cmd_bp_sweep(const CommonOpts& o, int n) {
    o.params.validate();
    DerivedConstants k = derive_constants(o.params);
    double xh = solve_x_high(o.params, k);
    double pstar = p_star_high(o.params, k, xh);
    std::ofstream file;
    std::ostream& os = open_out(o.out, file);
    os << std::setprecision(17);
    os << "p,b\n";
    for (int i = 1; i <= n; ++i) {
        ModelParams mp = o.params;
        mp.p = pstar * i / n;
        double x = solve_x_low(mp, k);
        double b = purchase_slope_b(ode_alphas(mp, k, x));
        os << mp.p << "," << b << "\n";
    }
    return 0;
}

int cmd_verify(const CommonOpts& o, const std::string& suite, long paths, int grid_nw,
               int grid_na) {
    RegimeSolution sol = RegimeSolution::solve(o.params, o.restricted);
    CheckReport rep;
    bool all = (suite == "all");
    if (all || suite == "residual")
        rep.append(check_hjb_residual(sol, interior_test_points(sol, 5, 3)));
    if (all || suite == "vi")
        rep.append(check_variational_inequalities(sol, interior_test_points(sol, 5, 3)));
    if (all || suite == "shape") {
        for (int j = 0; j < 5; ++j)
            rep.append(check_shape(sol, 0.18 * j * sol.a_limit(), 100));
    }
    if (all || suite == "seam") {
        if (!o.restricted)
            throw std::invalid_argument("verify --suite seam requires --restricted");
        DerivedConstants k = sol.consts();
        double pstar = p_star_high(o.params, k, solve_x_high(o.params, k));
        ModelParams hi = o.params;
        hi.p = pstar;
        ModelParams lo = o.params;
        lo.p = pstar - 1e-6;
        RestrictedHighSolution sh = RestrictedHighSolution::solve(hi);
        RestrictedLowSolution sl = RestrictedLowSolution::solve(lo);
        double gap = 0.0;
        for (int j = 0; j < 5; ++j) {
            double a = 0.18 * j * o.params.c;
            for (int i = 0; i < 5; ++i) {
                double w = (0.1 + 0.2 * i) * sh.safe_level(a);
                gap = std::max(gap, std::abs(sh.psi(w, a) - sl.psi(w, a)));
            }
        }
        rep.lines.push_back({"seam_psi_gap", "grid5x5", gap, 1e-3, gap < 1e-3, false});
    }
    if (all || suite == "fd") {
        GridResult g = fd_solve(o.params, sol.consts(), sol.regime(), {grid_nw, grid_na});
        double gap = g.sup_gap(sol);
        rep.lines.push_back({"fd_supgap", "grid", gap, 0.02, gap <= 0.02, false});
        double inc = g.max_row_increase();
        rep.lines.push_back({"fd_row_monotone", "grid", inc, 1e-9, inc <= 1e-9, false});
    }
    if (all || suite == "mc") {
        for (int i = 1; i <= 3; ++i) {
            double a = 0.2 * o.params.c * (i - 1);
            double w = sol.lower_level(a) + 0.25 * i * (sol.safe_level(a) - sol.lower_level(a));
            SimConfig sc;
            sc.n_paths = paths;
            sc.seed = o.seed;
            SimResult r = mc_simulate(o.params, sol.consts(), sol, {w, a}, sc);
            double ref = sol.psi(w, a);
            double tol = std::max(3.0 * r.std_err, 0.01);
            std::ostringstream loc;
            loc << std::setprecision(6) << "w=" << w << ",a=" << a << ",se=" << r.std_err;
            rep.lines.push_back({"mc_gap", loc.str(), std::abs(r.estimate - ref), tol,
                                 std::abs(r.estimate - ref) <= tol, false});
        }
    }
    std::ofstream file;
    std::ostream& os = open_out(o.out, file);
    rep.print(os);
    return rep.all_pass() ? 0 : 1;
}

int cmd_simulate(const CommonOpts& o, double w, double a, long paths, double dt, double horizon,
                 long threads, bool per_path) {
    RegimeSolution sol = RegimeSolution::solve(o.params, o.restricted);
    SimConfig sc;
    sc.n_paths = paths;
    sc.dt = dt;
    sc.horizon = horizon;
    sc.seed = o.seed;
    sc.n_threads = threads;
    SimResult r = mc_simulate(o.params, sol.consts(), sol, {w, a}, sc, per_path);
    std::ofstream file;
    std::ostream& os = open_out(o.out, file);
    os << std::setprecision(17);
    if (per_path) {
        os << "path,outcome,tau\n";
        const char* names[] = {"ruin", "safe", "censored"};
        for (const auto& pr : r.paths)
            os << pr.index << "," << names[static_cast<int>(pr.outcome)] << "," << pr.tau << "\n";
    } else {
        os << "estimate " << r.estimate << "\n";
        os << "std_err " << r.std_err << "\n";
        os << "n_ruin " << r.n_ruin << "\n";
        os << "n_safe " << r.n_safe << "\n";
        os << "n_censored " << r.n_censored << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-form minimum lifetime-ruin probability with reversible annuities"};
    app.require_subcommand(1);

    CommonOpts o;
    double curve_a = 0.0;
    int curve_n = 200;
    int sweep_n = 50;
    std::string suite = "all";
    long paths = 1000;
    int grid_nw = 201, grid_na = 51;
    double sim_w = 0.0, sim_a = 0.0, sim_dt = 1e-3, sim_horizon = 200.0;
    long sim_paths = 100000, sim_threads = 0;
    bool per_path = false;

    auto* c_const = app.add_subcommand("constants", "print derived constants and regime");
    auto* c_curve = app.add_subcommand("curve", "emit w,psi,pi_star CSV at fixed income a");
    c_curve->add_option("--a", curve_a, "annuity income level");
    c_curve->add_option("--n", curve_n, "number of rows")->check(CLI::Range(2, 1000000));
    auto* c_sweep = app.add_subcommand("bp-sweep", "emit p,b CSV over p in (0, p*]");
    c_sweep->add_option("--n", sweep_n, "number of rows")->check(CLI::Range(2, 1000000));
    auto* c_verify = app.add_subcommand("verify", "run verification suites");
    c_verify->add_option("--suite", suite, "residual|vi|shape|seam|fd|mc|all");
    c_verify->add_option("--paths", paths, "MC paths for --suite mc");
    c_verify->add_option("--grid-nw", grid_nw, "FD wealth nodes");
    c_verify->add_option("--grid-na", grid_na, "FD income nodes");
    auto* c_sim = app.add_subcommand("simulate", "Monte-Carlo ruin probability from one state");
    c_sim->add_option("--w", sim_w, "starting wealth");
    c_sim->add_option("--a", sim_a, "starting annuity income");
    c_sim->add_option("--paths", sim_paths, "number of paths");
    c_sim->add_option("--dt", sim_dt, "Euler step (years)");
    c_sim->add_option("--horizon", sim_horizon, "max simulated years");
    c_sim->add_option("--threads", sim_threads, "worker threads (0 = all cores)");
    c_sim->add_flag("--per-path", per_path, "emit per-path CSV instead of the summary");

    for (auto* cmd : {c_const, c_curve, c_sweep, c_verify, c_sim}) add_common(cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        CLI::App* cmd = app.get_subcommands().front();
        apply_config(cmd, o);
        o.params.validate();
        if (cmd == c_const) return cmd_constants(o);
        if (cmd == c_curve) return cmd_curve(o, curve_a, curve_n);
        if (cmd == c_sweep) return cmd_bp_sweep(o, sweep_n);
        if (cmd == c_verify) return cmd_verify(o, suite, paths, grid_nw, grid_na);
        if (cmd == c_sim) return cmd_simulate(o, sim_w, sim_a, sim_paths, sim_dt, sim_horizon,
                                              sim_threads, per_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
