#include "annuity/mc_simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

namespace annuity {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256++, seeded by iterating splitmix64 as its authors recommend.
struct Xoshiro256pp {
    std::uint64_t s[4];

    explicit Xoshiro256pp(std::uint64_t seed) {
        for (auto& si : s) si = seed = splitmix64(seed);
    }

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t operator()() {
        std::uint64_t out = rotl(s[0] + s[3], 23) + s[0];
        std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return out;
    }
};

// Standard normal draws via the Marsaglia polar method with one cached value,
// on top of a per-path PRNG stream.
struct NormalSampler {
    Xoshiro256pp eng;
    double spare = 0.0;
    bool has_spare = false;

    explicit NormalSampler(std::uint64_t s) : eng(s) {}

    double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

    double operator()() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare = v * f;
        has_spare = true;
        return u * f;
    }
};

// Piecewise-linear table of pi as a function of w on a uniform grid, so each
// lookup is O(1). Built by sampling the dual variable (no root finding:
// w = slope(y), pi = pi_from_dual(y)) and resampling onto the uniform grid.
struct PiTable {
    std::vector<double> pi, dpi;
    double w0 = 0.0, inv_dw = 0.0;
    int n = 0;

    template <class Sol>
    void build(const Sol& sol, double a, double y_lo, double y_hi, int n_scan = 4097,
               int n_grid = 16385) {
        DualSection ds = sol.dual_section(a);
        std::vector<double> ws(n_scan), ps(n_scan);
        double lr = std::log(y_hi / y_lo);
        for (int i = 0; i < n_scan; ++i) {
            // y descending so that w ascends
            double y = y_hi * std::exp(-lr * i / (n_scan - 1.0));
            ws[i] = ds.slope(y);
            ps[i] = sol.pi_from_dual(y, a);
        }

        n = n_grid;
        pi.resize(n);
        dpi.resize(n);
        w0 = ws.front();
        double dw = (ws.back() - w0) / (n - 1);
        inv_dw = 1.0 / dw;
        int k = 0;
        for (int i = 0; i < n; ++i) {
            double wq = w0 + dw * i;
            while (k + 2 < n_scan && ws[k + 1] <= wq) ++k;
            double t = (wq - ws[k]) / (ws[k + 1] - ws[k]);
            t = std::clamp(t, 0.0, 1.0);
            pi[i] = ps[k] + t * (ps[k + 1] - ps[k]);
        }
        for (int i = 0; i + 1 < n; ++i) dpi[i] = pi[i + 1] - pi[i];
        dpi[n - 1] = 0.0;
    }

    double operator()(double wq) const {
        double u = (wq - w0) * inv_dw;
        if (u <= 0.0) return pi.front();
        if (u >= n - 1.0) return pi.back();
        int i = static_cast<int>(u);
        return pi[i] + (u - i) * dpi[i];
    }

    double max_pi() const { return *std::max_element(pi.begin(), pi.end()); }
};

constexpr double kAEps = 1e-12;
constexpr double kWEps = 1e-12;

}  // namespace

SimResult mc_simulate(const ModelParams& params, const DerivedConstants& consts,
                      const RegimeSolution& solution, PortfolioState start, const SimConfig& sim,
                      bool record_paths) {
    params.validate();
    if (!(sim.dt > 0) || sim.n_paths < 1 || !(sim.horizon > 0))
        throw std::invalid_argument("SimConfig: need dt > 0, n_paths >= 1, horizon > 0");

    const Regime regime = solution.regime();
    const bool unres = (regime == Regime::unrestricted);
    const double abar = consts.a_bar;
    const double excess = params.mu - params.r;

    // The restricted pi surface is self-similar, pi(w,a) = (c-a)/c * pi(c*w/(c-a), 0),
    // so one table at a=0 serves every income level; the unrestricted table is
    // built at the start's income level, which stays constant along paths.
    PiTable table;
    double domain_width;
    if (unres) {
        const auto& s = solution.unrestricted();
        if (!(start.a >= 0 && start.a <= s.a_max()))
            throw std::domain_error("mc_simulate: start.a outside [0, a_max]");
        table.build(s, start.a, s.y_s(start.a), s.y_underbar(start.a));
        domain_width = s.safe_level(start.a) - s.ruin_level(start.a);
    } else if (regime == Regime::restricted_high_p) {
        const auto& s = solution.restricted_high();
        table.build(s, 0.0, s.y_s(0.0), s.y0(0.0));
        domain_width = s.safe_level(0.0);
    } else {
        const auto& s = solution.restricted_low();
        table.build(s, 0.0, s.y_b(0.0), s.y0(0.0));
        domain_width = s.safe_level(0.0);
    }
    if (!unres && !(start.a >= 0 && start.w >= 0))
        throw std::domain_error("mc_simulate: restricted start needs w >= 0, a >= 0");

    {
        double wmax = std::max(std::abs(domain_width), std::abs(start.w));
        double max_drift = params.r * wmax + excess * table.max_pi() + params.c + start.a;
        if (max_drift * sim.dt > domain_width) {
            std::ostringstream os;
            os << "mc_simulate: dt " << sim.dt << " too large, worst-case drift step "
               << max_drift * sim.dt << " exceeds domain width " << domain_width;
            throw std::invalid_argument(os.str());
        }
    }

    const auto* low = (regime == Regime::restricted_low_p) ? &solution.restricted_low() : nullptr;
    const double b_slope = low ? low->b() : 0.0;
    const double sqdt = std::sqrt(sim.dt);
    const long max_steps = static_cast<long>(std::ceil(sim.horizon / sim.dt));

    // per-step coefficients: dw = w*rdt + pi*(edt + sig_sqdt*z) + (a-c)*dt
    const double rdt = params.r * sim.dt;
    const double edt = excess * sim.dt;
    const double sig_sqdt = params.sigma * sqdt;

    double unres_ruin = 0.0, unres_safe = 0.0;
    if (unres) {
        const auto& s = solution.unrestricted();
        unres_ruin = s.ruin_level(start.a);
        unres_safe = s.safe_level(start.a);
    }

    // Each path writes only its own slot, so the reduction below is bitwise
    // identical no matter how paths are distributed over threads.
    std::vector<double> weights(sim.n_paths);
    std::vector<double> taus(sim.n_paths);
    std::vector<unsigned char> outcomes(sim.n_paths);

    auto run_path = [&](long idx) {
        NormalSampler gauss(splitmix64(sim.seed ^ (0x9e3779b97f4a7c15ULL * (idx + 1))));

        double w = start.w;
        long nsteps = 0;
        PathOutcome outcome = PathOutcome::censored;

        if (unres) {
            for (;;) {
                if (w <= unres_ruin + kWEps * (1.0 + std::abs(w))) {
                    outcome = PathOutcome::ruin;
                    break;
                }
                if (w >= unres_safe) {
                    outcome = PathOutcome::safe;
                    break;
                }
                if (nsteps == max_steps) break;  // horizon reached: censored
                double pi = table(w);
                w += w * rdt + pi * (edt + sig_sqdt * gauss()) + (start.a - params.c) * sim.dt;
                ++nsteps;
            }
        } else {
            double a = start.a;
            // quantities that change only when the income level changes
            double cma, w_safe, wb, scale, inv_scale, amc_dt;
            auto refresh = [&] {
                cma = params.c - a;
                w_safe = cma * abar;
                wb = b_slope * cma;
                scale = cma / params.c;
                inv_scale = (cma > 0.0) ? params.c / cma : 0.0;
                amc_dt = (a - params.c) * sim.dt;
            };
            refresh();

            for (;;) {
                if (low && a < params.c && w > wb + kWEps) {
                    // Purchase down to the boundary when above it.
                    double dA = (w - wb) / (abar - b_slope);
                    dA = std::min(dA, params.c - a);
                    a += dA;
                    w -= abar * dA;
                    refresh();
                }
                if (w >= w_safe || a >= params.c) {
                    outcome = PathOutcome::safe;
                    break;
                }
                if (w <= kWEps && a <= kAEps) {
                    outcome = PathOutcome::ruin;
                    break;
                }
                if (nsteps == max_steps) break;  // horizon reached: censored

                double pi = scale * table(w * inv_scale);
                w += w * rdt + pi * (edt + sig_sqdt * gauss()) + amc_dt;
                ++nsteps;

                if (w < 0.0) {
                    // Surrender enough income to restore w = 0, capped at what is held.
                    double needed = -w / ((1.0 - params.p) * abar);
                    double sell = std::min(needed, a);
                    a -= sell;
                    w += (1.0 - params.p) * abar * sell;
                    if (w < -kWEps) {  // deficit remains with no income left
                        w = 0.0;
                        a = 0.0;
                        outcome = PathOutcome::ruin;
                        break;
                    }
                    w = std::max(w, 0.0);
                    refresh();
                }
            }
        }

        double t = nsteps * sim.dt;
        outcomes[idx] = static_cast<unsigned char>(outcome);
        taus[idx] = (outcome == PathOutcome::censored) ? sim.horizon : t;
        weights[idx] = (outcome == PathOutcome::ruin) ? std::exp(-params.lambda_s * t) : 0.0;
    };

    long n_threads = sim.n_threads > 0 ? sim.n_threads
                                       : static_cast<long>(std::thread::hardware_concurrency());
    n_threads = std::clamp(n_threads, 1L, sim.n_paths);
    if (n_threads == 1) {
        for (long idx = 0; idx < sim.n_paths; ++idx) run_path(idx);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (long tid = 0; tid < n_threads; ++tid) {
            pool.emplace_back([&, tid] {
                for (long idx = tid; idx < sim.n_paths; idx += n_threads) run_path(idx);
            });
        }
        for (auto& th : pool) th.join();
    }

    SimResult res;
    double sum = 0.0, sum_sq = 0.0;
    if (record_paths) res.paths.reserve(sim.n_paths);
    for (long idx = 0; idx < sim.n_paths; ++idx) {
        PathOutcome outcome = static_cast<PathOutcome>(outcomes[idx]);
        if (outcome == PathOutcome::ruin)
            ++res.n_ruin;
        else if (outcome == PathOutcome::safe)
            ++res.n_safe;
        else
            ++res.n_censored;
        sum += weights[idx];
        sum_sq += weights[idx] * weights[idx];
        if (record_paths) res.paths.push_back({idx, outcome, taus[idx]});
    }

    const double n = static_cast<double>(sim.n_paths);
    res.estimate = sum / n;
    double var = std::max(sum_sq / n - res.estimate * res.estimate, 0.0);
    res.std_err = (sim.n_paths > 1) ? std::sqrt(var / (n - 1.0)) : 0.0;
    return res;
}

}  // namespace annuity
