// Acceptance suite: one pass/fail line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <future>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "obl/commands.hpp"
#include "obl/config.hpp"
#include "obl/freeboundary.hpp"
#include "obl/regularity.hpp"

using namespace obl;

namespace {

int g_failures = 0;

void report(int n, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", n, name.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

ExperimentConfig benchmark_cfg(double h, double p, double gamma) {
    ExperimentConfig cfg;
    cfg.problem.domain = Domain::interval(-1.0, 1.0);
    cfg.problem.h = h;
    cfg.problem.p = p;
    cfg.problem.gamma = gamma;
    cfg.problem.beta = 1.0;
    cfg.problem.delta = 1.0;
    cfg.problem.obstacle.kind = "zero";
    cfg.problem.boundary.kind = "deadcore";
    return cfg;
}

struct Solved {
    ProblemSpec spec;
    SolveResult result;
};

std::vector<Solved> g_solves;  // everything converged here feeds criterion 4

double benchmark_error(const ProblemSpec& spec, const GridField& u) {
    const Grid& g = *spec.grid;
    const double c = deadcore_coefficient(spec.p, spec.gamma);
    const double kappa = spec.p / (spec.p - spec.gamma);
    double err = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
        const double x = g.coord(i, 0).x;
        err = std::max(err, std::abs(u.at(i, 0) - c * std::pow(std::max(x, 0.0), kappa)));
    }
    return err;
}

// Solve one cell and fit the growth slope at the designated contact point.
struct SlopeOutcome {
    Solved solved;
    double slope = 0.0;
    bool usable = false;
};

SlopeOutcome fit_slope(const ExperimentConfig& cfg) {
    SlopeOutcome out;
    out.solved.spec = cfg.build_problem();
    out.solved.spec.validate();
    out.solved.result = solve(out.solved.spec, cfg.solver);
    if (!out.solved.result.converged) return out;
    ContactClassification cls = classify_contact(out.solved.result, out.solved.spec);
    int i = 0, j = 0;
    if (!designated_fit_point(cls, cfg.fit_center_vec(), i, j)) return out;
    const Vec x0 = out.solved.spec.grid->coord(i, j);
    const Vec grad0 = centered_gradient_at(out.solved.spec.phi, i, j);
    ExponentFit fit =
        growth_exponent(out.solved.result.u, x0, grad0, cfg.fit_radii(cfg.problem.h));
    out.slope = fit.slope;
    out.usable = fit.usable;
    return out;
}

void criterion_1_and_5() {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    bool pass = true;
    std::ostringstream detail;
    GridField u256;
    ProblemSpec spec256;
    for (double inv : {64.0, 128.0, 256.0}) {
        const double h = 1.0 / inv;
        ExperimentConfig cfg = benchmark_cfg(h, 2.0, 0.5);
        ProblemSpec spec = cfg.build_problem();
        SolveResult r = solve(spec, cfg.solver);
        const double err = benchmark_error(spec, r.u);
        const double bound = 0.5 * std::pow(h, 0.9);
        if (!r.converged || err > bound) pass = false;
        detail << "h=1/" << inv << " err=" << err << " bound=" << bound << "; ";
        if (inv == 256.0) {
            u256 = r.u;
            spec256 = spec;
        }
        g_solves.push_back({spec, std::move(r)});
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    detail << "runtime=" << secs << "s";
    if (secs >= 30.0) pass = false;
    report(1, "dead-core benchmark accuracy within 0.5*h^0.9 in under 30s", pass, detail.str());

    // criterion 5 reuses the h = 1/256 solution and adds h = 1/512
    ExperimentConfig cfg = benchmark_cfg(1.0 / 512, 2.0, 0.5);
    ProblemSpec spec512 = cfg.build_problem();
    SolveResult r512 = solve(spec512, cfg.solver);
    bool pass5 = r512.converged;
    std::ostringstream d5;
    if (pass5) {
        DyadicReport a = dyadic_decay_check(u256, Vec::d1(0.0), 1.0 / 3.0, 3);
        DyadicReport b = dyadic_decay_check(r512.u, Vec::d1(0.0), 1.0 / 3.0, 3);
        const double rel = std::abs(a.C_fitted - b.C_fitted) /
                           std::max({a.C_fitted, b.C_fitted, 1e-300});
        d5 << "C_fitted: h=1/256 -> " << a.C_fitted << ", h=1/512 -> " << b.C_fitted
           << ", variation=" << 100.0 * rel << "%";
        pass5 = a.pass && b.pass && rel < 0.20;
        const int shared = std::min(a.k_used, b.k_used);
        for (int k = 0; k < shared; ++k) {
            const double rk =
                std::abs(a.C[k] - b.C[k]) / std::max({a.C[k], b.C[k], 1e-300});
            if (rk >= 0.20) pass5 = false;
        }
        g_solves.push_back({spec512, std::move(r512)});
    } else {
        d5 << "h=1/512 solve did not converge";
    }
    report(5, "dyadic decay constant stable under grid refinement", pass5, d5.str());
}

void criterion_2() {
    struct Cell {
        double p, gamma;
    };
    const std::vector<Cell> cells = {{2.0, 0.25}, {2.0, 0.5}, {2.0, 0.75}, {3.0, 0.5}};
    std::vector<std::future<SlopeOutcome>> futures;
    for (const Cell& c : cells)
        futures.push_back(std::async(std::launch::async, [c] {
            return fit_slope(benchmark_cfg(1.0 / 256, c.p, c.gamma));
        }));
    bool pass = true;
    std::ostringstream detail;
    for (size_t k = 0; k < cells.size(); ++k) {
        SlopeOutcome out = futures[k].get();
        const double predicted = 1.0 + cells[k].gamma / (cells[k].p - cells[k].gamma);
        const bool ok = out.usable && std::abs(out.slope - predicted) <= 0.1;
        if (!ok) pass = false;
        detail << "(p=" << cells[k].p << ",gamma=" << cells[k].gamma << "): slope=" << out.slope
               << " vs " << predicted << "; ";
        if (out.solved.result.converged) g_solves.push_back(std::move(out.solved));
    }
    report(2, "free-boundary growth slope matches 1 + gamma/(p-gamma) within 0.1", pass,
           detail.str());
}

void criterion_3() {
    ExperimentConfig cfg;
    cfg.problem.domain = Domain::interval(-1.0, 1.0);
    cfg.problem.h = 1.0 / 256;
    cfg.problem.p = 2.0;
    cfg.problem.gamma = 0.75;
    cfg.problem.beta = 0.3;
    cfg.problem.delta = 1.0;
    cfg.problem.obstacle.kind = "power";
    cfg.problem.obstacle.A = 1.0;
    cfg.problem.obstacle.beta = 0.3;
    cfg.problem.boundary = cfg.problem.obstacle;  // pins the origin into contact
    SlopeOutcome out = fit_slope(cfg);
    const bool pass = out.usable && std::abs(out.slope - 1.3) <= 0.1;
    std::ostringstream detail;
    detail << "slope=" << out.slope << " vs 1.3 (obstacle branch beats gamma branch 0.6)";
    if (out.solved.result.converged) g_solves.push_back(std::move(out.solved));
    report(3, "obstacle-limited growth slope 1 + beta within 0.1", pass, detail.str());
}

void criterion_4() {
    int violations = 0;
    for (const Solved& s : g_solves)
        if (!s.result.converged || !linf_bound_holds(s.result, s.spec, s.result.tol_kkt))
            ++violations;
    std::ostringstream detail;
    detail << g_solves.size() << " converged solves, " << violations << " violations";
    report(4, "sup-norm of every solution below max(sup|g|, sup|phi|)",
           violations == 0 && !g_solves.empty(), detail.str());
}

void criterion_6() {
    bool pass = true;
    double worst = 0.0;
    for (double p : {2.0, 3.0}) {
        ProblemSpec spec;
        spec.grid = make_grid(Domain::interval(-1.0, 1.0), 1.0 / 64);
        spec.p = p;
        spec.gamma = 0.5;
        spec.delta = 1.0;
        spec.density = EnergyDensity::p_power(p, 1);
        spec.phi = GridField::from_function(spec.grid, [](const Vec&) { return 0.0; });
        spec.g = spec.phi;
        const double c = deadcore_coefficient(p, 0.5);
        const double kappa = p / (p - 0.5);
        auto v = GridField::from_function(spec.grid, [=](const Vec& x) {
            return c * std::pow(std::max(x.x, 0.0), kappa);
        });
        for (double tau : {1.0 / 3.0, 0.2})
            for (int j : {0, 1}) {
                const double d = energy_scaling_identity_check(spec, v, j, tau);
                worst = std::max(worst, d);
                if (d > 1e-12) pass = false;
            }
    }
    std::ostringstream detail;
    detail << "max relative discrepancy " << worst << " over p in {2,3}, tau in {1/3,0.2}, "
           << "j in {0,1}";
    report(6, "discrete energy rescaling identity exact on nested grids", pass, detail.str());
}

void criterion_7() {
    bool pass = true;
    std::ostringstream detail;
    for (double p : {2.0, 3.0, 4.0}) {
        EnergyDensity d = EnergyDensity::p_power(p, 2);
        const double gap = convexity_gap(d, deterministic_pairs(2, 10000, 2.0));
        detail << "p=" << p << " gap=" << gap << "; ";
        if (!(gap > 0.0)) pass = false;
    }
    // small enough that the construction-time eigenvalue sampling validates it
    const double nu_ok = 0.01;
    EnergyDensity good = EnergyDensity::appendix_a(3.0, 0.5, Vec::d2(2.0, 0.0), 1.0, nu_ok);
    const double gap_good = convexity_gap(good, deterministic_pairs(2, 10000, 2.0));
    detail << "perturbed(nu=" << nu_ok << ") gap=" << gap_good << "; ";
    if (!good.convexity_validated || !(gap_good > 0.0)) pass = false;

    // the known non-convex regime must be detected by the sampled eigenvalue bound
    EnergyDensity bad = EnergyDensity::appendix_a(3.0, 1.0, Vec::d1(0.0), 1.0, 1.5);
    std::vector<double> radii;
    for (int k = 1; k <= 24; ++k) radii.push_back(1.25 * k / 24.0);
    StructuralReport rep = check_structural_bounds(bad, radii, 32);
    detail << "nonconvex lambda_hat=" << rep.lambda_hat;
    if (!(rep.lambda_hat <= 0.0)) pass = false;
    report(7, "convexity gap positive for admissible densities, negative curvature detected",
           pass, detail.str());
}

void criterion_8() {
    struct Named {
        std::string name;
        EnergyDensity d;
    };
    const std::vector<Named> kinds = {
        {"p-power", EnergyDensity::p_power(3.0, 2)},
        {"quadratic", EnergyDensity::quadratic(2)},
        {"perturbed", EnergyDensity::appendix_a(3.0, 0.5, Vec::d2(2.0, 0.0), 1.0, 0.01)},
        {"tilted", EnergyDensity::tilted(3.0, 0.5, Vec::d2(2.0, 0.0))},
    };
    bool pass = true;
    std::ostringstream detail;
    std::mt19937_64 rng(0x0b57ac1eULL);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    for (const Named& k : kinds) {
        double worst = 0.0;
        int used = 0;
        const double s = 1e-6;
        while (used < 1000) {
            Vec xi = k.d.dim == 1 ? Vec::d1(coord(rng)) : Vec::d2(coord(rng), coord(rng));
            if (xi.norm() < 1e-3 || k.d.near_cutoff(xi, 10.0 * s)) continue;
            Jet2 jet = k.d.jet(xi);
            if (jet.hess_singular) continue;
            ++used;
            for (int ax = 0; ax < k.d.dim; ++ax) {
                Vec e = k.d.dim == 1 ? Vec::d1(1.0)
                                     : (ax == 0 ? Vec::d2(1.0, 0.0) : Vec::d2(0.0, 1.0));
                Jet2 jp = k.d.jet(xi + s * e), jm = k.d.jet(xi + (-s) * e);
                const double fd_g = (jp.value - jm.value) / (2.0 * s);
                const double ex_g = ax == 0 ? jet.grad.x : jet.grad.y;
                worst = std::max(worst, std::abs(fd_g - ex_g) / std::max(1.0, std::abs(ex_g)));
                // Hessian column from central differences of the exact gradient
                const Vec fd_col = (1.0 / (2.0 * s)) * (jp.grad - jm.grad);
                const double ex_xx = ax == 0 ? jet.hess.xx : jet.hess.xy;
                worst = std::max(worst,
                                 std::abs(fd_col.x - ex_xx) / std::max(1.0, std::abs(ex_xx)));
                if (k.d.dim == 2) {
                    const double ex_yx = ax == 0 ? jet.hess.xy : jet.hess.yy;
                    worst = std::max(
                        worst, std::abs(fd_col.y - ex_yx) / std::max(1.0, std::abs(ex_yx)));
                }
            }
        }
        detail << k.name << " worst=" << worst << "; ";
        if (worst > 1e-6) pass = false;
    }
    report(8, "analytic gradients and Hessians match central differences to 1e-6", pass,
           detail.str());
}

void criterion_9() {
    bool pass = true;
    std::ostringstream detail;
    auto g = make_grid(Domain::interval(-1.0, 1.0), 1.0 / 512);
    const double c = deadcore_coefficient(2.0, 0.5);
    auto u = GridField::from_function(
        g, [=](const Vec& x) { return c * std::pow(std::max(x.x, 0.0), 4.0 / 3.0); });
    const std::vector<double> radii = {0.5, 0.25, 0.125, 0.0625, 0.03125};

    ExponentFit base = growth_exponent(u, Vec::d1(0.0), Vec::d1(0.0), radii);
    GridField shifted(g), scaled(g);
    for (int i = 0; i < g->nx(); ++i) {
        shifted.at(i, 0) = u.at(i, 0) + 5.0 - 3.0 * g->coord(i, 0).x;
        scaled.at(i, 0) = 41.0 * u.at(i, 0);
    }
    ExponentFit sh = growth_exponent(shifted, Vec::d1(0.0), Vec::d1(-3.0), radii);
    ExponentFit sc = growth_exponent(scaled, Vec::d1(0.0), Vec::d1(0.0), radii);
    const double shift_err = std::abs(sh.slope - base.slope);
    const double scale_err = std::abs(sc.slope - base.slope);
    detail << "growth slope drift: shift=" << shift_err << " scale=" << scale_err << "; ";
    if (shift_err > 1e-12 || scale_err > 1e-12) pass = false;

    CampanatoFit cb = campanato_exponent(u, 2.0, Vec::d1(0.0), radii);
    CampanatoFit cs = campanato_exponent(scaled, 2.0, Vec::d1(0.0), radii);
    CampanatoFit ca = campanato_exponent(shifted, 2.0, Vec::d1(0.0), radii);
    const double cshift = std::abs(ca.fit.slope - cb.fit.slope);
    const double cscale = std::abs(cs.fit.slope - cb.fit.slope);
    detail << "campanato slope drift: shift=" << cshift << " scale=" << cscale << "; ";
    if (cshift > 1e-10 || cscale > 1e-10) pass = false;

    ExperimentConfig cfg = benchmark_cfg(1.0 / 32, 2.0, 0.5);
    ProblemSpec spec = cfg.build_problem();
    const bool mono =
        min_energy_monotonicity_check(spec, {0.0, 0.25, 0.5, 1.0}, cfg.solver, 1e-9);
    detail << "delta-monotonicity " << (mono ? "holds" : "violated");
    if (!mono) pass = false;
    report(9, "fit invariances exact and minimal energy monotone in delta", pass, detail.str());
}

}  // namespace

int main() {
    criterion_1_and_5();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures > 0) std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
