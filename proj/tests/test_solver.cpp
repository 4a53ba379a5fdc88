#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "obl/config.hpp"
#include "obl/solver.hpp"

using namespace obl;

namespace {

// dead-core problem on [-1,1]: phi = 0, boundary from the explicit profile
ProblemSpec benchmark_spec(double h, double p = 2.0, double gamma = 0.5) {
    ProblemSpec spec;
    spec.grid = make_grid(Domain::interval(-1.0, 1.0), h);
    spec.p = p;
    spec.gamma = gamma;
    spec.delta = 1.0;
    spec.beta = 1.0;
    spec.density = EnergyDensity::p_power(p, 1);
    spec.phi = GridField::from_function(spec.grid, [](const Vec&) { return 0.0; });
    const double kappa = p / (p - gamma);
    const double c = deadcore_coefficient(p, gamma);
    spec.g = GridField::from_function(spec.grid, [=](const Vec& x) {
        return c * std::pow(std::max(x.x, 0.0), kappa);
    });
    return spec;
}

double exact_profile(double x, double p, double gamma) {
    return deadcore_coefficient(p, gamma) * std::pow(std::max(x, 0.0), p / (p - gamma));
}

}  // namespace

TEST_CASE("spec validation") {
    ProblemSpec spec = benchmark_spec(0.25);
    CHECK_NOTHROW(spec.validate());
    spec.gamma = 1.5;
    CHECK_THROWS_AS(spec.validate(), std::domain_error);
    spec.gamma = 0.5;
    spec.p = 1.5;
    CHECK_THROWS_AS(spec.validate(), std::domain_error);
    spec.p = 2.0;
    spec.g.at(0, 0) = 5.0;
    spec.phi.at(0, 0) = 6.0;  // boundary data below obstacle
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    CHECK(benchmark_spec(0.25).tau() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("discrete energy closed forms") {
    // delta = 0, affine interpolant: energy = (g(1)-g(0))^2/2 exactly
    ProblemSpec spec;
    spec.grid = make_grid(Domain::interval(0.0, 1.0), 0.125);
    spec.p = 2.0;
    spec.gamma = 0.5;
    spec.delta = 0.0;
    spec.density = EnergyDensity::p_power(2.0, 1);
    spec.phi = GridField::from_function(spec.grid, [](const Vec&) { return -10.0; });
    spec.g = GridField::from_function(spec.grid, [](const Vec& x) { return 0.3 + 0.9 * x.x; });
    auto v = GridField::from_function(spec.grid, [](const Vec& x) { return 0.3 + 0.9 * x.x; });
    CHECK(discrete_energy(spec, v, 0.0) == doctest::Approx(0.9 * 0.9 / 2.0).epsilon(1e-12));

    // v = phi: singular term contributes nothing, any eps offset cancels
    ProblemSpec s2 = spec;
    s2.delta = 1.0;
    auto vphi = spec.phi;
    for (double eps : {0.0, 1e-3})
        CHECK(discrete_energy(s2, vphi, eps) == doctest::Approx(0.0).epsilon(1e-12));

    // v = 1 at interior nodes, 0 at the ends: independent direct summation
    ProblemSpec s3 = spec;
    s3.delta = 1.0;
    s3.phi = GridField::from_function(spec.grid, [](const Vec&) { return 0.0; });
    s3.g = GridField::from_function(spec.grid, [](const Vec&) { return 0.0; });
    GridField one(spec.grid);
    const Grid& g = *spec.grid;
    for (int i = 1; i < g.nx() - 1; ++i) one.at(i, 0) = 1.0;
    double oracle = 0.0;
    for (int i = 0; i < g.nx() - 1; ++i) {
        const double dv = (one.at(i + 1, 0) - one.at(i, 0)) / g.h();
        oracle += 0.5 * dv * dv * g.h();
    }
    for (int i = 0; i < g.nx(); ++i) oracle += std::sqrt(one.at(i, 0)) * g.h();
    CHECK(discrete_energy(s3, one, 0.0) == doctest::Approx(oracle).epsilon(1e-12));

    // field below the obstacle is rejected
    GridField bad(spec.grid);
    for (int i = 0; i < g.nx(); ++i) bad.at(i, 0) = -1.0;
    CHECK_THROWS_AS(discrete_energy(s3, bad, 0.0), std::invalid_argument);
}

TEST_CASE("inactive obstacle with zero boundary gives the zero minimizer") {
    for (int dim = 1; dim <= 2; ++dim) {
        ProblemSpec spec;
        spec.grid = dim == 1 ? make_grid(Domain::interval(-1.0, 1.0), 1.0 / 16)
                             : make_grid(Domain::rectangle(0.0, 1.0, 0.0, 1.0), 1.0 / 8);
        spec.p = 2.0;
        spec.gamma = 0.5;
        spec.delta = 0.0;
        spec.density = EnergyDensity::p_power(2.0, dim);
        spec.phi = GridField::from_function(spec.grid, [](const Vec&) { return -1.0; });
        spec.g = GridField::from_function(spec.grid, [](const Vec&) { return 0.0; });
        SolveResult r = solve(spec, SolverConfig{});
        CHECK(r.converged);
        const Grid& g = *spec.grid;
        for (int j = 0; j < g.ny(); ++j)
            for (int i = 0; i < g.nx(); ++i)
                if (g.active(i, j)) CHECK(std::abs(r.u.at(i, j)) < 1e-7);
    }
}

TEST_CASE("benchmark on the half interval") {
    const double h = 1.0 / 64;
    ProblemSpec spec;
    spec.grid = make_grid(Domain::interval(0.0, 1.0), h);
    spec.p = 2.0;
    spec.gamma = 0.5;
    spec.delta = 1.0;
    spec.density = EnergyDensity::p_power(2.0, 1);
    spec.phi = GridField::from_function(spec.grid, [](const Vec&) { return 0.0; });
    spec.g = GridField::from_function(
        spec.grid, [](const Vec& x) { return exact_profile(x.x, 2.0, 0.5); });
    SolveResult r = solve(spec, SolverConfig{});
    CHECK(r.converged);
    double err = 0.0;
    for (int i = 0; i < spec.grid->nx(); ++i)
        err = std::max(err,
                       std::abs(r.u.at(i, 0) - exact_profile(spec.grid->coord(i, 0).x, 2.0, 0.5)));
    CHECK(err < 5.0 * h);
}

TEST_CASE("dead core on the full interval") {
    const double h = 1.0 / 64;
    ProblemSpec spec = benchmark_spec(h);
    SolveResult r = solve(spec, SolverConfig{});
    CHECK(r.converged);
    const Grid& g = *spec.grid;
    double err = 0.0, neg_side = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
        const double x = g.coord(i, 0).x;
        err = std::max(err, std::abs(r.u.at(i, 0) - exact_profile(x, 2.0, 0.5)));
        if (x <= -2.0 * h) neg_side = std::max(neg_side, std::abs(r.u.at(i, 0)));
    }
    CHECK(err < 5.0 * h);
    CHECK(neg_side < 1e-10);  // dead core vanishes identically

    // feasibility, exact boundary, L-infinity bound
    for (int i = 0; i < g.nx(); ++i) CHECK(r.u.at(i, 0) >= spec.phi.at(i, 0) - 1e-12);
    CHECK(r.u.at(0, 0) == spec.g.at(0, 0));
    CHECK(r.u.at(g.nx() - 1, 0) == spec.g.at(g.nx() - 1, 0));
    double supg = 0.0, supphi = 0.0, supu = 0.0;
    for (int i = 0; i < g.nx(); ++i) {
        supu = std::max(supu, std::abs(r.u.at(i, 0)));
        supphi = std::max(supphi, std::abs(spec.phi.at(i, 0)));
        if (g.cls(i, 0) == NodeClass::Boundary) supg = std::max(supg, std::abs(spec.g.at(i, 0)));
    }
    CHECK(supu <= std::max(supg, supphi) + r.tol_kkt);

    // energy trace non-increasing within each stage
    for (const auto& stage : r.energy_trace)
        for (size_t k = 1; k < stage.size(); ++k) CHECK(stage[k] <= stage[k - 1] + 1e-13);
}

TEST_CASE("mesh refinement convergence factor") {
    double prev = -1.0;
    for (double h : {1.0 / 64, 1.0 / 128}) {
        SolveResult r = solve(benchmark_spec(h), SolverConfig{});
        REQUIRE(r.converged);
        double err = 0.0;
        const Grid& g = r.u.grid();
        for (int i = 0; i < g.nx(); ++i)
            err = std::max(err,
                           std::abs(r.u.at(i, 0) - exact_profile(g.coord(i, 0).x, 2.0, 0.5)));
        if (prev > 0.0) CHECK(prev / err >= 1.8);
        prev = err;
    }
}

TEST_CASE("convex case is initialization independent") {
    ProblemSpec spec;
    spec.grid = make_grid(Domain::interval(-1.0, 1.0), 1.0 / 32);
    spec.p = 2.0;
    spec.gamma = 0.5;
    spec.delta = 0.0;
    spec.density = EnergyDensity::p_power(2.0, 1);
    spec.phi = GridField::from_function(spec.grid, [](const Vec& x) { return 0.2 - x.x * x.x; });
    spec.g = GridField::from_function(spec.grid, [](const Vec&) { return 0.5; });
    SolveResult r1 = solve(spec, SolverConfig{});
    GridField init(spec.grid);
    for (int i = 0; i < spec.grid->nx(); ++i) init.at(i, 0) = 3.0;
    SolveResult r2 = solve(spec, SolverConfig{}, init);
    REQUIRE(r1.converged);
    REQUIRE(r2.converged);
    // two KKT-converged iterates can differ by O(tol / curvature); the discrete
    // Laplacian here has smallest curvature ~ h^2, hence the generous factor
    for (int i = 0; i < spec.grid->nx(); ++i)
        CHECK(std::abs(r1.u.at(i, 0) - r2.u.at(i, 0)) <= 100.0 * r1.tol_kkt + 1e-9);
}

TEST_CASE("Euler-Lagrange residual on the sampled exact profile") {
    double prev = -1.0;
    for (double h : {1.0 / 128, 1.0 / 256}) {
        ProblemSpec spec = benchmark_spec(h);
        SolveResult fake;
        fake.u = GridField::from_function(
            spec.grid, [](const Vec& x) { return exact_profile(x.x, 2.0, 0.5); });
        fake.converged = true;
        ElResidualReport rep = el_residual(fake, spec);
        CHECK_FALSE(rep.vacuous);
        // away from the singular free boundary the residual is O(h^2)
        double far = 0.0;
        const Grid& g = *spec.grid;
        for (int i = 0; i < g.nx(); ++i)
            if (g.coord(i, 0).x >= 0.1) far = std::max(far, std::abs(rep.field.at(i, 0)));
        if (prev > 0.0) CHECK(prev / far >= std::sqrt(2.0));
        prev = far;
    }
}

TEST_CASE("Euler-Lagrange residual contracts") {
    // affine solution of the unconstrained delta=0 problem: residual identically 0
    ProblemSpec spec;
    spec.grid = make_grid(Domain::interval(0.0, 1.0), 1.0 / 16);
    spec.p = 2.0;
    spec.gamma = 0.5;
    spec.delta = 0.0;
    spec.density = EnergyDensity::p_power(2.0, 1);
    spec.phi = GridField::from_function(spec.grid, [](const Vec&) { return -100.0; });
    spec.g = GridField::from_function(spec.grid, [](const Vec& x) { return 1.0 + 2.0 * x.x; });
    SolveResult fake;
    fake.u = GridField::from_function(spec.grid, [](const Vec& x) { return 1.0 + 2.0 * x.x; });
    fake.converged = true;
    ElResidualReport rep = el_residual(fake, spec);
    CHECK(rep.summary == doctest::Approx(0.0));

    // u = phi everywhere: detached set empty -> vacuous
    ProblemSpec s2 = spec;
    s2.delta = 1.0;
    s2.phi = GridField::from_function(spec.grid, [](const Vec&) { return 0.0; });
    SolveResult fake2;
    fake2.u = GridField(spec.grid);
    fake2.converged = true;
    CHECK(el_residual(fake2, s2).vacuous);

    // unconverged result is a usage error
    SolveResult fake3;
    fake3.u = GridField(spec.grid);
    fake3.converged = false;
    CHECK_THROWS_AS(el_residual(fake3, s2), std::logic_error);
}

TEST_CASE("minimal energy is monotone in delta") {
    ProblemSpec spec = benchmark_spec(1.0 / 32);
    CHECK(min_energy_monotonicity_check(spec, {0.0, 0.5, 1.0}, SolverConfig{}, 1e-9));
    CHECK(min_energy_monotonicity_check(spec, {1.0}, SolverConfig{}, 1e-9));
    CHECK(min_energy_monotonicity_check(spec, {0.5, 0.5}, SolverConfig{}, 1e-9));
}
