#ifndef OBL_CONFIG_HPP
#define OBL_CONFIG_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "obl/energy.hpp"
#include "obl/solver.hpp"

namespace obl {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Obstacle/boundary functions come from a fixed named catalog; there is no
// expression language in the config.
//
//   zero                 0
//   constant  {value}    value
//   cone      {A}        A |x|
//   power     {A, beta}  -A |x|^{1+beta}
//   tilted    {q, A, beta}  q x1 - A |x|^{1+beta}
//   affine    {a0, ax, ay}  a0 + ax x1 + ay x2
//   deadcore  {scale}    scale * c(p,gamma) * max(x1,0)^{p/(p-gamma)}
//
// deadcore is the explicit radial solution of the Euler-Lagrange equation;
// its constant c(p,gamma) satisfies c^{p-gamma} k^{p-1} (k-1)(p-1) = gamma
// with k = p/(p-gamma).
struct FuncSpec {
    std::string kind = "zero";
    double value = 0.0;
    double A = 1.0;
    double beta = 1.0;
    double q = 0.0;
    double a0 = 0.0, ax = 0.0, ay = 0.0;
    double scale = 1.0;

    double eval(const Vec& x, double p, double gamma) const;
};

// Coefficient of the dead-core benchmark profile c * x_+^{p/(p-gamma)}.
double deadcore_coefficient(double p, double gamma);

struct ProblemConfig {
    Domain domain = Domain::interval(-1.0, 1.0);
    double h = 1.0 / 64.0;
    double p = 2.0;
    double gamma = 0.5;
    double beta = 1.0;
    double delta = 1.0;
    FuncSpec obstacle;
    FuncSpec boundary;
};

struct AnalysisConfig {
    double rho_max = 0.4;
    int levels = 5;           // fit radii rho_max * 2^{-k}, k = 0..levels-1, snapped to nodes
    double q = 0.0;           // 0 = choose by the kappa1 rule
    int dyadic_k_max = 3;
    std::vector<double> fit_center = {0.0};
    double tolerance = 0.1;   // |empirical - predicted| acceptance
};

struct DensityConfig {
    std::string kind = "p_power";
    double p = 2.0;
    int dim = 1;
    double eps = 1.0;
    std::vector<double> a = {2.0};
    double kappa0 = 1.0;
    double nu = 0.01;

    EnergyDensity build() const;
};

struct SweepCell {
    double p = 2.0, gamma = 0.5, beta = 1.0, h = 1.0 / 64.0;
};

struct ExperimentConfig {
    ProblemConfig problem;
    SolverConfig solver;
    AnalysisConfig analysis;
    std::optional<DensityConfig> density;
    std::vector<SweepCell> sweep;
    std::string output_dir = "out";

    static ExperimentConfig parse(const std::string& json_text);
    static ExperimentConfig load(const std::string& path);
    std::string serialize() const;

    // build the ProblemSpec (grid, fields) from the problem block
    ProblemSpec build_problem() const;
    std::vector<double> fit_radii(double h) const;  // snapped to node multiples
    Vec fit_center_vec() const;
};

}  // namespace obl

#endif
