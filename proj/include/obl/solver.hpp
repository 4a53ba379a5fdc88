#ifndef OBL_SOLVER_HPP
#define OBL_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "obl/energy.hpp"
#include "obl/grid.hpp"

namespace obl {

// One instance of the constrained minimization: J_delta(v) over {v >= phi, v = g on boundary}.
struct ProblemSpec {
    std::shared_ptr<const Grid> grid;
    EnergyDensity density;  // defaults to p-power
    double p = 2.0;
    double gamma = 0.5;
    double delta = 1.0;
    double beta = 1.0;  // obstacle smoothness, used for exponent predictions
    GridField phi;
    GridField g;  // read on boundary nodes only

    void validate() const;
    double tau() const;  // min(beta, gamma/(p-gamma))
};

struct SolverConfig {
    std::vector<double> eps_schedule = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
    int delta_steps = 4;  // geometric continuation 0 -> delta
    double tol_contact = 1e-12;
    double tol_kkt_rel = 1e-8;
    double stage_tol_rel = 1e-6;
    int max_iter = 400000;
    double armijo_c = 1e-4;
    double backtrack = 0.5;
};

struct SolveResult {
    GridField u;
    std::vector<std::vector<double>> energy_trace;  // one trace per continuation stage
    double final_energy = 0.0;
    std::vector<std::uint8_t> contact;  // lattice-indexed, u - phi <= tol_contact
    GridField kkt;                      // projected-gradient residual per node
    double kkt_residual = 0.0;
    double tol_kkt = 0.0;
    int total_iterations = 0;
    bool converged = false;
};

// Sum over cells of H(grad v) h^n plus the regularized singular term
// delta * [((v-phi)+eps)^gamma - eps^gamma] summed over active nodes.
double discrete_energy(const ProblemSpec& spec, const GridField& v, double eps_reg);

SolveResult solve(const ProblemSpec& spec, const SolverConfig& config,
                  const std::optional<GridField>& initial = std::nullopt);

struct ElResidualReport {
    GridField field;       // residual on strictly detached nodes, 0 elsewhere
    double summary = 0.0;  // max over nodes >= 3h away from contact set and boundary
    bool vacuous = false;  // detached set empty (or no node passes the distance buffer)
};

// Pointwise residual of div(|grad u|^{p-2} grad u) = delta*gamma*(u-phi)^{gamma-1}
// on the strictly detached set.
ElResidualReport el_residual(const SolveResult& result, const ProblemSpec& spec,
                             double tol_detach = -1.0);

// Minimal achieved energies are non-decreasing in delta (within tol).
bool min_energy_monotonicity_check(const ProblemSpec& base, const std::vector<double>& deltas,
                                   const SolverConfig& config, double tol);

}  // namespace obl

#endif
