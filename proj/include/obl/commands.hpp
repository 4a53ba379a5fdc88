#ifndef OBL_COMMANDS_HPP
#define OBL_COMMANDS_HPP

#include <string>
#include <utility>
#include <vector>

#include "obl/config.hpp"
#include "obl/freeboundary.hpp"
#include "obl/regularity.hpp"

namespace obl {

// Exit codes shared by all commands: 0 success, 1 run-level failure
// (non-convergence, failed check, vacuous result), 2 usage/config error.

int cmd_solve(const ExperimentConfig& cfg, std::ostream& log);
int cmd_exponents(const ExperimentConfig& cfg, std::ostream& log);
int cmd_sweep(const ExperimentConfig& cfg, std::ostream& log);
int cmd_check_energy(const ExperimentConfig& cfg, std::ostream& log);

// Shared helpers, exposed for tests.

// max over active nodes of |u| stays below the a-priori ceiling
// max(sup_boundary |g|, sup |phi|).
bool linf_bound_holds(const SolveResult& result, const ProblemSpec& spec, double tol);

// Node used for the exponent fit: nearest active node to `center` if it lies in
// the contact set or on the free boundary, otherwise the nearest free-boundary
// node. Returns false when there is no contact at all.
bool designated_fit_point(const ContactClassification& cls, const Vec& center, int& i, int& j);

// Centered finite-difference gradient of a field at an interior node.
Vec centered_gradient_at(const GridField& f, int i, int j);

// Deterministic sample pairs in the ball of the given radius (seedless: a
// fixed-seed generator, identical across runs and platforms).
std::vector<std::pair<Vec, Vec>> deterministic_pairs(int dim, int count, double radius);

}  // namespace obl

#endif
