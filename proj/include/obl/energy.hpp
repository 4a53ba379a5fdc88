#ifndef OBL_ENERGY_HPP
#define OBL_ENERGY_HPP

#include <string>
#include <utility>
#include <vector>

#include "obl/vec.hpp"

namespace obl {

// Growth parameters of the structural assumptions: omega(z) = k1 z^{p-1} + k2 z.
struct GrowthParams {
    double kappa1 = 1.0;
    double kappa2 = 0.0;
    double p = 2.0;

    void validate() const;
};

double omega_eval(const GrowthParams& g, double z);
double G_eval(const GrowthParams& g, double z);

// Convexity threshold for the cut-off perturbation in h: nu <= (p/152)(kappa0/4)^{p-8}.
double admissible_nu(double p, double kappa0);

// Second-order jet of a density at a point.
struct Jet2 {
    double value = 0.0;
    Vec grad;
    SymMat hess;
    bool hess_singular = false;  // no finite Hessian reported at this point
};

// h(z) = |z|^p + nu |z|^2 (kappa0^2 - |z|^2)^3 for |z| <= kappa0, |z|^p outside.
Jet2 h_jet(double p, double kappa0, double nu, const Vec& z);

enum class DensityKind { PPower, Quadratic, AppendixA, Tilted };

std::string to_string(DensityKind k);

// An energy density H with exact first and second derivatives.
//
//   PPower    H(xi) = |xi|^p / p
//   Quadratic H(xi) = |xi|^2 / 2
//   AppendixA H(xi) = (1/(p eps^2)) (h(eps xi + a) - h(a) - eps grad h(a) . xi)
//   Tilted    H(xi) = (1/(p eps^2)) (|eps xi + a|^p - |a|^p - p eps |a|^{p-2} a . xi)
class EnergyDensity {
  public:
    static EnergyDensity p_power(double p, int dim);
    static EnergyDensity quadratic(int dim);
    static EnergyDensity appendix_a(double p, double eps, const Vec& a, double kappa0, double nu);
    static EnergyDensity tilted(double p, double eps, const Vec& a);

    Jet2 jet(const Vec& xi) const;                      // value, gradient, Hessian
    void eval(const Vec& xi, double& value, Vec& grad) const;  // hot-loop path
    double value(const Vec& xi) const;

    // True when xi lies within tol of the C^2-but-not-C^3 cut-off sphere of the
    // AppendixA kind; finite differences of second order lose accuracy there.
    bool near_cutoff(const Vec& xi, double tol) const;

    DensityKind kind = DensityKind::PPower;
    GrowthParams growth;
    int dim = 1;

    // AppendixA / Tilted parameters
    double eps = 1.0;
    Vec a;
    double kappa0 = 1.0;
    double nu = 0.0;

    // Set when nu exceeds the closed-form admissible threshold; evaluation
    // still proceeds, the density may be non-convex.
    bool nonconvex_warning = false;
    // Result of the Hessian eigenvalue sampling done at construction.
    bool convexity_validated = true;
};

// Empirically estimated structural constants over a deterministic sample set.
struct StructuralReport {
    double Upsilon_hat = 0.0;
    double Lambda_hat = 0.0;
    double lambda_hat = 0.0;
    Vec worst_grad_point;   // argmax of |grad H| / omega
    Vec worst_hess_point;   // argmax of |D2 H| / (omega/|xi|)
    Vec worst_eig_point;    // argmin of lowest Hessian eigenvalue ratio
    int samples_used = 0;
    int samples_skipped = 0;  // flagged singular points
    std::string to_json(const EnergyDensity& d, double min_gap) const;
};

StructuralReport check_structural_bounds(const EnergyDensity& density,
                                         const std::vector<double>& sample_radii,
                                         int samples_per_radius);

// min over pairs of [H(x) - H(y) - grad H(y).(x-y)] / G(|x-y|)
double convexity_gap(const EnergyDensity& density,
                     const std::vector<std::pair<Vec, Vec>>& pairs);

}  // namespace obl

#endif
