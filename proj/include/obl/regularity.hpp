#ifndef OBL_REGULARITY_HPP
#define OBL_REGULARITY_HPP

#include <optional>
#include <string>
#include <vector>

#include "obl/grid.hpp"
#include "obl/solver.hpp"

namespace obl {

// Log-log power-law fit of (radius, value) samples.
struct ExponentFit {
    std::vector<std::pair<double, double>> samples;  // (radius, value), radii decreasing
    double slope = 0.0;
    double intercept = 0.0;  // log-intercept, value ~ exp(intercept) * r^slope
    double r_squared = 0.0;
    bool usable = false;  // >= 4 positive samples spanning >= one decade

    std::string to_json() const;
};

ExponentFit fit_loglog(const std::vector<std::pair<double, double>>& samples,
                       double noise_floor = 0.0);

struct ExponentPrediction {
    double tau = 0.0;          // min(beta, gamma/(p-gamma))
    double alpha_bound = 0.0;  // min(gamma/(p-gamma), beta/(p-1) [, sigma])
    double theta = 0.0;        // min(1+beta, 2/(2-gamma))
    bool alpha_upper_bound_only = false;  // sigma was not provided
    double p = 0.0, gamma = 0.0, beta = 0.0;
    std::optional<double> sigma;
    double q = 0.0;  // 2 when kappa1 = 0, else p
};

ExponentPrediction theoretical_exponents(double p, double gamma, double beta,
                                         std::optional<double> sigma = std::nullopt);

// Growth of the plane-subtracted field: S(rho) = sup_{B_rho} |u - u(x0) - grad0.(x-x0)|.
// The fitted slope estimates 1 + tau.
ExponentFit growth_exponent(const GridField& u, const Vec& x0, const Vec& grad0,
                            const std::vector<double>& radii);

struct CampanatoFit {
    ExponentFit fit;               // slope estimates n + q*alpha
    double alpha_empirical = 0.0;  // (slope - n)/q
};

CampanatoFit campanato_exponent(const GridField& u, double q, const Vec& center,
                                const std::vector<double>& radii);

struct DyadicReport {
    std::vector<double> S;       // S_k = sup over B_{base^-k}
    std::vector<double> C;       // C_k = S_k * base^{(1+tau)k}
    double C_fitted = 0.0;       // smallest C with S_k <= C base^{-(1+tau)k} for all k
    std::vector<bool> pass_k;    // C_k within 1.5x of C_1
    bool pass = false;
    int k_used = 0;
    bool truncated = false;  // some radii fell below grid resolution
};

// u must arrive normalized: value at x0 and the tangent plane already removed.
DyadicReport dyadic_decay_check(const GridField& u, const Vec& x0, double tau, int k_max,
                                double base = 8.0);

// x -> (u(x0 + lambda x) - u(x0) - grad0.(lambda x)) / lambda^exponent on a unit-ball grid.
GridField blowup_rescale(const GridField& u, const Vec& x0, double lambda, double exponent,
                         const Vec& grad0, double target_h = 1.0 / 32.0);

// Exact discrete rescaling identity for the p-power energy on nested grids:
//   I_dt(v~) = base^{(n + tau p) j} I_d(v),  v~(x) = base^{(1+tau)j} v(x/base^j),
// with d = dt * base^{((1+tau)gamma - tau p) j}; spec.delta plays the role of dt.
// Returns the relative discrepancy between the two sides.
double energy_scaling_identity_check(const ProblemSpec& spec, const GridField& v, int j,
                                     double tau);

}  // namespace obl

#endif
