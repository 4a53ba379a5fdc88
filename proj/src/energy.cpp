#include "obl/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace obl {

void GrowthParams::validate() const {
    if (kappa1 < 0.0 || kappa2 < 0.0)
        throw std::domain_error("GrowthParams: kappa1 and kappa2 must be nonnegative");
    if (kappa1 + kappa2 <= 0.0)
        throw std::domain_error("GrowthParams: kappa1 + kappa2 must be positive");
    if (p < 2.0) throw std::domain_error("GrowthParams: p must be >= 2");
}

double omega_eval(const GrowthParams& g, double z) {
    g.validate();
    if (z < 0.0) throw std::domain_error("omega_eval: z must be nonnegative");
    return g.kappa1 * std::pow(z, g.p - 1.0) + g.kappa2 * z;
}

double G_eval(const GrowthParams& g, double z) {
    g.validate();
    if (z < 0.0) throw std::domain_error("G_eval: z must be nonnegative");
    return g.kappa1 * std::pow(z, g.p) / g.p + g.kappa2 * z * z / 2.0;
}

double admissible_nu(double p, double kappa0) {
    if (p < 2.0) throw std::domain_error("admissible_nu: p must be >= 2");
    if (kappa0 <= 0.0) throw std::domain_error("admissible_nu: kappa0 must be positive");
    return (p / 152.0) * std::pow(kappa0 / 4.0, p - 8.0);
}

Jet2 h_jet(double p, double kappa0, double nu, const Vec& z) {
    if (p < 2.0) throw std::domain_error("h_jet: p must be >= 2");
    if (kappa0 <= 0.0) throw std::domain_error("h_jet: kappa0 must be positive");
    if (nu <= 0.0) throw std::domain_error("h_jet: nu must be positive");

    const double r2 = z.norm2();
    const double r = std::sqrt(r2);
    Jet2 jet;
    jet.grad = Vec::zero(z.n);
    jet.hess = SymMat::zero(z.n);

    // |z|^p part. The outer-product coefficient is written through |z|^{p-2}
    // so the limit at z=0 is taken correctly for p > 2.
    if (r == 0.0) {
        const double rp2 = (p == 2.0) ? 1.0 : 0.0;
        jet.hess = SymMat::iso_plus_outer(z.n, p * rp2, 0.0, z);
    } else {
        const double rp2 = std::pow(r, p - 2.0);
        jet.value = rp2 * r2;
        jet.grad = p * rp2 * z;
        // D2 |z|^p = p|z|^{p-2} I + p(p-2)|z|^{p-4} z(x)z
        jet.hess = SymMat::iso_plus_outer(z.n, p * rp2, p * (p - 2.0) * rp2 / r2, z);
    }

    if (r <= kappa0) {
        const double s = kappa0 * kappa0 - r2;  // >= 0
        jet.value += nu * r2 * s * s * s;
        const double gcoef = 2.0 * nu * (kappa0 * kappa0 - 4.0 * r2) * s * s;
        jet.grad = jet.grad + gcoef * z;
        // D2 of nu r^2 s^3 = 2 nu g'(r^2) I + 4 nu g''(r^2) z(x)z with g(t) = t s^3,
        // g''(t) = -6 (kappa0^4 - 3 kappa0^2 t + 2 t^2)
        const double ocoef =
            -24.0 * nu * (std::pow(kappa0, 4) - 3.0 * kappa0 * kappa0 * r2 + 2.0 * r2 * r2);
        jet.hess = jet.hess + SymMat::iso_plus_outer(z.n, gcoef, ocoef, z);
    }
    return jet;
}

std::string to_string(DensityKind k) {
    switch (k) {
        case DensityKind::PPower: return "p_power";
        case DensityKind::Quadratic: return "quadratic";
        case DensityKind::AppendixA: return "appendix_a";
        case DensityKind::Tilted: return "tilted";
    }
    return "unknown";
}

namespace {

// Deterministic eigenvalue sampling of D2 h over a radial/angular design.
bool h_convex_by_sampling(double p, double kappa0, double nu, int dim) {
    std::vector<double> radii;
    for (int k = 0; k <= 60; ++k)
        radii.push_back(1.25 * kappa0 * std::pow(10.0, -3.0 * (60 - k) / 60.0));
    const int ndir = (dim == 1) ? 2 : 32;
    for (double r : radii) {
        for (int d = 0; d < ndir; ++d) {
            Vec z = (dim == 1) ? Vec::d1(d == 0 ? r : -r)
                               : Vec::d2(r * std::cos(2.0 * M_PI * d / ndir),
                                         r * std::sin(2.0 * M_PI * d / ndir));
            if (h_jet(p, kappa0, nu, z).hess.min_eig() < 0.0) return false;
        }
    }
    return true;
}

}  // namespace

EnergyDensity EnergyDensity::p_power(double p, int dim) {
    if (p < 2.0) throw std::domain_error("EnergyDensity: p must be >= 2");
    EnergyDensity d;
    d.kind = DensityKind::PPower;
    d.growth = GrowthParams{1.0, 0.0, p};
    d.dim = dim;
    return d;
}

EnergyDensity EnergyDensity::quadratic(int dim) {
    EnergyDensity d;
    d.kind = DensityKind::Quadratic;
    d.growth = GrowthParams{0.0, 1.0, 2.0};
    d.dim = dim;
    return d;
}

EnergyDensity EnergyDensity::appendix_a(double p, double eps, const Vec& a, double kappa0,
                                        double nu) {
    if (eps <= 0.0 || eps > 1.0)
        throw std::domain_error("EnergyDensity: eps must lie in (0,1]");
    if (nu <= 0.0) throw std::domain_error("EnergyDensity: nu must be positive");
    EnergyDensity d;
    d.kind = DensityKind::AppendixA;
    d.growth = GrowthParams{1.0, 1.0, p};
    d.dim = a.n;
    d.eps = eps;
    d.a = a;
    d.kappa0 = kappa0;
    d.nu = nu;
    d.nonconvex_warning = nu > admissible_nu(p, kappa0);
    d.convexity_validated = h_convex_by_sampling(p, kappa0, nu, a.n);
    return d;
}

EnergyDensity EnergyDensity::tilted(double p, double eps, const Vec& a) {
    if (p < 2.0) throw std::domain_error("EnergyDensity: p must be >= 2");
    if (eps <= 0.0 || eps > 1.0)
        throw std::domain_error("EnergyDensity: eps must lie in (0,1]");
    EnergyDensity d;
    d.kind = DensityKind::Tilted;
    d.growth = GrowthParams{1.0, 1.0, p};
    d.dim = a.n;
    d.eps = eps;
    d.a = a;
    return d;
}

namespace {

// Jet of |z|^p with the singular-point flag for 2 < p < 4 at z = 0.
Jet2 power_jet(double p, const Vec& z) {
    Jet2 jet;
    jet.grad = Vec::zero(z.n);
    jet.hess = SymMat::zero(z.n);
    const double r2 = z.norm2();
    if (r2 == 0.0) {
        if (p == 2.0) {
            jet.hess = 2.0 * SymMat::identity(z.n);  // D2 |z|^2 = 2I
        } else if (p < 4.0) {
            jet.hess_singular = true;
        }
        return jet;
    }
    const double r = std::sqrt(r2);
    const double rp2 = std::pow(r, p - 2.0);
    jet.value = rp2 * r2;
    jet.grad = p * rp2 * z;
    jet.hess = SymMat::iso_plus_outer(z.n, p * rp2, p * (p - 2.0) * rp2 / r2, z);
    return jet;
}

}  // namespace

Jet2 EnergyDensity::jet(const Vec& xi) const {
    const double p = growth.p;
    switch (kind) {
        case DensityKind::Quadratic: {
            Jet2 j;
            j.value = 0.5 * xi.norm2();
            j.grad = xi;
            j.hess = SymMat::identity(xi.n);
            return j;
        }
        case DensityKind::PPower: {
            Jet2 j = power_jet(p, xi);
            j.value /= p;
            j.grad = (1.0 / p) * j.grad;
            j.hess = (1.0 / p) * j.hess;
            if (xi.norm2() == 0.0 && p == 2.0) j.hess = SymMat::identity(xi.n);
            return j;
        }
        case DensityKind::Tilted: {
            const Vec z = eps * xi + a;
            Jet2 hz = power_jet(p, z);
            Jet2 ha = power_jet(p, a);
            Jet2 j;
            j.value = (hz.value - ha.value - eps * dot(ha.grad, xi)) / (p * eps * eps);
            j.grad = (1.0 / (p * eps)) * (hz.grad - ha.grad);
            j.hess = (1.0 / p) * hz.hess;
            j.hess_singular = hz.hess_singular;
            return j;
        }
        case DensityKind::AppendixA: {
            const Vec z = eps * xi + a;
            Jet2 hz = h_jet(p, kappa0, nu, z);
            Jet2 ha = h_jet(p, kappa0, nu, a);
            Jet2 j;
            j.value = (hz.value - ha.value - eps * dot(ha.grad, xi)) / (p * eps * eps);
            j.grad = (1.0 / (p * eps)) * (hz.grad - ha.grad);
            j.hess = (1.0 / p) * hz.hess;
            return j;
        }
    }
    throw std::logic_error("EnergyDensity::jet: unknown kind");
}

void EnergyDensity::eval(const Vec& xi, double& value, Vec& grad) const {
    const double p = growth.p;
    switch (kind) {
        case DensityKind::Quadratic:
            value = 0.5 * xi.norm2();
            grad = xi;
            return;
        case DensityKind::PPower: {
            const double r2 = xi.norm2();
            if (r2 == 0.0) {
                value = 0.0;
                grad = Vec::zero(xi.n);
                return;
            }
            const double rp2 = (p == 2.0) ? 1.0 : std::pow(r2, 0.5 * (p - 2.0));
            value = rp2 * r2 / p;
            grad = rp2 * xi;
            return;
        }
        default: {
            Jet2 j = jet(xi);
            value = j.value;
            grad = j.grad;
            return;
        }
    }
}

double EnergyDensity::value(const Vec& xi) const {
    double v;
    Vec g;
    eval(xi, v, g);
    return v;
}

bool EnergyDensity::near_cutoff(const Vec& xi, double tol) const {
    if (kind != DensityKind::AppendixA) return false;
    const Vec z = eps * xi + a;
    return std::abs(z.norm() - kappa0) < tol;
}

std::string StructuralReport::to_json(const EnergyDensity& d, double min_gap) const {
    std::ostringstream os;
    os.precision(12);
    os << "{\"kind\":\"" << to_string(d.kind) << "\","
       << "\"params\":{\"p\":" << d.growth.p << ",\"kappa1\":" << d.growth.kappa1
       << ",\"kappa2\":" << d.growth.kappa2 << ",\"eps\":" << d.eps
       << ",\"kappa0\":" << d.kappa0 << ",\"nu\":" << d.nu << "},"
       << "\"Upsilon_hat\":" << Upsilon_hat << ",\"Lambda_hat\":" << Lambda_hat
       << ",\"lambda_hat\":" << lambda_hat << ",\"min_gap\":" << min_gap
       << ",\"worst_points\":{"
       << "\"grad\":[" << worst_grad_point.x << (worst_grad_point.n == 2 ? "," : "")
       << (worst_grad_point.n == 2 ? std::to_string(worst_grad_point.y) : "") << "],"
       << "\"hess\":[" << worst_hess_point.x << (worst_hess_point.n == 2 ? "," : "")
       << (worst_hess_point.n == 2 ? std::to_string(worst_hess_point.y) : "") << "],"
       << "\"eig\":[" << worst_eig_point.x << (worst_eig_point.n == 2 ? "," : "")
       << (worst_eig_point.n == 2 ? std::to_string(worst_eig_point.y) : "") << "]}}";
    return os.str();
}

StructuralReport check_structural_bounds(const EnergyDensity& density,
                                         const std::vector<double>& sample_radii,
                                         int samples_per_radius) {
    if (sample_radii.empty() || samples_per_radius <= 0)
        throw std::invalid_argument("check_structural_bounds: empty sample set");
    for (double r : sample_radii)
        if (r <= 0.0) throw std::invalid_argument("check_structural_bounds: radii must be positive");

    StructuralReport rep;
    rep.Upsilon_hat = 0.0;
    rep.Lambda_hat = 0.0;
    rep.lambda_hat = std::numeric_limits<double>::infinity();
    const int ndir = (density.dim == 1) ? 2 : samples_per_radius;

    for (double r : sample_radii) {
        for (int d = 0; d < ndir; ++d) {
            Vec xi = (density.dim == 1)
                         ? Vec::d1(d == 0 ? r : -r)
                         : Vec::d2(r * std::cos(2.0 * M_PI * d / ndir),
                                   r * std::sin(2.0 * M_PI * d / ndir));
            Jet2 j = density.jet(xi);
            if (j.hess_singular) {
                ++rep.samples_skipped;
                continue;
            }
            const double w = omega_eval(density.growth, r);
            const double gr = j.grad.norm() / w;
            if (gr > rep.Upsilon_hat) {
                rep.Upsilon_hat = gr;
                rep.worst_grad_point = xi;
            }
            const double scale = w / r;
            const double hr = j.hess.opnorm() / scale;
            if (hr > rep.Lambda_hat) {
                rep.Lambda_hat = hr;
                rep.worst_hess_point = xi;
            }
            const double er = j.hess.min_eig() / scale;
            if (er < rep.lambda_hat) {
                rep.lambda_hat = er;
                rep.worst_eig_point = xi;
            }
            ++rep.samples_used;
        }
    }
    if (rep.samples_used == 0)
        throw std::invalid_argument("check_structural_bounds: all samples were singular points");
    return rep;
}

double convexity_gap(const EnergyDensity& density,
                     const std::vector<std::pair<Vec, Vec>>& pairs) {
    if (pairs.empty()) throw std::invalid_argument("convexity_gap: empty pair list");
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : pairs) {
        const double d = (x - y).norm();
        if (d == 0.0) throw std::invalid_argument("convexity_gap: pair with x == y");
        double hx, hy;
        Vec gx, gy;
        density.eval(x, hx, gx);
        density.eval(y, hy, gy);
        const double gap = (hx - hy - dot(gy, x - y)) / G_eval(density.growth, d);
        worst = std::min(worst, gap);
    }
    return worst;
}

}  // namespace obl
