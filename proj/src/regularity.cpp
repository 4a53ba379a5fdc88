#include "obl/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace obl {

std::string ExponentFit::to_json() const {
    std::ostringstream os;
    os.precision(12);
    os << "{\"samples\":[";
    for (size_t k = 0; k < samples.size(); ++k) {
        if (k) os << ',';
        os << '[' << samples[k].first << ',' << samples[k].second << ']';
    }
    os << "],\"slope\":" << slope << ",\"intercept\":" << intercept
       << ",\"r_squared\":" << r_squared << ",\"usable\":" << (usable ? "true" : "false")
       << '}';
    return os.str();
}

ExponentFit fit_loglog(const std::vector<std::pair<double, double>>& samples,
                       double noise_floor) {
    ExponentFit fit;
    fit.samples = samples;
    std::vector<std::pair<double, double>> pts;  // (log r, log v)
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
    for (const auto& [r, v] : samples) {
        if (r <= 0.0) throw std::invalid_argument("fit_loglog: radii must be positive");
        if (v <= noise_floor || v <= 0.0) continue;
        pts.emplace_back(std::log(r), std::log(v));
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    if (pts.size() < 2) return fit;  // unusable, slope stays 0

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(pts.size());
    const double denom = n * sxx - sx * sx;
    if (denom <= 0.0) return fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;

    double ss_res = 0, ss_tot = 0;
    const double ymean = sy / n;
    for (const auto& [x, y] : pts) {
        const double e = y - (fit.intercept + fit.slope * x);
        ss_res += e * e;
        ss_tot += (y - ymean) * (y - ymean);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.usable = pts.size() >= 4 && rmax / rmin >= 10.0;
    return fit;
}

ExponentPrediction theoretical_exponents(double p, double gamma, double beta,
                                         std::optional<double> sigma) {
    if (p < 2.0) throw std::domain_error("theoretical_exponents: p must be >= 2");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw std::domain_error("theoretical_exponents: gamma must lie in (0,1)");
    if (!(beta > 0.0 && beta <= 1.0))
        throw std::domain_error("theoretical_exponents: beta must lie in (0,1]");
    if (sigma && *sigma <= 0.0)
        throw std::domain_error("theoretical_exponents: sigma must be positive");

    ExponentPrediction pred;
    pred.p = p;
    pred.gamma = gamma;
    pred.beta = beta;
    pred.sigma = sigma;
    pred.tau = std::min(beta, gamma / (p - gamma));
    pred.theta = std::min(1.0 + beta, 2.0 / (2.0 - gamma));
    pred.alpha_bound = std::min(gamma / (p - gamma), beta / (p - 1.0));
    if (sigma)
        pred.alpha_bound = std::min(pred.alpha_bound, *sigma);
    else
        pred.alpha_upper_bound_only = true;
    pred.q = p;  // the kappa1=0 case (q=2) is quadratic, where p=2 anyway
    return pred;
}

namespace {

std::pair<int, int> nearest_node(const Grid& g, const Vec& x) {
    const int i = std::clamp(static_cast<int>(std::lround((x.x - g.coord(0, 0).x) / g.h())), 0,
                             g.nx() - 1);
    const int j = g.dim() == 1
                      ? 0
                      : std::clamp(static_cast<int>(std::lround((x.y - g.coord(0, 0).y) / g.h())),
                                   0, g.ny() - 1);
    return {i, j};
}

double field_scale(const GridField& u) {
    const Grid& g = u.grid();
    double m = 0.0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (g.active(i, j)) m = std::max(m, std::abs(u.at(i, j)));
    return m;
}

}  // namespace

ExponentFit growth_exponent(const GridField& u, const Vec& x0, const Vec& grad0,
                            const std::vector<double>& radii) {
    const Grid& g = u.grid();
    auto [i0, j0] = nearest_node(g, x0);
    const double u0 = u.at(i0, j0);

    GridField w(u.grid_ptr());
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (g.active(i, j))
                w.at(i, j) = u.at(i, j) - u0 - dot(grad0, g.coord(i, j) - x0);

    std::vector<std::pair<double, double>> samples;
    for (double r : radii) samples.emplace_back(r, sup_on_ball(w, x0, r));
    const double floor = 10.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, field_scale(u));
    return fit_loglog(samples, floor);
}

CampanatoFit campanato_exponent(const GridField& u, double q, const Vec& center,
                                const std::vector<double>& radii) {
    if (q <= 0.0) throw std::domain_error("campanato_exponent: q must be positive");
    std::vector<std::pair<double, double>> samples;
    for (double r : radii) samples.emplace_back(r, oscillation_integral(u, center, r, q));
    const double floor = 10.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, field_scale(u));
    CampanatoFit out;
    out.fit = fit_loglog(samples, floor);
    out.alpha_empirical = (out.fit.slope - u.grid().dim()) / q;
    return out;
}

DyadicReport dyadic_decay_check(const GridField& u, const Vec& x0, double tau, int k_max,
                                double base) {
    if (k_max < 1) throw std::invalid_argument("dyadic_decay_check: k_max must be >= 1");
    const double h = u.grid().h();
    DyadicReport rep;
    for (int k = 1; k <= k_max; ++k) {
        const double r = std::pow(base, -k);
        if (r < 4.0 * h) {
            rep.truncated = true;
            break;
        }
        const double S = sup_on_ball(u, x0, r);
        rep.S.push_back(S);
        rep.C.push_back(S * std::pow(base, (1.0 + tau) * k));
        ++rep.k_used;
    }
    if (rep.k_used == 0) return rep;
    rep.C_fitted = *std::max_element(rep.C.begin(), rep.C.end());
    const double ref = rep.C.front();
    rep.pass = true;
    for (double c : rep.C) {
        const bool ok = c <= 1.5 * ref + 1e-14;
        rep.pass_k.push_back(ok);
        rep.pass = rep.pass && ok;
    }
    return rep;
}

namespace {

double interpolate(const GridField& u, const Vec& y) {
    const Grid& g = u.grid();
    const double h = g.h();
    const Vec o = g.coord(0, 0);
    const double fx = (y.x - o.x) / h;
    if (fx < -1e-9 || fx > g.nx() - 1 + 1e-9)
        throw std::invalid_argument("blowup_rescale: ball escapes domain");
    int i = std::clamp(static_cast<int>(std::floor(fx)), 0, g.nx() - 2);
    const double tx = fx - i;
    if (g.dim() == 1) {
        if (!g.active(i, 0) || !g.active(i + 1, 0))
            throw std::invalid_argument("blowup_rescale: ball escapes domain");
        return (1.0 - tx) * u.at(i, 0) + tx * u.at(i + 1, 0);
    }
    const double fy = (y.y - o.y) / h;
    if (fy < -1e-9 || fy > g.ny() - 1 + 1e-9)
        throw std::invalid_argument("blowup_rescale: ball escapes domain");
    int j = std::clamp(static_cast<int>(std::floor(fy)), 0, g.ny() - 2);
    const double ty = fy - j;
    if (!g.cell_active(i, j)) throw std::invalid_argument("blowup_rescale: ball escapes domain");
    return (1.0 - tx) * (1.0 - ty) * u.at(i, j) + tx * (1.0 - ty) * u.at(i + 1, j) +
           (1.0 - tx) * ty * u.at(i, j + 1) + tx * ty * u.at(i + 1, j + 1);
}

}  // namespace

GridField blowup_rescale(const GridField& u, const Vec& x0, double lambda, double exponent,
                         const Vec& grad0, double target_h) {
    if (lambda <= 0.0) throw std::invalid_argument("blowup_rescale: lambda must be positive");
    const Grid& g = u.grid();
    const int m = std::max(2, static_cast<int>(std::lround(1.0 / target_h)));
    auto target = g.dim() == 1 ? make_grid(Domain::interval(-1.0, 1.0), 1.0 / m)
                               : make_grid(Domain::disc(1.0), 1.0 / m);
    const double u0 = interpolate(u, x0);
    const double scale = std::pow(lambda, exponent);

    GridField out(target);
    for (int j = 0; j < target->ny(); ++j)
        for (int i = 0; i < target->nx(); ++i) {
            if (!target->active(i, j)) continue;
            const Vec x = target->coord(i, j);
            const Vec y = x0 + lambda * x;
            out.at(i, j) = (interpolate(u, y) - u0 - dot(grad0, lambda * x)) / scale;
        }
    return out;
}

namespace {

int node_index_at(const Grid& g, double x, int axis) {
    const Vec o = g.coord(0, 0);
    const double ox = axis == 0 ? o.x : o.y;
    const double f = (x - ox) / g.h();
    const int i = static_cast<int>(std::lround(f));
    if (std::abs(f - i) > 1e-9)
        throw std::invalid_argument("energy_scaling_identity_check: grids not nested");
    const int n = axis == 0 ? g.nx() : g.ny();
    if (i < 0 || i >= n)
        throw std::invalid_argument("energy_scaling_identity_check: region outside domain");
    return i;
}

}  // namespace

double energy_scaling_identity_check(const ProblemSpec& spec, const GridField& v, int j,
                                     double tau) {
    if (spec.density.kind != DensityKind::PPower)
        throw std::invalid_argument("energy_scaling_identity_check: p-power density required");
    if (j < 0) throw std::invalid_argument("energy_scaling_identity_check: j must be >= 0");
    const Grid& g = *spec.grid;
    const double h = g.h();
    const int dim = g.dim();
    const double p = spec.p;
    const double gamma = spec.gamma;
    const double base = 8.0;
    const double zoom = std::pow(base, j);
    const double s = 1.0 / zoom;  // fine half-width

    // fine node range of the box [-s, s]^n
    const int ilo = node_index_at(g, -s, 0);
    const int ihi = node_index_at(g, s, 0);
    const int jlo = dim == 2 ? node_index_at(g, -s, 1) : 0;
    const int jhi = dim == 2 ? node_index_at(g, s, 1) : 0;
    // the coarse box [-1,1]^n reuses the same node count with spacing base^j h
    node_index_at(g, -1.0, 0);
    node_index_at(g, 1.0, 0);

    const double delta_coarse = spec.delta;
    const double delta_fine =
        delta_coarse * std::pow(base, ((1.0 + tau) * gamma - tau * p) * j);
    const double c = std::pow(base, (1.0 + tau) * j);  // value scaling
    const double H = zoom * h;
    const double hn = std::pow(h, dim);
    const double Hn = std::pow(H, dim);

    auto density_value = [&](const Vec& xi) { return spec.density.value(xi); };
    auto wpos = [&](double a, double b) { return std::max(a - b, 0.0); };

    double fine = 0.0, coarse = 0.0;
    if (dim == 1) {
        for (int i = ilo; i < ihi; ++i) {
            fine += density_value(Vec::d1((v.at(i + 1, 0) - v.at(i, 0)) / h)) * hn;
            coarse += density_value(Vec::d1((c * v.at(i + 1, 0) - c * v.at(i, 0)) / H)) * Hn;
        }
        for (int i = ilo; i <= ihi; ++i) {
            const double w = wpos(v.at(i, 0), spec.phi.at(i, 0));
            fine += delta_fine * std::pow(w, gamma) * hn;
            coarse += delta_coarse * std::pow(c * w, gamma) * Hn;
        }
    } else {
        for (int jj = jlo; jj < jhi; ++jj)
            for (int i = ilo; i < ihi; ++i) {
                const double gx =
                    (v.at(i + 1, jj) - v.at(i, jj) + v.at(i + 1, jj + 1) - v.at(i, jj + 1)) /
                    (2.0 * h);
                const double gy =
                    (v.at(i, jj + 1) - v.at(i, jj) + v.at(i + 1, jj + 1) - v.at(i + 1, jj)) /
                    (2.0 * h);
                fine += density_value(Vec::d2(gx, gy)) * hn;
                coarse += density_value(Vec::d2(c * gx / zoom, c * gy / zoom)) * Hn;
            }
        for (int jj = jlo; jj <= jhi; ++jj)
            for (int i = ilo; i <= ihi; ++i) {
                const double w = wpos(v.at(i, jj), spec.phi.at(i, jj));
                fine += delta_fine * std::pow(w, gamma) * hn;
                coarse += delta_coarse * std::pow(c * w, gamma) * Hn;
            }
    }

    const double rhs = std::pow(base, (dim + tau * p) * j) * fine;
    const double denom = std::max({std::abs(coarse), std::abs(rhs), 1e-300});
    return std::abs(coarse - rhs) / denom;
}

}  // namespace obl
