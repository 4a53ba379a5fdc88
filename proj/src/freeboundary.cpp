#include "obl/freeboundary.hpp"

#include <cmath>
#include <stdexcept>

namespace obl {

bool ContactClassification::contact_empty() const {
    const Grid& g = *grid;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (g.active(i, j) && contact[g.index(i, j)]) return false;
    return true;
}

bool ContactClassification::contact_full() const {
    const Grid& g = *grid;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (g.active(i, j) && !contact[g.index(i, j)]) return false;
    return true;
}

namespace {

// One-sided second-order difference along one axis, preferring the detached
// side; u is only C^{1,tau} across the free boundary, so stencils must not
// straddle it.
double one_sided_axis(const GridField& f, const Grid& g,
                      const std::vector<std::uint8_t>& contact, int i, int j, int axis) {
    const double h = g.h();
    const int di = axis == 0 ? 1 : 0;
    const int dj = axis == 0 ? 0 : 1;
    auto ok = [&](int s, int k) {  // node i+s*k*di, j+s*k*dj exists and is active
        const int ii = i + s * k * di, jj = j + s * k * dj;
        return ii >= 0 && jj >= 0 && ii < g.nx() && jj < g.ny() && g.active(ii, jj);
    };
    auto val = [&](int s, int k) { return f.at(i + s * k * di, j + s * k * dj); };
    auto detached = [&](int s) {
        return ok(s, 1) && !contact[g.index(i + s * di, j + s * dj)];
    };

    int side = 0;
    if (detached(+1))
        side = +1;
    else if (detached(-1))
        side = -1;
    else if (ok(+1, 1))
        side = +1;
    else if (ok(-1, 1))
        side = -1;
    else
        return 0.0;

    if (ok(side, 2))
        return side * (-3.0 * f.at(i, j) + 4.0 * val(side, 1) - val(side, 2)) / (2.0 * h);
    return side * (val(side, 1) - f.at(i, j)) / h;
}

Vec one_sided_gradient(const GridField& f, const Grid& g,
                       const std::vector<std::uint8_t>& contact, int i, int j) {
    if (g.dim() == 1) return Vec::d1(one_sided_axis(f, g, contact, i, j, 0));
    return Vec::d2(one_sided_axis(f, g, contact, i, j, 0),
                   one_sided_axis(f, g, contact, i, j, 1));
}

}  // namespace

ContactClassification classify_contact(const SolveResult& result, const ProblemSpec& spec,
                                       double tol_detach) {
    if (!result.converged)
        throw std::logic_error("classify_contact: called on unconverged result");
    const Grid& g = *spec.grid;
    if (tol_detach <= 0.0) tol_detach = std::pow(g.h(), 1.0 + spec.tau());

    ContactClassification out;
    out.grid = spec.grid;
    out.tol_detach = tol_detach;
    out.contact.assign(g.lattice_size(), 0);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i)
            if (g.active(i, j) &&
                result.u.at(i, j) - spec.phi.at(i, j) <= tol_detach)
                out.contact[g.index(i, j)] = 1;

    auto adj_has = [&](int i, int j, bool want_contact) {
        const int off[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (const auto& o : off) {
            const int ii = i + o[0], jj = j + o[1];
            if (g.dim() == 1 && o[1] != 0) continue;
            if (ii < 0 || jj < 0 || ii >= g.nx() || jj >= g.ny() || !g.active(ii, jj)) continue;
            if (static_cast<bool>(out.contact[g.index(ii, jj)]) == want_contact) return true;
        }
        return false;
    };

    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            if (!g.active(i, j)) continue;
            const bool c = out.contact[g.index(i, j)];
            const bool is_fb = c ? adj_has(i, j, false) : adj_has(i, j, true);
            if (!is_fb) continue;
            FbNode node;
            node.i = i;
            node.j = j;
            node.x = g.coord(i, j);
            node.grad_u = one_sided_gradient(result.u, g, out.contact, i, j);
            node.grad_phi = one_sided_gradient(spec.phi, g, out.contact, i, j);
            node.mismatch = (node.grad_u - node.grad_phi).norm();
            out.fb.push_back(node);
        }
    return out;
}

GradientMatchReport gradient_match(const ContactClassification& classification) {
    GradientMatchReport rep;
    if (classification.fb.empty()) {
        rep.vacuous = true;
        return rep;
    }
    for (const FbNode& n : classification.fb)
        rep.max_mismatch = std::max(rep.max_mismatch, n.mismatch);
    return rep;
}

void write_classification_csv(const ContactClassification& c, std::ostream& os) {
    const Grid& g = *c.grid;
    os << (g.dim() == 1 ? "x1,contact,fb,mismatch\n" : "x1,x2,contact,fb,mismatch\n");
    os.precision(15);
    std::vector<std::uint8_t> fbmask(g.lattice_size(), 0);
    std::vector<double> mism(g.lattice_size(), 0.0);
    for (const FbNode& n : c.fb) {
        fbmask[g.index(n.i, n.j)] = 1;
        mism[g.index(n.i, n.j)] = n.mismatch;
    }
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            if (!g.active(i, j)) continue;
            const Vec x = g.coord(i, j);
            os << x.x;
            if (g.dim() == 2) os << ',' << x.y;
            os << ',' << int(c.contact[g.index(i, j)]) << ',' << int(fbmask[g.index(i, j)])
               << ',' << mism[g.index(i, j)] << '\n';
        }
}

}  // namespace obl
