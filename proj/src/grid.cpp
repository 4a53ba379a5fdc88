#include "obl/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace obl {

Domain Domain::interval(double a, double b) {
    if (b <= a) throw std::invalid_argument("Domain: interval needs b > a");
    Domain d;
    d.shape = Shape::Interval;
    d.dim = 1;
    d.a[0] = a;
    d.b[0] = b;
    return d;
}

Domain Domain::rectangle(double a1, double b1, double a2, double b2) {
    if (b1 <= a1 || b2 <= a2) throw std::invalid_argument("Domain: rectangle needs positive extents");
    Domain d;
    d.shape = Shape::Rectangle;
    d.dim = 2;
    d.a[0] = a1;
    d.b[0] = b1;
    d.a[1] = a2;
    d.b[1] = b2;
    return d;
}

Domain Domain::disc(double radius) {
    if (radius <= 0.0) throw std::invalid_argument("Domain: disc needs positive radius");
    Domain d;
    d.shape = Shape::Disc;
    d.dim = 2;
    d.radius = radius;
    return d;
}

namespace {

int axis_count(double a, double b, double h) {
    const double ext = b - a;
    const int n = static_cast<int>(std::lround(ext / h));
    if (n < 2) throw std::invalid_argument("make_grid: h too large for domain extent");
    if (std::abs(n * h - ext) > 1e-9 * ext)
        throw std::invalid_argument("make_grid: h does not divide the domain extent");
    return n;  // number of cells along the axis
}

}  // namespace

std::shared_ptr<const Grid> make_grid(const Domain& dom, double h) {
    if (h <= 0.0) throw std::invalid_argument("make_grid: h must be positive");
    auto grid = std::make_shared<Grid>();
    Grid& g = const_cast<Grid&>(*grid);
    g.dom_ = dom;
    g.h_ = h;

    if (dom.shape == Domain::Shape::Interval) {
        const int n = axis_count(dom.a[0], dom.b[0], h);
        g.ox_ = dom.a[0];
        g.nx_ = n + 1;
        g.ny_ = 1;
        g.cls_.assign(g.nx_, NodeClass::Interior);
        g.cls_.front() = g.cls_.back() = NodeClass::Boundary;
    } else if (dom.shape == Domain::Shape::Rectangle) {
        const int n1 = axis_count(dom.a[0], dom.b[0], h);
        const int n2 = axis_count(dom.a[1], dom.b[1], h);
        g.ox_ = dom.a[0];
        g.oy_ = dom.a[1];
        g.nx_ = n1 + 1;
        g.ny_ = n2 + 1;
        g.cls_.assign(g.nx_ * g.ny_, NodeClass::Interior);
        for (int j = 0; j < g.ny_; ++j)
            for (int i = 0; i < g.nx_; ++i)
                if (i == 0 || j == 0 || i == g.nx_ - 1 || j == g.ny_ - 1)
                    g.cls_[g.index(i, j)] = NodeClass::Boundary;
    } else {
        const double R = dom.radius;
        if (h >= R) throw std::invalid_argument("make_grid: h too large for disc radius");
        const int m = static_cast<int>(std::ceil(R / h)) + 1;
        g.ox_ = -m * h;
        g.oy_ = -m * h;
        g.nx_ = g.ny_ = 2 * m + 1;
        g.cls_.assign(g.nx_ * g.ny_, NodeClass::Exterior);
        auto inside = [&](int i, int j) {
            return grid->coord(i, j).norm() <= R + 1e-12 * R;
        };
        for (int j = 0; j < g.ny_; ++j)
            for (int i = 0; i < g.nx_; ++i)
                if (inside(i, j)) g.cls_[g.index(i, j)] = NodeClass::Interior;
        // first exterior-adjacent ring carries the boundary data
        for (int j = 0; j < g.ny_; ++j)
            for (int i = 0; i < g.nx_; ++i) {
                if (g.cls_[g.index(i, j)] != NodeClass::Exterior) continue;
                const bool adj =
                    (i > 0 && g.cls_[g.index(i - 1, j)] == NodeClass::Interior) ||
                    (i < g.nx_ - 1 && g.cls_[g.index(i + 1, j)] == NodeClass::Interior) ||
                    (j > 0 && g.cls_[g.index(i, j - 1)] == NodeClass::Interior) ||
                    (j < g.ny_ - 1 && g.cls_[g.index(i, j + 1)] == NodeClass::Interior);
                if (adj) g.cls_[g.index(i, j)] = NodeClass::Boundary;
            }
    }

    for (NodeClass c : g.cls_) {
        if (c != NodeClass::Exterior) ++g.active_count_;
        if (c == NodeClass::Boundary) ++g.boundary_count_;
    }
    return grid;
}

bool Grid::cell_active(int i, int j) const {
    if (dom_.dim == 1) return true;  // all interval cells are active
    return active(i, j) && active(i + 1, j) && active(i, j + 1) && active(i + 1, j + 1);
}

Vec Grid::cell_center(int i, int j) const {
    if (dom_.dim == 1) return Vec::d1(ox_ + (i + 0.5) * h_);
    return Vec::d2(ox_ + (i + 0.5) * h_, oy_ + (j + 0.5) * h_);
}

GridField GridField::from_function(std::shared_ptr<const Grid> grid,
                                   const std::function<double(const Vec&)>& f) {
    GridField out(grid);
    for (int j = 0; j < grid->ny(); ++j)
        for (int i = 0; i < grid->nx(); ++i)
            if (grid->active(i, j)) out.at(i, j) = f(grid->coord(i, j));
    return out;
}

CellVectorField::CellVectorField(std::shared_ptr<const Grid> grid)
    : grid_(std::move(grid)),
      data_(static_cast<size_t>(grid_->cells_x()) * grid_->cells_y(),
            Vec::zero(grid_->dim())) {}

CellVectorField discrete_gradient(const GridField& f) {
    const Grid& g = f.grid();
    if (g.nx() < 2) throw std::invalid_argument("discrete_gradient: need >= 2 nodes per axis");
    CellVectorField out(f.grid_ptr());
    const double h = g.h();
    if (g.dim() == 1) {
        for (int i = 0; i < g.cells_x(); ++i)
            out.at(i, 0) = Vec::d1((f.at(i + 1, 0) - f.at(i, 0)) / h);
    } else {
        for (int j = 0; j < g.cells_y(); ++j)
            for (int i = 0; i < g.cells_x(); ++i) {
                if (!g.cell_active(i, j)) continue;
                const double gx = (f.at(i + 1, j) - f.at(i, j) + f.at(i + 1, j + 1) -
                                   f.at(i, j + 1)) /
                                  (2.0 * h);
                const double gy = (f.at(i, j + 1) - f.at(i, j) + f.at(i + 1, j + 1) -
                                   f.at(i + 1, j)) /
                                  (2.0 * h);
                out.at(i, j) = Vec::d2(gx, gy);
            }
    }
    return out;
}

double sup_on_ball(const GridField& f, const Vec& center, double rho) {
    const Grid& g = f.grid();
    double best = -1.0;
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            if (!g.active(i, j)) continue;
            if ((g.coord(i, j) - center).norm() > rho + 1e-12) continue;
            best = std::max(best, std::abs(f.at(i, j)));
        }
    if (best < 0.0) throw std::invalid_argument("sup_on_ball: no active node in ball");
    return best;
}

namespace {

template <typename F>
void for_cells_in_ball(const Grid& g, const Vec& center, double r, F&& fn) {
    int count = 0;
    for (int j = 0; j < g.cells_y(); ++j)
        for (int i = 0; i < g.cells_x(); ++i) {
            if (!g.cell_active(i, j)) continue;
            if ((g.cell_center(i, j) - center).norm() > r + 1e-12) continue;
            fn(i, j);
            ++count;
        }
    if (count == 0) throw std::invalid_argument("ball contains no gradient cell");
}

}  // namespace

Vec mean_gradient_on_ball(const GridField& f, const Vec& center, double r) {
    CellVectorField grad = discrete_gradient(f);
    Vec sum = Vec::zero(f.grid().dim());
    int count = 0;
    for_cells_in_ball(f.grid(), center, r, [&](int i, int j) {
        sum = sum + grad.at(i, j);
        ++count;
    });
    return (1.0 / count) * sum;
}

double oscillation_integral(const GridField& f, const Vec& center, double r, double q) {
    CellVectorField grad = discrete_gradient(f);
    const Vec mean = mean_gradient_on_ball(f, center, r);
    const double hn = std::pow(f.grid().h(), f.grid().dim());
    double sum = 0.0;
    for_cells_in_ball(f.grid(), center, r, [&](int i, int j) {
        sum += std::pow((grad.at(i, j) - mean).norm(), q) * hn;
    });
    return sum;
}

void write_csv(const GridField& f, std::ostream& os) {
    const Grid& g = f.grid();
    os << (g.dim() == 1 ? "x1,value\n" : "x1,x2,value\n");
    os.precision(15);
    for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
            if (!g.active(i, j)) continue;
            const Vec c = g.coord(i, j);
            if (g.dim() == 1)
                os << c.x << ',' << f.at(i, j) << '\n';
            else
                os << c.x << ',' << c.y << ',' << f.at(i, j) << '\n';
        }
}

}  // namespace obl
