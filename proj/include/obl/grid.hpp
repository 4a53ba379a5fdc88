#ifndef OBL_GRID_HPP
#define OBL_GRID_HPP

#include <functional>
#include <memory>
#include <ostream>
#include <vector>

#include "obl/vec.hpp"

namespace obl {

struct Domain {
    enum class Shape { Interval, Rectangle, Disc };
    Shape shape = Shape::Interval;
    int dim = 1;
    double a[2] = {0.0, 0.0};
    double b[2] = {1.0, 1.0};
    double radius = 1.0;  // disc only

    static Domain interval(double a, double b);
    static Domain rectangle(double a1, double b1, double a2, double b2);
    static Domain disc(double radius);
};

enum class NodeClass : unsigned char { Interior, Boundary, Exterior };

// Uniform lattice with interior/boundary/exterior classification. Disc domains
// are masked rectangles: nodes inside the disc are interior, the first
// exterior-adjacent ring carries the Dirichlet data.
class Grid {
  public:
    const Domain& domain() const { return dom_; }
    double h() const { return h_; }
    int dim() const { return dom_.dim; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int lattice_size() const { return nx_ * ny_; }
    int active_count() const { return active_count_; }
    int boundary_count() const { return boundary_count_; }

    int index(int i, int j) const { return j * nx_ + i; }
    Vec coord(int i, int j) const {
        return (dom_.dim == 1) ? Vec::d1(ox_ + i * h_) : Vec::d2(ox_ + i * h_, oy_ + j * h_);
    }
    NodeClass cls(int i, int j) const { return cls_[index(i, j)]; }
    bool active(int i, int j) const { return cls_[index(i, j)] != NodeClass::Exterior; }

    // cell (i,j) spans nodes (i..i+1, j..j+1); usable when all corners active
    int cells_x() const { return nx_ - 1; }
    int cells_y() const { return dom_.dim == 1 ? 1 : ny_ - 1; }
    bool cell_active(int i, int j) const;
    Vec cell_center(int i, int j) const;

    friend std::shared_ptr<const Grid> make_grid(const Domain& dom, double h);

  private:
    Domain dom_;
    double h_ = 0.0;
    double ox_ = 0.0, oy_ = 0.0;  // lattice origin
    int nx_ = 0, ny_ = 1;
    int active_count_ = 0;
    int boundary_count_ = 0;
    std::vector<NodeClass> cls_;
};

std::shared_ptr<const Grid> make_grid(const Domain& dom, double h);

// Scalar field on the active nodes of a grid. Storage covers the full lattice;
// exterior entries are kept at zero and never read.
class GridField {
  public:
    GridField() = default;
    explicit GridField(std::shared_ptr<const Grid> grid)
        : grid_(std::move(grid)), data_(grid_->lattice_size(), 0.0) {}

    static GridField from_function(std::shared_ptr<const Grid> grid,
                                   const std::function<double(const Vec&)>& f);

    const Grid& grid() const { return *grid_; }
    std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
    double& at(int i, int j) { return data_[grid_->index(i, j)]; }
    double at(int i, int j) const { return data_[grid_->index(i, j)]; }
    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

    // number of active-node values
    int size() const { return grid_->active_count(); }

  private:
    std::shared_ptr<const Grid> grid_;
    std::vector<double> data_;
};

// Forward-difference gradient on cells.
class CellVectorField {
  public:
    explicit CellVectorField(std::shared_ptr<const Grid> grid);
    const Grid& grid() const { return *grid_; }
    Vec& at(int i, int j) { return data_[j * grid_->cells_x() + i]; }
    const Vec& at(int i, int j) const { return data_[j * grid_->cells_x() + i]; }

  private:
    std::shared_ptr<const Grid> grid_;
    std::vector<Vec> data_;
};

CellVectorField discrete_gradient(const GridField& f);

// max of |f| over active nodes with |x - center| <= rho
double sup_on_ball(const GridField& f, const Vec& center, double rho);

// average of the cell gradient over cells whose centers lie in the ball
Vec mean_gradient_on_ball(const GridField& f, const Vec& center, double r);

// sum over those cells of |grad f - mean|^q h^n
double oscillation_integral(const GridField& f, const Vec& center, double r, double q);

void write_csv(const GridField& f, std::ostream& os);

}  // namespace obl

#endif
