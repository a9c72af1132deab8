#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "inradius/domain.hpp"
#include "inradius/eigenfield.hpp"

namespace inradius {

/// Stack-allocated point for per-cell kernels (dimension <= 8).
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 8, 1>;

/// Uniform cell-center grid over the bounding box of a domain. Each axis is split into
/// ceil(extent / h) equal cells, so the per-axis spacing is at most h. Cells are enumerated
/// row-major (last axis fastest); only cells whose center lies in the domain are "inside".
class Grid {
 public:
  Grid(Domain domain, double h);

  /// Same cells, with the inside mask intersected with `region` and the domain replaced by it.
  Grid restricted(const Domain& region) const;

  const Domain& domain() const { return domain_; }
  int dim() const { return domain_.dim(); }
  Eigen::Index size() const { return size_; }
  Eigen::Index num_inside() const { return num_inside_; }
  Eigen::Index count(int axis) const { return counts_[static_cast<std::size_t>(axis)]; }
  Eigen::Index stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }
  const Eigen::VectorXd& axis(int j) const { return axes_[static_cast<std::size_t>(j)]; }
  const Eigen::VectorXd& spacing() const { return spacing_; }
  /// Largest per-axis spacing.
  double h() const { return spacing_.maxCoeff(); }
  double cell_volume() const { return spacing_.prod(); }
  /// Half the cell diagonal: every point of a cell is within this distance of its center.
  double half_diagonal() const { return 0.5 * spacing_.norm(); }

  bool inside(Eigen::Index flat) const { return mask_[static_cast<std::size_t>(flat)] != 0; }
  void center(Eigen::Index flat, Point& out) const;
  Eigen::VectorXd center(Eigen::Index flat) const;
  Eigen::Index axis_index(Eigen::Index flat, int axis) const { return (flat / stride(axis)) % count(axis); }

 private:
  Domain domain_;
  std::vector<Eigen::Index> counts_;
  std::vector<Eigen::Index> strides_;
  std::vector<Eigen::VectorXd> axes_;
  Eigen::VectorXd spacing_;
  std::vector<std::uint8_t> mask_;
  Eigen::Index size_ = 0;
  Eigen::Index num_inside_ = 0;
};

/// Spacing r_lambda / 16, coarsened until the bounding box holds at most max_cells cells.
Grid auto_grid(const Domain& dom, double r_lambda, Eigen::Index max_cells = 4'000'000);

/// psi evaluated on every bounding-box cell, plus per-cell upper bounds for |grad psi|.
struct FieldSamples {
  std::vector<Complex> values;
  std::vector<double> modulus;
  /// sup of |grad psi| over the closed cell box
  std::vector<double> cell_lipschitz;

  double max_modulus(const Grid& grid) const;
  std::vector<double> density() const;
};

FieldSamples sample_field(const Eigenfunction& ef, const Grid& grid);

struct MassReport {
  double total = 0.0;       // ||psi||^2 over the domain
  double interior = 0.0;    // ||psi||^2 over the r-interior
  double ratio_sqrt = 0.0;  // sqrt(interior / total)
};

/// Midpoint rule over the grid cells whose centers lie in `region`.
double l2_mass(std::span<const double> density, const Domain& region, const Grid& grid);
double l2_mass(const Eigenfunction& ef, const Domain& region, const Grid& grid);

MassReport mass_report(std::span<const double> density, const Domain& dom, double r, const Grid& grid);
MassReport mass_report(const Eigenfunction& ef, const Domain& dom, double r, const Grid& grid);

}  // namespace inradius
