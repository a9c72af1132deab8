#include "inradius/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "inradius/errors.hpp"
#include "inradius/parallel.hpp"

namespace inradius {

Grid::Grid(Domain domain, double h) : domain_(std::move(domain)) {
  if (!(h > 0.0)) throw std::invalid_argument("Grid: spacing must be positive");
  const int d = domain_.dim();
  if (d > 8) throw std::invalid_argument("Grid: at most 8 dimensions");
  const Eigen::VectorXd lo = domain_.bbox_lo();
  const Eigen::VectorXd hi = domain_.bbox_hi();
  spacing_.resize(d);
  double total = 1.0;
  for (int j = 0; j < d; ++j) {
    const double extent = hi(j) - lo(j);
    const auto n = std::max<Eigen::Index>(1, static_cast<Eigen::Index>(std::ceil(extent / h - 1e-9)));
    counts_.push_back(n);
    spacing_(j) = extent / static_cast<double>(n);
    axes_.push_back(Eigen::VectorXd::NullaryExpr(n, [&, j](Eigen::Index i) {
      return lo(j) + (static_cast<double>(i) + 0.5) * spacing_(j);
    }));
    total *= static_cast<double>(n);
  }
  if (total > 5e8) throw std::invalid_argument("Grid: more than 5e8 cells requested");
  strides_.assign(static_cast<std::size_t>(d), 1);
  for (int j = d - 2; j >= 0; --j)
    strides_[static_cast<std::size_t>(j)] = strides_[static_cast<std::size_t>(j + 1)] * counts_[static_cast<std::size_t>(j + 1)];
  size_ = static_cast<Eigen::Index>(total);
  mask_.assign(static_cast<std::size_t>(size_), 1);
  if (!domain_.is_box()) {
    parallel_for(size_, [this](std::ptrdiff_t b, std::ptrdiff_t e) {
      Point x;
      for (std::ptrdiff_t i = b; i < e; ++i) {
        center(i, x);
        mask_[static_cast<std::size_t>(i)] = domain_.contains(x) ? 1 : 0;
      }
    });
  }
  num_inside_ = 0;
  for (auto m : mask_) num_inside_ += m;
}

Grid Grid::restricted(const Domain& region) const {
  if (region.dim() != dim()) throw std::invalid_argument("Grid::restricted: dimension mismatch");
  Grid out = *this;
  out.domain_ = region;
  parallel_for(size_, [&out, &region](std::ptrdiff_t b, std::ptrdiff_t e) {
    Point x;
    for (std::ptrdiff_t i = b; i < e; ++i) {
      auto& m = out.mask_[static_cast<std::size_t>(i)];
      if (!m) continue;
      out.center(i, x);
      m = region.contains(x) ? 1 : 0;
    }
  });
  out.num_inside_ = 0;
  for (auto m : out.mask_) out.num_inside_ += m;
  return out;
}

void Grid::center(Eigen::Index flat, Point& out) const {
  const int d = dim();
  out.resize(d);
  for (int j = 0; j < d; ++j) out(j) = axes_[static_cast<std::size_t>(j)](axis_index(flat, j));
}

Eigen::VectorXd Grid::center(Eigen::Index flat) const {
  Point p;
  center(flat, p);
  return p;
}

Grid auto_grid(const Domain& dom, double r_lambda, Eigen::Index max_cells) {
  if (!(r_lambda > 0.0)) throw std::invalid_argument("auto_grid: r_lambda must be positive");
  const Eigen::VectorXd extent = dom.bbox_hi() - dom.bbox_lo();
  double h = r_lambda / 16.0;
  for (int iter = 0; iter < 200; ++iter) {
    double cells = 1.0;
    for (Eigen::Index j = 0; j < extent.size(); ++j) cells *= std::max(1.0, std::ceil(extent(j) / h - 1e-9));
    if (cells <= static_cast<double>(max_cells)) break;
    h *= std::max(1.0001, std::pow(cells / static_cast<double>(max_cells), 1.0 / static_cast<double>(extent.size())));
  }
  return Grid(dom, h);
}

double FieldSamples::max_modulus(const Grid& grid) const {
  double m = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    if (grid.inside(i)) m = std::max(m, modulus[static_cast<std::size_t>(i)]);
  return m;
}

std::vector<double> FieldSamples::density() const {
  std::vector<double> out(modulus.size());
  for (std::size_t i = 0; i < modulus.size(); ++i) out[i] = modulus[i] * modulus[i];
  return out;
}

FieldSamples sample_field(const Eigenfunction& ef, const Grid& grid) {
  if (ef.dim() != grid.dim()) throw std::invalid_argument("sample_field: dimension mismatch");
  const int d = grid.dim();
  const Eigen::Index terms = ef.num_terms();
  const Complex i_unit(0.0, 1.0);

  // Separable factors exp(i x_j xi_kj) per axis, and the per-term cell growth factor.
  std::vector<Eigen::MatrixXcd> factor(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    const Eigen::VectorXd& ax = grid.axis(j);
    auto& f = factor[static_cast<std::size_t>(j)];
    f.resize(terms, ax.size());
    for (Eigen::Index i = 0; i < ax.size(); ++i)
      for (Eigen::Index k = 0; k < terms; ++k) f(k, i) = std::exp(i_unit * ax(i) * ef.frequencies()(j, k));
  }
  Eigen::VectorXd cell_weight(terms);
  for (Eigen::Index k = 0; k < terms; ++k) {
    const Eigen::VectorXd b = ef.frequencies().col(k).imag().cwiseAbs();
    cell_weight(k) = std::abs(ef.amplitudes()(k)) * ef.frequencies().col(k).norm() *
                     std::exp(0.5 * grid.spacing().dot(b));
  }

  FieldSamples out;
  const auto n = static_cast<std::size_t>(grid.size());
  out.values.resize(n);
  out.modulus.resize(n);
  out.cell_lipschitz.resize(n);
  parallel_for(grid.size(), [&](std::ptrdiff_t b, std::ptrdiff_t e) {
    Eigen::VectorXcd prod(terms);
    for (std::ptrdiff_t i = b; i < e; ++i) {
      prod.setOnes();
      for (int j = 0; j < d; ++j) prod.array() *= factor[static_cast<std::size_t>(j)].col(grid.axis_index(i, j)).array();
      const auto idx = static_cast<std::size_t>(i);
      out.values[idx] = (ef.amplitudes().array() * prod.array()).sum();
      out.modulus[idx] = std::abs(out.values[idx]);
      out.cell_lipschitz[idx] = cell_weight.dot(prod.cwiseAbs());
    }
  });
  return out;
}

double l2_mass(std::span<const double> density, const Domain& region, const Grid& grid) {
  if (static_cast<Eigen::Index>(density.size()) != grid.size()) throw std::invalid_argument("l2_mass: density size mismatch");
  if (region.dim() != grid.dim()) throw std::invalid_argument("l2_mass: dimension mismatch");
  const bool whole = region == grid.domain();
  const double sum = deterministic_sum(grid.size(), [&](std::ptrdiff_t i) {
    if (!grid.inside(i)) return 0.0;
    if (!whole) {
      Point x;
      grid.center(i, x);
      if (!region.contains(x)) return 0.0;
    }
    return density[static_cast<std::size_t>(i)];
  });
  return grid.cell_volume() * sum;
}

double l2_mass(const Eigenfunction& ef, const Domain& region, const Grid& grid) {
  const auto density = sample_field(ef, grid).density();
  return l2_mass(density, region, grid);
}

MassReport mass_report(std::span<const double> density, const Domain& dom, double r, const Grid& grid) {
  MassReport rep;
  rep.total = l2_mass(density, dom, grid);
  if (!(rep.total > 0.0)) throw ZeroFieldError("mass_report: the field has zero L2 mass on the domain");
  if (const auto interior = r_interior(dom, r)) rep.interior = l2_mass(density, *interior, grid);
  rep.ratio_sqrt = std::min(1.0, std::sqrt(rep.interior / rep.total));
  return rep;
}

MassReport mass_report(const Eigenfunction& ef, const Domain& dom, double r, const Grid& grid) {
  const auto density = sample_field(ef, grid).density();
  return mass_report(density, dom, r, grid);
}

}  // namespace inradius
