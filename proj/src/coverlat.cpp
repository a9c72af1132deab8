#include "inradius/coverlat.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "inradius/errors.hpp"
#include "inradius/parallel.hpp"

namespace inradius {

namespace {

/// Uniform bucket grid with cell size `cell` for radius queries (dimension <= 8).
class BucketIndex {
 public:
  using Key = std::array<long long, 8>;

  BucketIndex(int dim, double cell) : dim_(dim), cell_(cell) {
    if (dim > 8) throw std::invalid_argument("vitali_cover: at most 8 dimensions");
  }

  void insert(const Eigen::Ref<const Eigen::VectorXd>& x, Eigen::Index id) { buckets_[coords(x)].push_back(id); }

  template <typename F>
  void for_neighbors(const Eigen::Ref<const Eigen::VectorXd>& x, int reach, F&& visit) const {
    const Key base = coords(x);
    Key c = base;
    std::array<int, 8> off{};
    for (int j = 0; j < dim_; ++j) off[static_cast<std::size_t>(j)] = -reach;
    while (true) {
      for (int j = 0; j < dim_; ++j) c[static_cast<std::size_t>(j)] = base[static_cast<std::size_t>(j)] + off[static_cast<std::size_t>(j)];
      if (auto it = buckets_.find(c); it != buckets_.end())
        for (Eigen::Index id : it->second) visit(id);
      int j = 0;
      while (j < dim_ && ++off[static_cast<std::size_t>(j)] > reach) off[static_cast<std::size_t>(j++)] = -reach;
      if (j == dim_) break;
    }
  }

 private:
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = 1469598103934665603ULL;
      for (long long v : k) h = (h ^ static_cast<std::size_t>(v)) * 1099511628211ULL;
      return h;
    }
  };

  Key coords(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    Key c{};
    for (int j = 0; j < dim_; ++j) c[static_cast<std::size_t>(j)] = static_cast<long long>(std::floor(x(j) / cell_));
    return c;
  }

  int dim_;
  double cell_;
  std::unordered_map<Key, std::vector<Eigen::Index>, KeyHash> buckets_;
};

}  // namespace

int overlap_bound(int d) {
  int n = 1;
  for (int j = 0; j < d; ++j) n *= 5;
  return n;
}

CoverResult vitali_cover(const Eigen::MatrixXd& points, double r) {
  if (points.cols() == 0) throw std::invalid_argument("vitali_cover: no points");
  if (!(r > 0.0)) throw std::invalid_argument("vitali_cover: r must be positive");
  const int d = static_cast<int>(points.rows());
  const double sep = 0.5 * r;

  CoverResult out;
  out.r = r;
  out.overlap_bound = overlap_bound(d);
  BucketIndex index(d, sep);
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    bool free = true;
    index.for_neighbors(points.col(i), 1, [&](Eigen::Index c) {
      if (free && (points.col(i) - points.col(c)).norm() < sep) free = false;
    });
    if (free) {
      index.insert(points.col(i), i);
      out.center_indices.push_back(i);
    }
  }
  out.centers.resize(d, static_cast<Eigen::Index>(out.center_indices.size()));
  for (std::size_t k = 0; k < out.center_indices.size(); ++k)
    out.centers.col(static_cast<Eigen::Index>(k)) = points.col(out.center_indices[k]);

  // Observed overlap of the open balls B(x_j, r) at the input points.
  std::vector<int> overlap(static_cast<std::size_t>(points.cols()), 0);
  parallel_for(points.cols(), [&](std::ptrdiff_t b, std::ptrdiff_t e) {
    for (std::ptrdiff_t i = b; i < e; ++i) {
      int n = 0;
      index.for_neighbors(points.col(i), 2, [&](Eigen::Index c) {
        if ((points.col(i) - points.col(c)).norm() < r) ++n;
      });
      overlap[static_cast<std::size_t>(i)] = n;
    }
  });
  out.max_overlap = *std::max_element(overlap.begin(), overlap.end());
  return out;
}

GoodBall good_ball(const Grid& grid, std::span<const double> f, const Domain& interior, double r) {
  if (static_cast<Eigen::Index>(f.size()) != grid.size()) throw std::invalid_argument("good_ball: f size mismatch");
  if (!(r > 0.0)) throw std::invalid_argument("good_ball: r must be positive");
  const int d = grid.dim();

  GoodBall gb;
  gb.r = r;
  gb.center = Eigen::VectorXd::Zero(d);
  gb.total_mass = l2_mass(f, grid.domain(), grid);
  if (!(gb.total_mass > 0.0)) throw std::invalid_argument("good_ball: f has no mass");
  gb.interior_mass = l2_mass(f, interior, grid);
  if (!(gb.interior_mass > 0.0)) {
    gb.vacuous = true;
    return gb;
  }

  std::vector<Eigen::Index> cells;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (!grid.inside(i)) continue;
    Point x;
    grid.center(i, x);
    if (interior.contains(x)) cells.push_back(i);
  }
  Eigen::MatrixXd points(d, static_cast<Eigen::Index>(cells.size()));
  for (std::size_t k = 0; k < cells.size(); ++k) points.col(static_cast<Eigen::Index>(k)) = grid.center(cells[k]);
  const auto cover = vitali_cover(points, r);
  gb.num_centers = cover.centers.cols();
  gb.max_overlap = cover.max_overlap;
  gb.guarantee = gb.interior_mass / (2.0 * overlap_bound(d) * gb.total_mass);

  // Quadrature of f over B(c, r/2) and B(c, r) for every center.
  std::vector<double> inner(static_cast<std::size_t>(gb.num_centers)), outer(inner.size());
  parallel_for(gb.num_centers, [&](std::ptrdiff_t b, std::ptrdiff_t e) {
    std::vector<Eigen::Index> lo(static_cast<std::size_t>(d)), hi(lo.size()), idx(lo.size());
    for (std::ptrdiff_t c = b; c < e; ++c) {
      const Eigen::VectorXd center = cover.centers.col(c);
      for (int j = 0; j < d; ++j) {
        const double x0 = grid.axis(j)(0);
        const double s = grid.spacing()(j);
        lo[static_cast<std::size_t>(j)] = std::max<Eigen::Index>(0, static_cast<Eigen::Index>(std::floor((center(j) - r - x0) / s)));
        hi[static_cast<std::size_t>(j)] = std::min<Eigen::Index>(grid.count(j) - 1, static_cast<Eigen::Index>(std::ceil((center(j) + r - x0) / s)));
      }
      double in_sum = 0.0;
      double out_sum = 0.0;
      idx = lo;
      while (true) {
        Eigen::Index flat = 0;
        double dist2 = 0.0;
        for (int j = 0; j < d; ++j) {
          const auto q = idx[static_cast<std::size_t>(j)];
          flat += q * grid.stride(j);
          const double dx = grid.axis(j)(q) - center(j);
          dist2 += dx * dx;
        }
        if (grid.inside(flat)) {
          const double dist = std::sqrt(dist2);
          const double v = f[static_cast<std::size_t>(flat)];
          if (dist < r) out_sum += v;
          if (dist < 0.5 * r) in_sum += v;
        }
        int j = d - 1;
        while (j >= 0 && ++idx[static_cast<std::size_t>(j)] > hi[static_cast<std::size_t>(j)]) {
          idx[static_cast<std::size_t>(j)] = lo[static_cast<std::size_t>(j)];
          --j;
        }
        if (j < 0) break;
      }
      inner[static_cast<std::size_t>(c)] = grid.cell_volume() * in_sum;
      outer[static_cast<std::size_t>(c)] = grid.cell_volume() * out_sum;
    }
  });

  Eigen::Index best = -1;
  double best_ratio = -1.0;
  for (Eigen::Index c = 0; c < gb.num_centers; ++c) {
    const double o = outer[static_cast<std::size_t>(c)];
    const double ratio = o > 0.0 ? inner[static_cast<std::size_t>(c)] / o : 0.0;
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = c;
    }
  }
  gb.center = cover.centers.col(best);
  gb.inner_mass = inner[static_cast<std::size_t>(best)];
  gb.outer_mass = outer[static_cast<std::size_t>(best)];
  gb.ratio = best_ratio;
  if (gb.ratio < gb.guarantee) {
    std::ostringstream msg;
    msg << "good_ball: best ratio " << gb.ratio << " below the guarantee " << gb.guarantee;
    throw ContractError(msg.str());
  }
  return gb;
}

double lattice_radius(double c0, double lower_scale, int order, double modulus, double delta, double* r0_out) {
  if (!(c0 > 0.0)) throw std::invalid_argument("lattice_radius: c0 must be positive");
  if (!(delta < 1.0)) throw std::invalid_argument("lattice_radius: delta must be < 1");
  const double m = order;
  const double half = 0.5 * c0;

  // R0: C_low (1 + t)^{m-1} <= (c0/2) t^m for t >= R0, bisection on [1, 1e6].
  double r0 = 1.0;
  if (lower_scale > 0.0) {
    const auto g = [&](double t) { return half * std::pow(t, m) - lower_scale * std::pow(1.0 + t, m - 1.0); };
    if (g(1.0) < 0.0) {
      double lo = 1.0;
      double hi = 1e6;
      if (g(hi) < 0.0) throw std::domain_error("lattice_radius: R0 exceeds 1e6");
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) >= 0.0 ? hi : lo) = mid;
      }
      r0 = hi;
    }
  }
  // (c0/2) t^m - |lambda| - t^{m-1+delta} is increasing beyond t* = (1/(c0/2))^{1/(1-delta)}.
  const auto h = [&](double t) { return half * std::pow(t, m) - modulus - std::pow(t, m - 1.0 + delta); };
  double lo = std::pow(1.0 / half, 1.0 / (1.0 - delta));
  double root = lo;
  if (h(lo) < 0.0) {
    double hi = 2.0 * lo;
    while (h(hi) < 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (h(mid) >= 0.0 ? hi : lo) = mid;
    }
    root = hi;
  }
  if (r0_out) *r0_out = r0;
  return std::max(r0, root);
}

LatticeCount count_lattice(const Symbol& sym, Complex lambda, const LatticeOptions& opts) {
  const int d = sym.dim();
  const int m = sym.order();
  LatticeCount out;
  out.lambda = lambda;
  out.delta = opts.delta;
  const auto ell = sample_ellipticity(sym, opts.ellipticity_refinement);
  if (ell.value < 1e-10) throw NonEllipticError("count_lattice: principal part appears non-elliptic", ell.witness);
  out.c0 = ell.value;
  out.enumeration_radius = lattice_radius(out.c0, sym.lower_order_scale(), m, std::abs(lambda), opts.delta, &out.R0);

  const double reach = opts.margin * out.enumeration_radius;
  const auto bound = static_cast<long long>(std::ceil(reach));
  const double points = std::pow(2.0 * static_cast<double>(bound) + 1.0, d);
  if (points > opts.budget) {
    std::ostringstream msg;
    msg << "count_lattice: enumeration budget exceeded (R1 = " << out.enumeration_radius << ", " << points << " points)";
    throw BudgetExceededError(msg.str(), out.enumeration_radius);
  }

  const double exponent = m - 1.0 + opts.delta;
  const long long side = 2 * bound + 1;
  // One slab per value of the first coordinate; merged in slab order.
  std::vector<std::vector<Eigen::VectorXi>> inside(static_cast<std::size_t>(side)), shell(inside.size());
  parallel_for(side, [&](std::ptrdiff_t b, std::ptrdiff_t e) {
    Eigen::VectorXi xi(d);
    Eigen::VectorXd xd(d);
    for (std::ptrdiff_t s = b; s < e; ++s) {
      xi.setConstant(static_cast<int>(-bound));
      xi(0) = static_cast<int>(s - bound);
      while (true) {
        xd = xi.cast<double>();
        const double norm = xd.norm();
        if (norm <= reach) {
          const double lhs = std::abs(eval_symbol(sym, xd) - lambda);
          if (lhs <= std::pow(norm, exponent)) {
            auto& bucket = norm <= out.enumeration_radius ? inside : shell;
            bucket[static_cast<std::size_t>(s)].push_back(xi);
          }
        }
        int j = d - 1;
        while (j >= 1 && ++xi(j) > bound) xi(j--) = static_cast<int>(-bound);
        if (j < 1) break;
      }
    }
  });
  for (auto& slab : inside)
    for (auto& w : slab) out.witnesses.push_back(std::move(w));
  out.count = static_cast<Eigen::Index>(out.witnesses.size());
  for (const auto& slab : shell) {
    if (!slab.empty()) {
      std::ostringstream msg;
      msg << "count_lattice: solution (" << slab.front().transpose() << ") in the margin shell beyond R1 = "
          << out.enumeration_radius;
      throw ContractError(msg.str());
    }
  }
  return out;
}

}  // namespace inradius
