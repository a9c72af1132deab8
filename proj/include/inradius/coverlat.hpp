#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "inradius/domain.hpp"
#include "inradius/geometry.hpp"
#include "inradius/symbol.hpp"

namespace inradius {

/// 5^d, the overlap bound of the dilated cover balls.
int overlap_bound(int d);

struct CoverResult {
  Eigen::MatrixXd centers;                  // one column per accepted center
  std::vector<Eigen::Index> center_indices; // columns of the input point matrix
  double r = 0.0;
  int max_overlap = 0;                      // observed, over the input points
  int overlap_bound = 0;
};

/// Greedy maximal family of input points whose r/4-balls are pairwise disjoint, scanned in input
/// order. Points are the columns of `points`.
CoverResult vitali_cover(const Eigen::MatrixXd& points, double r);

struct GoodBall {
  bool vacuous = false;      // interior mass M = 0
  Eigen::VectorXd center;
  double r = 0.0;
  double inner_mass = 0.0;   // integral of f over B(center, r/2)
  double outer_mass = 0.0;   // integral of f over B(center, r)
  double ratio = 0.0;
  double guarantee = 0.0;    // M / (2 N_d int f)
  double interior_mass = 0.0;
  double total_mass = 0.0;
  Eigen::Index num_centers = 0;
  int max_overlap = 0;
};

/// Cover of the grid cells lying in E, and the cover ball maximizing inner/outer mass of f.
/// f is sampled on every bounding-box cell of the grid. Throws ContractError if the best ratio
/// misses the guarantee.
GoodBall good_ball(const Grid& grid, std::span<const double> f, const Domain& interior, double r);

struct LatticeOptions {
  double delta = 0.5;
  double margin = 2.0;     // enumeration radius = margin * R1
  double budget = 1e8;     // maximal number of enumerated lattice points
  int ellipticity_refinement = 6;
};

struct LatticeCount {
  Complex lambda;
  double delta = 0.5;
  double c0 = 0.0;         // sampled ellipticity of the principal part
  double R0 = 1.0;         // |P| >= c0/2 |xi|^m beyond R0
  double enumeration_radius = 0.0;  // R1
  Eigen::Index count = 0;
  std::vector<Eigen::VectorXi> witnesses;  // lexicographic order
};

/// #{xi in Z^d : |P(xi) - lambda| <= |xi|^{m-1+delta}} with a computed finite radius R1.
/// Throws ContractError if a solution appears in the shell R1 < |xi| <= margin R1.
LatticeCount count_lattice(const Symbol& sym, Complex lambda, const LatticeOptions& opts = {});

/// Radius beyond which |P(xi) - lambda| <= |xi|^{m-1+delta} cannot hold.
double lattice_radius(double c0, double lower_scale, int order, double modulus, double delta, double* r0 = nullptr);

}  // namespace inradius
