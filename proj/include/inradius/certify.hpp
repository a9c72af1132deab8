#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "inradius/domain.hpp"
#include "inradius/eigenfield.hpp"
#include "inradius/geometry.hpp"

namespace inradius {

/// A ball B(center, radius) on which |psi| >= amplitude / 2.
struct InradiusCertificate {
  Eigen::VectorXd center;
  double radius = 0.0;
  double amplitude = 0.0;      // |psi(center)|
  double lipschitz = 0.0;      // gradient bound valid on the ball
  double boundary_dist = 0.0;  // dist(center, complement of the domain)
};

struct SigmaEstimate {
  double certified_inradius = 0.0;
  Eigen::VectorXd certified_center;
  std::optional<InradiusCertificate> certificate;
  double measured_inradius = 0.0;
  double zero_threshold = 0.0;
  double h = 0.0;
  std::vector<std::string> warnings;
};

/// min(eta / 2L, boundary_dist)
double lipschitz_ball(double eta, double lipschitz, double boundary_dist);

/// Volume of the Euclidean ball of radius R in R^d.
double ball_volume(int d, double radius);

/// mass / vol(B(0, R))^{1/2}, where mass is the L2 norm (not its square) of u on B(0, R).
double sup_lower_bound(double mass, double ball_radius, int d);

/// Certificate at a single point: the radius is min(eta / 2L, dist) with L the gradient bound on
/// a ball at least as large as the result. nullopt when psi(x) = 0.
std::optional<InradiusCertificate> certify_point(const Eigenfunction& ef, const Domain& dom, const Eigen::VectorXd& x);

/// Checks |psi| >= amplitude / 2 at the center and the 2d axis extremes at radius (1 - 1e-9).
bool spot_verify(const Eigenfunction& ef, const InradiusCertificate& cert);

/// Largest certified nonvanishing ball centered at a grid cell (ties: lowest cell index).
SigmaEstimate certified_inradius(const Eigenfunction& ef, const Domain& dom, const Grid& grid);
SigmaEstimate certified_inradius(const Eigenfunction& ef, const Domain& dom, const Grid& grid, const FieldSamples& samples);

/// Distance-transform estimate of inrad(Sigma). tau defaults to 1e-6 max |psi|.
SigmaEstimate measured_inradius(const Eigenfunction& ef, const Domain& dom, const Grid& grid,
                                std::optional<double> tau = std::nullopt);
SigmaEstimate measured_inradius(const Eigenfunction& ef, const Domain& dom, const Grid& grid, const FieldSamples& samples,
                                std::optional<double> tau = std::nullopt);

/// Both halves, sharing one sampling pass.
SigmaEstimate estimate_sigma(const Eigenfunction& ef, const Domain& dom, const Grid& grid,
                             std::optional<double> tau = std::nullopt);

/// Exact squared Euclidean distance from each cell center to the nearest seed center
/// (infinity when there are no seeds), computed one axis at a time.
std::vector<double> squared_distance_transform(std::span<const std::uint8_t> seeds, const Grid& grid);

}  // namespace inradius
