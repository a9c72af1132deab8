#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace inradius {

/// An open axis-aligned box or an open Euclidean ball.
class Domain {
 public:
  enum class Kind { box, ball };

  static Domain box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  static Domain ball(Eigen::VectorXd center, double radius);
  static Domain unit_box(int dim);

  Kind kind() const { return kind_; }
  bool is_box() const { return kind_ == Kind::box; }
  int dim() const { return static_cast<int>(a_.size()); }

  const Eigen::VectorXd& lo() const { return a_; }
  const Eigen::VectorXd& hi() const { return b_; }
  const Eigen::VectorXd& center() const { return a_; }
  double radius() const { return radius_; }

  Eigen::VectorXd bbox_lo() const;
  Eigen::VectorXd bbox_hi() const;

  /// Membership used for grid cells: closed for boxes, open for balls.
  bool contains(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  /// Closed membership.
  bool contains_closed(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Radius of the largest inscribed ball.
  double inradius() const;
  double volume() const;

  bool operator==(const Domain& other) const;

 private:
  Domain(Kind kind, Eigen::VectorXd a, Eigen::VectorXd b, double radius)
      : kind_(kind), a_(std::move(a)), b_(std::move(b)), radius_(radius) {}

  Kind kind_;
  Eigen::VectorXd a_;  // lo, or center
  Eigen::VectorXd b_;  // hi, unused for balls
  double radius_ = 0.0;
};

/// {x : B(x, r) inside dom}; nullopt once it collapses.
std::optional<Domain> r_interior(const Domain& dom, double r);

double dist_to_complement(const Domain& dom, const Eigen::Ref<const Eigen::VectorXd>& x);

/// True when every point of `inner` lies in the closure of `outer`.
bool is_subset(const Domain& inner, const Domain& outer);

// "box lo1 .. lod hi1 .. hid" or "ball c1 .. cd R"
Domain parse_domain(std::string_view spec);
std::string format_domain(const Domain& dom);

}  // namespace inradius
