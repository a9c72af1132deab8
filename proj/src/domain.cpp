#include "inradius/domain.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "inradius/text.hpp"

namespace inradius {

Domain Domain::box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  if (lo.size() < 1 || lo.size() != hi.size()) throw std::invalid_argument("box: bad corner dimensions");
  if (!(lo.array() < hi.array()).all()) throw std::invalid_argument("box: need lo < hi componentwise");
  return Domain(Kind::box, std::move(lo), std::move(hi), 0.0);
}

Domain Domain::ball(Eigen::VectorXd center, double radius) {
  if (center.size() < 1) throw std::invalid_argument("ball: empty center");
  if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be positive");
  Eigen::VectorXd unused = center;
  return Domain(Kind::ball, std::move(center), std::move(unused), radius);
}

Domain Domain::unit_box(int dim) { return box(Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Ones(dim)); }

Eigen::VectorXd Domain::bbox_lo() const { return is_box() ? a_ : (a_.array() - radius_).matrix(); }

Eigen::VectorXd Domain::bbox_hi() const { return is_box() ? b_ : (a_.array() + radius_).matrix(); }

bool Domain::contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (is_box()) return (x.array() >= a_.array()).all() && (x.array() <= b_.array()).all();
  return (x - a_).norm() < radius_;
}

bool Domain::contains_closed(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (is_box()) return contains(x);
  return (x - a_).norm() <= radius_;
}

double Domain::inradius() const { return is_box() ? 0.5 * (b_ - a_).minCoeff() : radius_; }

double Domain::volume() const {
  if (is_box()) return (b_ - a_).prod();
  const double d = dim();
  return std::pow(std::numbers::pi, d / 2.0) * std::pow(radius_, d) / std::tgamma(d / 2.0 + 1.0);
}

bool Domain::operator==(const Domain& other) const {
  return kind_ == other.kind_ && a_ == other.a_ && b_ == other.b_ && radius_ == other.radius_;
}

std::optional<Domain> r_interior(const Domain& dom, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("r_interior: r must be positive");
  if (dom.is_box()) {
    Eigen::VectorXd lo = dom.lo().array() + r;
    Eigen::VectorXd hi = dom.hi().array() - r;
    if (!(lo.array() < hi.array()).all()) return std::nullopt;
    return Domain::box(std::move(lo), std::move(hi));
  }
  if (dom.radius() - r <= 0.0) return std::nullopt;
  return Domain::ball(dom.center(), dom.radius() - r);
}

double dist_to_complement(const Domain& dom, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != dom.dim()) throw std::invalid_argument("dist_to_complement: dimension mismatch");
  if (!dom.contains_closed(x)) throw std::invalid_argument("dist_to_complement: point outside the domain");
  if (dom.is_box()) return std::min((x - dom.lo()).minCoeff(), (dom.hi() - x).minCoeff());
  return dom.radius() - (x - dom.center()).norm();
}

bool is_subset(const Domain& inner, const Domain& outer) {
  if (inner.dim() != outer.dim()) return false;
  if (outer.is_box()) {
    return (inner.bbox_lo().array() >= outer.lo().array()).all() &&
           (inner.bbox_hi().array() <= outer.hi().array()).all();
  }
  if (inner.is_box()) {
    // farthest corner from the ball center
    const Eigen::VectorXd far = (inner.lo() - outer.center()).cwiseAbs().cwiseMax((inner.hi() - outer.center()).cwiseAbs());
    return far.norm() <= outer.radius();
  }
  return (inner.center() - outer.center()).norm() + inner.radius() <= outer.radius();
}

Domain parse_domain(std::string_view spec) {
  std::istringstream in{std::string(spec)};
  std::string kind;
  in >> kind;
  std::string rest;
  std::getline(in, rest);
  const auto v = detail::parse_numbers<double>(rest);
  if (kind == "box") {
    if (v.empty() || v.size() % 2 != 0) throw std::invalid_argument("domain: box needs 2d numbers");
    const auto d = static_cast<Eigen::Index>(v.size() / 2);
    return Domain::box(Eigen::Map<const Eigen::VectorXd>(v.data(), d),
                       Eigen::Map<const Eigen::VectorXd>(v.data() + d, d));
  }
  if (kind == "ball") {
    if (v.size() < 2) throw std::invalid_argument("domain: ball needs d+1 numbers");
    const auto d = static_cast<Eigen::Index>(v.size() - 1);
    return Domain::ball(Eigen::Map<const Eigen::VectorXd>(v.data(), d), v.back());
  }
  throw std::invalid_argument("domain: unknown kind '" + kind + "'");
}

std::string format_domain(const Domain& dom) {
  std::string out = dom.is_box() ? "box" : "ball";
  const auto append = [&out](const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) out += ' ' + detail::format_double(v(i));
  };
  if (dom.is_box()) {
    append(dom.lo());
    append(dom.hi());
  } else {
    append(dom.center());
    out += ' ' + detail::format_double(dom.radius());
  }
  return out;
}

}  // namespace inradius
