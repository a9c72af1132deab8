#pragma once

#include <complex>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace inradius {

using Complex = std::complex<double>;

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);

  static MultiIndex zero(int dim);
  static MultiIndex unit(int dim, int axis);

  int dim() const { return static_cast<int>(entries_.size()); }
  /// |alpha|
  int order() const { return order_; }
  int operator[](int j) const { return entries_[static_cast<std::size_t>(j)]; }
  const std::vector<int>& entries() const { return entries_; }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<int> entries_;
  int order_ = 0;
};

/// Graded lexicographic order: lower |alpha| first, ties broken lexicographically.
struct GradedLex {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

using CoefficientMap = std::map<MultiIndex, Complex, GradedLex>;

/// xi^alpha for a real or complex vector.
template <typename Derived>
typename Derived::Scalar monomial(const MultiIndex& alpha, const Eigen::MatrixBase<Derived>& xi) {
  using Scalar = typename Derived::Scalar;
  Scalar out(1);
  for (int j = 0; j < alpha.dim(); ++j)
    for (int p = 0; p < alpha[j]; ++p) out *= xi(j);
  return out;
}

/// Constant-coefficient symbol P(xi) = sum c_alpha xi^alpha with |alpha| <= m.
class Symbol {
 public:
  Symbol(int dim, int order, CoefficientMap coeffs);

  /// xi_1^2 + ... + xi_d^2
  static Symbol laplacian(int dim);

  int dim() const { return dim_; }
  int order() const { return order_; }
  bool homogeneous() const { return homogeneous_; }
  const CoefficientMap& coeffs() const { return coeffs_; }

  /// Terms with |alpha| = m.
  Symbol principal_part() const;
  /// sum |c_alpha| over all terms.
  double coefficient_scale() const;
  /// sum |c_alpha| over terms with |alpha| < m.
  double lower_order_scale() const;

  std::optional<double> ell_const() const { return ell_const_; }
  void set_ell_const(double c);

 private:
  int dim_;
  int order_;
  CoefficientMap coeffs_;
  bool homogeneous_ = true;
  std::optional<double> ell_const_;
};

template <typename Derived>
Complex eval_symbol(const Symbol& sym, const Eigen::MatrixBase<Derived>& xi) {
  if (xi.size() != sym.dim()) throw std::invalid_argument("eval_symbol: dimension mismatch");
  Complex sum(0.0, 0.0);
  for (const auto& [alpha, c] : sym.coeffs()) sum += c * Complex(monomial(alpha, xi));
  return sum;
}

/// sum |c_alpha| |xi^alpha|, the magnitude scale against which evaluation round-off is measured.
template <typename Derived>
double eval_scale(const Symbol& sym, const Eigen::MatrixBase<Derived>& xi) {
  double s = 0.0;
  for (const auto& [alpha, c] : sym.coeffs()) s += std::abs(c) * std::abs(monomial(alpha, xi));
  return s;
}

/// |P(t v) - t^m P(v)|. Only defined for homogeneous symbols.
double homogeneity_residual(const Symbol& sym, const Eigen::VectorXcd& v, Complex t);

/// Deterministic unit-sphere samples for one refinement level. Level k+1 doubles the density of level k.
std::vector<Eigen::VectorXd> sphere_samples(int dim, int level);

struct EllipticitySample {
  double value;
  Eigen::VectorXd witness;
};

/// min |P_m(omega)| over the sphere samples of levels 0 .. refinement-1. Non-increasing in refinement.
EllipticitySample sample_ellipticity(const Symbol& sym, int refinement);

/// Sampled ellipticity constant, stored into sym. Throws NonEllipticError below `floor`.
double estimate_ellipticity(Symbol& sym, int refinement, double floor = 1e-10);

// Text format: header "dim=<d> order=<m>", then "alpha = a1 ... ad ; re im" per coefficient.
Symbol read_symbol(std::istream& in);
void write_symbol(std::ostream& out, const Symbol& sym);
Symbol load_symbol(const std::string& path);

}  // namespace inradius
