#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "inradius/domain.hpp"
#include "inradius/symbol.hpp"

namespace inradius {

// Differential operators act as D = i d/dx, so D^alpha e^{i x.xi} = (-xi)^alpha e^{i x.xi}
// and a plane wave with frequency xi solves H psi = lambda psi iff P(-xi) = lambda.

struct PlaneWaveTerm {
  Complex amplitude;
  Eigen::VectorXcd frequency;
};

/// r_lambda = |lambda|^{-1/m} and the unit-modulus rescaled parameter mu = lambda / |lambda|.
struct SpectralScale {
  Complex lambda;
  double r_lambda;
  Complex mu;

  static SpectralScale of(Complex lambda, int order);
};

/// Finite superposition psi(x) = sum_k a_k exp(i x.xi_k) of exact solutions of H psi = lambda psi.
class Eigenfunction {
 public:
  /// frequencies holds one column per term. Throws ContractError when some column misses the
  /// eigenequation by more than `tolerance` relative to the evaluation scale.
  Eigenfunction(Symbol symbol, Complex lambda, Eigen::VectorXcd amplitudes, Eigen::MatrixXcd frequencies,
                double tolerance = 1e-10);
  Eigenfunction(Symbol symbol, Complex lambda, const std::vector<PlaneWaveTerm>& terms, double tolerance = 1e-10);

  const Symbol& symbol() const { return symbol_; }
  Complex lambda() const { return lambda_; }
  int dim() const { return symbol_.dim(); }
  Eigen::Index num_terms() const { return amplitudes_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  const Eigen::MatrixXcd& frequencies() const { return frequencies_; }
  PlaneWaveTerm term(Eigen::Index k) const { return {amplitudes_(k), frequencies_.col(k)}; }

  /// c * psi
  Eigenfunction scaled(Complex c) const;
  Eigenfunction with_amplitudes(Eigen::VectorXcd amplitudes) const;

 private:
  Symbol symbol_;
  Complex lambda_;
  Eigen::VectorXcd amplitudes_;
  Eigen::MatrixXcd frequencies_;
};

/// The m vectors xi = t_j v with t_j^m = lambda / P(v), ordered by arg(t_j) then |t_j|.
std::vector<Eigen::VectorXcd> solve_frequencies(const Symbol& sym, Complex lambda, const Eigen::VectorXcd& v);

struct RecipeTerm {
  Eigen::VectorXcd direction;
  int root_index = 0;
  Complex amplitude{1.0, 0.0};
};
using Recipe = std::vector<RecipeTerm>;

/// Builds sum_k a_k exp(i x.xi_k) where -xi_k is the root_index-th output of solve_frequencies.
Eigenfunction synth(const Symbol& sym, Complex lambda, const Recipe& recipe);

template <typename Derived>
Complex eval_field(const Eigenfunction& ef, const Eigen::MatrixBase<Derived>& x) {
  if (x.size() != ef.dim()) throw std::invalid_argument("eval_field: dimension mismatch");
  const Eigen::VectorXcd phase = ef.frequencies().transpose() * x.template cast<Complex>();
  return (ef.amplitudes().array() * (Complex(0.0, 1.0) * phase.array()).exp()).sum();
}

/// D^gamma psi(x) = sum_k a_k (-xi_k)^gamma exp(i x.xi_k).
Complex eval_derivative(const Eigenfunction& ef, const MultiIndex& gamma, const Eigen::VectorXd& x);

/// Ordinary gradient d psi / dx_j (no factor i).
Eigen::VectorXcd eval_gradient(const Eigenfunction& ef, const Eigen::VectorXd& x);

/// |(H psi)(x) - lambda psi(x)| with H psi assembled from eval_derivative over the coefficient map.
double residual(const Eigenfunction& ef, const Eigen::VectorXd& x);

/// 1e-10 (1 + |lambda|) sum_k |a_k| max_k exp(-x.Im xi_k)
double residual_tolerance(const Eigenfunction& ef, const Eigen::VectorXd& x);

/// sum_k |a_k| |xi_k| exp(S_k), S_k = sup over dom of -x.Im xi_k. Upper bound for sup |grad psi| on dom.
double gradient_sup_bound(const Eigenfunction& ef, const Domain& dom);

/// gradient_sup_bound over the closed ball B(center, radius); radius may be zero.
double local_gradient_bound(const Eigenfunction& ef, const Eigen::VectorXd& center, double radius);

/// u(y) = r^{d/2} psi(center + r y) / norm, materialized with frequencies r xi_k and eigenvalue r^m lambda.
Eigenfunction rescale(const Eigenfunction& ef, const Eigen::VectorXd& center, double r, double norm);

/// Representative of the projective class {c psi : c != 0}. Amplitudes are divided by the first
/// amplitude of (near-)maximal modulus and snapped to a 2^-32 grid, so c psi and psi map to the
/// same field for any complex c.
Eigenfunction canonical_representative(const Eigenfunction& ef);

// Text format: header "dim=<d> lambda=<re> <im>", then "term: a_re a_im ; xi = re1 im1 ... red imd".
Eigenfunction read_field(std::istream& in, const Symbol& sym);
void write_field(std::ostream& out, const Eigenfunction& ef);
Eigenfunction load_field(const std::string& path, const Symbol& sym);

/// "dir_re1 dir_im1 ... | root | a_re a_im ; ..." (terms separated by ';', fields by '|').
Recipe parse_recipe(std::string_view text, int dim);
std::string format_recipe(const Recipe& recipe);

}  // namespace inradius
