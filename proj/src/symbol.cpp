#include "inradius/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "inradius/errors.hpp"
#include "inradius/text.hpp"

namespace inradius {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw std::invalid_argument("MultiIndex: dimension must be >= 1");
  for (int a : entries_) {
    if (a < 0) throw std::invalid_argument("MultiIndex: entries must be non-negative");
    order_ += a;
  }
}

MultiIndex MultiIndex::zero(int dim) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(dim), 0)); }

MultiIndex MultiIndex::unit(int dim, int axis) {
  std::vector<int> e(static_cast<std::size_t>(dim), 0);
  e.at(static_cast<std::size_t>(axis)) = 1;
  return MultiIndex(std::move(e));
}

bool GradedLex::operator()(const MultiIndex& a, const MultiIndex& b) const {
  if (a.order() != b.order()) return a.order() < b.order();
  return a.entries() < b.entries();
}

Symbol::Symbol(int dim, int order, CoefficientMap coeffs) : dim_(dim), order_(order), coeffs_(std::move(coeffs)) {
  if (dim_ < 1) throw std::invalid_argument("Symbol: dim must be >= 1");
  if (order_ < 1) throw std::invalid_argument("Symbol: order must be >= 1");
  bool has_principal = false;
  for (const auto& [alpha, c] : coeffs_) {
    if (alpha.dim() != dim_) throw std::invalid_argument("Symbol: multi-index dimension mismatch");
    if (alpha.order() > order_) throw std::invalid_argument("Symbol: multi-index exceeds the order");
    if (c == Complex(0.0)) continue;
    if (alpha.order() == order_)
      has_principal = true;
    else
      homogeneous_ = false;
  }
  if (!has_principal) throw std::invalid_argument("Symbol: no nonzero coefficient of top order");
}

Symbol Symbol::laplacian(int dim) {
  CoefficientMap c;
  for (int j = 0; j < dim; ++j) {
    std::vector<int> e(static_cast<std::size_t>(dim), 0);
    e[static_cast<std::size_t>(j)] = 2;
    c.emplace(MultiIndex(std::move(e)), Complex(1.0, 0.0));
  }
  return Symbol(dim, 2, std::move(c));
}

Symbol Symbol::principal_part() const {
  CoefficientMap c;
  for (const auto& [alpha, v] : coeffs_)
    if (alpha.order() == order_ && v != Complex(0.0)) c.emplace(alpha, v);
  return Symbol(dim_, order_, std::move(c));
}

double Symbol::coefficient_scale() const {
  double s = 0.0;
  for (const auto& kv : coeffs_) s += std::abs(kv.second);
  return s;
}

double Symbol::lower_order_scale() const {
  double s = 0.0;
  for (const auto& [alpha, c] : coeffs_)
    if (alpha.order() < order_) s += std::abs(c);
  return s;
}

void Symbol::set_ell_const(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("Symbol: ellipticity constant must be positive");
  ell_const_ = c;
}

double homogeneity_residual(const Symbol& sym, const Eigen::VectorXcd& v, Complex t) {
  if (!sym.homogeneous()) throw ContractError("homogeneity_residual: symbol is not homogeneous");
  if (v.size() != sym.dim()) throw std::invalid_argument("homogeneity_residual: dimension mismatch");
  if (v.isZero(0.0)) throw std::invalid_argument("homogeneity_residual: v must be nonzero");
  const Eigen::VectorXcd tv = t * v;
  return std::abs(eval_symbol(sym, tv) - std::pow(t, sym.order()) * eval_symbol(sym, v));
}

std::vector<Eigen::VectorXd> sphere_samples(int dim, int level) {
  std::vector<Eigen::VectorXd> out;
  if (dim == 1) {
    out.push_back(Eigen::VectorXd::Constant(1, 1.0));
    out.push_back(Eigen::VectorXd::Constant(1, -1.0));
    return out;
  }
  if (dim == 2) {
    const long n = 64L << level;
    out.reserve(static_cast<std::size_t>(n));
    for (long j = 0; j < n; ++j) {
      const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
      Eigen::VectorXd w(2);
      w << std::cos(th), std::sin(th);
      out.push_back(w);
    }
    return out;
  }
  if (dim == 3) {
    // Fibonacci sphere
    const long n = 512L << level;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    out.reserve(static_cast<std::size_t>(n));
    for (long j = 0; j < n; ++j) {
      const double z = 1.0 - (2.0 * static_cast<double>(j) + 1.0) / static_cast<double>(n);
      const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * static_cast<double>(j);
      Eigen::VectorXd w(3);
      w << rad * std::cos(phi), rad * std::sin(phi), z;
      out.push_back(w);
    }
    return out;
  }
  // Higher dimensions: seeded Gaussian directions.
  const long n = 4096L << level;
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(level));
  std::normal_distribution<double> g;
  out.reserve(static_cast<std::size_t>(n));
  for (long j = 0; j < n; ++j) {
    Eigen::VectorXd w(dim);
    for (int i = 0; i < dim; ++i) w(i) = g(rng);
    out.push_back(w.normalized());
  }
  return out;
}

EllipticitySample sample_ellipticity(const Symbol& sym, int refinement) {
  if (refinement < 1) throw std::invalid_argument("estimate_ellipticity: refinement must be >= 1");
  const Symbol principal = sym.principal_part();
  EllipticitySample best{std::numeric_limits<double>::infinity(), Eigen::VectorXd::Zero(sym.dim())};
  for (int level = 0; level < refinement; ++level) {
    for (const auto& w : sphere_samples(sym.dim(), level)) {
      const double v = std::abs(eval_symbol(principal, w));
      if (v < best.value) best = {v, w};
    }
  }
  return best;
}

double estimate_ellipticity(Symbol& sym, int refinement, double floor) {
  const auto s = sample_ellipticity(sym, refinement);
  if (s.value < floor) {
    std::ostringstream msg;
    msg << "symbol appears non-elliptic: |P_m| = " << s.value << " along (" << s.witness.transpose() << ")";
    throw NonEllipticError(msg.str(), s.witness);
  }
  sym.set_ell_const(s.value);
  return s.value;
}

Symbol read_symbol(std::istream& in) {
  std::string line;
  int dim = -1;
  int order = -1;
  CoefficientMap coeffs;
  while (std::getline(in, line)) {
    const auto body = detail::strip_comment(line);
    if (body.empty()) continue;
    if (dim < 0) {
      const auto kv = detail::parse_header(body);
      dim = std::stoi(kv.at("dim"));
      order = std::stoi(kv.at("order"));
      continue;
    }
    // alpha = a1 ... ad ; re im
    const auto eq = body.find('=');
    const auto semi = body.find(';');
    if (eq == std::string::npos || semi == std::string::npos || detail::trim(body.substr(0, eq)) != "alpha")
      throw std::invalid_argument("symbol file: malformed line '" + line + "'");
    const auto alpha = detail::parse_numbers<int>(body.substr(eq + 1, semi - eq - 1));
    const auto c = detail::parse_numbers<double>(body.substr(semi + 1));
    if (static_cast<int>(alpha.size()) != dim || c.size() != 2)
      throw std::invalid_argument("symbol file: wrong arity in '" + line + "'");
    coeffs[MultiIndex(alpha)] += Complex(c[0], c[1]);
  }
  if (dim < 0) throw std::invalid_argument("symbol file: missing header");
  return Symbol(dim, order, std::move(coeffs));
}

void write_symbol(std::ostream& out, const Symbol& sym) {
  out << "dim=" << sym.dim() << " order=" << sym.order() << '\n';
  for (const auto& [alpha, c] : sym.coeffs()) {
    out << "alpha =";
    for (int a : alpha.entries()) out << ' ' << a;
    out << " ; " << detail::format_double(c.real()) << ' ' << detail::format_double(c.imag()) << '\n';
  }
}

Symbol load_symbol(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open symbol file " + path);
  return read_symbol(in);
}

}  // namespace inradius
