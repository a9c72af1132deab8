#include "inradius/eigenfield.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "inradius/errors.hpp"
#include "inradius/text.hpp"

namespace inradius {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_eigenequation(const Symbol& sym, Complex lambda, const Eigen::MatrixXcd& freqs, double tol) {
  for (Eigen::Index k = 0; k < freqs.cols(); ++k) {
    const Eigen::VectorXcd neg = -freqs.col(k);
    const double scale = std::max({std::abs(lambda), eval_scale(sym, neg), 1e-300});
    const double err = std::abs(eval_symbol(sym, neg) - lambda);
    if (err > tol * scale) {
      std::ostringstream msg;
      msg << "plane wave " << k << " misses the eigenequation: |P(-xi) - lambda| = " << err
          << " exceeds " << tol << " relative to " << scale;
      throw ContractError(msg.str());
    }
  }
}

}  // namespace

SpectralScale SpectralScale::of(Complex lambda, int order) {
  const double mod = std::abs(lambda);
  if (!(mod > 0.0)) throw std::invalid_argument("SpectralScale: lambda must be nonzero");
  return {lambda, std::pow(mod, -1.0 / order), lambda / mod};
}

Eigenfunction::Eigenfunction(Symbol symbol, Complex lambda, Eigen::VectorXcd amplitudes,
                             Eigen::MatrixXcd frequencies, double tolerance)
    : symbol_(std::move(symbol)),
      lambda_(lambda),
      amplitudes_(std::move(amplitudes)),
      frequencies_(std::move(frequencies)) {
  if (amplitudes_.size() == 0) throw std::invalid_argument("Eigenfunction: needs at least one term");
  if (frequencies_.cols() != amplitudes_.size() || frequencies_.rows() != symbol_.dim())
    throw std::invalid_argument("Eigenfunction: frequency matrix must be dim x terms");
  check_eigenequation(symbol_, lambda_, frequencies_, tolerance);
}

Eigenfunction::Eigenfunction(Symbol symbol, Complex lambda, const std::vector<PlaneWaveTerm>& terms, double tolerance)
    : symbol_(std::move(symbol)), lambda_(lambda) {
  if (terms.empty()) throw std::invalid_argument("Eigenfunction: needs at least one term");
  const auto k = static_cast<Eigen::Index>(terms.size());
  amplitudes_.resize(k);
  frequencies_.resize(symbol_.dim(), k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& t = terms[static_cast<std::size_t>(j)];
    if (t.frequency.size() != symbol_.dim()) throw std::invalid_argument("Eigenfunction: frequency length != dim");
    amplitudes_(j) = t.amplitude;
    frequencies_.col(j) = t.frequency;
  }
  check_eigenequation(symbol_, lambda_, frequencies_, tolerance);
}

Eigenfunction Eigenfunction::scaled(Complex c) const { return with_amplitudes(c * amplitudes_); }

Eigenfunction Eigenfunction::with_amplitudes(Eigen::VectorXcd amplitudes) const {
  if (amplitudes.size() != amplitudes_.size()) throw std::invalid_argument("with_amplitudes: term count mismatch");
  Eigenfunction out = *this;
  out.amplitudes_ = std::move(amplitudes);
  return out;
}

std::vector<Eigen::VectorXcd> solve_frequencies(const Symbol& sym, Complex lambda, const Eigen::VectorXcd& v) {
  if (!sym.homogeneous()) throw ContractError("solve_frequencies: symbol must be homogeneous");
  if (v.size() != sym.dim()) throw std::invalid_argument("solve_frequencies: dimension mismatch");
  if (v.isZero(0.0)) throw std::invalid_argument("solve_frequencies: direction must be nonzero");
  const Complex pv = eval_symbol(sym, v);
  if (std::abs(pv) <= 1e-14 * eval_scale(sym, v))
    throw CharacteristicDirectionError("solve_frequencies: characteristic direction, P(v) = 0");

  const int m = sym.order();
  const Complex w = lambda / pv;
  const double mod = std::pow(std::abs(w), 1.0 / m);
  const double arg = std::arg(w);
  // Angles of the m roots wrapped to (-pi, pi]; sorting on the angle itself keeps the order
  // stable for roots on the negative real axis.
  std::vector<std::pair<double, Complex>> roots;
  roots.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    double theta = (arg + 2.0 * std::numbers::pi * j) / m;
    if (theta > std::numbers::pi) theta -= 2.0 * std::numbers::pi;
    double c = std::cos(theta);
    double s = std::sin(theta);
    if (std::abs(s) < 1e-15) s = 0.0;
    if (std::abs(c) < 1e-15) c = 0.0;
    roots.emplace_back(theta, Complex(mod * c, mod * s));
  }
  std::stable_sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<Eigen::VectorXcd> out;
  out.reserve(roots.size());
  for (const auto& [theta, t] : roots) {
    Eigen::VectorXcd xi = t * v;
    const double scale = std::max({std::abs(lambda), eval_scale(sym, xi), 1e-300});
    if (std::abs(eval_symbol(sym, xi) - lambda) > 1e-12 * scale)
      throw ContractError("solve_frequencies: root does not reproduce lambda to 1e-12");
    out.push_back(std::move(xi));
  }
  return out;
}

Eigenfunction synth(const Symbol& sym, Complex lambda, const Recipe& recipe) {
  if (recipe.empty()) throw std::invalid_argument("synth: empty recipe");
  std::vector<PlaneWaveTerm> terms;
  terms.reserve(recipe.size());
  for (const auto& r : recipe) {
    if (r.root_index < 0 || r.root_index >= sym.order())
      throw std::invalid_argument("synth: root_index outside [0, m)");
    const auto roots = solve_frequencies(sym, lambda, r.direction);
    terms.push_back({r.amplitude, -roots[static_cast<std::size_t>(r.root_index)]});
  }
  return Eigenfunction(sym, lambda, terms);
}

Complex eval_derivative(const Eigenfunction& ef, const MultiIndex& gamma, const Eigen::VectorXd& x) {
  if (x.size() != ef.dim() || gamma.dim() != ef.dim()) throw std::invalid_argument("eval_derivative: dimension mismatch");
  Complex sum(0.0);
  for (Eigen::Index k = 0; k < ef.num_terms(); ++k) {
    const Eigen::VectorXcd neg = -ef.frequencies().col(k);
    const Complex phase = x.cast<Complex>().dot(ef.frequencies().col(k));  // x real: no conjugation
    sum += ef.amplitudes()(k) * monomial(gamma, neg) * std::exp(kI * phase);
  }
  return sum;
}

Eigen::VectorXcd eval_gradient(const Eigenfunction& ef, const Eigen::VectorXd& x) {
  if (x.size() != ef.dim()) throw std::invalid_argument("eval_gradient: dimension mismatch");
  const Eigen::VectorXcd phase = ef.frequencies().transpose() * x.cast<Complex>();
  const Eigen::VectorXcd w = ef.amplitudes().array() * (kI * phase.array()).exp();
  return kI * (ef.frequencies() * w);
}

double residual(const Eigenfunction& ef, const Eigen::VectorXd& x) {
  Complex h_psi(0.0);
  for (const auto& [alpha, c] : ef.symbol().coeffs()) h_psi += c * eval_derivative(ef, alpha, x);
  return std::abs(h_psi - ef.lambda() * eval_field(ef, x));
}

double residual_tolerance(const Eigenfunction& ef, const Eigen::VectorXd& x) {
  const Eigen::VectorXd growth = (-(ef.frequencies().imag().transpose() * x)).array().exp();
  return 1e-10 * (1.0 + std::abs(ef.lambda())) * ef.amplitudes().cwiseAbs().sum() * growth.maxCoeff();
}

double gradient_sup_bound(const Eigenfunction& ef, const Domain& dom) {
  if (dom.dim() != ef.dim()) throw std::invalid_argument("gradient_sup_bound: dimension mismatch");
  if (!dom.is_box()) return local_gradient_bound(ef, dom.center(), dom.radius());
  double bound = 0.0;
  for (Eigen::Index k = 0; k < ef.num_terms(); ++k) {
    const Eigen::VectorXd b = ef.frequencies().col(k).imag();
    // sup of the linear form -x.b over the box sits at a corner
    const double s = (-dom.lo().cwiseProduct(b)).cwiseMax(-dom.hi().cwiseProduct(b)).sum();
    bound += std::abs(ef.amplitudes()(k)) * ef.frequencies().col(k).norm() * std::exp(s);
  }
  return bound;
}

double local_gradient_bound(const Eigenfunction& ef, const Eigen::VectorXd& center, double radius) {
  const auto& freqs = ef.frequencies();
  double bound = 0.0;
  for (Eigen::Index k = 0; k < ef.num_terms(); ++k) {
    double lin = 0.0;
    double imag_sq = 0.0;
    double freq_sq = 0.0;
    for (Eigen::Index j = 0; j < freqs.rows(); ++j) {
      const double b = freqs(j, k).imag();
      lin -= center(j) * b;
      imag_sq += b * b;
      freq_sq += std::norm(freqs(j, k));
    }
    bound += std::abs(ef.amplitudes()(k)) * std::sqrt(freq_sq) * std::exp(lin + radius * std::sqrt(imag_sq));
  }
  return bound;
}

Eigenfunction rescale(const Eigenfunction& ef, const Eigen::VectorXd& center, double r, double norm) {
  if (!(r > 0.0) || !(norm > 0.0)) throw std::invalid_argument("rescale: r and norm must be positive");
  const double factor = std::pow(r, 0.5 * ef.dim()) / norm;
  const Eigen::VectorXcd phase = ef.frequencies().transpose() * center.cast<Complex>();
  Eigen::VectorXcd amps = factor * (ef.amplitudes().array() * (kI * phase.array()).exp()).matrix();
  Eigen::MatrixXcd freqs = r * ef.frequencies();
  const Complex mu = std::pow(r, ef.symbol().order()) * ef.lambda();
  return Eigenfunction(ef.symbol(), mu, std::move(amps), std::move(freqs));
}

Eigenfunction canonical_representative(const Eigenfunction& ef) {
  const Eigen::VectorXd mod = ef.amplitudes().cwiseAbs();
  const double top = mod.maxCoeff();
  if (!(top > 0.0)) return ef;
  Eigen::Index ref = 0;
  while (mod(ref) < top * (1.0 - 1e-8)) ++ref;
  const Complex a_ref = ef.amplitudes()(ref);
  constexpr double kSnap = 4294967296.0;  // 2^32
  Eigen::VectorXcd amps(ef.num_terms());
  for (Eigen::Index k = 0; k < amps.size(); ++k) {
    const Complex q = ef.amplitudes()(k) / a_ref;
    amps(k) = Complex(std::nearbyint(q.real() * kSnap) / kSnap, std::nearbyint(q.imag() * kSnap) / kSnap);
  }
  return ef.with_amplitudes(std::move(amps));
}

Eigenfunction read_field(std::istream& in, const Symbol& sym) {
  std::string line;
  bool have_header = false;
  Complex lambda;
  std::vector<PlaneWaveTerm> terms;
  while (std::getline(in, line)) {
    const auto body = detail::strip_comment(line);
    if (body.empty()) continue;
    if (!have_header) {
      const auto kv = detail::parse_header(body);
      const int d = std::stoi(kv.at("dim"));
      if (d != sym.dim()) throw std::invalid_argument("field file: dim does not match the symbol");
      const auto l = detail::parse_numbers<double>(kv.at("lambda"));
      if (l.size() != 2) throw std::invalid_argument("field file: lambda needs re and im");
      lambda = Complex(l[0], l[1]);
      have_header = true;
      continue;
    }
    if (body.rfind("term:", 0) != 0) throw std::invalid_argument("field file: malformed line '" + line + "'");
    const auto semi = body.find(';');
    const auto eq = body.find('=', semi == std::string::npos ? 0 : semi);
    if (semi == std::string::npos || eq == std::string::npos)
      throw std::invalid_argument("field file: malformed line '" + line + "'");
    const auto a = detail::parse_numbers<double>(body.substr(5, semi - 5));
    const auto xi = detail::parse_numbers<double>(body.substr(eq + 1));
    if (a.size() != 2 || static_cast<int>(xi.size()) != 2 * sym.dim())
      throw std::invalid_argument("field file: wrong arity in '" + line + "'");
    Eigen::VectorXcd f(sym.dim());
    for (int j = 0; j < sym.dim(); ++j) f(j) = Complex(xi[2 * static_cast<std::size_t>(j)], xi[2 * static_cast<std::size_t>(j) + 1]);
    terms.push_back({Complex(a[0], a[1]), std::move(f)});
  }
  if (!have_header) throw std::invalid_argument("field file: missing header");
  return Eigenfunction(sym, lambda, terms);
}

void write_field(std::ostream& out, const Eigenfunction& ef) {
  using detail::format_double;
  out << "dim=" << ef.dim() << " lambda=" << format_double(ef.lambda().real()) << ' '
      << format_double(ef.lambda().imag()) << '\n';
  for (Eigen::Index k = 0; k < ef.num_terms(); ++k) {
    const Complex a = ef.amplitudes()(k);
    out << "term: " << format_double(a.real()) << ' ' << format_double(a.imag()) << " ; xi =";
    for (int j = 0; j < ef.dim(); ++j) {
      const Complex f = ef.frequencies()(j, k);
      out << ' ' << format_double(f.real()) << ' ' << format_double(f.imag());
    }
    out << '\n';
  }
}

Eigenfunction load_field(const std::string& path, const Symbol& sym) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open field file " + path);
  return read_field(in, sym);
}

Recipe parse_recipe(std::string_view text, int dim) {
  Recipe out;
  std::string s(text);
  std::size_t start = 0;
  while (start <= s.size()) {
    auto end = s.find(';', start);
    if (end == std::string::npos) end = s.size();
    const auto term = detail::trim(std::string_view(s).substr(start, end - start));
    start = end + 1;
    if (term.empty()) continue;
    const auto p1 = term.find('|');
    const auto p2 = term.find('|', p1 == std::string::npos ? 0 : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
      throw std::invalid_argument("recipe: expected 'direction | root | amplitude' in '" + term + "'");
    const auto dir = detail::parse_numbers<double>(term.substr(0, p1));
    const auto root = detail::parse_numbers<int>(term.substr(p1 + 1, p2 - p1 - 1));
    const auto amp = detail::parse_numbers<double>(term.substr(p2 + 1));
    RecipeTerm rt;
    rt.direction.resize(dim);
    if (static_cast<int>(dir.size()) == dim) {
      for (int j = 0; j < dim; ++j) rt.direction(j) = dir[static_cast<std::size_t>(j)];
    } else if (static_cast<int>(dir.size()) == 2 * dim) {
      for (int j = 0; j < dim; ++j)
        rt.direction(j) = Complex(dir[2 * static_cast<std::size_t>(j)], dir[2 * static_cast<std::size_t>(j) + 1]);
    } else {
      throw std::invalid_argument("recipe: direction needs d real or 2d (re, im) numbers");
    }
    if (root.size() != 1 || amp.size() != 2) throw std::invalid_argument("recipe: bad root or amplitude");
    rt.root_index = root[0];
    rt.amplitude = Complex(amp[0], amp[1]);
    out.push_back(std::move(rt));
  }
  return out;
}

std::string format_recipe(const Recipe& recipe) {
  using detail::format_double;
  std::string out;
  for (std::size_t k = 0; k < recipe.size(); ++k) {
    const auto& t = recipe[k];
    if (k) out += " ; ";
    for (Eigen::Index j = 0; j < t.direction.size(); ++j)
      out += format_double(t.direction(j).real()) + ' ' + format_double(t.direction(j).imag()) + ' ';
    out += "| " + std::to_string(t.root_index) + " | " + format_double(t.amplitude.real()) + ' ' +
           format_double(t.amplitude.imag());
  }
  return out;
}

}  // namespace inradius
