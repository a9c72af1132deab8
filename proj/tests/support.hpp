#pragma once

// Shared generators and brute-force oracles for the test programs.

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "inradius/eigenfield.hpp"
#include "inradius/symbol.hpp"

namespace testing_support {

using inradius::CoefficientMap;
using inradius::Complex;
using inradius::MultiIndex;
using inradius::Recipe;
using inradius::Symbol;

inline CoefficientMap poly_mul(const CoefficientMap& a, const CoefficientMap& b) {
  CoefficientMap out;
  for (const auto& [x, cx] : a)
    for (const auto& [y, cy] : b) {
      std::vector<int> e(x.entries());
      for (int j = 0; j < x.dim(); ++j) e[static_cast<std::size_t>(j)] += y[j];
      out[MultiIndex(e)] += cx * cy;
    }
  return out;
}

inline Complex random_complex(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n;
  return {scale * n(rng), scale * n(rng)};
}

// Elliptic homogeneous symbol of order m in dimension d <= 3 (d = 3 needs m even):
//   d = 1: c xi^m
//   d = 2: c prod_j (xi_1 + z_j xi_2) with |Im z_j| >= 0.3
//   d = 3: c (xi^T A xi)^{m/2} with Re A positive definite
inline Symbol random_elliptic_symbol(std::mt19937_64& rng, int d, int m) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Complex c = random_complex(rng);
  while (std::abs(c) < 0.3) c = random_complex(rng);
  CoefficientMap p;
  if (d == 1) {
    p[MultiIndex({m})] = c;
  } else if (d == 2) {
    p[MultiIndex({0, 0})] = c;
    for (int j = 0; j < m; ++j) {
      const double im = (u(rng) < 0 ? -1.0 : 1.0) * (0.3 + std::abs(u(rng)));
      CoefficientMap f;
      f[MultiIndex({1, 0})] = 1.0;
      f[MultiIndex({0, 1})] = Complex(u(rng), im);
      p = poly_mul(p, f);
    }
  } else {
    if (m % 2 != 0) throw std::invalid_argument("random_elliptic_symbol: d = 3 needs even m");
    Eigen::Matrix3d b = Eigen::Matrix3d::NullaryExpr([&] { return u(rng); });
    const Eigen::Matrix3d re = b * b.transpose() + 0.5 * Eigen::Matrix3d::Identity();
    Eigen::Matrix3d im = Eigen::Matrix3d::NullaryExpr([&] { return 0.3 * u(rng); });
    im = 0.5 * (im + im.transpose()).eval();
    CoefficientMap q;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        std::vector<int> e(3, 0);
        ++e[static_cast<std::size_t>(i)];
        ++e[static_cast<std::size_t>(j)];
        q[MultiIndex(e)] += Complex(re(i, j), im(i, j));
      }
    p[MultiIndex({0, 0, 0})] = c;
    for (int k = 0; k < m / 2; ++k) p = poly_mul(p, q);
  }
  std::erase_if(p, [](const auto& kv) { return kv.second == Complex(0.0, 0.0); });
  return Symbol(d, m, p);
}

// Adds random lower-order terms of size `scale` to a homogeneous symbol.
inline Symbol with_lower_order(std::mt19937_64& rng, const Symbol& sym, double scale) {
  CoefficientMap p = sym.coeffs();
  const int d = sym.dim();
  std::vector<int> e(static_cast<std::size_t>(d), 0);
  // every multi-index of order < m
  std::function<void(int, int)> rec = [&](int j, int left) {
    if (j == d) {
      if (std::bernoulli_distribution(0.5)(rng)) p[MultiIndex(e)] += random_complex(rng, scale);
      return;
    }
    for (int a = 0; a <= left; ++a) {
      e[static_cast<std::size_t>(j)] = a;
      rec(j + 1, left - a);
    }
    e[static_cast<std::size_t>(j)] = 0;
  };
  rec(0, sym.order() - 1);
  return Symbol(d, sym.order(), p);
}

inline Eigen::VectorXcd random_real_direction(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n;
  Eigen::VectorXd v(d);
  do {
    for (int j = 0; j < d; ++j) v(j) = n(rng);
  } while (v.norm() < 1e-3);
  return v.normalized().cast<Complex>();
}

inline Recipe random_recipe(std::mt19937_64& rng, const Symbol& sym, int terms) {
  Recipe r;
  for (int k = 0; k < terms; ++k) {
    const int root = static_cast<int>(rng() % static_cast<std::uint64_t>(sym.order()));
    r.push_back({random_real_direction(rng, sym.dim()), root, random_complex(rng)});
  }
  return r;
}

// sin(k pi x_1) sin(k pi x_2) for the Laplacian, lambda = 2 k^2 pi^2.
inline inradius::Eigenfunction sin_product(double k = 1.0) {
  const double pi = std::numbers::pi;
  const auto sym = Symbol::laplacian(2);
  Eigen::VectorXcd d1(2), d2(2);
  d1 << 1.0, 1.0;
  d2 << 1.0, -1.0;
  const Recipe recipe = {{d1, 0, -0.25}, {d1, 1, -0.25}, {d2, 0, 0.25}, {d2, 1, 0.25}};
  return inradius::synth(sym, 2.0 * k * k * pi * pi, recipe);
}

// One term a exp(i x.xi) with the given frequency, as an eigenfunction of the Laplacian.
inline inradius::Eigenfunction plane_wave(const Eigen::VectorXcd& xi, Complex a = 1.0) {
  const auto sym = Symbol::laplacian(static_cast<int>(xi.size()));
  const Complex lambda = (xi.array() * xi.array()).sum();
  return inradius::Eigenfunction(sym, lambda, Eigen::VectorXcd::Constant(1, a), Eigen::MatrixXcd(xi));
}

// Exact integral of exp(i x.k) over B(0, R) for real k, d <= 3.
inline double ball_fourier(const Eigen::VectorXd& k, double R) {
  const int d = static_cast<int>(k.size());
  const double s = k.norm();
  const double pi = std::numbers::pi;
  if (s * R < 1e-6) {
    const double vol = d == 1 ? 2 * R : d == 2 ? pi * R * R : 4.0 / 3.0 * pi * R * R * R;
    return vol * (1.0 - s * s * R * R / (2.0 * (d + 2)));
  }
  if (d == 1) return 2.0 * std::sin(s * R) / s;
  if (d == 2) return 2.0 * pi * R * std::cyl_bessel_j(1.0, s * R) / s;
  return 4.0 * pi * (std::sin(s * R) - s * R * std::cos(s * R)) / (s * s * s);
}

// ||u||^2 over B(c, R) in closed form for real frequencies.
inline double exact_ball_mass_sq(const inradius::Eigenfunction& ef, const Eigen::VectorXd& c, double R) {
  Complex sum = 0.0;
  const auto& a = ef.amplitudes();
  const Eigen::MatrixXd xi = ef.frequencies().real();
  for (Eigen::Index j = 0; j < a.size(); ++j)
    for (Eigen::Index k = 0; k < a.size(); ++k) {
      const Eigen::VectorXd dk = xi.col(j) - xi.col(k);
      sum += a(j) * std::conj(a(k)) * std::exp(Complex(0.0, dk.dot(c))) * ball_fourier(dk, R);
    }
  return sum.real();
}

}  // namespace testing_support
