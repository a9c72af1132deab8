#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "inradius/eigenfield.hpp"
#include "inradius/errors.hpp"
#include "support.hpp"

using namespace inradius;
namespace ts = testing_support;

namespace {
const double pi = std::numbers::pi;
}

TEST_CASE("solve_frequencies examples") {
  const auto lap = Symbol::laplacian(2);
  Eigen::VectorXcd v(2);
  v << 1.0, 1.0;
  const auto roots = solve_frequencies(lap, 2 * pi * pi, v);
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots[0](0) - pi) < 1e-12);
  CHECK(std::abs(roots[0](1) - pi) < 1e-12);
  CHECK(std::abs(roots[1](0) + pi) < 1e-12);
  for (const auto& xi : roots) CHECK(std::abs(eval_symbol(lap, xi) - 2 * pi * pi) < 1e-12 * 2 * pi * pi);

  Eigen::VectorXcd e1(2);
  e1 << 1.0, 0.0;
  const auto imag = solve_frequencies(lap, -1.0, e1);
  // ordered by principal argument: -i before i
  CHECK(imag[0](0) == Complex(0, -1));
  CHECK(imag[1](0) == Complex(0, 1));
  CHECK(eval_symbol(lap, imag[1]) == Complex(-1, 0));

  // lambda = P(v): t_j are the roots of unity
  std::mt19937_64 rng(1);
  const auto sym = ts::random_elliptic_symbol(rng, 2, 3);
  Eigen::VectorXcd w(2);
  w << 0.3, -0.8;
  const auto unity = solve_frequencies(sym, eval_symbol(sym, w), w);
  for (std::size_t j = 0; j < 3; ++j) {
    const Complex t = unity[j](0) / w(0);
    CHECK(std::abs(std::abs(t) - 1.0) < 1e-12);
    CHECK(std::abs(std::pow(t, 3) - 1.0) < 1e-12);
  }

  CHECK_THROWS_AS(solve_frequencies(lap, 1.0, Eigen::VectorXcd::Zero(2)), std::invalid_argument);
  Eigen::VectorXcd null(2);
  null << 1.0, Complex(0, 1);  // P(1, i) = 0
  CHECK_THROWS_AS(solve_frequencies(lap, 1.0, null), CharacteristicDirectionError);
}

TEST_CASE("synth builds the sine product") {
  const auto ef = ts::sin_product();
  CHECK(ef.num_terms() == 4);
  CHECK(std::abs(eval_field(ef, Eigen::Vector2d(0.5, 0.5)) - 1.0) < 1e-14);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector2d x(u(rng), u(rng));
    CHECK(std::abs(eval_field(ef, x) - std::sin(pi * x(0)) * std::sin(pi * x(1))) < 1e-14);
    CHECK(residual(ef, x) <= 1e-10 * (1 + 2 * pi * pi));
  }
  CHECK_THROWS_AS(synth(Symbol::laplacian(2), 1.0, Recipe{}), std::invalid_argument);
}

TEST_CASE("single-term fields never vanish") {
  std::mt19937_64 rng(3);
  const auto lap = Symbol::laplacian(2);
  Eigen::VectorXcd dir(2);
  dir << Complex(std::sqrt(2.0), 0), Complex(0, 1);  // P = 1, complex frequency
  const auto ef = synth(lap, 9.0, {{dir, 0, 1.0}});
  const Eigen::VectorXd im = ef.frequencies().col(0).imag();
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector2d x(u(rng), u(rng));
    CHECK(std::abs(eval_field(ef, x)) == doctest::Approx(std::exp(-x.dot(im))).epsilon(1e-12));
  }
}

TEST_CASE("eval_field and eval_derivative basics") {
  Eigen::VectorXcd xi(2);
  xi << pi, 0.0;
  const auto wave = ts::plane_wave(xi);
  CHECK(std::abs(eval_field(wave, Eigen::Vector2d(1, 0)) + 1.0) < 1e-15);
  CHECK(std::abs(eval_derivative(wave, MultiIndex::unit(2, 0), Eigen::Vector2d(0, 0)) + pi) < 1e-15);

  const auto ef = ts::sin_product();
  const Eigen::Vector2d x(0.3, 0.7);
  CHECK(eval_derivative(ef, MultiIndex::zero(2), x) == eval_field(ef, x));
  const auto zero = ef.with_amplitudes(Eigen::VectorXcd::Zero(4));
  CHECK(eval_field(zero, x) == Complex(0, 0));
  CHECK(residual(zero, x) == 0.0);
}

TEST_CASE("derivatives match central differences") {
  // D = i d/dx, so D^gamma psi = i^{|gamma|} d^gamma psi.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double step = 1e-5;
  for (int trial = 0; trial < 30; ++trial) {
    const auto sym = ts::random_elliptic_symbol(rng, 2, 2);
    const Complex lambda = std::polar(1.0 + 9.0 * u(rng), 6.28 * u(rng));
    const auto ef = synth(sym, lambda, ts::random_recipe(rng, sym, 3));
    const Eigen::Vector2d x(u(rng), u(rng));
    for (int a = 0; a < 2; ++a) {
      Eigen::Vector2d e = Eigen::Vector2d::Zero();
      e(a) = step;
      const Complex fd = (eval_field(ef, x + e) - eval_field(ef, x - e)) / (2 * step);
      const Complex ex = eval_derivative(ef, MultiIndex::unit(2, a), x) / Complex(0, 1);
      CHECK(std::abs(fd - ex) <= 1e-8 * local_gradient_bound(ef, x, 0.0));
      const Complex grad = eval_gradient(ef, x)(a);
      CHECK(std::abs(grad - ex) <= 1e-12 * std::max(1.0, std::abs(ex)));
      for (int b = 0; b < 2; ++b) {
        Eigen::Vector2d f = Eigen::Vector2d::Zero();
        f(b) = step;
        const Complex fd2 = (eval_field(ef, x + e + f) - eval_field(ef, x + e - f) - eval_field(ef, x - e + f) +
                             eval_field(ef, x - e - f)) /
                            (4 * step * step);
        std::vector<int> g(2, 0);
        ++g[static_cast<std::size_t>(a)];
        ++g[static_cast<std::size_t>(b)];
        const Complex ex2 = -eval_derivative(ef, MultiIndex(g), x);
        const double scale = ef.amplitudes().cwiseAbs().sum() * std::pow(ef.frequencies().cwiseAbs().maxCoeff(), 2);
        CHECK(std::abs(fd2 - ex2) <= 1e-4 * scale);
      }
    }
  }
}

TEST_CASE("residual stays tiny for random fields and detects a corrupted frequency") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 2;
    const int m = 1 + trial % 4;
    const auto sym = ts::random_elliptic_symbol(rng, d, m);
    const auto ef = synth(sym, std::polar(1.0 + 99 * u(rng), 6.28 * u(rng)), ts::random_recipe(rng, sym, 4));
    for (int i = 0; i < 20; ++i) {
      Eigen::VectorXd x(d);
      for (int j = 0; j < d; ++j) x(j) = u(rng);
      CHECK(residual(ef, x) <= residual_tolerance(ef, x));
    }
  }
  const auto good = ts::sin_product();
  Eigen::MatrixXcd shifted = good.frequencies();
  shifted.array() += 0.1;
  // bypass the constructor check with a loose tolerance
  const Eigenfunction bad(good.symbol(), good.lambda(), good.amplitudes(), shifted, 1.0);
  const Eigen::Vector2d x(0.3, 0.4);
  CHECK(residual(bad, x) > 1e3 * residual_tolerance(bad, x));
  CHECK_THROWS_AS(Eigenfunction(good.symbol(), good.lambda(), good.amplitudes(), shifted), ContractError);
}

TEST_CASE("gradient_sup_bound") {
  const auto ef = ts::sin_product();
  CHECK(gradient_sup_bound(ef, Domain::unit_box(2)) == doctest::Approx(pi * std::sqrt(2.0)).epsilon(1e-12));
  Eigen::VectorXcd xi(2);
  xi << 3.0, 4.0;
  CHECK(gradient_sup_bound(ts::plane_wave(xi), Domain::unit_box(2)) == doctest::Approx(5.0));

  // dominates sampled gradients on a 200^d grid, including complex frequencies
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    const auto sym = ts::random_elliptic_symbol(rng, 2, 2);
    const auto f = synth(sym, std::polar(20.0, 1.0 * trial), ts::random_recipe(rng, sym, 3));
    const auto dom = trial % 2 ? Domain::unit_box(2) : Domain::ball(Eigen::Vector2d(0.5, 0.5), 0.5);
    const double bound = gradient_sup_bound(f, dom);
    double sampled = 0.0;
    for (int i = 0; i < 200; ++i)
      for (int j = 0; j < 200; ++j) {
        const Eigen::Vector2d x((i + 0.5) / 200, (j + 0.5) / 200);
        if (!dom.contains(x)) continue;
        sampled = std::max(sampled, eval_gradient(f, x).norm());
      }
    CHECK(sampled <= bound);
  }
}

TEST_CASE("spectral scale and rescaling") {
  const auto s = SpectralScale::of(Complex(0.0, 1e4), 2);
  CHECK(s.r_lambda == doctest::Approx(0.01));
  CHECK(std::abs(s.mu - Complex(0, 1)) < 1e-15);
  CHECK(SpectralScale::of(Complex(1e4, 0), 2).r_lambda == s.r_lambda);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + trial % 4;
    const auto sym = ts::random_elliptic_symbol(rng, 2, m);
    const Complex lambda = std::polar(std::pow(10.0, 1 + 3 * u(rng)), 6.28 * u(rng));
    const auto ef = synth(sym, lambda, ts::random_recipe(rng, sym, 4));
    const auto sc = SpectralScale::of(lambda, m);
    const Eigen::Vector2d x0(u(rng), u(rng));
    const auto v = rescale(ef, x0, sc.r_lambda, 2.5);
    CHECK(std::abs(std::abs(v.lambda()) - 1.0) <= 1e-12);
    CHECK(std::abs(v.lambda() - sc.mu) <= 1e-12);
    for (int i = 0; i < 10; ++i) {
      const Eigen::Vector2d y(u(rng) - 0.5, u(rng) - 0.5);
      CHECK(residual(v, y) <= residual_tolerance(v, y));
      const Complex expect = sc.r_lambda * eval_field(ef, (x0 + sc.r_lambda * y).eval()) / 2.5;
      CHECK(std::abs(eval_field(v, y) - expect) <= 1e-9 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST_CASE("canonical representative is projective") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto sym = ts::random_elliptic_symbol(rng, 2, 2);
    const auto ef = synth(sym, 50.0, ts::random_recipe(rng, sym, 4));
    const Complex c = ts::random_complex(rng);
    const auto a = canonical_representative(ef);
    const auto b = canonical_representative(ef.scaled(c));
    CHECK(a.amplitudes() == b.amplitudes());
    CHECK(a.frequencies() == b.frequencies());
  }
}

TEST_CASE("field text round trip and recipe parsing") {
  std::mt19937_64 rng(10);
  const auto sym = ts::random_elliptic_symbol(rng, 2, 3);
  const auto ef = synth(sym, Complex(3, 4), ts::random_recipe(rng, sym, 3));
  std::stringstream ss;
  write_field(ss, ef);
  const auto back = read_field(ss, sym);
  CHECK(back.lambda() == ef.lambda());
  CHECK(back.amplitudes() == ef.amplitudes());
  CHECK(back.frequencies() == ef.frequencies());

  const auto recipe = parse_recipe("1 1 | 1 | -0.25 0 ; 1 0 0 2 | 0 | 1 1", 2);
  REQUIRE(recipe.size() == 2);
  CHECK(recipe[0].root_index == 1);
  CHECK(recipe[0].amplitude == Complex(-0.25, 0));
  CHECK(recipe[1].direction(1) == Complex(0, 2));
  const auto again = parse_recipe(format_recipe(recipe), 2);
  CHECK(again[1].direction == recipe[1].direction);
  CHECK(again[1].amplitude == recipe[1].amplitude);
  CHECK_THROWS(parse_recipe("1 2 3 | 0 | 1 0", 2));
}
