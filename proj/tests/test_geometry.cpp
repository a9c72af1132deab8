#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "inradius/domain.hpp"
#include "inradius/errors.hpp"
#include "inradius/geometry.hpp"
#include "inradius/parallel.hpp"
#include "support.hpp"

using namespace inradius;
namespace ts = testing_support;

namespace {
const double pi = std::numbers::pi;
}

TEST_CASE("r_interior") {
  const auto box = Domain::unit_box(2);
  const auto inner = r_interior(box, 0.25);
  REQUIRE(inner);
  CHECK(inner->lo() == Eigen::Vector2d(0.25, 0.25));
  CHECK(inner->hi() == Eigen::Vector2d(0.75, 0.75));
  CHECK_FALSE(r_interior(box, 0.6));

  const auto ball = Domain::ball(Eigen::Vector2d::Zero(), 1.0);
  const auto shrunk = r_interior(ball, 0.3);
  REQUIRE(shrunk);
  CHECK(shrunk->radius() == doctest::Approx(0.7));
  CHECK_FALSE(r_interior(ball, 1.0));

  // monotone in r, and every point of the interior keeps distance r
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double r1 = 0.45 * u(rng);
    const double r2 = r1 + (0.45 - r1) * u(rng);
    const auto dom = trial % 2 ? box : Domain::ball(Eigen::Vector2d(0.5, 0.5), 0.5);
    const auto a = r_interior(dom, r1);
    const auto b = r_interior(dom, r2);
    REQUIRE(a);
    if (b) CHECK(is_subset(*b, *a));
    if (a) {
      const Eigen::VectorXd x = a->bbox_lo() + (a->bbox_hi() - a->bbox_lo()).cwiseProduct(Eigen::Vector2d(u(rng), u(rng)));
      if (a->contains(x)) CHECK(dist_to_complement(dom, x) >= r1 * (1 - 1e-12));
    }
  }
}

TEST_CASE("dist_to_complement") {
  const auto box = Domain::unit_box(2);
  CHECK(dist_to_complement(box, Eigen::Vector2d(0.5, 0.5)) == 0.5);
  CHECK(dist_to_complement(box, Eigen::Vector2d(0.1, 0.7)) == doctest::Approx(0.1));
  const auto ball = Domain::ball(Eigen::Vector2d::Zero(), 1.0);
  CHECK(dist_to_complement(ball, Eigen::Vector2d(0.6, 0.0)) == doctest::Approx(0.4));
  CHECK_THROWS_AS(dist_to_complement(box, Eigen::Vector2d(1.5, 0.5)), std::invalid_argument);
}

TEST_CASE("domain parsing and validation") {
  const auto b = parse_domain("box 0 0 1 2");
  CHECK(b.is_box());
  CHECK(b.hi()(1) == 2.0);
  const auto c = parse_domain("ball 0 0 1");
  CHECK(c.radius() == 1.0);
  CHECK(parse_domain(format_domain(b)) == b);
  CHECK_THROWS(parse_domain("box 0 0 1"));
  CHECK_THROWS(parse_domain("ball 0 0 -1"));
  CHECK_THROWS(Domain::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0)));
}

TEST_CASE("grid layout") {
  const Grid g(Domain::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0.5)), 0.1);
  CHECK(g.count(0) == 10);
  CHECK(g.count(1) == 5);
  CHECK(g.stride(1) == 1);
  CHECK(g.center(0)(0) == doctest::Approx(0.05));
  CHECK(g.center(1)(1) == doctest::Approx(0.15));  // last axis fastest
  CHECK(g.num_inside() == 50);
  CHECK(g.cell_volume() == doctest::Approx(0.01));

  const Grid ball(Domain::ball(Eigen::Vector2d::Zero(), 1.0), 0.01);
  for (Eigen::Index i = 0; i < ball.size(); i += 97) CHECK(ball.inside(i) == (ball.center(i).norm() < 1.0));

  const auto auto_g = auto_grid(Domain::unit_box(2), 0.01);
  CHECK(auto_g.h() <= 0.01 / 16 * (1 + 1e-12));
  const auto capped = auto_grid(Domain::unit_box(2), 1e-4);
  CHECK(capped.size() <= 4'000'000);
}

TEST_CASE("l2 mass examples") {
  Eigen::VectorXcd xi(2);
  xi << 3.0, -1.5;
  const auto wave = ts::plane_wave(xi);
  for (double h : {0.1, 0.03, 0.0071}) {
    const Grid g(Domain::unit_box(2), h);
    CHECK(std::abs(l2_mass(wave, Domain::unit_box(2), g) - 1.0) <= 1e-12);
  }

  // sin(pi x) on [0, 0.7]; a full period would make the midpoint rule exact
  const auto lap1 = Symbol::laplacian(1);
  Eigen::VectorXcd one(1);
  one << 1.0;
  const auto sine = synth(lap1, pi * pi, {{one, 0, Complex(0, 0.5)}, {one, 1, Complex(0, -0.5)}});
  const auto seg = Domain::box(Eigen::VectorXd::Zero(1), Eigen::VectorXd::Constant(1, 0.7));
  const double exact1 = 0.35 - std::sin(1.4 * pi) / (4 * pi);
  double prev_err = 1.0;
  for (double h : {0.1, 0.05, 0.025}) {
    const Grid g(seg, h);
    const double err = std::abs(l2_mass(sine, seg, g) - exact1);
    CHECK(err <= 2.0 * h * h);
    CHECK(err < prev_err);
    prev_err = err;
  }

  // Richardson: halving h shrinks the error by about four on a smooth field
  const auto ef = ts::sin_product();
  const auto sq = Domain::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(0.7, 0.7));
  const double exact = exact1 * exact1;
  const double e1 = std::abs(l2_mass(ef, sq, Grid(sq, 0.02)) - exact);
  const double e2 = std::abs(l2_mass(ef, sq, Grid(sq, 0.01)) - exact);
  CHECK(e2 < e1);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("l2 mass is additive over a partition") {
  std::mt19937_64 rng(2);
  const auto sym = ts::random_elliptic_symbol(rng, 2, 2);
  const auto ef = synth(sym, 40.0, ts::random_recipe(rng, sym, 3));
  const Grid g(Domain::unit_box(2), 1.0 / 64);
  const auto density = sample_field(ef, g).density();
  const double whole = l2_mass(density, Domain::unit_box(2), g);
  // the cut at 1/2 falls between cell centers, so each cell lands in exactly one half
  const double cut = 0.5;
  const double left = l2_mass(density, Domain::box(Eigen::Vector2d(0, 0), Eigen::Vector2d(cut, 1)), g);
  const double right = l2_mass(density, Domain::box(Eigen::Vector2d(cut, 0), Eigen::Vector2d(1, 1)), g);
  CHECK(left + right == doctest::Approx(whole).epsilon(1e-13));
}

TEST_CASE("mass report") {
  Eigen::VectorXcd xi(2);
  xi << 2.0, 1.0;
  const auto wave = ts::plane_wave(xi);
  const Grid g(Domain::unit_box(2), 1.0 / 128);
  const auto rep = mass_report(wave, Domain::unit_box(2), 0.25, g);
  CHECK(rep.interior / rep.total == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(rep.ratio_sqrt == doctest::Approx(0.5).epsilon(1e-12));

  const auto none = mass_report(wave, Domain::unit_box(2), 0.5, g);
  CHECK(none.interior == 0.0);
  CHECK(none.ratio_sqrt == 0.0);

  const auto zero = wave.with_amplitudes(Eigen::VectorXcd::Zero(1));
  CHECK_THROWS_AS(mass_report(zero, Domain::unit_box(2), 0.1, g), ZeroFieldError);

  // sine product at r = 0.1 against a brute-force 1000^2 midpoint sum
  const auto ef = ts::sin_product();
  const auto sp = mass_report(ef, Domain::unit_box(2), 0.1, Grid(Domain::unit_box(2), 1.0 / 500));
  double n = 0.0, m = 0.0;
  for (int i = 0; i < 1000; ++i)
    for (int j = 0; j < 1000; ++j) {
      const double x = (i + 0.5) / 1000, y = (j + 0.5) / 1000;
      const double f = std::pow(std::sin(pi * x) * std::sin(pi * y), 2) * 1e-6;
      n += f;
      if (x >= 0.1 && x <= 0.9 && y >= 0.1 && y <= 0.9) m += f;
    }
  CHECK(sp.total == doctest::Approx(n).epsilon(1e-4));
  CHECK(sp.interior == doctest::Approx(m).epsilon(1e-4));
  CHECK(sp.ratio_sqrt * sp.ratio_sqrt * sp.total == doctest::Approx(sp.interior).epsilon(1e-12));
}

TEST_CASE("sampling and mass are independent of the thread count") {
  std::mt19937_64 rng(3);
  const auto sym = ts::random_elliptic_symbol(rng, 2, 2);
  const auto ef = synth(sym, Complex(300.0, 50.0), ts::random_recipe(rng, sym, 4));
  const Grid g(Domain::ball(Eigen::Vector2d(0.5, 0.5), 0.5), 1.0 / 300);
  set_thread_count(1);
  const auto a = sample_field(ef, g);
  const double ma = l2_mass(a.density(), g.domain(), g);
  set_thread_count(8);
  const auto b = sample_field(ef, g);
  const double mb = l2_mass(b.density(), g.domain(), g);
  set_thread_count(1);
  CHECK(a.modulus == b.modulus);
  CHECK(a.cell_lipschitz == b.cell_lipschitz);
  CHECK(ma == mb);

  // separable sampling agrees with direct evaluation
  for (Eigen::Index i = 0; i < g.size(); i += 1013) {
    const Eigen::VectorXd x = g.center(i);
    const Eigen::VectorXd growth = (-(ef.frequencies().imag().transpose() * x)).array().exp();
    const double scale = ef.amplitudes().cwiseAbs().dot(growth) * (1.0 + ef.frequencies().cwiseAbs().maxCoeff());
    CHECK(std::abs(a.values[static_cast<std::size_t>(i)] - eval_field(ef, x)) <= 1e-13 * scale);
  }
}

TEST_CASE("deterministic_sum") {
  std::vector<double> v(100000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(static_cast<double>(i)) * 1e-3 + 1.0 / (1.0 + i);
  set_thread_count(1);
  const double a = deterministic_sum(static_cast<std::ptrdiff_t>(v.size()), [&](std::ptrdiff_t i) { return v[static_cast<std::size_t>(i)]; });
  set_thread_count(7);
  const double b = deterministic_sum(static_cast<std::ptrdiff_t>(v.size()), [&](std::ptrdiff_t i) { return v[static_cast<std::size_t>(i)]; });
  set_thread_count(1);
  CHECK(a == b);
}
