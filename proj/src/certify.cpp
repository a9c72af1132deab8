#include "inradius/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "inradius/errors.hpp"
#include "inradius/parallel.hpp"

namespace inradius {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 1-D lower envelope of parabolas (Felzenszwalb & Huttenlocher) on a line of n samples with spacing s.
void edt_line(const double* f, double* out, Eigen::Index n, double s, std::vector<Eigen::Index>& v,
              std::vector<double>& z) {
  v.resize(static_cast<std::size_t>(n));
  z.resize(static_cast<std::size_t>(n) + 1);
  Eigen::Index k = -1;
  for (Eigen::Index q = 0; q < n; ++q) {
    if (f[q] == kInf) continue;
    const double pq = static_cast<double>(q) * s;
    while (k >= 0) {
      const Eigen::Index p = v[static_cast<std::size_t>(k)];
      const double pp = static_cast<double>(p) * s;
      const double cross = ((f[q] + pq * pq) - (f[p] + pp * pp)) / (2.0 * (pq - pp));
      if (cross <= z[static_cast<std::size_t>(k)]) {
        --k;
      } else {
        ++k;
        v[static_cast<std::size_t>(k)] = q;
        z[static_cast<std::size_t>(k)] = cross;
        z[static_cast<std::size_t>(k) + 1] = kInf;
        break;
      }
    }
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
    }
  }
  if (k < 0) {
    std::fill(out, out + n, kInf);
    return;
  }
  Eigen::Index j = 0;
  for (Eigen::Index q = 0; q < n; ++q) {
    const double pq = static_cast<double>(q) * s;
    while (z[static_cast<std::size_t>(j) + 1] < pq) ++j;
    const Eigen::Index p = v[static_cast<std::size_t>(j)];
    const double dp = pq - static_cast<double>(p) * s;
    out[q] = dp * dp + f[p];
  }
}

}  // namespace

double lipschitz_ball(double eta, double lipschitz, double boundary_dist) {
  if (!(eta > 0.0) || !(lipschitz > 0.0) || !(boundary_dist > 0.0) || !std::isfinite(eta) || !std::isfinite(lipschitz))
    throw std::invalid_argument("lipschitz_ball: inputs must be positive and finite");
  return std::min(eta / (2.0 * lipschitz), boundary_dist);
}

double ball_volume(int d, double radius) {
  const double dd = d;
  return std::pow(std::numbers::pi, dd / 2.0) * std::pow(radius, dd) / std::tgamma(dd / 2.0 + 1.0);
}

double sup_lower_bound(double mass, double ball_radius, int d) {
  if (mass < 0.0 || !(ball_radius > 0.0) || d < 1) throw std::invalid_argument("sup_lower_bound: bad arguments");
  return mass / std::sqrt(ball_volume(d, ball_radius));
}

std::optional<InradiusCertificate> certify_point(const Eigenfunction& ef, const Domain& dom, const Eigen::VectorXd& x) {
  const double eta = std::abs(eval_field(ef, x));
  const double dist = dist_to_complement(dom, x);
  if (!(eta > 0.0) || !(dist > 0.0) || !std::isfinite(eta)) return std::nullopt;

  // f(rho) = min(eta / 2 L(B(x, rho)), dist) is non-increasing. Any `hi` with f(hi) <= hi gives a
  // sound radius f(hi), because L(B(x, hi)) bounds the gradient on the smaller ball.
  const auto f = [&](double rho) {
    const double lip = local_gradient_bound(ef, x, rho);
    return lip > 0.0 ? std::min(eta / (2.0 * lip), dist) : dist;
  };
  double hi = f(0.0);
  if (ef.frequencies().imag().cwiseAbs().maxCoeff() > 0.0) {
    double lo = 0.0;
    for (int it = 0; it < 60 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (f(mid) <= mid)
        hi = mid;
      else
        lo = mid;
    }
  }
  InradiusCertificate cert;
  cert.center = x;
  cert.amplitude = eta;
  cert.boundary_dist = dist;
  cert.lipschitz = local_gradient_bound(ef, x, hi);
  cert.radius = cert.lipschitz > 0.0 ? std::min(eta / (2.0 * cert.lipschitz), dist) : dist;
  return cert;
}

bool spot_verify(const Eigenfunction& ef, const InradiusCertificate& cert) {
  const double floor = 0.5 * cert.amplitude;
  if (std::abs(eval_field(ef, cert.center)) < floor) return false;
  const double reach = cert.radius * (1.0 - 1e-9);
  for (Eigen::Index j = 0; j < cert.center.size(); ++j) {
    for (double sign : {-1.0, 1.0}) {
      Eigen::VectorXd p = cert.center;
      p(j) += sign * reach;
      if (std::abs(eval_field(ef, p)) < floor) return false;
    }
  }
  return true;
}

SigmaEstimate certified_inradius(const Eigenfunction& ef, const Domain& dom, const Grid& grid) {
  return certified_inradius(ef, dom, grid, sample_field(ef, grid));
}

SigmaEstimate certified_inradius(const Eigenfunction& ef, const Domain& dom, const Grid& grid,
                                 const FieldSamples& samples) {
  SigmaEstimate est;
  est.h = grid.h();
  est.certified_center = Eigen::VectorXd::Zero(grid.dim());

  // Upper bound per cell from the gradient bound at the center alone (L(B(x, 0))).
  std::vector<double> upper(static_cast<std::size_t>(grid.size()), -1.0);
  Eigen::VectorXd weight(ef.num_terms());
  for (Eigen::Index k = 0; k < ef.num_terms(); ++k)
    weight(k) = std::abs(ef.amplitudes()(k)) * ef.frequencies().col(k).norm();
  const Eigen::MatrixXd imag_t = ef.frequencies().imag().transpose();
  parallel_for(grid.size(), [&](std::ptrdiff_t b, std::ptrdiff_t e) {
    Point x;
    for (std::ptrdiff_t i = b; i < e; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      if (!grid.inside(i) || !(samples.modulus[idx] > 0.0)) continue;
      grid.center(i, x);
      if (!dom.contains_closed(x)) continue;
      const double dist = dist_to_complement(dom, x);
      const double lip = weight.dot((-(imag_t * x)).array().exp().matrix());
      upper[idx] = lip > 0.0 ? std::min(samples.modulus[idx] / (2.0 * lip), dist) : dist;
    }
  });

  std::vector<Eigen::Index> order;
  order.reserve(upper.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    if (upper[static_cast<std::size_t>(i)] > 0.0) order.push_back(i);
  if (order.empty()) {
    est.warnings.emplace_back("all sampled values are zero; certified inradius is 0");
    return est;
  }
  std::stable_sort(order.begin(), order.end(), [&upper](Eigen::Index a, Eigen::Index b) {
    return upper[static_cast<std::size_t>(a)] > upper[static_cast<std::size_t>(b)];
  });

  std::optional<InradiusCertificate> best;
  Eigen::Index best_index = -1;
  for (Eigen::Index i : order) {
    const double ub = upper[static_cast<std::size_t>(i)];
    if (best && ub < best->radius) break;
    auto cert = certify_point(ef, dom, grid.center(i));
    if (!cert) continue;
    if (!best || cert->radius > best->radius || (cert->radius == best->radius && i < best_index)) {
      best = std::move(cert);
      best_index = i;
    }
  }
  if (!best) {
    est.warnings.emplace_back("no certifiable grid center");
    return est;
  }
  if (!spot_verify(ef, *best)) throw SoundnessError("certified ball failed spot verification");
  est.certified_inradius = best->radius;
  est.certified_center = best->center;
  est.certificate = best;
  return est;
}

std::vector<double> squared_distance_transform(std::span<const std::uint8_t> seeds, const Grid& grid) {
  if (static_cast<Eigen::Index>(seeds.size()) != grid.size()) throw std::invalid_argument("distance transform: size mismatch");
  std::vector<double> dist(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) dist[i] = seeds[i] ? 0.0 : kInf;

  for (int axis = grid.dim() - 1; axis >= 0; --axis) {
    const Eigen::Index n = grid.count(axis);
    const Eigen::Index stride = grid.stride(axis);
    const Eigen::Index lines = grid.size() / n;
    const double s = grid.spacing()(axis);
    parallel_for(lines, [&](std::ptrdiff_t b, std::ptrdiff_t e) {
      std::vector<double> in(static_cast<std::size_t>(n));
      std::vector<double> out(static_cast<std::size_t>(n));
      std::vector<Eigen::Index> v;
      std::vector<double> z;
      for (std::ptrdiff_t line = b; line < e; ++line) {
        // line enumerates all index tuples with the axis coordinate removed
        const Eigen::Index outer = line / stride;
        const Eigen::Index inner = line % stride;
        const Eigen::Index base = outer * stride * n + inner;
        for (Eigen::Index q = 0; q < n; ++q) in[static_cast<std::size_t>(q)] = dist[static_cast<std::size_t>(base + q * stride)];
        edt_line(in.data(), out.data(), n, s, v, z);
        for (Eigen::Index q = 0; q < n; ++q) dist[static_cast<std::size_t>(base + q * stride)] = out[static_cast<std::size_t>(q)];
      }
    });
  }
  return dist;
}

SigmaEstimate measured_inradius(const Eigenfunction& ef, const Domain& dom, const Grid& grid, std::optional<double> tau) {
  return measured_inradius(ef, dom, grid, sample_field(ef, grid), tau);
}

SigmaEstimate measured_inradius(const Eigenfunction& ef, const Domain& dom, const Grid& grid,
                                const FieldSamples& samples, std::optional<double> tau) {
  (void)ef;
  SigmaEstimate est;
  est.h = grid.h();
  est.zero_threshold = tau.value_or(1e-6 * samples.max_modulus(grid));
  if (est.zero_threshold < 0.0) throw std::invalid_argument("measured_inradius: tau must be non-negative");

  // A cell is possibly zero when |psi| <= tau, or when its own gradient bound cannot exclude a
  // zero anywhere in the cell.
  const double reach = grid.half_diagonal();
  std::vector<std::uint8_t> seeds(static_cast<std::size_t>(grid.size()), 0);
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (!grid.inside(i)) continue;
    const double a = samples.modulus[idx];
    seeds[idx] = (a <= est.zero_threshold || a <= samples.cell_lipschitz[idx] * reach) ? 1 : 0;
  }
  const auto sq = squared_distance_transform(seeds, grid);

  std::vector<double> best(static_cast<std::size_t>(grid.size()), 0.0);
  parallel_for(grid.size(), [&](std::ptrdiff_t b, std::ptrdiff_t e) {
    Point x;
    for (std::ptrdiff_t i = b; i < e; ++i) {
      if (!grid.inside(i)) continue;
      grid.center(i, x);
      if (!dom.contains_closed(x)) continue;
      best[static_cast<std::size_t>(i)] = std::min(std::sqrt(sq[static_cast<std::size_t>(i)]), dist_to_complement(dom, x));
    }
  });
  est.measured_inradius = best.empty() ? 0.0 : *std::max_element(best.begin(), best.end());
  return est;
}

SigmaEstimate estimate_sigma(const Eigenfunction& ef, const Domain& dom, const Grid& grid, std::optional<double> tau) {
  const auto samples = sample_field(ef, grid);
  auto est = certified_inradius(ef, dom, grid, samples);
  const auto meas = measured_inradius(ef, dom, grid, samples, tau);
  est.measured_inradius = meas.measured_inradius;
  est.zero_threshold = meas.zero_threshold;
  return est;
}

}  // namespace inradius
