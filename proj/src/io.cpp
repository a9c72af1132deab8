#include "inradius/io.hpp"

#include <cmath>
#include <ostream>

#include "inradius/text.hpp"

namespace inradius {

namespace {

using nlohmann::json;

json vec(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json complex_pair(Complex z) { return json::array({z.real(), z.imag()}); }

// Infinite or NaN doubles have no JSON form; they become null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void write_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
  using detail::format_double;
  out << kCsvVersion << '\n' << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << format_double(r.lambda.real()) << ',' << format_double(r.lambda.imag()) << ',' << format_double(r.r_lambda)
        << ',' << format_double(r.mass_ratio) << ',' << format_double(r.certified_inradius) << ','
        << format_double(r.measured_inradius) << ',' << format_double(r.constructive_inradius) << ','
        << format_double(r.Q) << ',' << format_double(r.boundary_mass_fraction) << ',' << format_double(r.h) << ','
        << r.status << '\n';
  }
}

json to_json(const SweepRecord& rec) {
  return {{"lambda", complex_pair(rec.lambda)},
          {"r_lambda", rec.r_lambda},
          {"mass_ratio", rec.mass_ratio},
          {"certified_inradius", rec.certified_inradius},
          {"measured_inradius", rec.measured_inradius},
          {"constructive_inradius", rec.constructive_inradius},
          {"Q", num(rec.Q)},
          {"boundary_mass_fraction", rec.boundary_mass_fraction},
          {"h", rec.h},
          {"constructive_constant", rec.constructive_constant},
          {"status", rec.status}};
}

json to_json(const GoodBall& gb) {
  return {{"vacuous", gb.vacuous},           {"center", vec(gb.center)},
          {"r", gb.r},                       {"inner_mass", gb.inner_mass},
          {"outer_mass", gb.outer_mass},     {"ratio", gb.ratio},
          {"guarantee", gb.guarantee},       {"interior_mass", gb.interior_mass},
          {"total_mass", gb.total_mass},     {"num_centers", gb.num_centers},
          {"max_overlap", gb.max_overlap}};
}

json to_json(const ProofRun& run) {
  json j = {{"trivial", run.trivial},
            {"r", run.r},
            {"lambda", complex_pair(run.lambda)},
            {"mu", complex_pair(run.mu)},
            {"mass", {{"total", run.mass.total}, {"interior", run.mass.interior}, {"ratio_sqrt", run.mass.ratio_sqrt}}}};
  if (run.trivial) return j;
  j["good_ball"] = to_json(run.good_ball);
  j["ball_norm"] = run.ball_norm;
  j["max_rescaled_residual"] = run.max_rescaled_residual;
  j["amplitude_point"] = vec(run.amplitude_point);
  j["amplitude"] = run.amplitude;
  j["half_ball_rms"] = run.half_ball_rms;
  j["amp_bound"] = run.amp_bound;
  j["L_emp"] = run.L_emp;
  j["L_grid"] = run.L_grid;
  j["rho0"] = run.rho0;
  j["constructive_inradius"] = run.constructive_inradius;
  j["constructive_center"] = vec(run.constructive_center);
  j["constructive_constant"] = run.constructive_constant;
  j["assembled_constant"] = run.assembled_constant;
  return j;
}

json to_json(const SigmaEstimate& est) {
  json j = {{"certified", est.certified_inradius},
            {"center", vec(est.certified_center)},
            {"measured", est.measured_inradius},
            {"L", est.certificate ? json(est.certificate->lipschitz) : json(nullptr)},
            {"h", est.h}};
  if (!est.warnings.empty()) j["warnings"] = est.warnings;
  return j;
}

json to_json(const CoverResult& cover) {
  json centers = json::array();
  for (Eigen::Index c = 0; c < cover.centers.cols(); ++c) centers.push_back(vec(cover.centers.col(c)));
  return {{"r", cover.r},
          {"centers", centers},
          {"center_indices", cover.center_indices},
          {"max_overlap", cover.max_overlap},
          {"overlap_bound", cover.overlap_bound}};
}

json to_json(const LatticeCount& lc) {
  json w = json::array();
  for (const auto& v : lc.witnesses) w.push_back(std::vector<int>(v.data(), v.data() + v.size()));
  return {{"R1", lc.enumeration_radius}, {"count", lc.count}, {"witnesses", w},
          {"R0", lc.R0},                 {"c0", lc.c0},       {"delta", lc.delta},
          {"lambda", complex_pair(lc.lambda)}};
}

json to_json(const LipschitzEstimate& est) {
  return {{"L_hat", est.L_hat},
          {"first_half_max", est.first_half_max},
          {"second_half_max", est.second_half_max},
          {"plateau_ratio", est.plateau_ratio},
          {"running_max", est.running_max}};
}

void write_ppm(std::ostream& out, const Grid& grid, const std::vector<double>& modulus,
               const std::optional<InradiusCertificate>& circle) {
  if (grid.dim() != 2) throw std::invalid_argument("write_ppm: only 2-d grids");
  if (static_cast<Eigen::Index>(modulus.size()) != grid.size()) throw std::invalid_argument("write_ppm: size mismatch");
  double top = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    if (grid.inside(i)) top = std::max(top, modulus[static_cast<std::size_t>(i)]);
  const Eigen::Index nx = grid.count(0);
  const Eigen::Index ny = grid.count(1);
  const double half = 0.5 * grid.h();
  out << "P6\n" << nx << ' ' << ny << "\n255\n";
  for (Eigen::Index row = 0; row < ny; ++row) {
    const Eigen::Index iy = ny - 1 - row;
    for (Eigen::Index ix = 0; ix < nx; ++ix) {
      const Eigen::Index flat = ix * grid.stride(0) + iy * grid.stride(1);
      unsigned char rgb[3] = {0, 0, 0};
      if (grid.inside(flat) && top > 0.0) {
        const auto g = static_cast<unsigned char>(std::lround(255.0 * modulus[static_cast<std::size_t>(flat)] / top));
        rgb[0] = rgb[1] = rgb[2] = g;
      }
      if (circle) {
        const Eigen::Vector2d p(grid.axis(0)(ix), grid.axis(1)(iy));
        if (std::abs((p - circle->center.head<2>()).norm() - circle->radius) <= half) {
          rgb[0] = 255;
          rgb[1] = rgb[2] = 0;
        }
      }
      out.write(reinterpret_cast<const char*>(rgb), 3);
    }
  }
}

}  // namespace inradius
