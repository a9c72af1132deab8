#include "inradius/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "inradius/errors.hpp"
#include "inradius/parallel.hpp"
#include "inradius/text.hpp"

namespace inradius {

namespace {

Eigen::VectorXd uniform_in_ball(std::mt19937_64& rng, const Eigen::VectorXd& center, double radius) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  const auto d = center.size();
  Eigen::VectorXd dir(d);
  do {
    for (Eigen::Index j = 0; j < d; ++j) dir(j) = normal(rng);
  } while (dir.norm() == 0.0);
  const double t = radius * std::pow(unif(rng), 1.0 / static_cast<double>(d));
  return center + t * dir.normalized();
}

// Sup of |grad u| over cells of `grid` with |y| < radius. Max is order independent.
double grid_gradient_sup(const Eigenfunction& u, const Grid& grid, double radius) {
  std::vector<double> local(static_cast<std::size_t>(grid.size()), 0.0);
  parallel_for(grid.size(), [&](std::ptrdiff_t b, std::ptrdiff_t e) {
    for (std::ptrdiff_t i = b; i < e; ++i) {
      if (!grid.inside(i)) continue;
      const Eigen::VectorXd y = grid.center(i);
      if (!(y.norm() < radius)) continue;
      local[static_cast<std::size_t>(i)] = eval_gradient(u, y).norm();
    }
  });
  return local.empty() ? 0.0 : *std::max_element(local.begin(), local.end());
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

double assembled_constant(double lipschitz, int d) {
  if (!(lipschitz > 0.0)) throw std::invalid_argument("assembled_constant: lipschitz must be positive");
  const double a = 1.0 / (2.0 * lipschitz * std::sqrt(ball_volume(d, 0.5))) / std::sqrt(2.0 * overlap_bound(d));
  return std::min(a, 0.25);
}

double min_scaling_gap(double a, double b, double t) { return std::min(a * t, b) - std::min(a, b) * t; }

ProofRun run_proof_pipeline(const Eigenfunction& ef, const Domain& dom, const Grid& grid, const ProofOptions& opts) {
  return run_proof_pipeline(ef, dom, grid, sample_field(ef, grid), opts);
}

ProofRun run_proof_pipeline(const Eigenfunction& ef, const Domain& dom, const Grid& grid, const FieldSamples& samples,
                            const ProofOptions& opts) {
  const int d = ef.dim();
  const auto scale = SpectralScale::of(ef.lambda(), ef.symbol().order());
  ProofRun run;
  run.r = scale.r_lambda;
  run.lambda = scale.lambda;
  run.mu = scale.mu;

  // Step 1: good ball at scale r.
  const auto density = samples.density();
  run.mass = mass_report(density, dom, run.r, grid);
  const auto interior = r_interior(dom, run.r);
  if (!interior || !(run.mass.interior > 0.0)) {
    run.trivial = true;
    return run;
  }
  run.good_ball = good_ball(grid, density, *interior, run.r);
  if (run.good_ball.vacuous) {
    run.trivial = true;
    return run;
  }
  const Eigen::VectorXd x0 = run.good_ball.center;
  if (dist_to_complement(dom, x0) < run.r * (1.0 - 1e-12))
    throw ContractError("proof pipeline: good ball B(x0, r) leaves the domain");

  // Step 2: rescale to the unit ball.
  run.ball_norm = std::sqrt(run.good_ball.outer_mass);
  if (!(run.ball_norm > 0.0)) throw ContractError("proof pipeline: good ball carries no mass");
  const Eigenfunction u = rescale(ef, x0, run.r, run.ball_norm);
  run.rescaled = u;
  if (std::abs(std::abs(u.lambda()) - 1.0) > 1e-12 || std::abs(u.lambda() - run.mu) > 1e-12)
    throw ContractError("proof pipeline: rescaled eigenvalue is not mu");

  const Grid ygrid(Domain::box(Eigen::VectorXd::Constant(d, -0.75), Eigen::VectorXd::Constant(d, 0.75)), opts.unit_h);
  std::vector<Eigen::Index> half_cells;
  for (Eigen::Index i = 0; i < ygrid.size(); ++i)
    if (ygrid.center(i).norm() < 0.5) half_cells.push_back(i);
  if (half_cells.empty()) throw std::invalid_argument("proof pipeline: unit_h too coarse");

  const std::size_t stride = std::max<std::size_t>(1, half_cells.size() / 256);
  for (std::size_t k = 0; k < half_cells.size(); k += stride) {
    const Eigen::VectorXd y = ygrid.center(half_cells[k]);
    const double res = residual(u, y);
    const double tol = residual_tolerance(u, y);
    run.max_rescaled_residual = std::max(run.max_rescaled_residual, res / tol);
    if (!(res <= tol)) throw ContractError("proof pipeline: rescaled field violates H u = mu u");
  }

  // Step 3: a point of B(0, 1/2) with large amplitude.
  const auto usamp = sample_field(u, ygrid);
  Eigen::Index best = half_cells.front();
  double sum_sq = 0.0;
  for (const auto i : half_cells) {
    const double a = usamp.modulus[static_cast<std::size_t>(i)];
    sum_sq += a * a;
    if (a > usamp.modulus[static_cast<std::size_t>(best)]) best = i;
  }
  run.amplitude_point = ygrid.center(best);
  run.amplitude = std::abs(eval_field(u, run.amplitude_point));
  run.half_ball_rms = std::sqrt(sum_sq / static_cast<double>(half_cells.size()));
  run.amp_bound = std::sqrt(run.good_ball.guarantee) / std::sqrt(ball_volume(d, 0.5));
  if (run.amplitude < run.half_ball_rms * (1.0 - 1e-12) - 1e-300)
    throw ContractError("proof pipeline: sampled maximum below the sampled RMS");
  if (!(run.amplitude >= run.amp_bound))
    throw ContractError("proof pipeline: amplitude bound from the good ball fails");

  // Step 4: Lipschitz ball around y0, mapped back to the original scale.
  run.L_emp = gradient_sup_bound(u, Domain::ball(Eigen::VectorXd::Zero(d), 0.75));
  run.L_grid = grid_gradient_sup(u, ygrid, 0.75);
  run.rho0 = run.L_emp > 0.0 ? std::min(run.amplitude / (2.0 * run.L_emp), 0.25) : 0.25;
  run.constructive_center = x0 + run.r * run.amplitude_point;
  run.constructive_inradius = run.r * run.rho0;
  if (dist_to_complement(dom, run.constructive_center) < run.constructive_inradius * (1.0 - 1e-12))
    throw ContractError("proof pipeline: constructive ball leaves the domain");

  std::mt19937_64 rng(opts.seed);
  const double u_floor = 0.5 * run.amplitude * (1.0 - 1e-6);
  const double psi_floor = 0.5 * std::abs(eval_field(ef, run.constructive_center)) * (1.0 - 1e-6);
  for (int s = 0; s < opts.verify_samples; ++s) {
    const Eigen::VectorXd y = uniform_in_ball(rng, run.amplitude_point, run.rho0);
    if (!(std::abs(eval_field(u, y)) >= u_floor))
      throw SoundnessError("proof pipeline: |u| drops below half the amplitude inside the constructive ball");
    const Eigen::VectorXd x = x0 + run.r * y;
    if (!(std::abs(eval_field(ef, x)) >= psi_floor))
      throw SoundnessError("proof pipeline: |psi| drops below half its center value inside the constructive ball");
  }

  run.constructive_constant = run.mass.ratio_sqrt > 0.0 ? run.rho0 / run.mass.ratio_sqrt : 0.0;
  run.assembled_constant = run.L_emp > 0.0 ? assembled_constant(run.L_emp, d) : 0.25;
  if (run.rho0 < run.assembled_constant * run.mass.ratio_sqrt * (1.0 - 1e-12))
    throw ContractError("proof pipeline: rho0 below the assembled constant times sqrt(M/N)");
  return run;
}

namespace {

TheoremCheck check_on_grid(const Eigenfunction& input, const Domain& dom, const Grid& grid, const VerifyOptions& opts) {
  const Eigenfunction ef = canonical_representative(input);
  const auto scale = SpectralScale::of(ef.lambda(), ef.symbol().order());
  const auto samples = sample_field(ef, grid);
  const double tau = opts.tau_rel * samples.max_modulus(grid);

  TheoremCheck out;
  out.sigma = certified_inradius(ef, dom, grid, samples);
  const auto meas = measured_inradius(ef, dom, grid, samples, tau);
  out.sigma.measured_inradius = meas.measured_inradius;
  out.sigma.zero_threshold = meas.zero_threshold;
  out.proof = run_proof_pipeline(ef, dom, grid, samples, opts.proof);

  auto& rec = out.record;
  rec.lambda = ef.lambda();
  rec.r_lambda = scale.r_lambda;
  rec.mass_ratio = out.proof.mass.ratio_sqrt;
  rec.certified_inradius = out.sigma.certified_inradius;
  rec.measured_inradius = out.sigma.measured_inradius;
  rec.constructive_inradius = out.proof.trivial ? 0.0 : out.proof.constructive_inradius;
  rec.constructive_constant = out.proof.constructive_constant;
  rec.h = grid.h();
  rec.boundary_mass_fraction = (out.proof.mass.total - out.proof.mass.interior) / out.proof.mass.total;
  rec.Q = rec.mass_ratio > 0.0 ? rec.certified_inradius / (rec.r_lambda * rec.mass_ratio)
                               : std::numeric_limits<double>::infinity();
  rec.status = out.proof.trivial ? "trivial" : "ok";

  const double h = rec.h;
  if (!(rec.constructive_inradius <= rec.certified_inradius + 2.0 * h))
    throw ContractError("ordering: constructive " + detail::format_double(rec.constructive_inradius) +
                        " exceeds certified + 2h " + detail::format_double(rec.certified_inradius + 2.0 * h));
  if (!(rec.certified_inradius + 2.0 * h <= rec.measured_inradius + 4.0 * h))
    throw ContractError("ordering: certified + 2h " + detail::format_double(rec.certified_inradius + 2.0 * h) +
                        " exceeds measured + 4h " + detail::format_double(rec.measured_inradius + 4.0 * h));
  if (rec.mass_ratio > 0.0 && !(rec.Q > 0.0)) throw ContractError("ordering: Q is not positive");
  return out;
}

}  // namespace

TheoremCheck check_theorem(const Eigenfunction& ef, const Domain& dom, const Grid& grid, const VerifyOptions& opts) {
  if (!(grid.domain() == dom)) throw std::invalid_argument("check_theorem: grid is not built on the domain");
  return check_on_grid(ef, dom, grid, opts);
}

SweepRecord verify_theorem(const Eigenfunction& ef, const Domain& dom, const Grid& grid, const VerifyOptions& opts) {
  return check_theorem(ef, dom, grid, opts).record;
}

TheoremCheck check_localized(const Eigenfunction& ef, const Domain& dom, const Domain& subset, const Grid& grid,
                             const VerifyOptions& opts) {
  if (!is_subset(subset, dom)) throw std::invalid_argument("check_localized: A is not contained in the domain");
  if (!(grid.domain() == dom)) throw std::invalid_argument("check_localized: grid is not built on the domain");
  const Eigenfunction canon = canonical_representative(ef);
  const auto density = sample_field(canon, grid).density();
  const double full = l2_mass(density, dom, grid);
  const Grid sub = grid.restricted(subset);
  const double local = l2_mass(density, subset, sub);
  if (!(std::sqrt(local) > opts.tau_rel * std::sqrt(full)))
    throw HypothesisViolation("check_localized: the field carries no mass on A");
  return check_on_grid(ef, subset, sub, opts);
}

SweepRecord verify_localized(const Eigenfunction& ef, const Domain& dom, const Domain& subset, const Grid& grid,
                             const VerifyOptions& opts) {
  return check_localized(ef, dom, subset, grid, opts).record;
}

SweepConfig parse_sweep_config(std::istream& in, const std::filesystem::path& base_dir,
                               const std::optional<Symbol>& fallback) {
  SweepConfig cfg;
  std::string line;
  std::string symbol_name;
  std::string recipe_text;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = detail::strip_comment(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    const auto key = detail::trim(body.substr(0, eq));
    const auto value = detail::trim(body.substr(eq + 1));
    if (key == "domain") {
      cfg.domain = parse_domain(value);
    } else if (key == "symbol_file") {
      std::filesystem::path p(value);
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      cfg.symbol = load_symbol(p.string());
    } else if (key == "symbol") {
      if (value != "laplacian") throw std::invalid_argument("config: the only named symbol is 'laplacian'");
      symbol_name = value;
    } else if (key == "lambda_moduli") {
      cfg.lambda_moduli = detail::parse_numbers<double>(value);
    } else if (key == "lambda_phase") {
      cfg.lambda_phase = std::stod(value);
    } else if (key == "recipe") {
      recipe_text = value;
    } else if (key == "h_policy") {
      if (value == "auto") cfg.h.reset();
      else cfg.h = std::stod(value);
    } else if (key == "tau_rel") {
      cfg.tau_rel = std::stod(value);
    } else if (key == "boundary_layer") {
      cfg.boundary_layer = std::stod(value);
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  if (!cfg.domain) throw std::invalid_argument("config: missing domain");
  const int d = cfg.domain->dim();
  if (!cfg.symbol && symbol_name == "laplacian") cfg.symbol = Symbol::laplacian(d);
  if (!cfg.symbol) cfg.symbol = fallback;
  if (!cfg.symbol) throw std::invalid_argument("config: missing symbol_file");
  if (cfg.symbol->dim() != d) throw std::invalid_argument("config: symbol and domain dimensions differ");
  if (cfg.lambda_moduli.empty()) throw std::invalid_argument("config: lambda_moduli is empty");
  for (const double m : cfg.lambda_moduli)
    if (!(m > 0.0)) throw std::invalid_argument("config: lambda moduli must be positive");
  if (!recipe_text.empty()) cfg.recipe = parse_recipe(recipe_text, d);
  if (cfg.recipe.empty() && !cfg.boundary_layer) throw std::invalid_argument("config: missing recipe");
  if (cfg.h && !(*cfg.h > 0.0)) throw std::invalid_argument("config: h_policy must be positive or 'auto'");
  return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path& path, const std::optional<Symbol>& fallback) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path.string());
  return parse_sweep_config(in, path.parent_path(), fallback);
}

double boundary_layer_kappa(double kappa0, double modulus) { return kappa0 * (1.0 + std::log10(modulus)); }

Recipe boundary_layer_recipe(const Symbol& sym, Complex lambda, double kappa) {
  const int d = sym.dim();
  if (d < 2) throw std::invalid_argument("boundary_layer_recipe: needs d >= 2");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
  v(0) = Complex(std::sqrt(1.0 + kappa * kappa), 0.0);
  v(1) = Complex(0.0, kappa);
  const auto roots = solve_frequencies(sym, lambda, v);
  // The stored frequency is -root; take the one growing fastest towards the face x_2 = lo_2.
  int pick = 0;
  for (int j = 1; j < static_cast<int>(roots.size()); ++j)
    if ((-roots[static_cast<std::size_t>(j)](1)).imag() > (-roots[static_cast<std::size_t>(pick)](1)).imag()) pick = j;
  return {RecipeTerm{v, pick, Complex(1.0, 0.0)}};
}

SweepResult sweep(const SweepConfig& config) {
  if (!config.symbol || !config.domain) throw std::invalid_argument("sweep: incomplete config");
  const auto& sym = *config.symbol;
  const auto& dom = *config.domain;
  VerifyOptions opts;
  opts.tau_rel = config.tau_rel;

  SweepResult out;
  for (const double modulus : config.lambda_moduli) {
    const Complex lambda = std::polar(modulus, config.lambda_phase);
    const double r = SpectralScale::of(lambda, sym.order()).r_lambda;
    SweepRecord rec;
    rec.lambda = lambda;
    rec.r_lambda = r;
    try {
      const Recipe recipe = config.boundary_layer
                                ? boundary_layer_recipe(sym, lambda, boundary_layer_kappa(*config.boundary_layer, modulus))
                                : config.recipe;
      const auto ef = synth(sym, lambda, recipe);
      const Grid grid = config.h ? Grid(dom, *config.h) : auto_grid(dom, r);
      rec = verify_theorem(ef, dom, grid, opts);
    } catch (const std::exception& e) {
      rec.status = "error: " + one_line(e.what());
    }
    out.records.push_back(rec);
  }

  out.c_min = std::numeric_limits<double>::infinity();
  for (const auto& rec : out.records)
    if (rec.status == "ok" && rec.mass_ratio > 0.0) out.c_min = std::min(out.c_min, rec.constructive_constant);
  for (const auto& rec : out.records) {
    if (rec.status != "ok" || !std::isfinite(out.c_min)) {
      out.corollary_holds.push_back(true);
      continue;
    }
    out.corollary_holds.push_back(rec.mass_ratio <= rec.measured_inradius / (out.c_min * rec.r_lambda));
  }
  return out;
}

double normalized_gradient_sup(const Eigenfunction& u, double unit_h) {
  const int d = u.dim();
  const Domain unit = Domain::ball(Eigen::VectorXd::Zero(d), 1.0);
  const Grid grid(unit, unit_h);
  const double norm = std::sqrt(l2_mass(u, unit, grid));
  if (!(norm > 0.0)) throw ZeroFieldError("normalized_gradient_sup: zero field");
  return grid_gradient_sup(u, grid, 0.75) / norm;
}

LipschitzEstimate estimate_uniform_lipschitz(const Symbol& sym, int samples, std::uint64_t seed,
                                             const LipschitzOptions& opts) {
  if (samples <= 0) throw std::invalid_argument("estimate_uniform_lipschitz: samples must be positive");
  const int d = sym.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif;
  std::normal_distribution<double> normal;

  LipschitzEstimate est;
  double running = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Complex mu = std::polar(1.0 + unif(rng), 2.0 * std::numbers::pi * unif(rng));
    const int terms = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::max(1, opts.max_terms)));
    Recipe recipe;
    while (static_cast<int>(recipe.size()) < terms) {
      Eigen::VectorXcd v(d);
      for (int j = 0; j < d; ++j) v(j) = Complex(normal(rng), 0.0);
      if (v.norm() == 0.0) continue;
      v /= v.norm();
      const int root = static_cast<int>(rng() % static_cast<std::uint64_t>(sym.order()));
      const Complex a(normal(rng), normal(rng));
      try {
        solve_frequencies(sym, mu, v);
      } catch (const CharacteristicDirectionError&) {
        continue;
      }
      recipe.push_back({v, root, a});
    }
    const auto u = synth(sym, mu, recipe);
    double value = 0.0;
    try {
      value = normalized_gradient_sup(u, opts.unit_h);
    } catch (const ZeroFieldError&) {
      value = 0.0;  // cancelling amplitudes; skip the sample
    }
    running = std::max(running, value);
    est.running_max.push_back(running);
    if (s < (samples + 1) / 2) est.first_half_max = std::max(est.first_half_max, value);
    else est.second_half_max = std::max(est.second_half_max, value);
  }
  est.L_hat = running;
  est.plateau_ratio = est.first_half_max > 0.0 ? est.second_half_max / est.first_half_max : 0.0;
  return est;
}

}  // namespace inradius
