#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "inradius/certify.hpp"
#include "inradius/coverlat.hpp"
#include "inradius/domain.hpp"
#include "inradius/eigenfield.hpp"
#include "inradius/geometry.hpp"

namespace inradius {

struct ProofOptions {
  double unit_h = 1.0 / 64.0;     // grid spacing in the rescaled (unit-ball) picture
  int verify_samples = 10000;     // dense re-sampling of the constructive ball
  std::uint64_t seed = 0x5eedULL;
};

/// Trace of the four-step construction: good ball at scale r, rescaled field u on B(0, 1),
/// a large-amplitude point y0 in B(0, 1/2), and the Lipschitz ball around it mapped back.
struct ProofRun {
  bool trivial = false;  // interior mass M = 0
  double r = 0.0;
  Complex lambda;
  Complex mu;
  MassReport mass;
  GoodBall good_ball;
  double ball_norm = 0.0;             // ||psi||_{L2(B(x0, r))}
  std::optional<Eigenfunction> rescaled;
  double max_rescaled_residual = 0.0; // largest residual / tolerance over the checked points
  Eigen::VectorXd amplitude_point;    // y0
  double amplitude = 0.0;             // |u(y0)|
  double half_ball_rms = 0.0;         // RMS of |u| over the sampled cells of B(0, 1/2)
  double amp_bound = 0.0;             // (M / (2 N_d N))^{1/2} / vol(B(0, 1/2))^{1/2}
  double L_emp = 0.0;                 // analytic gradient bound of u on B(0, 3/4)
  double L_grid = 0.0;                // sampled sup |grad u| on B(0, 3/4), diagnostic only
  double rho0 = 0.0;
  double constructive_inradius = 0.0;
  Eigen::VectorXd constructive_center;
  double constructive_constant = 0.0; // rho0 / sqrt(M / N)
  double assembled_constant = 0.0;    // closed-form constant with L_emp in place of the uniform bound
};

/// min{ (2 L vol(B(0,1/2))^{1/2})^{-1} (2 N_d)^{-1/2}, 1/4 }
double assembled_constant(double lipschitz, int d);

/// min(a t, b) - min(a, b) t, non-negative for a, b >= 0 and t in [0, 1].
double min_scaling_gap(double a, double b, double t);

ProofRun run_proof_pipeline(const Eigenfunction& ef, const Domain& dom, const Grid& grid, const ProofOptions& opts = {});
ProofRun run_proof_pipeline(const Eigenfunction& ef, const Domain& dom, const Grid& grid, const FieldSamples& samples,
                            const ProofOptions& opts = {});

struct SweepRecord {
  Complex lambda;
  double r_lambda = 0.0;
  double mass_ratio = 0.0;
  double certified_inradius = 0.0;
  double measured_inradius = 0.0;
  double constructive_inradius = 0.0;
  double Q = 0.0;
  double boundary_mass_fraction = 0.0;
  double h = 0.0;
  double constructive_constant = 0.0;
  std::string status = "ok";
};

struct VerifyOptions {
  double tau_rel = 1e-6;
  ProofOptions proof;
};

struct TheoremCheck {
  SweepRecord record;
  SigmaEstimate sigma;
  ProofRun proof;
};

/// Full check of the inradius inequality on one field. Works on the canonical representative of
/// the projective class of ef, so every reported number is invariant under psi -> c psi.
/// Throws ContractError when the ordering constructive <= certified + 2h <= measured + 4h fails.
TheoremCheck check_theorem(const Eigenfunction& ef, const Domain& dom, const Grid& grid, const VerifyOptions& opts = {});
SweepRecord verify_theorem(const Eigenfunction& ef, const Domain& dom, const Grid& grid, const VerifyOptions& opts = {});

/// Same check with the domain replaced by the open subset A (cells of `grid` inside A).
/// Throws HypothesisViolation when ||psi||_{L2(A)} <= tau_rel ||psi||_{L2(dom)}.
TheoremCheck check_localized(const Eigenfunction& ef, const Domain& dom, const Domain& subset, const Grid& grid,
                             const VerifyOptions& opts = {});
SweepRecord verify_localized(const Eigenfunction& ef, const Domain& dom, const Domain& subset, const Grid& grid,
                             const VerifyOptions& opts = {});

struct SweepConfig {
  std::optional<Symbol> symbol;
  std::optional<Domain> domain;
  std::vector<double> lambda_moduli;
  double lambda_phase = 0.0;
  Recipe recipe;
  std::optional<double> h;               // nullopt: r_lambda / 16, capped at 4e6 cells
  double tau_rel = 1e-6;
  std::optional<double> boundary_layer;  // kappa0 of the boundary-layer family; replaces the recipe
};

/// key = value lines: domain, symbol_file (or symbol = laplacian), lambda_moduli, lambda_phase,
/// recipe, h_policy, tau_rel, boundary_layer. Relative paths resolve against base_dir; `fallback`
/// is used when the file names no symbol.
SweepConfig parse_sweep_config(std::istream& in, const std::filesystem::path& base_dir = {},
                               const std::optional<Symbol>& fallback = std::nullopt);
SweepConfig load_sweep_config(const std::filesystem::path& path, const std::optional<Symbol>& fallback = std::nullopt);

/// Decay rate factor of the boundary-layer family at |lambda|: kappa0 (1 + log10 |lambda|).
double boundary_layer_kappa(double kappa0, double modulus);

/// One plane wave along (sqrt(1 + kappa^2), i kappa, 0, ...) whose modulus decays away from the
/// face x_2 = lo_2 at rate proportional to kappa / r_lambda.
Recipe boundary_layer_recipe(const Symbol& sym, Complex lambda, double kappa);

struct SweepResult {
  std::vector<SweepRecord> records;
  double c_min = 0.0;                   // min constructive constant over non-trivial records
  std::vector<bool> corollary_holds;    // mass_ratio <= measured / (c_min r_lambda), per record
};

SweepResult sweep(const SweepConfig& config);

struct LipschitzOptions {
  double unit_h = 1.0 / 48.0;
  int max_terms = 4;
};

struct LipschitzEstimate {
  double L_hat = 0.0;
  double first_half_max = 0.0;
  double second_half_max = 0.0;
  double plateau_ratio = 0.0;  // second_half_max / first_half_max
  std::vector<double> running_max;
};

/// sup over grid cells of B(0, 3/4) of |grad u|, divided by ||u||_{L2(B(0,1))}.
double normalized_gradient_sup(const Eigenfunction& u, double unit_h);

/// Running maximum of normalized_gradient_sup over random solutions of H u = mu u, 1 <= |mu| <= 2.
LipschitzEstimate estimate_uniform_lipschitz(const Symbol& sym, int samples, std::uint64_t seed,
                                             const LipschitzOptions& opts = {});

}  // namespace inradius
