#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "inradius/certify.hpp"
#include "inradius/coverlat.hpp"
#include "inradius/domain.hpp"
#include "inradius/eigenfield.hpp"
#include "inradius/errors.hpp"
#include "inradius/geometry.hpp"
#include "inradius/harness.hpp"
#include "inradius/io.hpp"
#include "inradius/parallel.hpp"
#include "inradius/symbol.hpp"

namespace fs = std::filesystem;
using namespace inradius;

namespace {

struct Globals {
  std::string symbol_file;
  std::string out_dir;
  std::uint64_t seed = 1;
  int threads = 1;
  int dim = 2;  // Laplacian dimension when no symbol file is given
};

Symbol global_symbol(const Globals& g) {
  return g.symbol_file.empty() ? Symbol::laplacian(g.dim) : load_symbol(g.symbol_file);
}

// Writes to <out>/<name> when --out is set, otherwise to stdout.
void emit(const Globals& g, const std::string& name, const std::string& text) {
  if (g.out_dir.empty()) {
    std::cout << text;
    return;
  }
  fs::create_directories(g.out_dir);
  const auto path = fs::path(g.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

Grid make_grid(const Domain& dom, const Eigenfunction& ef, double h) {
  if (h > 0.0) return Grid(dom, h);
  return auto_grid(dom, SpectralScale::of(ef.lambda(), ef.symbol().order()).r_lambda);
}

Eigen::MatrixXd read_points(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open point file " + path);
  std::vector<double> values;
  double v = 0.0;
  while (in >> v) values.push_back(v);
  if (!in.eof()) throw std::invalid_argument("point file: non-numeric entry");
  if (values.size() % static_cast<std::size_t>(dim) != 0)
    throw std::invalid_argument("point file: entry count is not a multiple of the dimension");
  return Eigen::Map<Eigen::MatrixXd>(values.data(), dim, static_cast<Eigen::Index>(values.size()) / dim);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inradius-lab: nonvanishing-set inradius experiments for constant-coefficient eigenfunctions"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--symbol-file", g.symbol_file, "symbol file (default: Laplacian)");
  app.add_option("--dim", g.dim, "dimension of the default Laplacian")->check(CLI::Range(1, 8));
  app.add_option("--out", g.out_dir, "output directory (default: stdout)");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--threads", g.threads, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "build a plane-wave eigenfunction from a recipe");
  std::vector<double> lambda{1.0, 0.0};
  std::string recipe_text;
  synth_cmd->add_option("--lambda", lambda, "eigenvalue re im")->expected(2)->required();
  synth_cmd->add_option("--recipe", recipe_text, "dir | root | amplitude ; ...")->required();

  // inradius
  auto* inrad_cmd = app.add_subcommand("inradius", "certified and measured inradius of the nonvanishing set");
  inrad_cmd->set_help_flag("--help", "print this help");
  std::string field_file, domain_text, ppm_file;
  double h = 0.0;
  std::optional<double> tau;
  inrad_cmd->add_option("--field-file", field_file)->required();
  inrad_cmd->add_option("--domain", domain_text)->required();
  inrad_cmd->add_option("--h", h, "grid spacing (default r_lambda / 16)");
  inrad_cmd->add_option("--tau", tau, "zero threshold (default 1e-6 max |psi|)");
  inrad_cmd->add_option("--ppm", ppm_file, "write a P6 heatmap (d = 2)");

  // cover
  auto* cover_cmd = app.add_subcommand("cover", "greedy Vitali cover of a point list");
  std::string points_file;
  double cover_r = 0.0;
  cover_cmd->add_option("--points", points_file, "whitespace-separated coordinates")->required();
  cover_cmd->add_option("--r", cover_r)->required()->check(CLI::PositiveNumber);

  // lattice-count
  auto* lat_cmd = app.add_subcommand("lattice-count", "count near-solutions of P(xi) = lambda on Z^d");
  LatticeOptions lat_opts;
  lat_cmd->add_option("--lambda", lambda, "re im")->expected(2)->required();
  lat_cmd->add_option("--delta", lat_opts.delta);
  lat_cmd->add_option("--budget", lat_opts.budget);

  // prove
  auto* prove_cmd = app.add_subcommand("prove", "run the constructive proof pipeline on one field");
  prove_cmd->set_help_flag("--help", "print this help");
  prove_cmd->add_option("--field-file", field_file)->required();
  prove_cmd->add_option("--domain", domain_text)->required();
  prove_cmd->add_option("--h", h, "grid spacing (default r_lambda / 16)");
  std::string subset_text;
  prove_cmd->add_option("--subset", subset_text, "localize to an open subset A of the domain");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "theorem checks over a family of eigenvalues");
  std::string config_file;
  sweep_cmd->add_option("--config", config_file)->required();

  // estimate-L
  auto* lip_cmd = app.add_subcommand("estimate-L", "empirical gradient constant on B(0, 3/4)");
  int samples = 256;
  lip_cmd->add_option("--samples", samples);

  CLI11_PARSE(app, argc, argv);
  set_thread_count(g.threads);

  try {
    if (*synth_cmd) {
      const auto sym = global_symbol(g);
      const auto ef = synth(sym, Complex(lambda[0], lambda[1]), parse_recipe(recipe_text, sym.dim()));
      std::ostringstream os;
      write_field(os, ef);
      emit(g, "field.txt", os.str());
    } else if (*inrad_cmd) {
      const auto sym = global_symbol(g);
      const auto ef = load_field(field_file, sym);
      const auto dom = parse_domain(domain_text);
      const Grid grid = make_grid(dom, ef, h);
      const auto samples_ = sample_field(ef, grid);
      auto est = certified_inradius(ef, dom, grid, samples_);
      const auto meas = measured_inradius(ef, dom, grid, samples_, tau);
      est.measured_inradius = meas.measured_inradius;
      est.zero_threshold = meas.zero_threshold;
      if (!ppm_file.empty()) {
        std::ofstream img(ppm_file, std::ios::binary);
        if (!img) throw std::runtime_error("cannot write " + ppm_file);
        write_ppm(img, grid, samples_.modulus, est.certificate);
      }
      emit(g, "inradius.json", to_json(est).dump(2) + "\n");
    } else if (*cover_cmd) {
      const auto points = read_points(points_file, g.dim);
      emit(g, "cover.json", to_json(vitali_cover(points, cover_r)).dump(2) + "\n");
    } else if (*lat_cmd) {
      const auto sym = global_symbol(g);
      emit(g, "lattice.json", to_json(count_lattice(sym, Complex(lambda[0], lambda[1]), lat_opts)).dump(2) + "\n");
    } else if (*prove_cmd) {
      const auto sym = global_symbol(g);
      const auto ef = load_field(field_file, sym);
      const auto dom = parse_domain(domain_text);
      const Grid grid = make_grid(dom, ef, h);
      VerifyOptions opts;
      opts.proof.seed = g.seed;
      const auto check = subset_text.empty() ? check_theorem(ef, dom, grid, opts)
                                             : check_localized(ef, dom, parse_domain(subset_text), grid, opts);
      const nlohmann::json j = {{"record", to_json(check.record)}, {"proof", to_json(check.proof)}};
      emit(g, "prove.json", j.dump(2) + "\n");
    } else if (*sweep_cmd) {
      std::optional<Symbol> fallback;
      if (!g.symbol_file.empty()) fallback = load_symbol(g.symbol_file);
      const auto cfg = load_sweep_config(config_file, fallback);
      const auto result = sweep(cfg);
      std::ostringstream csv;
      write_csv(csv, result.records);
      emit(g, "sweep.csv", csv.str());
      nlohmann::json monitor = {{"c_min", std::isfinite(result.c_min) ? nlohmann::json(result.c_min) : nlohmann::json()},
                                {"corollary_holds", result.corollary_holds}};
      if (g.out_dir.empty()) std::cerr << monitor.dump() << "\n";
      else emit(g, "corollary.json", monitor.dump(2) + "\n");
    } else if (*lip_cmd) {
      const auto sym = global_symbol(g);
      emit(g, "lipschitz.json", to_json(estimate_uniform_lipschitz(sym, samples, g.seed)).dump(2) + "\n");
    }
  } catch (const std::exception& e) {
    std::cerr << "inradius-lab: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
