#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "ergolim/errors.hpp"
#include "ergolim/experiment.hpp"
#include "ergolim/gallery.hpp"
#include "ergolim/gram.hpp"
#include "ergolim/iteration.hpp"

namespace {

using ergolim::Complex;
using ergolim::Json;

struct Overrides {
  double tol = -1.0;
  int max_iters = -1;
  std::string format;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void apply_overrides(ergolim::ExperimentConfig& config, const Overrides& o) {
  if (o.tol > 0.0) config.tolerance = o.tol;
  if (o.max_iters > 0) config.max_iterations = o.max_iters;
  if (!o.format.empty()) {
    config.format = o.format == "csv" ? ergolim::ExperimentConfig::Format::csv
                                      : ergolim::ExperimentConfig::Format::json;
  }
  if (!o.out.empty()) config.output_path = o.out;
  if (o.seed_set) config.seed = o.seed;
}

int finish_run(const ergolim::ExperimentConfig& config) {
  const ergolim::RunArtifact artifact = ergolim::run(config);
  const auto written = ergolim::emit(artifact, config);
  if (config.output_path.empty()) {
    std::cout << ergolim::dump_deterministic(artifact.document);
  } else {
    for (const std::string& path : written) {
      std::cout << "wrote " << path << "\n";
    }
  }
  const Json& verdicts = artifact.document["verdicts"];
  for (auto it = verdicts.begin(); it != verdicts.end(); ++it) {
    std::cout << it.key() << ": " << it.value().get<std::string>() << "\n";
  }
  return artifact.exit_code;
}

int cmd_analyze(const std::string& config_path, const Overrides& overrides) {
  ergolim::ExperimentConfig config = ergolim::load_config(config_path);
  apply_overrides(config, overrides);
  return finish_run(config);
}

void print_matrix(const char* name, const ergolim::Mat& m) {
  std::cout << name << " =\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::cout << "  [";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) std::cout << ", ";
      const Complex z = m(i, j);
      if (std::abs(z.imag()) <= 1e-13) {
        std::cout << z.real();
      } else {
        std::cout << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
      }
    }
    std::cout << "]\n";
  }
}

int cmd_demo_intro(const Overrides& overrides) {
  // Reproduces the introductory worked example: the partition-of-unity
  // operator on nodes {0, 1/2, 1} whose iterates converge to the linear
  // interpolation f(0) + (f(1) - f(0)) x.
  ergolim::ExperimentConfig config;
  config.gallery = ergolim::GallerySpec::intro_hat();
  config.analyses = {"gram", "project", "iterate"};
  apply_overrides(config, overrides);

  const ergolim::GalleryEntry entry = ergolim::make(*config.gallery);
  const ergolim::EigenSystemInput& sys = *entry.known_eigensystem;
  const ergolim::GramSystem gram = ergolim::build_gram(sys);
  print_matrix("G", gram.G);
  if (gram.mode != ergolim::GramSystem::Mode::singular) {
    print_matrix("A", gram.A);
  }
  std::cout << "limit: " << entry.limit_description << "\n";

  // Spot check against the closed form on a handful of polynomials.
  const ergolim::ProjectionOperator proj = ergolim::build_projection(sys, gram);
  const ergolim::RealVec& grid = entry.op.finite_rank().grid();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const double a = coeff(rng), b = coeff(rng), c = coeff(rng), d = coeff(rng);
    ergolim::Vec f(grid.size());
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const double x = grid[i];
      f[i] = a + b * x + c * x * x + d * x * x * x;
    }
    const ergolim::Vec pf = ergolim::apply(proj.realized, f);
    const Complex f0 = f[0];
    const Complex f1 = f[grid.size() - 1];
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      worst = std::max(worst, std::abs(pf[i] - (f0 + (f1 - f0) * grid[i])));
    }
  }
  std::cout << "max |Pf - (f(0) + (f(1)-f(0)) x)| over 5 random cubics: " << worst
            << "\n";

  return finish_run(config);
}

int cmd_gallery_list() {
  std::cout << "intro_hat             flattened piecewise-linear hats on {0, 1/2, 1};"
               " iterates -> endpoint interpolation\n"
            << "bernstein             parameters: n; nodes k/n with Bernstein basis;"
               " iterates -> endpoint interpolation\n"
            << "schoenberg            parameters: degree, segments; B-spline partition"
               " of unity on Greville nodes\n"
            << "stochastic_random     parameters: n, seed; positive row-stochastic"
               " matrix (primitive by construction)\n"
            << "periodic_permutation  parameters: n; n-cycle with peripheral spectrum"
               " = nth roots of unity\n"
            << "mixed_chain           parameters: alpha in (0,1]; alpha*T0 +"
               " (1-alpha)*P0 for the two-state chain\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergolim: explicit limits of Markov operator iterates via Gram projections"};
  app.require_subcommand(1);

  Overrides overrides;
  std::string config_path;

  CLI::App* analyze = app.add_subcommand("analyze", "run the analyses from a JSON config");
  analyze->add_option("config", config_path, "path to the experiment config")->required();

  CLI::App* gallery = app.add_subcommand("gallery", "operator gallery utilities");
  CLI::App* gallery_list = gallery->add_subcommand("list", "list gallery operators");
  gallery->require_subcommand(1);

  CLI::App* demo = app.add_subcommand("demo", "built-in demonstrations");
  CLI::App* demo_intro =
      demo->add_subcommand("intro", "reproduce the introductory worked example");
  demo->require_subcommand(1);

  for (CLI::App* cmd : {analyze, demo_intro}) {
    cmd->add_option("--tol", overrides.tol, "override the tolerance");
    cmd->add_option("--max-iters", overrides.max_iters, "override the iteration budget");
    cmd->add_option("--format", overrides.format, "override the output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", overrides.out, "override the output path");
    cmd->add_option("--seed", overrides.seed, "override the seed")
        ->each([&](const std::string&) { overrides.seed_set = true; });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze) return cmd_analyze(config_path, overrides);
    if (*gallery_list) return cmd_gallery_list();
    if (*demo_intro) return cmd_demo_intro(overrides);
  } catch (const ergolim::InvalidInput& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const ergolim::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
