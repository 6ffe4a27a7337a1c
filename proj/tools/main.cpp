#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "eigenwave/errors.hpp"
#include "eigenwave/harness/config.hpp"
#include "eigenwave/harness/run.hpp"
#include "eigenwave/harness/study.hpp"
#include "eigenwave/oracle.hpp"

namespace ew = eigenwave;

namespace {

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos)
      throw ew::ConfigError("bad list entry '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ew::ConfigError("empty value list");
  return out;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream os(std::filesystem::path(dir) / name, std::ios::binary);
  if (!os) throw ew::ConfigError("cannot write " + name + " in '" + dir + "'");
  return os;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EigenWave: eigenpairs of the Laplacian from filtered wave solves"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "run configuration file")->required();
  auto* out_opt = app.add_option("--out-dir", out_dir, "output directory (overrides [output] dir)");
  auto* seed_opt = app.add_option("--seed", seed, "random seed (overrides [eigensolver] seed)");

  auto* solve = app.add_subcommand("solve", "compute eigenpairs and write summary/eigenpairs CSV");
  auto* reference = app.add_subcommand("reference", "write the oracle spectrum as CSV");
  double ref_lambda_max = 0.0;
  reference->add_option("--lambda-max", ref_lambda_max, "largest lambda to list (default 2 omega)");

  auto* curve = app.add_subcommand("filter-curve", "sample beta and the discrete filter");
  double lambda_max = 0.0;
  int samples = 1001;
  curve->add_option("--lambda-max", lambda_max, "upper end of the lambda range")->required();
  curve->add_option("--samples", samples, "number of uniform samples")->check(CLI::Range(2, 10000000));

  auto* study = app.add_subcommand("study", "parameter sweep, one run per value");
  std::string axis, values;
  study->add_option("--axis", axis, "n_its, n_periods, n_requested or tolerance")->required();
  study->add_option("--values", values, "comma-separated values")->required();

  auto* scaling = app.add_subcommand("scaling", "grid refinement timing study");
  std::string levels;
  int repeats = 3;
  scaling->add_option("--levels", levels, "comma-separated cells per axis")->required();
  scaling->add_option("--repeats", repeats, "timed repeats per level")->check(CLI::PositiveNumber);

  // Options given after the subcommand name belong to the parent as well.
  for (auto* sub : {solve, reference, curve, study, scaling}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    ew::RunConfig cfg = ew::parse_config_file(config_path);
    if (*out_opt) cfg.out_dir = out_dir;
    if (*seed_opt) cfg.seed = seed;

    if (*solve) {
      const ew::RunReport rep = ew::run_case(cfg);
      ew::write_report(cfg.out_dir, rep);
      ew::write_summary_csv(std::cout, rep.summary);
      if (!rep.summary.solver_note.empty()) std::cerr << "note: " << rep.summary.solver_note << "\n";
      if (!rep.summary.converged) std::cerr << "warning: " << rep.summary.diagnostic << "\n";
    } else if (*reference) {
      const ew::DiscreteLaplacian L(cfg.grid(), cfg.order, cfg.bc);
      const double cap = ref_lambda_max > 0.0 ? ref_lambda_max : 2.0 * cfg.omega;
      ew::ReferenceSpectrum ref = ew::build_reference(cfg, L, cap);
      if (cfg.oracle == ew::OracleKind::Dense) {
        // The dense oracle returns the full spectrum; trim to the cap.
        std::size_t keep = 0;
        while (keep < ref.size() && ref.lambda[keep] <= cap) ++keep;
        ref.lambda.resize(keep);
        ref.vectors.clear();
        ref.modes.clear();
        ref.clusters = ew::cluster_multiplicities(ref.lambda, cfg.cluster_tol);
        ref.cluster_of.assign(keep, 0);
        for (std::size_t c = 0; c < ref.clusters.size(); ++c)
          for (std::size_t i = 0; i < ref.clusters[c].count; ++i)
            ref.cluster_of[ref.clusters[c].first + i] = c;
      }
      ew::write_reference_csv(std::cout, ref);
    } else if (*curve) {
      const ew::DiscreteLaplacian L(cfg.grid(), cfg.order, cfg.bc);
      const ew::FilterSpec spec =
          cfg.scheme == ew::SchemeKind::Implicit
              ? ew::FilterSpec::implicit(cfg.filter_omega(), cfg.n_periods, cfg.n_its)
              : ew::explicit_filter(L, cfg.omega, cfg.n_periods, cfg.cfl);
      auto os = open_out(cfg.out_dir, "filter.csv");
      ew::emit_filter_curve(os, spec, cfg.scheme, lambda_max, samples);
    } else if (*study) {
      const ew::SweepTable t = ew::study_sweep(ew::parse_sweep_axis(axis), parse_list(values), cfg);
      auto os = open_out(cfg.out_dir, "sweep.csv");
      ew::write_sweep_csv(os, t);
      ew::write_sweep_csv(std::cout, t);
    } else if (*scaling) {
      std::vector<int> lv;
      for (double v : parse_list(levels)) {
        if (v != static_cast<int>(v) || v < 4) throw ew::ConfigError("levels must be integers >= 4");
        lv.push_back(static_cast<int>(v));
      }
      const auto rows = ew::scaling_study(cfg, lv, repeats);
      auto os = open_out(cfg.out_dir, "scaling.csv");
      ew::write_scaling_csv(os, rows);
      ew::write_scaling_csv(std::cout, rows);
      for (const auto& r : rows)
        if (!r.solver_note.empty()) std::cerr << "note (n=" << r.n << "): " << r.solver_note << "\n";
    }
  } catch (const ew::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ew::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const ew::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 2;
  } catch (const ew::DimensionError& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return 4;
  } catch (const ew::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const ew::InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
