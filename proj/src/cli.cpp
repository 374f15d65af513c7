// SPDX-License-Identifier: Apache-2.0

#include "dpg/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "dpg/trace_lab.hpp"

namespace dpg {

void StudyConfig::validate() const {
  if (problem != "smooth" && problem != "singular")
    throw std::invalid_argument("problem must be smooth or singular, got '" + problem + "'");
  if (scheme != 1 && scheme != 2) throw std::invalid_argument("scheme must be 1 or 2");
  if (refine != "uniform" && refine != "adaptive")
    throw std::invalid_argument("refine must be uniform or adaptive, got '" + refine + "'");
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
  if (levels < 1) throw std::invalid_argument("levels must be positive");
  if (max_dofs < 1) throw std::invalid_argument("max-dofs must be positive");
  Formulation{Scheme::vf2, field_degree, test_degree}.validate();
}

std::vector<StudyRecord> run_study(const StudyConfig& config) {
  config.validate();
  const Problem problem = config.problem == "smooth" ? smooth_problem() : singular_problem();
  const Formulation form{config.scheme == 1 ? Scheme::vf1 : Scheme::vf2, config.field_degree, config.test_degree};
  const StudyOptions opts{config.timing};
  if (config.refine == "adaptive")
    return adaptive_loop(problem.make_domain(), form, problem, config.theta, config.max_dofs, opts);

  std::vector<Mesh> meshes;
  if (config.problem == "smooth") {
    // structured grids n = 2, 4, 8, ...
    for (int l = 0; l < config.levels; ++l) meshes.push_back(make_unit_square(2 << l));
  } else {
    Mesh m = problem.make_domain();
    for (int l = 0; l < config.levels; ++l) {
      meshes.push_back(m);
      if (l + 1 < config.levels) m = refine_uniform(refine_uniform(m));
    }
  }
  return run_mesh_sequence(meshes, form, problem, opts);
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_study_csv(std::ostream& os, const std::vector<StudyRecord>& records) {
  os << "level,ndof_total,ndof_field,h_max,eta,err_u,err_sigma,solve_seconds\n";
  for (const StudyRecord& r : records) {
    os << r.level << ',' << r.ndof_total << ',' << r.ndof_field << ',' << fmt(r.h_max) << ',' << fmt(r.eta) << ','
       << fmt(r.err_u) << ',' << fmt(r.err_sigma) << ',' << fmt(r.solve_seconds) << '\n';
  }
}

void TracelabConfig::validate() const {
  if (mode != "dirac" && mode != "unbounded" && mode != "norm-identity")
    throw std::invalid_argument("mode must be dirac, unbounded or norm-identity, got '" + mode + "'");
  if (eps_min_exponent < 2 || eps_max_exponent < eps_min_exponent)
    throw std::invalid_argument("eps exponents must satisfy 2 <= min <= max");
  for (int n : n_list)
    if (n < 1) throw std::invalid_argument("n values must be positive");
  if (degree_min < 4 || degree_max < degree_min)
    throw std::invalid_argument("degrees must satisfy 4 <= min <= max");
}

void run_tracelab(const TracelabConfig& config, std::ostream& os) {
  config.validate();
  if (config.mode == "dirac") {
    std::vector<double> eps;
    for (int k = config.eps_min_exponent; k <= config.eps_max_exponent; ++k) eps.push_back(std::ldexp(1.0, -k));
    const DiracStudy study = dirac_convergence_study(eps, monomials_up_to(4));
    os << "eps,error,fitted_slope\n";
    for (std::size_t i = 0; i < eps.size(); ++i)
      os << fmt(study.eps[i]) << ',' << fmt(study.error[i]) << ',' << fmt(study.slope) << '\n';
  } else if (config.mode == "unbounded") {
    os << "n,value_at_origin,l2_norm\n";
    for (const UnboundedRow& r : unboundedness_demo(config.n_list))
      os << r.n << ',' << fmt(r.value_at_origin) << ',' << fmt(r.l2_norm) << '\n';
  } else {
    const std::array<Point, 3> ref{Point{0.0, 0.0}, Point{1.0, 0.0}, Point{0.0, 1.0}};
    const Polynomial2 z = Polynomial2::monomial(2, 1);
    os << "degree,duality_norm,extension_norm,gap\n";
    for (int d = config.degree_min; d <= config.degree_max; ++d) {
      const NormPair n = norm_identity_check(ref, z, d, d);
      const double gap = n.extension > 0.0 ? (n.extension - n.duality) / n.extension : 0.0;
      os << d << ',' << fmt(n.duality) << ',' << fmt(n.extension) << ',' << fmt(gap) << '\n';
    }
  }
}

namespace {

template <class F>
void with_output(const std::string& path, std::ostream& out, F&& body) {
  if (path == "-") {
    body(out);
    return;
  }
  // write to a string first so a failed run leaves no partial file
  std::ostringstream buf;
  body(buf);
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open output file '" + path + "'");
  file << buf.str();
}

// key=value (INI) settings for options not given on the command line
void apply_config_file(CLI::App& sub, const std::string& path) {
  if (path.empty()) return;
  const std::vector<CLI::ConfigItem> items = CLI::ConfigINI().from_file(path);
  for (const CLI::ConfigItem& item : items) {
    if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents.front() == sub.get_name()))
      throw CLI::ConfigError::Extras(item.fullname());
    CLI::Option* opt = sub.get_option_no_throw("--" + item.name);
    if (opt == nullptr || item.name == "config") throw CLI::ConfigError::Extras(item.fullname());
    if (opt->count() > 0) continue;
    for (const std::string& v : item.inputs) opt->add_result(v);
    opt->run_callback();
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"DPG solver for the clamped bi-Laplace problem"};
  app.require_subcommand(1);

  StudyConfig study;
  auto* sc = app.add_subcommand("study", "convergence study on the smooth or singular problem");
  std::string study_config;
  sc->add_option("--config", study_config, "key=value file; command line flags take precedence");
  sc->add_option("--problem", study.problem, "smooth | singular")->capture_default_str();
  sc->add_option("--scheme", study.scheme, "1 | 2")->capture_default_str();
  sc->add_option("--refine", study.refine, "uniform | adaptive")->capture_default_str();
  sc->add_option("--theta", study.theta, "Doerfler parameter")->capture_default_str();
  sc->add_option("--levels", study.levels, "levels of uniform refinement")->capture_default_str();
  sc->add_option("--max-dofs", study.max_dofs, "unknown budget of the adaptive loop")->capture_default_str();
  sc->add_option("--field-degree", study.field_degree, "polynomial degree of u_h, sigma_h")->capture_default_str();
  sc->add_option("--test-degree", study.test_degree, "degree of the enriched test space")->capture_default_str();
  sc->add_option("--timing", study.timing, "record solve time (false writes 0)")->capture_default_str();
  sc->add_option("--output", study.output, "CSV path, - for stdout")->capture_default_str();

  TracelabConfig lab;
  auto* tl = app.add_subcommand("tracelab", "trace space experiments");
  std::string lab_config;
  tl->add_option("--config", lab_config, "key=value file; command line flags take precedence");
  tl->add_option("--mode", lab.mode, "dirac | unbounded | norm-identity")->capture_default_str();
  tl->add_option("--eps-min-exponent", lab.eps_min_exponent, "largest eps is 2^-min")->capture_default_str();
  tl->add_option("--eps-max-exponent", lab.eps_max_exponent, "smallest eps is 2^-max")->capture_default_str();
  tl->add_option("--n", lab.n_list, "source distances 1/n")->delimiter(',')->capture_default_str();
  tl->add_option("--degree-min", lab.degree_min, "lowest polynomial degree")->capture_default_str();
  tl->add_option("--degree-max", lab.degree_max, "highest polynomial degree")->capture_default_str();
  tl->add_option("--output", lab.output, "CSV path, - for stdout")->capture_default_str();

  try {
    app.parse(argc, argv);
    apply_config_file(*sc, study_config);
    apply_config_file(*tl, lab_config);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    if (sc->parsed()) {
      study.validate();
      const auto records = run_study(study);
      with_output(study.output, out, [&](std::ostream& os) { write_study_csv(os, records); });
    } else {
      lab.validate();
      with_output(lab.output, out, [&](std::ostream& os) { run_tracelab(lab, os); });
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace dpg
