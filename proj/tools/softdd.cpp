// softdd: soft-pulse dynamical decoupling toolkit.
//
//   softdd params [--shape S]...
//   softdd design --family S --L 1 [--extra 0]
//   softdd simulate [--config file] [--shape ...] [--sequence ...] ...
//   softdd effham --sequence 4p --shape G10 [--form both] [--crosscheck]
//   softdd ordercheck --sequence 8a --shape Q1 --scales 0.3,0.1,0.03

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>

#include "softdd/cli.hpp"

namespace {

void add_model(CLI::App* app, softdd::ModelOptions& m) {
  app->add_option("--omega-r", m.omega_r, "oscillator frequency (2pi/tp)");
  app->add_option("--omega-0", m.omega_0, "qubit offset (2pi/tp)");
  app->add_option("--g", m.g, "JC coupling (2pi/tp)");
  app->add_option("--n-max", m.n_max, "highest oscillator level");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"soft-pulse dynamical decoupling"};
  app.require_subcommand(1);

  softdd::ParamsOptions po;
  auto* params = app.add_subcommand("params", "shape parameters s, alpha, zeta");
  params->add_option("--shape", po.shapes, "shape (gaussian:w, hermitian:w, fourier:..., S1, Q1); repeatable");
  params->add_option("--n-quad", po.n_quad, "quadrature intervals");

  softdd::DesignCmdOptions dopt;
  auto* des = app.add_subcommand("design", "design a Fourier pulse");
  des->add_option("--family", dopt.family, "S or Q")->check(CLI::IsMember({"S", "Q"}));
  des->add_option("--L", dopt.L, "order index 1..4");
  des->add_option("--extra", dopt.extra_terms, "extra Fourier terms for peak reduction");
  des->add_option("--tol", dopt.tol, "residual tolerance");
  des->add_option("--n-quad", dopt.n_quad, "quadrature intervals");
  des->add_option("--max-iter", dopt.max_iter, "Newton iterations per homotopy step");

  softdd::SimulateOptions sopt;
  auto* sim = app.add_subcommand("simulate", "propagate and write fidelity/quanta CSV");
  sim->add_option("--config", sopt.config_path, "key = value file");
  sim->add_option("--jobs", sopt.jobs, "parallel runs (0 = hardware)");
  for (const auto& key : softdd::ExperimentConfig::keys()) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    sim->add_option_function<std::string>(
        "--" + flag, [&sopt, key](const std::string& v) { sopt.overrides.emplace_back(key, v); },
        "override '" + key + "'");
  }

  softdd::EffhamOptions eo;
  std::string e_scales;
  auto* eff = app.add_subcommand("effham", "effective Hamiltonian of a sequence");
  eff->add_option("--sequence", eo.sequence, "sequence name or text");
  eff->add_option("--shape", eo.shape, "pulse shape");
  eff->add_option("--form", eo.form, "matched, printed or both")
      ->check(CLI::IsMember({"matched", "printed", "both"}));
  eff->add_flag("--crosscheck", eo.crosscheck, "compare JC variants against propagation");
  eff->add_option("--scales", e_scales, "coupling scales for --crosscheck, comma separated");
  eff->add_flag("!--no-matrix", eo.matrix, "omit the matrix listing");
  add_model(eff, eo.model);

  softdd::OrderCmdOptions oo;
  std::string o_scales;
  auto* ord = app.add_subcommand("ordercheck", "defect scaling against coupling strength");
  ord->add_option("--sequence", oo.sequence, "sequence name or text");
  ord->add_option("--shape", oo.shape, "pulse shape");
  ord->add_option("--scales", o_scales, "coupling scales, comma separated");
  ord->add_option("--reference", oo.reference, "analytic, printed, composed, a0 or zero");
  add_model(ord, oo.model);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : softdd::kExitValidation;
  }

  try {
    if (*params)
      return softdd::cmd_params(po, std::cout);
    if (*des)
      return softdd::cmd_design(dopt, std::cout);
    if (*sim)
      return softdd::cmd_simulate(sopt, std::cout, std::cerr);
    if (*eff) {
      if (!e_scales.empty())
        eo.scales = softdd::parse_list(e_scales, "scales");
      return softdd::cmd_effham(eo, std::cout);
    }
    if (*ord) {
      if (!o_scales.empty())
        oo.scales = softdd::parse_list(o_scales, "scales");
      return softdd::cmd_ordercheck(oo, std::cout);
    }
  } catch (const softdd::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return softdd::kExitValidation;
  } catch (const softdd::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return softdd::kExitConvergence;
  }
  return 0;
}
