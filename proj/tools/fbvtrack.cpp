// Command-line driver: simulate | analyze | pvar | young | check.
//
// Exit codes: 0 success, 1 acceptance/violation failure, 2 usage/config error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fbvtrack/acceptance.hpp"
#include "fbvtrack/functionals.hpp"
#include "fbvtrack/io.hpp"
#include "fbvtrack/scenario.hpp"
#include "fbvtrack/young.hpp"

namespace fs = std::filesystem;
using namespace fbv;

namespace {

int cmd_simulate(const std::string& config_path, const std::string& scenario_name,
                 double nu_override, double horizon_override, const std::string& out_dir) {
  scenario::RunConfig cfg;
  if (!scenario_name.empty()) cfg = scenario::builtin_scenario(scenario_name);
  else if (!config_path.empty()) cfg = io::load_config(config_path);
  else {
    std::cerr << "simulate: need --config or --scenario\n";
    return 2;
  }
  if (nu_override > 0.0) cfg.nu = nu_override;
  if (horizon_override > 0.0) cfg.horizon = horizon_override;
  for (const auto& w : scenario::validate(cfg)) std::cerr << "warning: " << w << "\n";

  const auto tr = scenario::run_config(cfg);
  fs::create_directories(out_dir);
  io::save_trace((fs::path(out_dir) / "trace.json").string(), tr);
  io::write_snapshots_csv((fs::path(out_dir) / "snapshots.csv").string(), tr, cfg.p);

  std::ostringstream summary;
  const auto m = scenario::make_model(cfg);
  summary << "scenario:        " << (cfg.name.empty() ? "(custom)" : cfg.name) << "\n"
          << "model:           " << cfg.model_name << "\n"
          << "nu:              " << cfg.nu << "\n"
          << "fronts:          " << tr.fronts.size() << "\n"
          << "events:          " << tr.events.size() << "\n"
          << "last event time: " << tr.end_time << "\n"
          << "completed:       " << (tr.completed ? "yes" : "no (horizon reached)") << "\n"
          << "Vp(u0):          " << pvar::vector_p_variation(tr.initial, cfg.p, m) << "\n";
  if (!tr.events.empty()) {
    // time-regularity spot checks over a few dyadic pairs
    const double t1 = tr.events.front().time, t2 = std::min(tr.end_time, 8.0 * t1);
    for (double dt : {0.5 * (t2 - t1), 0.25 * (t2 - t1)}) {
      if (dt <= 0.0) break;
      const double val = tracking::time_regularity(tr, t1, t1 + dt, cfg.p);
      summary << "int |u(t)-u(s)|^p dx / |t-s| at dt=" << dt << ":  " << val / dt << "\n";
    }
  }
  io::save_text((fs::path(out_dir) / "summary.txt").string(), summary.str());
  std::cout << summary.str();
  std::cout << "trace written to " << (fs::path(out_dir) / "trace.json").string() << "\n";
  return 0;
}

int cmd_analyze(const std::string& trace_path, double horizon, double p, double C1, double C2,
                const std::string& curve_mode, const std::string& out_dir) {
  const auto tr = io::load_trace(trace_path);
  const double T = horizon > 0.0 ? horizon : (tr.events.empty() ? 1.0 : tr.end_time);
  if (!tr.events.empty() && T > tr.final_time())
    throw InvalidInputError("analyze: horizon exceeds the trace's final time");
  const auto v = functionals::build_horizon(tr, T, p);
  // auto: every front line for small traces, shock-anchored family otherwise
  const bool exhaustive = curve_mode == "exhaustive" ||
                          (curve_mode == "auto" && tr.fronts.size() < 200);
  const auto curves = exhaustive ? functionals::exhaustive_curve_family(v)
                                 : functionals::default_curve_family(v);
  const auto rep = functionals::monitor_decay(v, C1, C2, curves);
  const auto h = functionals::check_H(v, T, curves);
  const double new_waves = functionals::new_wave_production(tr);

  fs::create_directories(out_dir);
  io::write_report_csv((fs::path(out_dir) / "report.csv").string(), rep);
  std::vector<functionals::MeasureCurveSeries> series;
  series.reserve(curves.size());
  for (const auto& cs : curves) series.push_back(functionals::measure_curve(v, cs));
  io::write_curves_csv((fs::path(out_dir) / "curves.csv").string(), series);
  auto jrep = io::report_to_json(rep);
  jrep["H_holds"] = h.holds;
  jrep["H_bound"] = h.bound;
  jrep["H_violations"] = h.violations.size();
  jrep["new_wave_production"] = new_waves;
  jrep["horizon"] = T;
  jrep["curves"] = curves.size();
  io::save_text((fs::path(out_dir) / "report.json").string(), jrep.dump(1) + "\n");

  std::cout << "events analyzed:      " << (rep.times.empty() ? 0 : rep.times.size() - 1) << "\n"
            << "measure curves:       " << curves.size() << "\n"
            << "decay violations:     " << rep.violations.size() << "\n"
            << "H(tau) verdict:       " << (h.holds ? "holds" : "violated") << " (bound "
            << h.bound << ")\n"
            << "new-wave production:  " << new_waves << "\n";
  for (const auto& viol : rep.violations)
    std::cout << "  violation t=" << viol.time << " " << viol.what << " jump=" << viol.jump
              << "\n";
  return rep.violations.empty() && h.holds ? 0 : 1;
}

int cmd_pvar(const std::string& file, double p, bool print_vp) {
  std::vector<double> xs;
  auto read_stream = [&](std::istream& in) {
    double x;
    while (in >> x) xs.push_back(x);
  };
  if (file.empty() || file == "-") {
    read_stream(std::cin);
  } else {
    std::ifstream in(file);
    if (!in) {
      std::cerr << "pvar: cannot open " << file << "\n";
      return 2;
    }
    read_stream(in);
  }
  std::cout << io::format_double(print_vp ? pvar::p_variation_seq(xs, p)
                                          : pvar::max_p_sum(xs, p))
            << "\n";
  return 0;
}

int cmd_young(double eps, int n, double p, int k, double alpha, double beta, double dx,
              const std::string& out_dir) {
  const auto pat = young::YoungPattern::build({0, 0, 0}, alpha, beta, dx);
  const auto samples = young::evolve_period(pat, k, p);
  fs::create_directories(out_dir);
  io::write_young_csv((fs::path(out_dir) / "young.csv").string(), samples);
  std::cout << "j,alpha_j,beta_j,vp_j\n";
  for (std::size_t j = 0; j < samples.size(); ++j)
    std::cout << j << ',' << samples[j].alpha << ',' << samples[j].beta << ',' << samples[j].vp
              << "\n";
  const auto growth = young::vp_growth_report(eps, n, p);
  std::cout << "growth: n=" << growth.n << " vp_initial=" << growth.vp_initial
            << " vp_final=" << growth.vp_final << " lower_bound=" << growth.lower_bound << "\n";
  return growth.vp_final >= growth.lower_bound ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wave-front tracking for 2x2 monotone systems with p-variation analysis"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "run a front-tracking simulation");
  std::string config_path, scenario_name, out_dir = "out";
  double nu_override = 0.0, horizon_override = 0.0;
  sim->add_option("--config", config_path, "run configuration JSON");
  sim->add_option("--scenario", scenario_name, "builtin scenario name (psystem-small, ...)");
  sim->add_option("--nu", nu_override, "override the front-splitting threshold");
  sim->add_option("--horizon", horizon_override, "stop the simulation at this time");
  sim->add_option("--out", out_dir, "output directory");

  // analyze
  auto* ana = app.add_subcommand("analyze", "run the Glimm-functional analysis on a trace");
  std::string trace_path, curve_mode = "auto";
  double horizon = 0.0, p_exp = 1.25, C1 = 8.0, C2 = 8.0;
  ana->add_option("--trace", trace_path, "trace JSON file")->required();
  ana->add_option("--horizon", horizon, "time horizon T (default: last event time)");
  ana->add_option("--p", p_exp, "p-variation exponent");
  ana->add_option("--c1", C1, "functional constant C1");
  ana->add_option("--c2", C2, "functional constant C2");
  ana->add_option("--curves", curve_mode, "measure curve family: auto | default | exhaustive");
  ana->add_option("--out", out_dir, "output directory");

  // pvar
  auto* pv = app.add_subcommand("pvar", "maximal p-sum of a one-column number stream");
  std::string pvar_file;
  double pvar_p = 2.0;
  bool print_vp = false;
  pv->add_option("file", pvar_file, "input file ('-' for stdin)");
  pv->add_option("--p", pvar_p, "exponent");
  pv->add_flag("--vp", print_vp, "print the p-variation of the sequence instead");

  // young
  auto* yg = app.add_subcommand("young", "3x3 linearly degenerate growth example");
  double eps = 0.1, y_p = 1.25, y_alpha = 0.01, y_beta = 0.2, y_dx = 0.25;
  int y_n = 16, y_k = 10;
  yg->add_option("--eps", eps, "initial-data size for the growth report");
  yg->add_option("--n", y_n, "lattice refinement for the growth report");
  yg->add_option("--p", y_p, "p-variation exponent");
  yg->add_option("--k", y_k, "number of evolved periods");
  yg->add_option("--alpha", y_alpha, "pattern strength alpha");
  yg->add_option("--beta", y_beta, "pattern strength beta");
  yg->add_option("--dx", y_dx, "pattern cell width");
  yg->add_option("--out", out_dir, "output directory");

  // check
  auto* chk = app.add_subcommand("check", "run the acceptance suite");
  bool quick = false;
  chk->add_flag("--quick", quick, "skip the slowest criteria (diagnostics only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sim->parsed())
      return cmd_simulate(config_path, scenario_name, nu_override, horizon_override, out_dir);
    if (ana->parsed()) return cmd_analyze(trace_path, horizon, p_exp, C1, C2, curve_mode, out_dir);
    if (pv->parsed()) return cmd_pvar(pvar_file, pvar_p, print_vp);
    if (yg->parsed()) return cmd_young(eps, y_n, y_p, y_k, y_alpha, y_beta, y_dx, out_dir);
    if (chk->parsed()) {
      const auto results = acceptance::run_all(std::cout, quick);
      for (const auto& r : results)
        if (!r.pass) return 1;
      return 0;
    }
  } catch (const InvalidInputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
