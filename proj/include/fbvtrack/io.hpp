#pragma once

// File formats: versioned JSON for traces and run configurations, CSV for the
// functional report, per-event snapshots and the period-growth tables.  JSON
// round-trips are exact (shortest-round-trip double formatting), so a saved
// trace re-analyzes to identical reports.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fbvtrack/functionals.hpp"
#include "fbvtrack/scenario.hpp"
#include "fbvtrack/tracking.hpp"
#include "fbvtrack/young.hpp"

namespace fbv::io {

using json = nlohmann::json;
using riemann::WaveNature;
using tracking::Front;
using tracking::InteractionEvent;
using tracking::SimulationTrace;

inline constexpr const char* kTraceSchema = "fbv-trace-v1";
inline constexpr const char* kConfigSchema = "fbv-config-v1";

inline json vec2_to_json(Vec2 v) { return json::array({v[0], v[1]}); }
inline Vec2 vec2_from_json(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

inline const char* nature_name(WaveNature n) { return riemann::to_string(n); }
inline WaveNature nature_from_name(const std::string& s) {
  if (s == "SW") return WaveNature::Shock;
  if (s == "RW") return WaveNature::Rarefaction;
  if (s == "CW") return WaveNature::Compression;
  if (s == "trivial") return WaveNature::Trivial;
  throw InvalidInputError("unknown wave nature: " + s);
}

// ---------------------------------------------------------------------------
// trace serialization

inline json trace_to_json(const SimulationTrace& tr) {
  json j;
  j["schema"] = kTraceSchema;
  j["model"] = {{"name", tr.model.name()},
                {"gamma", tr.model.pressure().gamma},
                {"base", vec2_to_json(tr.model.base())},
                {"radius", tr.model.radius()}};
  j["config"] = {{"nu", tr.config.nu},
                 {"c_star", tr.config.c_star},
                 {"horizon", tr.config.horizon == kInf ? json() : json(tr.config.horizon)},
                 {"max_events", tr.config.max_events},
                 {"scenario", tr.config.scenario}};
  json init;
  init["xs"] = tr.initial.xs;
  init["values"] = json::array();
  for (const Vec2& v : tr.initial.values) init["values"].push_back(vec2_to_json(v));
  j["initial"] = init;

  j["fronts"] = json::array();
  for (const Front& f : tr.fronts) {
    j["fronts"].push_back({{"id", f.id},
                           {"family", f.family},
                           {"nature", nature_name(f.nature)},
                           {"left", vec2_to_json(f.left_state)},
                           {"right", vec2_to_json(f.right_state)},
                           {"sigma", f.sigma},
                           {"speed", f.speed},
                           {"birth_time", f.birth_time},
                           {"birth_pos", f.birth_pos},
                           {"birth_event", f.birth_event},
                           {"lineage", f.lineage},
                           {"death_time", f.death_time == kInf ? json() : json(f.death_time)},
                           {"death_event", f.death_event}});
  }
  j["events"] = json::array();
  for (const InteractionEvent& e : tr.events) {
    j["events"].push_back({{"id", e.id},
                           {"time", e.time},
                           {"pos", e.pos},
                           {"in", json::array({e.in_left, e.in_right})},
                           {"out", e.out},
                           {"same_family", e.same_family},
                           {"family", e.family},
                           {"sigma_in", json::array({e.sigma_in_left, e.sigma_in_right})},
                           {"sigma_out", json::array({e.sigma_out1, e.sigma_out2})},
                           {"c1", e.c1},
                           {"c2", e.c2},
                           {"ul", vec2_to_json(e.ul)},
                           {"um", vec2_to_json(e.um)},
                           {"ur", vec2_to_json(e.ur)},
                           {"nat_in", json::array({nature_name(e.nat_in_left),
                                                   nature_name(e.nat_in_right)})}});
  }
  j["lineage"] = json::array();
  for (const auto& mr : tr.merges)
    j["lineage"].push_back({{"event", mr.event},
                            {"family", mr.family},
                            {"absorbed", mr.absorbed_lineage},
                            {"into", mr.into_lineage}});
  j["end_time"] = tr.end_time;
  j["completed"] = tr.completed;
  return j;
}

inline SimulationTrace trace_from_json(const json& j) {
  if (!j.contains("schema") || j.at("schema").get<std::string>() != kTraceSchema)
    throw InvalidInputError("trace file: unknown or missing schema (expected " +
                            std::string(kTraceSchema) + ")");
  const auto& jm = j.at("model");
  const std::string model_name = jm.at("name").get<std::string>();
  const Vec2 base = vec2_from_json(jm.at("base"));
  const double radius = jm.at("radius").get<double>();
  model::ModelSystem model =
      model_name == "p_system"
          ? model::ModelSystem::p_system(jm.at("gamma").get<double>(), base, radius)
          : model::ModelSystem::degenerate_system(base, radius);

  tracking::RunConfigLite cfg;
  const auto& jc = j.at("config");
  cfg.nu = jc.at("nu").get<double>();
  cfg.c_star = jc.at("c_star").get<double>();
  cfg.horizon = jc.at("horizon").is_null() ? kInf : jc.at("horizon").get<double>();
  cfg.max_events = jc.at("max_events").get<long>();
  cfg.scenario = jc.at("scenario").get<std::string>();

  SimulationTrace tr;
  tr.model = std::move(model);
  tr.config = cfg;
  const auto& ji = j.at("initial");
  tr.initial.xs = ji.at("xs").get<std::vector<double>>();
  for (const auto& v : ji.at("values")) tr.initial.values.push_back(vec2_from_json(v));

  for (const auto& jf : j.at("fronts")) {
    Front f;
    f.id = jf.at("id").get<int>();
    f.family = jf.at("family").get<int>();
    f.nature = nature_from_name(jf.at("nature").get<std::string>());
    f.left_state = vec2_from_json(jf.at("left"));
    f.right_state = vec2_from_json(jf.at("right"));
    f.sigma = jf.at("sigma").get<double>();
    f.speed = jf.at("speed").get<double>();
    f.birth_time = jf.at("birth_time").get<double>();
    f.birth_pos = jf.at("birth_pos").get<double>();
    f.birth_event = jf.at("birth_event").get<int>();
    f.lineage = jf.at("lineage").get<int>();
    f.death_time = jf.at("death_time").is_null() ? kInf : jf.at("death_time").get<double>();
    f.death_event = jf.at("death_event").get<int>();
    tr.fronts.push_back(f);
  }
  for (const auto& je : j.at("events")) {
    InteractionEvent e;
    e.id = je.at("id").get<int>();
    e.time = je.at("time").get<double>();
    e.pos = je.at("pos").get<double>();
    e.in_left = je.at("in").at(0).get<int>();
    e.in_right = je.at("in").at(1).get<int>();
    e.out = je.at("out").get<std::vector<int>>();
    e.same_family = je.at("same_family").get<bool>();
    e.family = je.at("family").get<int>();
    e.sigma_in_left = je.at("sigma_in").at(0).get<double>();
    e.sigma_in_right = je.at("sigma_in").at(1).get<double>();
    e.sigma_out1 = je.at("sigma_out").at(0).get<double>();
    e.sigma_out2 = je.at("sigma_out").at(1).get<double>();
    e.c1 = je.at("c1").get<double>();
    e.c2 = je.at("c2").get<double>();
    e.ul = vec2_from_json(je.at("ul"));
    e.um = vec2_from_json(je.at("um"));
    e.ur = vec2_from_json(je.at("ur"));
    e.nat_in_left = nature_from_name(je.at("nat_in").at(0).get<std::string>());
    e.nat_in_right = nature_from_name(je.at("nat_in").at(1).get<std::string>());
    tr.events.push_back(e);
  }
  for (const auto& jl : j.at("lineage"))
    tr.merges.push_back({jl.at("event").get<int>(), jl.at("family").get<int>(),
                         jl.at("absorbed").get<int>(), jl.at("into").get<int>()});
  tr.end_time = j.at("end_time").get<double>();
  tr.completed = j.at("completed").get<bool>();
  return tr;
}

inline void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot open for writing: " + path);
  out << text;
}

inline std::string trace_to_string(const SimulationTrace& tr) {
  return trace_to_json(tr).dump(1) + "\n";
}

inline void save_trace(const std::string& path, const SimulationTrace& tr) {
  save_text(path, trace_to_string(tr));
}

inline SimulationTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open trace file: " + path);
  json j;
  in >> j;
  return trace_from_json(j);
}

// ---------------------------------------------------------------------------
// run configuration files

inline json config_to_json(const scenario::RunConfig& cfg) {
  json j;
  j["schema"] = kConfigSchema;
  j["name"] = cfg.name;
  j["model"] = {{"name", cfg.model_name},
                {"gamma", cfg.gamma},
                {"base", vec2_to_json(cfg.base)},
                {"radius", cfg.radius}};
  j["nu"] = cfg.nu;
  j["c_star"] = cfg.c_star;
  j["horizon"] = cfg.horizon == kInf ? json() : json(cfg.horizon);
  j["max_events"] = cfg.max_events;
  j["p"] = cfg.p;
  j["C1"] = cfg.C1;
  j["C2"] = cfg.C2;
  j["curve_mode"] = cfg.curve_mode;
  json init;
  init["xs"] = cfg.initial.xs;
  init["values"] = json::array();
  for (const Vec2& v : cfg.initial.values) init["values"].push_back(vec2_to_json(v));
  j["initial"] = init;
  return j;
}

inline scenario::RunConfig config_from_json(const json& j) {
  if (!j.contains("schema") || j.at("schema").get<std::string>() != kConfigSchema)
    throw InvalidInputError("config file: unknown or missing schema (expected " +
                            std::string(kConfigSchema) + ")");
  scenario::RunConfig cfg;
  cfg.name = j.value("name", "");
  const auto& jm = j.at("model");
  cfg.model_name = jm.at("name").get<std::string>();
  cfg.gamma = jm.value("gamma", 2.0);
  cfg.base = vec2_from_json(jm.at("base"));
  cfg.radius = jm.value("radius", 0.4);
  cfg.nu = j.at("nu").get<double>();
  cfg.c_star = j.value("c_star", 0.0);
  cfg.horizon = (!j.contains("horizon") || j.at("horizon").is_null())
                    ? kInf
                    : j.at("horizon").get<double>();
  cfg.max_events = j.value("max_events", 1'000'000L);
  cfg.p = j.value("p", 1.25);
  cfg.C1 = j.value("C1", 8.0);
  cfg.C2 = j.value("C2", 8.0);
  cfg.curve_mode = j.value("curve_mode", std::string("default"));
  const auto& ji = j.at("initial");
  cfg.initial.xs = ji.at("xs").get<std::vector<double>>();
  for (const auto& v : ji.at("values")) cfg.initial.values.push_back(vec2_from_json(v));
  cfg.initial.validate();
  return cfg;
}

inline scenario::RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidInputError("config parse error in " + path + ": " + e.what());
  }
  return config_from_json(j);
}

// ---------------------------------------------------------------------------
// CSV writers

inline std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

/// one row per event time: V1, V2, Q1, Q2, Q3, Upsilon, Vp, Vp_tilde
inline void write_report_csv(const std::string& path,
                             const functionals::FunctionalReport& rep) {
  std::ostringstream os;
  os << "time,V1,V2,Q1,Q2,Q3,Upsilon,Vp,Vp_tilde\n";
  for (std::size_t k = 0; k < rep.times.size(); ++k)
    os << format_double(rep.times[k]) << ',' << format_double(rep.V1[k]) << ','
       << format_double(rep.V2[k]) << ',' << format_double(rep.Q1[k]) << ','
       << format_double(rep.Q2[k]) << ',' << format_double(rep.Q3[k]) << ','
       << format_double(rep.upsilon[k]) << ',' << format_double(rep.vp[k]) << ','
       << format_double(rep.vp_tilde[k]) << '\n';
  save_text(path, os.str());
}

inline json report_to_json(const functionals::FunctionalReport& rep) {
  json j;
  j["violations"] = json::array();
  for (const auto& v : rep.violations)
    j["violations"].push_back({{"time", v.time}, {"what", v.what}, {"jump", v.jump}});
  j["constants"] = rep.constants;
  return j;
}

/// per-event snapshots: time, front count, V_p, Vp_tilde
inline void write_snapshots_csv(const std::string& path, const SimulationTrace& tr, double p) {
  std::ostringstream os;
  os << "time,front_count,Vp,Vp_tilde\n";
  const auto v = functionals::build_horizon(
      tr, tr.events.empty() ? 1.0 : tr.end_time, p);
  auto row = [&](double t) {
    const auto ids = tr.alive_at(t, +1);
    const auto prof = tracking::solution_at(tr, t, +1);
    os << format_double(t) << ',' << ids.size() << ','
       << format_double(pvar::vector_p_variation(prof, p, tr.model)) << ','
       << format_double(functionals::modified_vp(v, t)) << '\n';
  };
  row(0.0);
  for (const auto& ev : tr.events) row(ev.time);
  save_text(path, os.str());
}

/// per-curve series for external plotting: curve, time, V_gamma, M_gamma, Vp_gamma
inline void write_curves_csv(const std::string& path,
                             const std::vector<functionals::MeasureCurveSeries>& series) {
  std::ostringstream os;
  os << "curve,kind,family,time,V_gamma,M_gamma,Vp_gamma\n";
  for (std::size_t c = 0; c < series.size(); ++c) {
    const auto& s = series[c];
    const char* kind = s.spec.kind == functionals::CurveKind::Lower ? "lower" : "upper";
    for (std::size_t k = 0; k < s.times.size(); ++k)
      os << c << ',' << kind << ',' << s.spec.family << ',' << format_double(s.times[k]) << ','
         << format_double(s.V_gamma[k]) << ',' << format_double(s.M_gamma[k]) << ','
         << format_double(s.Vp_gamma[k]) << '\n';
  }
  save_text(path, os.str());
}

/// period-growth table: j, alpha_j, beta_j, vp_j
inline void write_young_csv(const std::string& path,
                            const std::vector<young::PeriodSample>& samples) {
  std::ostringstream os;
  os << "j,alpha_j,beta_j,vp_j\n";
  for (std::size_t jdx = 0; jdx < samples.size(); ++jdx)
    os << jdx << ',' << format_double(samples[jdx].alpha) << ','
       << format_double(samples[jdx].beta) << ',' << format_double(samples[jdx].vp) << '\n';
  save_text(path, os.str());
}

}  // namespace fbv::io
