#pragma once

// Event-driven wave-front tracking for 2x2 monotone systems.
//
// The simulator keeps an ordered list of straight-line fronts, schedules
// pairwise collisions of neighbors in a priority queue, and resolves each
// interaction with the Riemann machinery:
//   * opposite families: both waves continue as single fronts of unchanged
//     nature;
//   * same family: the two front lines merge; the outgoing own-family front is
//     always extended (as a trivial front when its strength vanishes) and the
//     opposite-family output becomes a single front (SW/CW) or a rarefaction
//     fan with sub-jumps of Riemann-parameter width <= nu.
// All fronts travel at the modified shock speed.  When a freshly computed
// collision time coincides bit-exactly with any other known event time, the
// leftmost non-trivial outgoing front is accelerated by a deterministic
// hash-derived amount within the nu |u+ - u-| budget, so every interaction
// time in a run is distinct and reruns are bit-identical.

#include <cstdint>
#include <functional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "fbvtrack/model.hpp"
#include "fbvtrack/pvar.hpp"
#include "fbvtrack/riemann.hpp"

namespace fbv::tracking {

using model::ModelSystem;
using pvar::StepFn2;
using riemann::Branch;
using riemann::WaveNature;

// ---------------------------------------------------------------------------
// trace data

struct Front {
  int id = -1;
  int family = 0;  // 1 or 2
  WaveNature nature = WaveNature::Trivial;
  Vec2 left_state, right_state;
  double sigma = 0.0;  // own-family Riemann coordinate jump
  double speed = 0.0;  // includes the nu-modification and any tie perturbation
  double birth_time = 0.0;
  double birth_pos = 0.0;
  int birth_event = -1;  // -1: initial datum
  int lineage = -1;      // front-line label (continued through crossings and merges)
  double death_time = kInf;
  int death_event = -1;

  bool alive_before(double t) const { return birth_time < t && t <= death_time; }
  bool alive_after(double t) const { return birth_time <= t && t < death_time; }
  double x_at(double t) const { return birth_pos + speed * (t - birth_time); }
  bool trivial() const { return nature == WaveNature::Trivial; }
};

struct InteractionEvent {
  int id = -1;
  double time = 0.0;
  double pos = 0.0;
  int in_left = -1, in_right = -1;
  std::vector<int> out;  // outgoing front ids, left to right
  bool same_family = false;
  int family = 0;  // merging family for same-family events, 0 otherwise
  // outcome snapshot
  double sigma_in_left = 0.0, sigma_in_right = 0.0;
  double sigma_out1 = 0.0, sigma_out2 = 0.0;
  double c1 = 0.0, c2 = 0.0;  // interaction coefficients (opposite-family crossings)
  Vec2 ul, um, ur;
  WaveNature nat_in_left = WaveNature::Trivial, nat_in_right = WaveNature::Trivial;
};

struct MergeRecord {
  int event = -1;
  int family = 0;
  int absorbed_lineage = -1;
  int into_lineage = -1;
};

struct RunConfigLite {
  double nu = 0.02;
  double c_star = 0.0;  // value actually used by the run
  double horizon = kInf;
  long max_events = 1'000'000;
  std::string scenario;
};

struct SimulationTrace {
  ModelSystem model;
  RunConfigLite config;
  StepFn2 initial;
  std::vector<Front> fronts;            // indexed by id
  std::vector<InteractionEvent> events;  // chronological
  std::vector<MergeRecord> merges;
  double end_time = 0.0;  // last event time, or the horizon when truncated
  bool completed = true;  // false when stopped by the horizon

  double final_time() const { return completed ? kInf : end_time; }

  /// Spatial order of fronts a and b at time t.  Participants of the event
  /// happening exactly at t sit at the same point up to roundoff, so they are
  /// ordered by the event record rather than by positions.
  bool left_of(int a, int b, double t, int side) const {
    const Front& fa = fronts[a];
    const Front& fb = fronts[b];
    if (side < 0 && fa.death_time == t && fa.death_event == fb.death_event)
      return a == events[fa.death_event].in_left;
    if (side > 0 && fa.birth_time == t && fa.birth_event >= 0 &&
        fa.birth_event == fb.birth_event) {
      const auto& out = events[fa.birth_event].out;
      std::size_t pa = 0, pb = 0;
      for (std::size_t k = 0; k < out.size(); ++k) {
        if (out[k] == a) pa = k;
        if (out[k] == b) pb = k;
      }
      return pa < pb;
    }
    const double xa = fa.x_at(t), xb = fb.x_at(t);
    if (xa != xb) return xa < xb;
    // residual exact tie: order by the approach/departure direction
    if (fa.speed != fb.speed) return side < 0 ? fa.speed > fb.speed : fa.speed < fb.speed;
    return a < b;
  }

  /// ids of fronts alive at t (side: -1 just before, +1 just after), left to right
  std::vector<int> alive_at(double t, int side) const {
    std::vector<int> ids;
    for (const auto& f : fronts)
      if (side < 0 ? f.alive_before(t) : f.alive_after(t)) ids.push_back(f.id);
    std::sort(ids.begin(), ids.end(), [&](int a, int b) { return left_of(a, b, t, side); });
    return ids;
  }

  /// id of the same-family continuation of `fid` through its death event, or -1
  int next_same_family(int fid) const {
    const auto& f = fronts[fid];
    if (f.death_event < 0) return -1;
    const auto& ev = events[f.death_event];
    for (int oid : ev.out)
      if (fronts[oid].family == f.family) return oid;
    return -1;
  }
};

// ---------------------------------------------------------------------------
// initial data approximation

/// Sample an analytic profile on a grid with spacing proportional to nu.
/// Point sampling makes every jump a difference of function values, so the
/// p-variation of the result never exceeds the profile's, and the sup
/// distance to the base point never grows.
inline StepFn2 approximate_initial(const std::function<Vec2(double)>& u0, double a, double b,
                                   const ModelSystem& m, double nu) {
  if (!(a < b)) throw PreconditionError("approximate_initial: empty support interval");
  const int cells = std::max(8, static_cast<int>(std::ceil((b - a) / nu)));
  StepFn2 f;
  f.values.push_back(u0(a));
  for (int k = 0; k < cells; ++k) {
    const double x = a + (b - a) * (k + 0.5) / cells;
    const Vec2 v = u0(x);
    f.xs.push_back(a + (b - a) * k / cells);
    f.values.push_back(v);
  }
  f.xs.push_back(b);
  f.values.push_back(u0(b));
  for (const Vec2& v : f.values)
    if (!((v - m.base()).norm() <= 0.5 * m.radius() * (1 + 1e-9)))
      throw ModelDomainError("approximate_initial: profile leaves B(base, r/2)");
  // collapse consecutive equal values
  StepFn2 out;
  out.values.push_back(f.values.front());
  for (std::size_t i = 0; i < f.xs.size(); ++i) {
    if (!(f.values[i + 1] == out.values.back())) {
      out.xs.push_back(f.xs[i]);
      out.values.push_back(f.values[i + 1]);
    }
  }
  return out;
}

/// A step function is its own approximation (validated against the ball).
inline StepFn2 approximate_initial(const StepFn2& u0, const ModelSystem& m, double /*nu*/) {
  u0.validate();
  for (const Vec2& v : u0.values)
    if (!((v - m.base()).norm() <= 0.5 * m.radius() * (1 + 1e-9)))
      throw ModelDomainError("approximate_initial: datum leaves B(base, r/2)");
  return u0;
}

// ---------------------------------------------------------------------------
// initial fronts

/// interior fan parameters k nu, k = 1..floor(sigma/nu), plus the remainder
inline std::vector<double> rarefaction_fan_parameters(double sigma, double nu) {
  std::vector<double> params;
  const int m = static_cast<int>(std::floor(sigma / nu + 1e-12));
  for (int k = 1; k <= m; ++k) params.push_back(k * nu);
  if (params.empty() || sigma - params.back() > 1e-12 * std::max(1.0, sigma))
    params.push_back(sigma);
  return params;
}

inline Front make_front(const ModelSystem& m, int family, WaveNature nature, Vec2 l, Vec2 r,
                        double t, double x, int birth_event, int lineage, double nu) {
  Front f;
  f.family = family;
  f.nature = nature;
  f.left_state = l;
  f.right_state = r;
  const Vec2 wl = m.to_riemann(l), wr = m.to_riemann(r);
  f.sigma = nature == WaveNature::Trivial ? 0.0 : wr[family - 1] - wl[family - 1];
  f.speed = nature == WaveNature::Trivial ? m.eigenvalue(family, l) + nu * wl[family - 1]
                                          : m.modified_speed(family, l, r, nu);
  f.birth_time = t;
  f.birth_pos = x;
  f.birth_event = birth_event;
  f.lineage = lineage;
  return f;
}

/// Solve every jump of the datum as a standard (Lax/Lax) Riemann problem:
/// shocks become single fronts at modified speed, rarefactions split into
/// fans of sub-fronts with Riemann-parameter width <= nu.  Fronts are
/// returned left to right with ids 0..n-1 and each starts its own line.
inline std::vector<Front> build_initial_fronts(const ModelSystem& m, const StepFn2& u0,
                                               double nu) {
  u0.validate();
  for (const Vec2& v : u0.values)
    if (!m.in_ball(v)) throw ModelDomainError("build_initial_fronts: state outside the ball");
  std::vector<Front> fronts;
  auto emit = [&](int family, WaveNature nature, Vec2 l, Vec2 r, double x) {
    Front f = make_front(m, family, nature, l, r, 0.0, x, -1, -1, nu);
    f.id = static_cast<int>(fronts.size());
    f.lineage = f.id;
    fronts.push_back(f);
  };
  for (std::size_t j = 0; j < u0.xs.size(); ++j) {
    const Vec2 ul = u0.values[j], ur = u0.values[j + 1];
    const auto sol = riemann::solve_riemann(m, ul, ur, Branch::Lax, Branch::Lax);
    const double x = u0.xs[j];
    const double snap = 1e-13 * std::max(1.0, std::abs(sol.sigma1) + std::abs(sol.sigma2));
    const Vec2 umid = sol.u_mid;
    for (int fam : {1, 2}) {
      const double sigma = fam == 1 ? sol.sigma1 : sol.sigma2;
      const Vec2 from = fam == 1 ? ul : umid;
      const Vec2 to = fam == 1 ? umid : ur;
      if (std::abs(sigma) <= snap) continue;
      if (sigma < 0.0) {
        emit(fam, WaveNature::Shock, from, to, x);
      } else {
        Vec2 prev = from;
        double sprev = 0.0;
        for (double s : rarefaction_fan_parameters(sigma, nu)) {
          const Vec2 next = m.rarefaction_curve(fam, s, from);
          if (s - sprev > 0.0) emit(fam, WaveNature::Rarefaction, prev, next, x);
          prev = next;
          sprev = s;
        }
      }
    }
  }
  return fronts;
}

// ---------------------------------------------------------------------------
// simulator

class Simulator {
public:
  Simulator(ModelSystem model, StepFn2 initial, RunConfigLite cfg) {
    trace_.model = std::move(model);
    trace_.config = cfg;
    trace_.initial = std::move(initial);
    if (!(cfg.nu > 0.0 && cfg.nu <= trace_.model.nu0()))
      throw PreconditionError("run: nu must lie in (0, nu0]");
    if (trace_.config.c_star <= 0.0)
      trace_.config.c_star = riemann::calibrate_c_star(trace_.model);
  }

  SimulationTrace run() {
    setup_initial_fronts();
    schedule_initial();
    while (!queue_.empty()) {
      const Cand c = queue_.top();
      queue_.pop();
      if (!valid(c)) continue;
      if (c.time > trace_.config.horizon) {
        trace_.end_time = trace_.config.horizon;
        trace_.completed = false;
        return std::move(trace_);
      }
      if (static_cast<long>(trace_.events.size()) >= trace_.config.max_events)
        throw ResourceError("run: interaction event cap exceeded");
      resolve(c);
    }
    trace_.completed = true;
    return std::move(trace_);
  }

private:
  struct Cand {
    double time;
    int left, right;
    long seq;
    bool operator>(const Cand& o) const {
      if (time != o.time) return time > o.time;
      return seq > o.seq;
    }
  };

  SimulationTrace trace_;
  std::priority_queue<Cand, std::vector<Cand>, std::greater<Cand>> queue_;
  std::vector<int> next_, prev_;
  std::multiset<double> used_times_;  // pending and processed event times
  long seq_ = 0;
  double now_ = 0.0;
  int head_ = -1;

  const ModelSystem& model() const { return trace_.model; }
  double nu() const { return trace_.config.nu; }

  bool valid(const Cand& c) const {
    return c.left >= 0 && c.right >= 0 && trace_.fronts[c.left].death_event == -1 &&
           trace_.fronts[c.right].death_event == -1 && next_[c.left] == c.right;
  }

  int new_front(int family, WaveNature nature, Vec2 l, Vec2 r, double t, double x, int birth_event,
                int lineage) {
    Front f = make_front(model(), family, nature, l, r, t, x, birth_event, lineage, nu());
    f.id = static_cast<int>(trace_.fronts.size());
    if (lineage < 0) f.lineage = f.id;
    trace_.fronts.push_back(f);
    next_.push_back(-1);
    prev_.push_back(-1);
    return f.id;
  }

  /// split a family-`fam` rarefaction of strength sigma > 0 from u_from into
  /// fan sub-fronts of Riemann-parameter width <= nu
  std::vector<int> make_fan(int fam, Vec2 u_from, double sigma, double t, double x,
                            int birth_event) {
    std::vector<int> ids;
    Vec2 prev = u_from;
    double sprev = 0.0;
    for (double s : rarefaction_fan_parameters(sigma, nu())) {
      const Vec2 next = model().rarefaction_curve(fam, s, u_from);
      if (s - sprev > 0.0)
        ids.push_back(new_front(fam, WaveNature::Rarefaction, prev, next, t, x, birth_event, -1));
      prev = next;
      sprev = s;
    }
    return ids;
  }

  void setup_initial_fronts() {
    trace_.fronts = tracking::build_initial_fronts(model(), trace_.initial, nu());
    next_.assign(trace_.fronts.size(), -1);
    prev_.assign(trace_.fronts.size(), -1);
    head_ = trace_.fronts.empty() ? -1 : 0;
    for (std::size_t i = 0; i < trace_.fronts.size(); ++i) {
      prev_[i] = static_cast<int>(i) - 1;
      next_[i] = i + 1 < trace_.fronts.size() ? static_cast<int>(i) + 1 : -1;
    }
  }

  /// collision time of adjacent fronts a (left) and b (right); NaN if none
  double collision_time(int a, int b) const {
    const Front& A = trace_.fronts[a];
    const Front& B = trace_.fronts[b];
    if (!(A.speed > B.speed)) return std::numeric_limits<double>::quiet_NaN();
    const double xa = A.birth_pos - A.speed * A.birth_time;
    const double xb = B.birth_pos - B.speed * B.birth_time;
    const double t = (xb - xa) / (A.speed - B.speed);
    return t > now_ ? t : std::numeric_limits<double>::quiet_NaN();
  }

  void push_pair(int a, int b) {
    if (a < 0 || b < 0) return;
    const double t = collision_time(a, b);
    if (std::isnan(t)) return;
    queue_.push(Cand{t, a, b, seq_++});
    used_times_.insert(t);
  }

  void schedule_initial() {
    std::vector<std::pair<int, int>> pairs;
    for (int a = head_; a >= 0; a = next_[a])
      if (next_[a] >= 0) pairs.emplace_back(a, next_[a]);
    // break exact collision-time ties before inserting anything, so no queue
    // entry ever refers to a stale speed
    for (int attempt = 1; attempt <= 64; ++attempt) {
      std::multiset<double> seen;
      int dup_pair = -1;
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const double t = collision_time(pairs[k].first, pairs[k].second);
        if (std::isnan(t)) continue;
        if (seen.count(t) > 0) {
          dup_pair = static_cast<int>(k);
          break;
        }
        seen.insert(t);
      }
      if (dup_pair < 0) break;
      int target = pairs[dup_pair].first;
      if (trace_.fronts[target].trivial()) target = pairs[dup_pair].second;
      perturb(target, static_cast<std::uint64_t>(target) + 17, attempt);
    }
    for (auto [a, b] : pairs) push_pair(a, b);
  }

  /// accelerate front `id` within the Eq-(speed-modification) budget
  void perturb(int id, std::uint64_t key, int attempt) {
    Front& f = trace_.fronts[id];
    const double budget = nu() * (f.right_state - f.left_state).norm();
    const double rho = hash_unit(key * 1315423911ULL + static_cast<std::uint64_t>(attempt));
    const double delta =
        budget > 0.0 ? budget * rho * 0x1.0p-20 * attempt : 1e-13 * (1.0 + std::abs(f.speed)) * rho;
    f.speed += delta;
  }

  void resolve(const Cand& c) {
    const int L = c.left, R = c.right;
    // copy before new_front() can reallocate the front vector
    const Front fl = trace_.fronts[L];
    const Front fr = trace_.fronts[R];
    const double t = c.time, x = fl.x_at(t);
    now_ = t;

    InteractionEvent ev;
    ev.id = static_cast<int>(trace_.events.size());
    ev.time = t;
    ev.pos = x;
    ev.in_left = L;
    ev.in_right = R;
    ev.ul = fl.left_state;
    ev.um = fl.right_state;
    ev.ur = fr.right_state;
    ev.sigma_in_left = fl.sigma;
    ev.sigma_in_right = fr.sigma;
    ev.nat_in_left = fl.nature;
    ev.nat_in_right = fr.nature;
    ev.same_family = fl.family == fr.family;
    ev.family = ev.same_family ? fl.family : 0;

    std::vector<int> out;
    try {
      if (ev.same_family) {
        const auto oc = riemann::interact_same(model(), fl.family, ev.ul, ev.um, ev.ur, fl.nature,
                                               fr.nature, nu(), trace_.config.c_star);
        ev.sigma_out1 = oc.sigma_out1;
        ev.sigma_out2 = oc.sigma_out2;
        const int fam = fl.family;
        const bool has_other = (fam == 1 ? oc.sigma_out2 : oc.sigma_out1) != 0.0;
        const Vec2 umid = oc.u_mid;
        const WaveNature own_nat = fam == 1 ? oc.nature_out1 : oc.nature_out2;
        const WaveNature oth_nat = fam == 1 ? oc.nature_out2 : oc.nature_out1;
        if (fam == 1) {
          // 1-front on the left, 2-wave (if any) on the right
          const Vec2 own_r = has_other ? umid : ev.ur;
          out.push_back(new_front(1, own_nat, ev.ul, own_r, t, x, ev.id, fl.lineage));
          if (has_other) {
            if (oth_nat == WaveNature::Rarefaction) {
              for (int fid : make_fan(2, umid, oc.sigma_out2, t, x, ev.id)) out.push_back(fid);
            } else {
              out.push_back(new_front(2, oth_nat, umid, ev.ur, t, x, ev.id, -1));
            }
          }
        } else {
          const Vec2 own_l = has_other ? umid : ev.ul;
          if (has_other) {
            if (oth_nat == WaveNature::Rarefaction) {
              for (int fid : make_fan(1, ev.ul, oc.sigma_out1, t, x, ev.id)) out.push_back(fid);
            } else {
              out.push_back(new_front(1, oth_nat, ev.ul, umid, t, x, ev.id, -1));
            }
          }
          out.push_back(new_front(2, own_nat, own_l, ev.ur, t, x, ev.id, fr.lineage));
        }
        trace_.merges.push_back(MergeRecord{ev.id, fam, (fam == 1 ? fr : fl).lineage,
                                            (fam == 1 ? fl : fr).lineage});
      } else {
        if (fl.family != 2 || fr.family != 1)
          throw PreconditionError("run: non-crossing opposite-family configuration");
        const auto oc = riemann::interact_opposite(model(), ev.ul, ev.um, ev.ur, fl.nature,
                                                   fr.nature);
        ev.sigma_out1 = oc.sigma_out1;
        ev.sigma_out2 = oc.sigma_out2;
        ev.c1 = oc.c1;
        ev.c2 = oc.c2;
        out.push_back(new_front(1, oc.nature_out1, ev.ul, oc.u_mid, t, x, ev.id, fr.lineage));
        out.push_back(new_front(2, oc.nature_out2, oc.u_mid, ev.ur, t, x, ev.id, fl.lineage));
      }
    } catch (const std::exception& e) {
      throw ConvergenceError("run: interaction at t=" + std::to_string(t) +
                             ", x=" + std::to_string(x) + " failed: " + e.what());
    }

    // outgoing fronts diverge from one point: speeds must strictly increase
    for (std::size_t i = 0; i + 1 < out.size(); ++i)
      if (!(trace_.fronts[out[i]].speed < trace_.fronts[out[i + 1]].speed))
        throw ConvergenceError("run: outgoing fan speeds not increasing at event " +
                               std::to_string(ev.id));

    // retire the incoming pair
    trace_.fronts[L].death_event = trace_.fronts[R].death_event = ev.id;
    trace_.fronts[L].death_time = trace_.fronts[R].death_time = t;
    const int before = prev_[L], after = next_[R];

    // splice outgoing fronts into the active list
    int cursor = before;
    for (int oid : out) {
      if (cursor >= 0) next_[cursor] = oid;
      else head_ = oid;
      prev_[oid] = cursor;
      cursor = oid;
    }
    if (cursor >= 0) next_[cursor] = after;
    else head_ = after;
    if (after >= 0) prev_[after] = cursor;

    ev.out = out;
    trace_.events.push_back(ev);
    trace_.end_time = t;

    // schedule the new adjacencies; break exact time ties by accelerating the
    // leftmost non-trivial outgoing front (trivial fronts have no budget)
    std::vector<std::pair<int, int>> pairs;
    if (before >= 0 && !out.empty()) pairs.emplace_back(before, out.front());
    for (std::size_t i = 0; i + 1 < out.size(); ++i) pairs.emplace_back(out[i], out[i + 1]);
    if (!out.empty() && after >= 0) pairs.emplace_back(out.back(), after);
    if (out.empty() && before >= 0 && after >= 0) pairs.emplace_back(before, after);

    for (int attempt = 1; attempt <= 64; ++attempt) {
      bool tie = false;
      std::multiset<double> batch;
      for (auto [a, b] : pairs) {
        const double tc = collision_time(a, b);
        if (std::isnan(tc)) continue;
        if (used_times_.count(tc) > 0 || batch.count(tc) > 0) tie = true;
        batch.insert(tc);
      }
      if (!tie) break;
      int target = -1;
      for (int oid : out)
        if (!trace_.fronts[oid].trivial()) {
          target = oid;
          break;
        }
      if (target < 0 && !out.empty()) target = out.front();
      if (target < 0) break;
      perturb(target, static_cast<std::uint64_t>(ev.id + 1) << 8, attempt);
    }
    for (auto [a, b] : pairs) push_pair(a, b);
  }
};

inline SimulationTrace run(const ModelSystem& m, const StepFn2& initial, RunConfigLite cfg) {
  Simulator sim(m, initial, cfg);
  return sim.run();
}

// ---------------------------------------------------------------------------
// post-run queries

/// Piecewise-constant profile u^nu(t, .); side +1 reads just after an event.
inline StepFn2 solution_at(const SimulationTrace& tr, double t, int side = +1) {
  if (t < 0.0 || t > tr.final_time())
    throw PreconditionError("solution_at: time outside the simulated range");
  StepFn2 f;
  if (tr.fronts.empty()) {
    f.values.push_back(tr.initial.values.front());
    return f;
  }
  const auto ids = tr.alive_at(t, side);
  f.values.push_back(tr.initial.values.front());
  for (int id : ids) {
    const Front& fr = tr.fronts[id];
    const double x = fr.x_at(t);
    if (!f.xs.empty() && !(x > f.xs.back())) {
      f.values.back() = fr.right_state;  // zero-width cell collapses
    } else {
      f.xs.push_back(x);
      f.values.push_back(fr.right_state);
    }
  }
  return f;
}

/// Exact int |u(t,x) - u(s,x)|^p dx for two profile times (both piecewise
/// constant; the difference is compactly supported).
inline double time_regularity(const SimulationTrace& tr, double s, double t, double p) {
  if (!(0.0 <= s && s <= t && t <= tr.final_time()))
    throw PreconditionError("time_regularity: requires 0 <= s <= t <= final time");
  if (s == t) return 0.0;
  const StepFn2 us = solution_at(tr, s), ut = solution_at(tr, t);
  std::vector<double> cuts;
  cuts.reserve(us.xs.size() + ut.xs.size());
  cuts.insert(cuts.end(), us.xs.begin(), us.xs.end());
  cuts.insert(cuts.end(), ut.xs.begin(), ut.xs.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const double d = (us(mid) - ut(mid)).norm();
    total += std::pow(d, p) * (cuts[i + 1] - cuts[i]);
  }
  return total;
}

// ---------------------------------------------------------------------------
// entropy pairs and the discrete entropy residual

struct EntropyPair {
  std::function<double(Vec2)> eta;
  std::function<double(Vec2)> q;
  std::string name;
};

/// Physical energy pair of the p-system family: eta = u^2/2 + P(v) with
/// P' = -p, q = u p(v) (adjusted for the Galilean shift of the flux).
inline EntropyPair energy_entropy(const ModelSystem& m) {
  const auto law = m.pressure();
  const double shift = m.galilean_shift();
  auto P = [law](double v) {
    if (law.name == "gamma") return std::pow(v, 1.0 - law.gamma) / (law.gamma - 1.0);
    const double t = v - 1.0;
    return -(v - t * t / 2.0 + t * t * t * t * t / 60.0);
  };
  auto eta = [P](Vec2 u) { return 0.5 * u[1] * u[1] + P(u[0]); };
  auto q = [law, shift, eta](Vec2 u) { return u[1] * law.p(u[0]) - shift * eta(u); };
  return {eta, q, "energy"};
}

/// eta = sign * l_fam(base) . u (linear entropies measure the weak-formulation defect)
inline EntropyPair linear_entropy(const ModelSystem& m, int fam, double sign) {
  const Vec2 l = sign * m.dual(fam, m.base());
  auto eta = [l](Vec2 u) { return l.dot(u); };
  auto q = [l, m](Vec2 u) { return l.dot(m.flux(u)); };
  return {eta, q, std::string("linear") + (sign > 0 ? "+" : "-") + std::to_string(fam)};
}

/// Compactly supported smooth test function on [t0,t1] x [x0,x1].
struct TestFunction {
  std::function<double(double, double)> value;
  double t0 = 0.0, t1 = 1.0;
};

inline TestFunction bump_test_function(double t0, double t1, double x0, double x1) {
  auto bump1 = [](double s) {
    // C^infty bump on (0,1)
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double z = 2.0 * s - 1.0;
    return std::exp(-1.0 / (1.0 - z * z)) * std::exp(1.0);
  };
  return {[=](double t, double x) {
            return bump1((t - t0) / (t1 - t0)) * bump1((x - x0) / (x1 - x0));
          },
          t0, t1};
}

inline void check_entropy_pair(const ModelSystem& m, const EntropyPair& pair, double tol = 1e-8) {
  DetRng rng(4242);
  const double eps = 1e-6;
  for (int k = 0; k < 64; ++k) {
    Vec2 u;
    do {
      u = m.base() + Vec2{0.45 * m.radius() * (2 * rng.uniform01() - 1),
                          0.45 * m.radius() * (2 * rng.uniform01() - 1)};
    } while (!m.in_ball(u));
    Vec2 deta, dq;
    for (int i : {0, 1}) {
      Vec2 up = u, um = u;
      up[i] += eps;
      um[i] -= eps;
      deta[i] = (pair.eta(up) - pair.eta(um)) / (2 * eps);
      dq[i] = (pair.q(up) - pair.q(um)) / (2 * eps);
    }
    const Mat2 J = m.flux_jacobian(u);
    const Vec2 lhs{deta[0] * J.m00 + deta[1] * J.m10, deta[0] * J.m01 + deta[1] * J.m11};
    if ((lhs - dq).norm() > tol * (1.0 + dq.norm()))
      throw PreconditionError("entropy_residual: (eta, q) is not an entropy pair");
  }
}

/// int_0^T H^nu(t) dt where H^nu(t) sums phi(t, x_a(t)) times the entropy
/// production of each front, oriented so that the total equals the weak-form
/// integral int (eta(u) phi_t + q(u) phi_x) dx dt of the approximation: with
/// right-minus-left jumps the per-front term is xdot_a [eta]_a - [q]_a, which
/// is non-negative for admissible shocks and O(|sigma|^3) for RW/CW fronts.
/// Exact in the front sum, per-interval Gauss quadrature in time.
inline double entropy_residual(const SimulationTrace& tr, const EntropyPair& pair,
                               const TestFunction& phi, std::span<const double> t_grid = {},
                               int subdiv = 4) {
  check_entropy_pair(tr.model, pair);
  {  // phi must be non-negative
    DetRng rng(99);
    for (int k = 0; k < 256; ++k)
      if (phi.value(rng.uniform(phi.t0, phi.t1), rng.uniform(-50.0, 50.0)) < 0.0)
        throw PreconditionError("entropy_residual: phi must be non-negative");
  }
  auto H = [&](double t) {
    double sum = 0.0;
    for (const Front& f : tr.fronts) {
      if (!(f.birth_time <= t && t < f.death_time)) continue;
      const double w = phi.value(t, f.x_at(t));
      if (w == 0.0) continue;
      const double dq = pair.q(f.right_state) - pair.q(f.left_state);
      const double de = pair.eta(f.right_state) - pair.eta(f.left_state);
      sum += w * (f.speed * de - dq);
    }
    return sum;
  };
  // split the time axis at event times (and caller-supplied grid points)
  // inside the support
  std::vector<double> cuts{std::max(0.0, phi.t0)};
  const double t_hi = phi.t1;
  for (const auto& ev : tr.events)
    if (ev.time > cuts.front() && ev.time < t_hi) cuts.push_back(ev.time);
  for (double t : t_grid)
    if (t > cuts.front() && t < t_hi) cuts.push_back(t);
  cuts.push_back(t_hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  static const double xg[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                               0.9602898564975363};
  static const double wg[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                               0.1012285362903763};
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b > a)) continue;
    const double hsub = (b - a) / subdiv;
    for (int scell = 0; scell < subdiv; ++scell) {
      const double mid = a + (scell + 0.5) * hsub, half = 0.5 * hsub;
      for (int k = 0; k < 4; ++k)
        total += half * wg[k] * (H(mid + half * xg[k]) + H(mid - half * xg[k]));
    }
  }
  return total;
}

}  // namespace fbv::tracking
