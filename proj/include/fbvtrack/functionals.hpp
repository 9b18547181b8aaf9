#pragma once

// Post-hoc Glimm-type analysis of a completed front-tracking trace.
//
// Everything here is relative to a fixed time horizon T: for every pair of
// opposite-family fronts whose front lines cross at some interaction event no
// later than T, the interaction coefficients recorded at that event act as
// "future interaction coefficients" at all earlier times; pairs that do not
// cross carry zero coefficients.  From these the module computes preamplified
// strengths, the total strengths V^1, V^2 (maximal p-sums to the p-th power),
// nonlocal strengths, the potentials Q1/Q2/Q3, the functional
//     Upsilon = V + C2 [ C1 Q1 + Q2 + Q3 ],
// the modified p-variation, wave measure curves with their V_Gamma and
// M_Gamma series, the H(tau) check and the new-wave production total.

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fbvtrack/pvar.hpp"
#include "fbvtrack/tracking.hpp"

namespace fbv::functionals {

using riemann::WaveNature;
using tracking::Front;
using tracking::InteractionEvent;
using tracking::SimulationTrace;

enum class Side { Before, After };

// ---------------------------------------------------------------------------
// horizon view

struct HorizonView {
  const SimulationTrace* trace = nullptr;
  double T = 0.0;
  double p = 1.25;
  std::vector<int> next_same;  // same-family continuation per front id (-1 at the end)

  const SimulationTrace& tr() const { return *trace; }
};

inline HorizonView build_horizon(const SimulationTrace& trace, double T, double p) {
  if (!(T > 0.0) || T > trace.final_time() + 1e-12)
    throw PreconditionError("build_horizon: horizon outside (0, final time]");
  if (!(p >= 1.0 && p <= 1.5))
    throw PreconditionError("build_horizon: functional analysis requires p in [1, 1.5]");
  HorizonView v;
  v.trace = &trace;
  v.T = T;
  v.p = p;
  v.next_same.resize(trace.fronts.size(), -1);
  for (const auto& f : trace.fronts) v.next_same[f.id] = trace.next_same_family(f.id);
  return v;
}

// ---------------------------------------------------------------------------
// snapshot of the front configuration at a time

struct Snapshot {
  double t = 0.0;
  Side side = Side::After;
  // per family, ordered left to right (trivial fronts excluded)
  std::vector<int> id1, id2;
  std::vector<double> x1, x2;
  std::vector<std::size_t> rank1, rank2;  // position in the combined order
  std::vector<double> sig1, sig2;
  std::vector<WaveNature> nat1, nat2;
  // horizon data
  std::vector<std::vector<int>> cross;      // [i][j]: crossing event of (1-front i, 2-front j), or -1
  std::vector<std::vector<double>> c1, c2;  // future interaction coefficients per pair
  std::vector<double> amp1, amp2;           // preamplification factors
  std::vector<double> shat1, shat2;         // preamplified strengths

  std::size_t n1() const { return id1.size(); }
  std::size_t n2() const { return id2.size(); }
};

inline double shock_cube(double sigma, WaveNature n) {
  return n == WaveNature::Shock ? cube(sigma) : 0.0;
}

inline Snapshot make_snapshot(const HorizonView& v, double t, Side side) {
  const SimulationTrace& tr = v.tr();
  Snapshot s;
  s.t = t;
  s.side = side;
  std::vector<int> ids;
  for (const auto& f : tr.fronts)
    if ((side == Side::Before ? f.alive_before(t) : f.alive_after(t)) && !f.trivial())
      ids.push_back(f.id);
  const int sd = side == Side::Before ? -1 : +1;
  std::sort(ids.begin(), ids.end(), [&](int a, int b) { return tr.left_of(a, b, t, sd); });
  for (std::size_t rank = 0; rank < ids.size(); ++rank) {
    const Front& f = tr.fronts[ids[rank]];
    if (f.family == 1) {
      s.id1.push_back(f.id);
      s.x1.push_back(f.x_at(t));
      s.rank1.push_back(rank);
      s.sig1.push_back(f.sigma);
      s.nat1.push_back(f.nature);
    } else {
      s.id2.push_back(f.id);
      s.x2.push_back(f.x_at(t));
      s.rank2.push_back(rank);
      s.sig2.push_back(f.sigma);
      s.nat2.push_back(f.nature);
    }
  }

  // crossing table: walk each front line forward to the horizon and join the
  // two families on shared opposite-family events (lines cross at most once)
  s.cross.assign(s.n1(), std::vector<int>(s.n2(), -1));
  s.c1.assign(s.n1(), std::vector<double>(s.n2(), 0.0));
  s.c2.assign(s.n1(), std::vector<double>(s.n2(), 0.0));
  std::unordered_map<int, std::vector<int>> event_to_alpha;
  for (std::size_t i = 0; i < s.n1(); ++i) {
    int g = s.id1[i];
    while (g >= 0) {
      const int e = tr.fronts[g].death_event;
      if (e < 0 || tr.events[e].time > v.T) break;
      if (!tr.events[e].same_family) event_to_alpha[e].push_back(static_cast<int>(i));
      g = v.next_same[g];
    }
  }
  for (std::size_t j = 0; j < s.n2(); ++j) {
    int g = s.id2[j];
    while (g >= 0) {
      const int e = tr.fronts[g].death_event;
      if (e < 0 || tr.events[e].time > v.T) break;
      if (!tr.events[e].same_family) {
        const auto it = event_to_alpha.find(e);
        if (it != event_to_alpha.end()) {
          for (int i : it->second) {
            s.cross[i][j] = e;
            s.c1[i][j] = tr.events[e].c1;
            s.c2[i][j] = tr.events[e].c2;
          }
        }
      }
      g = v.next_same[g];
    }
  }

  // preamplified strengths
  s.amp1.resize(s.n1(), 1.0);
  s.shat1.resize(s.n1());
  for (std::size_t i = 0; i < s.n1(); ++i) {
    double m = 1.0;
    for (std::size_t j = 0; j < s.n2(); ++j)
      m *= 1.0 + s.c1[i][j] * shock_cube(s.sig2[j], s.nat2[j]);
    s.amp1[i] = m;
    s.shat1[i] = s.sig1[i] * m;
  }
  s.amp2.resize(s.n2(), 1.0);
  s.shat2.resize(s.n2());
  for (std::size_t j = 0; j < s.n2(); ++j) {
    double m = 1.0;
    for (std::size_t i = 0; i < s.n1(); ++i)
      m *= 1.0 + s.c2[i][j] * shock_cube(s.sig1[i], s.nat1[i]);
    s.amp2[j] = m;
    s.shat2[j] = s.sig2[j] * m;
  }
  return s;
}

/// sigma-hat and amplification factor per front id at time t
inline std::map<int, std::pair<double, double>> preamplified_strengths(const HorizonView& v,
                                                                       double t,
                                                                       Side side = Side::After) {
  const Snapshot s = make_snapshot(v, t, side);
  std::map<int, std::pair<double, double>> out;
  for (std::size_t i = 0; i < s.n1(); ++i) out[s.id1[i]] = {s.shat1[i], s.amp1[i]};
  for (std::size_t j = 0; j < s.n2(); ++j) out[s.id2[j]] = {s.shat2[j], s.amp2[j]};
  return out;
}

// ---------------------------------------------------------------------------
// total / partial / nonlocal strengths and the potentials

struct TotalStrengths {
  double V1 = 0.0, V2 = 0.0;             // s_p^p of the preamplified strengths
  std::vector<double> prefix1, prefix2;  // prefix s_p^p values (index 0..n)
  std::vector<double> suffix1, suffix2;
  std::vector<double> sl1, sr1, sl2, sr2;  // nonlocal strengths per front
  double V() const { return V1 + V2; }
};

inline TotalStrengths total_strengths_from(const Snapshot& s, double p) {
  TotalStrengths out;
  auto fill = [&](const std::vector<double>& shat, std::vector<double>& prefix,
                  std::vector<double>& suffix, std::vector<double>& sl, std::vector<double>& sr,
                  double& V) {
    prefix = pvar::max_p_sum_pow_prefixes(shat, p);
    std::vector<double> rev(shat.rbegin(), shat.rend());
    const auto rp = pvar::max_p_sum_pow_prefixes(rev, p);
    suffix.assign(rp.rbegin(), rp.rend());
    const std::size_t n = shat.size();
    sl.resize(n);
    sr.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      sl[i] = prefix[i + 1] - prefix[i];
      sr[i] = suffix[i] - suffix[i + 1];
    }
    V = prefix[n];
  };
  fill(s.shat1, out.prefix1, out.suffix1, out.sl1, out.sr1, out.V1);
  fill(s.shat2, out.prefix2, out.suffix2, out.sl2, out.sr2, out.V2);
  return out;
}

inline TotalStrengths total_strengths(const HorizonView& v, double t, Side side = Side::After) {
  return total_strengths_from(make_snapshot(v, t, side), v.p);
}

struct Potentials {
  double Q1 = 0.0, Q2 = 0.0, Q3 = 0.0;
  double sum() const { return Q1 + Q2 + Q3; }
};

inline Potentials potentials_from(const Snapshot& s, const TotalStrengths& ts) {
  Potentials q;
  // Q1^k: ordered same-family pairs
  auto q1 = [&](const std::vector<double>& sl, const std::vector<double>& sr) {
    double total = 0.0, acc = 0.0;
    for (std::size_t j = 0; j < sl.size(); ++j) {
      total += acc * sl[j];
      acc += sr[j];
    }
    return total;
  };
  q.Q1 = q1(ts.sl1, ts.sr1) + q1(ts.sl2, ts.sr2);
  // Q2: 2-fronts to the left of 1-fronts (approaching pairs), using the
  // combined order so colliding pairs still count just before their event
  {
    double total = 0.0;
    std::size_t j = 0;  // index over family 2
    double acc = 0.0;   // sum of sr2 for 2-fronts left of the current 1-front
    for (std::size_t i = 0; i < s.n1(); ++i) {
      while (j < s.n2() && s.rank2[j] < s.rank1[i]) acc += ts.sr2[j], ++j;
      total += acc * ts.sl1[i];
    }
    q.Q2 = total;
  }
  // Q3: cubic self-interaction, compression fronts doubled
  for (std::size_t i = 0; i < s.n1(); ++i)
    q.Q3 += pow_abs(s.sig1[i], 3.0) * (s.nat1[i] == WaveNature::Compression ? 2.0 : 1.0);
  for (std::size_t j = 0; j < s.n2(); ++j)
    q.Q3 += pow_abs(s.sig2[j], 3.0) * (s.nat2[j] == WaveNature::Compression ? 2.0 : 1.0);
  return q;
}

inline Potentials potentials(const HorizonView& v, double t, Side side = Side::After) {
  const Snapshot s = make_snapshot(v, t, side);
  return potentials_from(s, total_strengths_from(s, v.p));
}

inline double upsilon_from(const TotalStrengths& ts, const Potentials& q, double C1, double C2) {
  return ts.V() + C2 * (C1 * q.Q1 + q.Q2 + q.Q3);
}

inline double upsilon(const HorizonView& v, double t, double C1, double C2,
                      Side side = Side::After) {
  if (!(C1 >= 1.0 && C2 >= 1.0)) throw PreconditionError("upsilon: requires C1, C2 >= 1");
  const Snapshot s = make_snapshot(v, t, side);
  const auto ts = total_strengths_from(s, v.p);
  return upsilon_from(ts, potentials_from(s, ts), C1, C2);
}

/// modified p-variation: family-separated maximal p-sums of plain strengths
inline double modified_vp(const HorizonView& v, double t, Side side = Side::After) {
  const Snapshot s = make_snapshot(v, t, side);
  return std::pow(pvar::max_p_sum_pow(s.sig1, v.p) + pvar::max_p_sum_pow(s.sig2, v.p), 1.0 / v.p);
}

// ---------------------------------------------------------------------------
// wave measure curves
//
// A curve follows one front line between t_min and t_max, capped by two
// horizontal half-lines.  Orientation conventions (lower = displaced toward
// the side opposite-family fronts arrive from):
//   1-lower: horizontal at t_max on the left, line downward, horizontal at
//            t_min on the right; measures both families.
//   1-upper: horizontal at t_min on the left, line upward, horizontal at
//            t_max on the right; measures family 1 only.
//   2-lower / 2-upper: mirror images.
// Intermediate curves Gamma_t replace the part above t by the horizontal
// half-line at t; measured values are frozen at their crossing times.

enum class CurveKind { Lower, Upper };

struct MeasureCurveSpec {
  CurveKind kind = CurveKind::Lower;
  int family = 1;         // family of the followed front line
  int anchor_front = -1;  // a front on the line; the line is followed from it
  double t_min = 0.0;
  double t_max = 0.0;  // <= 0: use the horizon
};

/// Measured crossing of one front with the curve.
struct CurveCrossing {
  int front = -1;
  double time = 0.0;     // crossing time (frozen values are taken at it)
  double sigma = 0.0;    // plain strength at crossing
  double shat = 0.0;     // preamplified strength at crossing (horizon T)
  double mfactor = 1.0;  // Gamma-masked preamplification factor at crossing
  int family = 0;
};

class MeasureCurve {
public:
  MeasureCurve(const HorizonView& v, MeasureCurveSpec spec) : v_(&v), spec_(spec) {
    const SimulationTrace& tr = v.tr();
    if (spec_.anchor_front < 0 || spec_.anchor_front >= static_cast<int>(tr.fronts.size()))
      throw PreconditionError("measure_curve: invalid anchor front");
    const Front& anchor = tr.fronts[spec_.anchor_front];
    if (anchor.family != spec_.family)
      throw PreconditionError("measure_curve: anchor family mismatch");
    if (spec_.t_max <= 0.0) spec_.t_max = v.T;
    if (spec_.t_min < anchor.birth_time) spec_.t_min = anchor.birth_time;
    if (!(spec_.t_min <= spec_.t_max && spec_.t_max <= v.T))
      throw PreconditionError("measure_curve: requires t_min <= t_max <= T");

    // walk the line from the anchor to t_max, recording segments and events
    int g = spec_.anchor_front;
    while (g >= 0) {
      segments_.push_back(g);
      const Front& f = tr.fronts[g];
      if (f.death_event < 0 || f.death_time > spec_.t_max) break;
      const InteractionEvent& ev = tr.events[f.death_event];
      LineEvent le;
      le.event = f.death_event;
      le.time = ev.time;
      le.opposite = !ev.same_family;
      le.other = ev.in_left == g ? ev.in_right : ev.in_left;
      le.other_from_left = ev.in_left != g;
      if (le.time > spec_.t_min) line_events_.push_back(le);
      g = v.next_same[g];
    }
    build_frozen();
  }

  const MeasureCurveSpec& spec() const { return spec_; }

  /// position of the followed line at time t in [t_min, t_max]
  double line_x(double t) const {
    const SimulationTrace& tr = v_->tr();
    for (int id : segments_) {
      const Front& f = tr.fronts[id];
      if (t <= f.death_time || id == segments_.back()) return f.x_at(t);
    }
    return tr.fronts[segments_.back()].x_at(t);
  }

  /// Is a space-time point inside the unlimited component (the one containing
  /// times beyond t_max)?  Points on the line count as unlimited.
  bool unlimited(double te, double xe) const {
    if (te > spec_.t_max) return true;
    if (te < spec_.t_min) return false;
    const double xl = line_x(te);
    const bool left = xe <= xl;
    if (spec_.family == 1) return spec_.kind == CurveKind::Lower ? xe >= xl : left;
    return spec_.kind == CurveKind::Lower ? left : xe >= xl;
  }

  struct Values {
    double V_gamma = 0.0;   // s_p^p sums of preamplified strengths
    double Vp_gamma = 0.0;  // plain-sigma p-sum combination for the H(tau) check
    double M_gamma = 0.0;   // v_p^p of the masked amplification factors
  };

  Values values_at(double t, Side side) const {
    if (t > spec_.t_max)
      throw PreconditionError("measure_curve: evaluation beyond the curve's t_max");
    const double p = v_->p;
    if (t < spec_.t_min) {
      // strictly below t_min: the full horizontal line, instantaneous values
      const Snapshot s = make_snapshot(*v_, t, side);
      return combine(collect_instant(s, 1), collect_instant(s, 2), p);
    }
    // three-part curve: current half-line at t, frozen crossings, frozen t_min part
    const Snapshot s = make_snapshot(*v_, t, side);
    std::vector<CurveCrossing> cur1, cur2;
    collect_current(s, t, side, cur1, cur2);
    std::vector<CurveCrossing> mid1, mid2;
    for (const auto& c : crossings_) {
      if (c.time > t) continue;
      if (side == Side::Before && c.time == t && c.time > spec_.t_min) continue;
      (c.family == 1 ? mid1 : mid2).push_back(c);
    }
    auto assemble = [&](int fam) {
      std::vector<CurveCrossing> seq;
      const auto& cur = fam == 1 ? cur1 : cur2;
      auto mid = fam == 1 ? mid1 : mid2;
      const auto& frz = fam == 1 ? frozen1_ : frozen2_;
      if (current_side_left()) {
        seq.insert(seq.end(), cur.begin(), cur.end());
        std::sort(mid.begin(), mid.end(),
                  [](const CurveCrossing& a, const CurveCrossing& b) { return a.time > b.time; });
        seq.insert(seq.end(), mid.begin(), mid.end());
        seq.insert(seq.end(), frz.begin(), frz.end());
      } else {
        seq.insert(seq.end(), frz.begin(), frz.end());
        std::sort(mid.begin(), mid.end(),
                  [](const CurveCrossing& a, const CurveCrossing& b) { return a.time < b.time; });
        seq.insert(seq.end(), mid.begin(), mid.end());
        seq.insert(seq.end(), cur.begin(), cur.end());
      }
      // a front crosses the curve at most once
      std::vector<int> ids;
      for (const auto& c : seq) ids.push_back(c.front);
      std::sort(ids.begin(), ids.end());
      if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
        throw ConvergenceError("measure_curve: a front was measured twice");
      return seq;
    };
    return combine(assemble(1), assemble(2), p);
  }

private:
  struct LineEvent {
    int event = -1;
    double time = 0.0;
    bool opposite = false;
    int other = -1;
    bool other_from_left = false;
  };

  const HorizonView* v_;
  MeasureCurveSpec spec_;
  std::vector<int> segments_;
  std::vector<LineEvent> line_events_;
  std::vector<CurveCrossing> crossings_;          // measured line crossings, frozen
  std::vector<CurveCrossing> frozen1_, frozen2_;  // t_min horizontal part, in x order
  std::vector<int> corner_parents_;               // incoming fronts of the anchor's birth event

  /// does the current half-line at time t sit on the left end of the curve?
  bool current_side_left() const {
    // 1-lower and 2-upper curves end with {t} x (-inf, Gamma(t)]
    return (spec_.family == 1) == (spec_.kind == CurveKind::Lower);
  }

  /// the side from which measured line crossings arrive
  bool measured_side_left() const {
    if (spec_.family == 1) return spec_.kind == CurveKind::Lower;
    return spec_.kind == CurveKind::Upper;
  }

  /// measured families: both on lower curves, own family on upper curves
  bool measures_family(int fam) const {
    return spec_.kind == CurveKind::Lower || fam == spec_.family;
  }

  CurveCrossing freeze(const Snapshot& s, int fam, std::size_t idx, double time) const {
    CurveCrossing c;
    c.family = fam;
    c.time = time;
    if (fam == 1) {
      c.front = s.id1[idx];
      c.sigma = s.sig1[idx];
      c.shat = s.shat1[idx];
      c.mfactor = masked_factor(s, 1, idx);
    } else {
      c.front = s.id2[idx];
      c.sigma = s.sig2[idx];
      c.shat = s.shat2[idx];
      c.mfactor = masked_factor(s, 2, idx);
    }
    return c;
  }

  std::optional<CurveCrossing> freeze_by_id(const Snapshot& s, int front_id, double time) const {
    const Front& f = v_->tr().fronts[front_id];
    const auto& ids = f.family == 1 ? s.id1 : s.id2;
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == front_id) return freeze(s, f.family, i, time);
    return std::nullopt;
  }

  /// preamplification factor restricted to crossings in the unlimited component
  double masked_factor(const Snapshot& s, int fam, std::size_t idx) const {
    const SimulationTrace& tr = v_->tr();
    double m = 1.0;
    if (fam == 1) {
      for (std::size_t j = 0; j < s.n2(); ++j) {
        const int e = s.cross[idx][j];
        if (e < 0 || tr.events[e].time > spec_.t_max) continue;
        if (!unlimited(tr.events[e].time, tr.events[e].pos)) continue;
        m *= 1.0 + s.c1[idx][j] * shock_cube(s.sig2[j], s.nat2[j]);
      }
    } else {
      for (std::size_t i = 0; i < s.n1(); ++i) {
        const int e = s.cross[i][idx];
        if (e < 0 || tr.events[e].time > spec_.t_max) continue;
        if (!unlimited(tr.events[e].time, tr.events[e].pos)) continue;
        m *= 1.0 + s.c2[i][idx] * shock_cube(s.sig1[i], s.nat1[i]);
      }
    }
    return m;
  }

  std::vector<CurveCrossing> collect_instant(const Snapshot& s, int fam) const {
    std::vector<CurveCrossing> seq;
    if (!measures_family(fam)) return seq;
    const std::size_t n = fam == 1 ? s.n1() : s.n2();
    for (std::size_t i = 0; i < n; ++i) seq.push_back(freeze(s, fam, i, s.t));
    return seq;
  }

  int line_front_at(double t, Side side) const {
    const SimulationTrace& tr = v_->tr();
    for (int id : segments_) {
      const Front& f = tr.fronts[id];
      if (side == Side::Before ? f.alive_before(t) : f.alive_after(t)) return id;
    }
    return segments_.back();
  }

  /// fronts measured on the half-line at time t (current values)
  void collect_current(const Snapshot& s, double t, Side side, std::vector<CurveCrossing>& o1,
                       std::vector<CurveCrossing>& o2) const {
    const SimulationTrace& tr = v_->tr();
    const double xl = line_x(t);
    const Front& lf = tr.fronts[line_front_at(t, side)];
    const bool want_left = current_side_left();
    // when t is an interaction time on the line, the participants sit at the
    // line position up to roundoff; attribute them by the event record
    const int line_ev = side == Side::Before
                            ? (lf.death_time == t ? lf.death_event : -1)
                            : (lf.birth_time == t ? lf.birth_event : -1);
    auto on_half_line = [&](int id, double x) {
      if (id == lf.id) return false;  // the line itself is never measured
      if (t == spec_.t_min)
        for (int p : corner_parents_)
          if (p == id) return false;  // corner parents are handled explicitly
      const Front& f = tr.fronts[id];
      if (line_ev >= 0 && side == Side::Before && f.death_event == line_ev)
        return want_left == (id == tr.events[line_ev].in_left);
      if (line_ev >= 0 && side == Side::After && f.birth_event == line_ev) {
        // outgoing sibling: order within the event's outgoing list
        const auto& out = tr.events[line_ev].out;
        std::size_t pos_id = 0, pos_line = 0;
        for (std::size_t k = 0; k < out.size(); ++k) {
          if (out[k] == id) pos_id = k;
          if (out[k] == lf.id) pos_line = k;
        }
        return want_left == (pos_id < pos_line);
      }
      if (x != xl) return want_left ? x < xl : x > xl;
      // residual exact tie: attribute by approach direction
      const double sp = f.speed;
      const bool left_of_line = side == Side::Before ? sp > lf.speed : sp < lf.speed;
      return want_left == left_of_line;
    };
    if (measures_family(1))
      for (std::size_t i = 0; i < s.n1(); ++i)
        if (on_half_line(s.id1[i], s.x1[i])) o1.push_back(freeze(s, 1, i, t));
    if (measures_family(2))
      for (std::size_t j = 0; j < s.n2(); ++j)
        if (on_half_line(s.id2[j], s.x2[j])) o2.push_back(freeze(s, 2, j, t));
  }

  void build_frozen() {
    const SimulationTrace& tr = v_->tr();
    const Front& anchor = tr.fronts[spec_.anchor_front];
    const bool corner = anchor.birth_event >= 0 && anchor.birth_time == spec_.t_min;
    if (corner) {
      corner_parents_.push_back(tr.events[anchor.birth_event].in_left);
      corner_parents_.push_back(tr.events[anchor.birth_event].in_right);
    }
    // the t_min horizontal part, with values frozen just before t_min (at
    // t_min = 0 there is no "before": use the initial configuration)
    const Side fside = spec_.t_min == 0.0 ? Side::After : Side::Before;
    const Snapshot s0 = make_snapshot(*v_, spec_.t_min, fside);
    const double xl = line_x(spec_.t_min);
    const bool frozen_right = current_side_left();
    const int lf0 = line_front_at(spec_.t_min, fside);
    auto take = [&](int fam) {
      std::vector<CurveCrossing> out;
      if (!measures_family(fam)) return out;
      const auto& ids = fam == 1 ? s0.id1 : s0.id2;
      const auto& xs = fam == 1 ? s0.x1 : s0.x2;
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == lf0 || ids[i] == spec_.anchor_front) continue;
        bool is_parent = false;
        for (int p : corner_parents_) is_parent |= p == ids[i];
        if (is_parent) continue;
        bool beyond;
        if (xs[i] != xl) {
          beyond = frozen_right ? xs[i] > xl : xs[i] < xl;
        } else {
          // birth-point siblings (t_min = 0) diverge by speed
          const double sp = v_->tr().fronts[ids[i]].speed;
          const bool left = fside == Side::Before ? sp > anchor.speed : sp < anchor.speed;
          beyond = frozen_right ? !left : left;
        }
        if (beyond) out.push_back(freeze(s0, fam, i, spec_.t_min));
      }
      return out;
    };
    frozen1_ = take(1);
    frozen2_ = take(2);

    // corner parents: the measured-side one is a line crossing at t_min, the
    // other belongs to the end of the t_min horizontal part
    if (corner) {
      const auto& ev = tr.events[anchor.birth_event];
      for (int pid : corner_parents_) {
        const Front& pf = tr.fronts[pid];
        if (pf.trivial() || !measures_family(pf.family)) continue;
        const bool from_left = pid == ev.in_left;
        const auto frozen = freeze_by_id(s0, pid, spec_.t_min);
        if (!frozen) continue;
        if (from_left == measured_side_left()) {
          crossings_.push_back(*frozen);
        } else {
          auto& dst = pf.family == 1 ? frozen1_ : frozen2_;
          if (frozen_right)
            dst.insert(dst.begin(), *frozen);  // x = xl is the leftmost point
          else
            dst.push_back(*frozen);
        }
      }
    }

    // line crossings between t_min and t_max: opposite-family fronts always,
    // same-family merges only when the other front joins from the curve's side
    for (const auto& le : line_events_) {
      const Front& other = tr.fronts[le.other];
      int fam;
      if (le.opposite) {
        fam = 3 - spec_.family;
      } else {
        fam = spec_.family;
        if (le.other_from_left != measured_side_left()) continue;
      }
      if (!measures_family(fam) || other.trivial()) continue;
      const Snapshot sb = make_snapshot(*v_, le.time, Side::Before);
      const auto frozen = freeze_by_id(sb, le.other, le.time);
      if (frozen) crossings_.push_back(*frozen);
    }
  }

  Values combine(const std::vector<CurveCrossing>& seq1, const std::vector<CurveCrossing>& seq2,
                 double p) const {
    auto to_vals = [](const std::vector<CurveCrossing>& seq, auto proj) {
      std::vector<double> v;
      v.reserve(seq.size());
      for (const auto& c : seq) v.push_back(proj(c));
      return v;
    };
    Values out;
    const auto shat1 = to_vals(seq1, [](const CurveCrossing& c) { return c.shat; });
    const auto shat2 = to_vals(seq2, [](const CurveCrossing& c) { return c.shat; });
    const auto sig1 = to_vals(seq1, [](const CurveCrossing& c) { return c.sigma; });
    const auto sig2 = to_vals(seq2, [](const CurveCrossing& c) { return c.sigma; });
    const auto m1 = to_vals(seq1, [](const CurveCrossing& c) { return c.mfactor; });
    const auto m2 = to_vals(seq2, [](const CurveCrossing& c) { return c.mfactor; });
    auto vp_pow = [&](const std::vector<double>& m) {
      return m.empty() ? 0.0 : pvar::p_variation_seq_pow(m, p);
    };
    if (spec_.kind == CurveKind::Lower) {
      out.V_gamma = pvar::max_p_sum_pow(shat1, p) + pvar::max_p_sum_pow(shat2, p);
      out.Vp_gamma = std::pow(pvar::max_p_sum_pow(sig1, p) + pvar::max_p_sum_pow(sig2, p), 1.0 / p);
      out.M_gamma = vp_pow(m1) + vp_pow(m2);
    } else if (spec_.family == 1) {
      out.V_gamma = pvar::max_p_sum_pow(shat1, p);
      out.Vp_gamma = pvar::max_p_sum(sig1, p);
      out.M_gamma = vp_pow(m1);
    } else {
      out.V_gamma = pvar::max_p_sum_pow(shat2, p);
      out.Vp_gamma = pvar::max_p_sum(sig2, p);
      out.M_gamma = vp_pow(m2);
    }
    return out;
  }
};

struct MeasureCurveSeries {
  MeasureCurveSpec spec;
  std::vector<double> times;
  std::vector<double> V_gamma, M_gamma, Vp_gamma;  // values at t+
};

inline MeasureCurveSeries measure_curve(const HorizonView& v, const MeasureCurveSpec& spec) {
  MeasureCurve curve(v, spec);
  MeasureCurveSeries out;
  out.spec = curve.spec();
  auto record = [&](double t) {
    const auto val = curve.values_at(t, Side::After);
    out.times.push_back(t);
    out.V_gamma.push_back(val.V_gamma);
    out.M_gamma.push_back(val.M_gamma);
    out.Vp_gamma.push_back(val.Vp_gamma);
  };
  record(0.0);
  for (const auto& ev : v.tr().events)
    if (ev.time <= curve.spec().t_max) record(ev.time);
  return out;
}

// ---------------------------------------------------------------------------
// default curve families

/// Front-line roots: fronts that started a new line.
inline std::vector<int> line_roots(const SimulationTrace& tr) {
  std::vector<int> roots;
  for (const auto& f : tr.fronts)
    if (f.lineage == f.id) roots.push_back(f.id);
  return roots;
}

/// Lower+upper curves anchored to every shock-born line, plus the
/// longest-lived rarefaction-born line per family.
inline std::vector<MeasureCurveSpec> default_curve_family(const HorizonView& v) {
  const SimulationTrace& tr = v.tr();
  std::vector<MeasureCurveSpec> specs;
  int best_rw[3] = {-1, -1, -1};
  double best_life[3] = {-1.0, -1.0, -1.0};
  for (int root : line_roots(tr)) {
    const Front& f = tr.fronts[root];
    if (f.birth_time >= v.T) continue;
    if (f.nature == WaveNature::Shock) {
      specs.push_back({CurveKind::Lower, f.family, root, f.birth_time, v.T});
      specs.push_back({CurveKind::Upper, f.family, root, f.birth_time, v.T});
    } else if (f.nature == WaveNature::Rarefaction) {
      const double life = v.T - f.birth_time;
      if (life > best_life[f.family]) {
        best_life[f.family] = life;
        best_rw[f.family] = root;
      }
    }
  }
  for (int fam : {1, 2})
    if (best_rw[fam] >= 0) {
      const Front& f = tr.fronts[best_rw[fam]];
      specs.push_back({CurveKind::Lower, fam, best_rw[fam], f.birth_time, v.T});
      specs.push_back({CurveKind::Upper, fam, best_rw[fam], f.birth_time, v.T});
    }
  return specs;
}

/// Every front line, both kinds (small traces).
inline std::vector<MeasureCurveSpec> exhaustive_curve_family(const HorizonView& v) {
  const SimulationTrace& tr = v.tr();
  std::vector<MeasureCurveSpec> specs;
  for (int root : line_roots(tr)) {
    const Front& f = tr.fronts[root];
    if (f.birth_time >= v.T || f.trivial()) continue;
    specs.push_back({CurveKind::Lower, f.family, root, f.birth_time, v.T});
    specs.push_back({CurveKind::Upper, f.family, root, f.birth_time, v.T});
  }
  return specs;
}

// ---------------------------------------------------------------------------
// decay monitor, H(tau) check, new-wave accounting

struct Violation {
  double time = 0.0;
  std::string what;
  double jump = 0.0;
};

struct FunctionalReport {
  std::vector<double> times;  // 0 followed by the event times <= T
  std::vector<double> V1, V2, Q1, Q2, Q3, upsilon, vp, vp_tilde;  // values at t+
  std::vector<Violation> violations;
  std::map<std::string, double> constants;
};

/// Evaluate Upsilon across every event in [0, T]; also check the decay of
/// V_Gamma + Q and M_Gamma + Q along the supplied measure curves.  Q here is
/// the full functional Upsilon = V + C2 [C1 Q1 + Q2 + Q3]: interactions far
/// from the curve rearrange the nonlocal strengths inside Q1/Q2 by amounts
/// that only the V term compensates, so the potential part alone is not
/// monotone (a direct computation on small traces confirms this).
inline FunctionalReport monitor_decay(const HorizonView& v, double C1, double C2,
                                      const std::vector<MeasureCurveSpec>& curve_specs = {}) {
  if (!(C1 >= 1.0 && C2 >= 1.0)) throw PreconditionError("monitor_decay: requires C1, C2 >= 1");
  const SimulationTrace& tr = v.tr();
  FunctionalReport rep;

  auto eval = [&](double t, Side side) {
    const Snapshot s = make_snapshot(v, t, side);
    const auto ts = total_strengths_from(s, v.p);
    const auto q = potentials_from(s, ts);
    return std::tuple<TotalStrengths, Potentials, double>(ts, q, upsilon_from(ts, q, C1, C2));
  };
  auto record = [&](double t, const TotalStrengths& ts, const Potentials& q, double ups) {
    rep.times.push_back(t);
    rep.V1.push_back(ts.V1);
    rep.V2.push_back(ts.V2);
    rep.Q1.push_back(q.Q1);
    rep.Q2.push_back(q.Q2);
    rep.Q3.push_back(q.Q3);
    rep.upsilon.push_back(ups);
    rep.vp_tilde.push_back(modified_vp(v, t, Side::After));
    const auto prof = tracking::solution_at(tr, t, +1);
    rep.vp.push_back(pvar::vector_p_variation(prof, v.p, tr.model));
  };

  {
    const auto [ts0, q0, u0] = eval(0.0, Side::After);
    record(0.0, ts0, q0, u0);
  }
  std::vector<MeasureCurve> curves;
  curves.reserve(curve_specs.size());
  for (const auto& cs : curve_specs) curves.emplace_back(v, cs);

  for (const auto& ev : tr.events) {
    if (ev.time > v.T) break;
    const auto [tsb, qb, ub] = eval(ev.time, Side::Before);
    const auto [tsa, qa, ua] = eval(ev.time, Side::After);
    record(ev.time, tsa, qa, ua);
    const double tol = 1e-10 * (1.0 + std::abs(ub));
    if (ua - ub > tol) rep.violations.push_back({ev.time, "upsilon", ua - ub});
    const double Qb = ub;  // Upsilon(t-)
    const double Qa = ua;  // Upsilon(t+)
    for (std::size_t c = 0; c < curves.size(); ++c) {
      if (ev.time > curves[c].spec().t_max) continue;
      const auto vb = curves[c].values_at(ev.time, Side::Before);
      const auto va = curves[c].values_at(ev.time, Side::After);
      const double tolc = 1e-10 * (1.0 + std::abs(vb.V_gamma + Qb));
      if (va.V_gamma + Qa - (vb.V_gamma + Qb) > tolc)
        rep.violations.push_back(
            {ev.time, "V_gamma+Q[" + std::to_string(c) + "]", va.V_gamma + Qa - vb.V_gamma - Qb});
      if (va.M_gamma + Qa - (vb.M_gamma + Qb) > tolc)
        rep.violations.push_back(
            {ev.time, "M_gamma+Q[" + std::to_string(c) + "]", va.M_gamma + Qa - vb.M_gamma - Qb});
    }
  }

  // recorded empirical constants
  const double vp0 = rep.vp.empty() ? 0.0 : rep.vp.front();
  rep.constants["Vp_u0"] = vp0;
  double c_lo = 0.0, c_hi = 0.0, qv = 0.0, vvt = 0.0, m_lo = kInf, m_hi = -kInf;
  for (std::size_t k = 0; k < rep.times.size(); ++k) {
    const double V = rep.V1[k] + rep.V2[k];
    const double vt_pow = std::pow(rep.vp_tilde[k], v.p);
    if (vt_pow > 1e-300 && vp0 > 0.0) {
      c_lo = std::max(c_lo, (1.0 - V / vt_pow) / cube(vp0));
      c_hi = std::max(c_hi, (V / vt_pow - 1.0) / cube(vp0));
    }
    if (V > 1e-300) qv = std::max(qv, (rep.Q1[k] + rep.Q2[k] + rep.Q3[k]) / (V * V));
    const double mn = std::min(rep.vp[k], rep.vp_tilde[k]);
    if (mn > 1e-300) vvt = std::max(vvt, std::abs(rep.vp[k] - rep.vp_tilde[k]) / cube(mn));
  }
  for (const auto& t : rep.times) {
    const auto amps = preamplified_strengths(v, t, Side::After);
    for (const auto& [id, sa] : amps) {
      m_lo = std::min(m_lo, sa.second);
      m_hi = std::max(m_hi, sa.second);
    }
  }
  rep.constants["sandwich_c_lower"] = c_lo;
  rep.constants["sandwich_c_upper"] = c_hi;
  rep.constants["q_over_v_squared"] = qv;
  rep.constants["vvtilde_cubic_c"] = vvt;
  rep.constants["amp_min"] = m_lo;
  rep.constants["amp_max"] = m_hi;
  return rep;
}

struct HReport {
  bool holds = true;
  double bound = 0.0;  // 4 V_p(u0)
  std::vector<Violation> violations;
};

/// H(tau): modified p-variation <= 4 V_p(u0) at every event time in [0, tau],
/// in time slices and along the supplied curve family.
inline HReport check_H(const HorizonView& v, double tau,
                       const std::vector<MeasureCurveSpec>& curve_specs) {
  if (tau > v.T) throw PreconditionError("check_H: tau exceeds the horizon");
  const SimulationTrace& tr = v.tr();
  HReport rep;
  const double vp0 = pvar::vector_p_variation(tr.initial, v.p, tr.model);
  rep.bound = 4.0 * vp0;
  auto check_value = [&](double t, const std::string& what, double val) {
    if (val > rep.bound * (1.0 + 1e-12)) rep.violations.push_back({t, what, val - rep.bound});
  };
  check_value(0.0, "slice", modified_vp(v, 0.0, Side::After));
  for (const auto& ev : tr.events) {
    if (ev.time > tau) break;
    check_value(ev.time, "slice", modified_vp(v, ev.time, Side::After));
  }
  for (const auto& cs : curve_specs) {
    MeasureCurve curve(v, cs);
    const double hi = std::min(tau, curve.spec().t_max);
    check_value(0.0, "curve", curve.values_at(0.0, Side::After).Vp_gamma);
    for (const auto& ev : tr.events) {
      if (ev.time > hi) break;
      check_value(ev.time, "curve", curve.values_at(ev.time, Side::After).Vp_gamma);
    }
  }
  rep.holds = rep.violations.empty();
  return rep;
}

/// Total |sigma| at birth of fronts created in the opposite family at
/// same-family interactions.
inline double new_wave_production(const SimulationTrace& tr) {
  double total = 0.0;
  for (const auto& f : tr.fronts) {
    if (f.birth_event < 0) continue;
    const auto& ev = tr.events[f.birth_event];
    if (ev.same_family && f.family != ev.family) total += std::abs(f.sigma);
  }
  return total;
}

}  // namespace fbv::functionals
