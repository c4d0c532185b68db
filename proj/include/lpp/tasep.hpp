#pragma once

// Continuous-time TASEP on a finite window, started from Bernoulli(rho)
// conditioned on a hole at 0 and a particle at 1. Particles and holes carry
// labels: P_0 starts at 1 and H_0 at 0; particles are numbered from right to
// left, holes from left to right, so P_1 is the first particle left of 0 and
// H_1 the first hole right of 1. T(i,j) is the time P_j and H_i exchange.

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lpp/io.hpp"
#include "lpp/rng.hpp"

namespace lpp {

struct TasepEvent {
  double t = 0.0;
  char kind = 'P';  // 'P' particle moved right, 'H' hole moved left
  long label = 0;
  int site = 0;     // position after the move
};

struct TasepOptions {
  int track = 5;                   // T(i,j) recorded for 0 <= i, j <= track
  int margin = 32;                 // a tracked label this close to an edge invalidates the run
  bool record_log = false;
  bool check_invariants = false;   // full order/exclusion scan after every event
  bool stop_when_complete = false; // stop once every tracked T(i,j) is known
};

/// Window [-w, w+1] wide enough that disturbances from the frozen edges cannot
/// reach the tracked labels before the horizon except with negligible
/// probability: a disturbance needs a chain of clock rings, one per site.
inline int default_half_width(double horizon) { return static_cast<int>(std::ceil(3.0 * horizon)) + 64; }

struct TasepTrajectory;
struct TasepOptions;

class TasepState {
 public:
  /// Palm-conditioned initial state on [left, right]: hole at 0, particle at
  /// 1, independent Bernoulli(rho) occupation elsewhere.
  TasepState(double rho, int left, int right, std::uint64_t seed) : rho_(rho), left_(left), right_(right) {
    require_density(rho, "density");
    if (left > 0 || right < 1) throw std::invalid_argument("window must contain sites 0 and 1");
    const std::size_t size = static_cast<std::size_t>(right - left + 1);
    occ_.assign(size, 0);
    label_.assign(size, 0);
    CounterStream rng(seed, Stream::kTasepInit);
    for (int x = left; x <= right; ++x) {
      if (x == 0 || x == 1) continue;
      occ_[offset(x)] = rng.bernoulli(rho) ? 1 : 0;
    }
    occ_[offset(1)] = 1;
    relabel();
  }

  /// Explicit configuration on [left, left + occupation.size() - 1]; site 0
  /// must be empty and site 1 occupied. Labels follow the same rule.
  static TasepState from_occupation(int left, const std::vector<std::uint8_t>& occupation) {
    const int right = left + static_cast<int>(occupation.size()) - 1;
    TasepState s(0.5, left, right, 0);
    for (int x = left; x <= right; ++x) s.occ_[s.offset(x)] = occupation[static_cast<std::size_t>(x - left)] ? 1 : 0;
    if (s.occ_[s.offset(0)] != 0 || s.occ_[s.offset(1)] != 1) {
      throw std::invalid_argument("configuration needs a hole at 0 and a particle at 1");
    }
    s.relabel();
    return s;
  }

  double rho() const noexcept { return rho_; }
  int left() const noexcept { return left_; }
  int right() const noexcept { return right_; }
  bool occupied(int x) const { return occ_.at(offset(x)) != 0; }
  long label(int x) const { return label_.at(offset(x)); }

  /// Density of the sites other than 0 and 1.
  double empirical_density() const {
    std::size_t count = 0, sites = 0;
    for (int x = left_; x <= right_; ++x) {
      if (x == 0 || x == 1) continue;
      ++sites;
      count += occ_[offset(x)];
    }
    return sites ? static_cast<double>(count) / static_cast<double>(sites) : 0.0;
  }

  /// Particle labels decrease and hole labels increase from left to right.
  bool labels_ordered() const {
    long last_p = std::numeric_limits<long>::max();
    long last_h = std::numeric_limits<long>::min();
    for (std::size_t k = 0; k < occ_.size(); ++k) {
      if (occ_[k]) {
        if (label_[k] >= last_p) return false;
        last_p = label_[k];
      } else {
        if (label_[k] <= last_h) return false;
        last_h = label_[k];
      }
    }
    return true;
  }

 private:
  void relabel() {
    long p = 1, h = -1;
    for (int x = -1; x >= left_; --x) label_[offset(x)] = occ_[offset(x)] ? p++ : h--;
    p = -1;
    h = 1;
    for (int x = 2; x <= right_; ++x) label_[offset(x)] = occ_[offset(x)] ? p-- : h++;
    label_[offset(0)] = 0;
    label_[offset(1)] = 0;
  }

  friend TasepTrajectory simulate(TasepState state, double horizon, std::uint64_t seed, const TasepOptions& opt);

  std::size_t offset(int x) const {
    if (x < left_ || x > right_) throw std::out_of_range("site outside window");
    return static_cast<std::size_t>(x - left_);
  }

  double rho_;
  int left_;
  int right_;
  std::vector<std::uint8_t> occ_;
  std::vector<long> label_;
};

inline TasepState init_palm_conditioned(double rho, int left, int right, std::uint64_t seed) {
  return TasepState(rho, left, right, seed);
}

struct TasepTrajectory {
  TasepState initial;
  TasepState final_state;
  double horizon = 0.0;
  double end_time = 0.0;
  int track = 0;
  std::vector<double> exchange;        // (track+1)^2, row i, column j; NaN when not reached
  std::vector<int> particle_position;  // final P_j, j <= track
  std::vector<int> hole_position;      // final H_i, i <= track
  std::vector<double> p0_jumps;
  std::vector<double> h0_jumps;
  std::vector<TasepEvent> log;
  std::size_t events = 0;
  std::size_t identity_checks = 0;
  std::size_t identity_failures = 0;
  bool margin_hit = false;
  bool invariant_failure = false;

  bool valid() const noexcept { return !margin_hit && !invariant_failure; }
  bool recorded(int i, int j) const { return !std::isnan(T(i, j)); }
  double T(int i, int j) const {
    if (i < 0 || j < 0 || i > track || j > track) throw std::out_of_range("exchange index outside tracking bound");
    return exchange[static_cast<std::size_t>(i) * static_cast<std::size_t>(track + 1) + static_cast<std::size_t>(j)];
  }
  bool complete() const {
    for (double v : exchange) {
      if (std::isnan(v)) return false;
    }
    return true;
  }
};

/// Event-driven dynamics: every (1,0) edge carries a unit-rate exponential
/// clock, drawn when the edge becomes active. Particles at the right edge
/// cannot leave and nothing enters at the left edge.
inline TasepTrajectory simulate(TasepState state, double horizon, std::uint64_t seed, const TasepOptions& opt = {}) {
  if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be nonnegative");
  if (opt.track < 0) throw std::invalid_argument("tracking bound must be nonnegative");
  const int track = opt.track;
  TasepTrajectory tr{state, state, horizon, 0.0, track, {}, {}, {}, {}, {}, {}, 0, 0, 0, false, false};
  tr.exchange.assign(static_cast<std::size_t>(track + 1) * static_cast<std::size_t>(track + 1),
                     std::numeric_limits<double>::quiet_NaN());
  tr.exchange[0] = 0.0;
  std::size_t remaining = tr.exchange.size() - 1;

  TasepState& s = tr.final_state;
  const int left = s.left_;
  const int right = s.right_;
  const std::size_t edges = static_cast<std::size_t>(right - left);  // edge e joins left+e and left+e+1
  std::vector<std::uint32_t> version(edges, 0);
  using Clock = std::tuple<double, std::size_t, std::uint32_t>;
  std::priority_queue<Clock, std::vector<Clock>, std::greater<>> heap;
  CounterStream rng(seed, Stream::kTasepClock);
  auto active = [&](std::size_t e) { return s.occ_[e] == 1 && s.occ_[e + 1] == 0; };
  auto arm = [&](std::size_t e, double now) {
    ++version[e];
    if (active(e)) heap.emplace(now + rng.exponential(1.0), e, version[e]);
  };
  for (std::size_t e = 0; e < edges; ++e) arm(e, 0.0);

  auto tracked = [track](long v) { return v >= 0 && v <= track; };
  auto near_edge = [&](int x) { return x - left < opt.margin || right - x < opt.margin; };
  for (int x = left; x <= right; ++x) {
    if (tracked(s.label_[s.offset(x)]) && near_edge(x)) tr.margin_hit = true;
  }

  double now = 0.0;
  while (!heap.empty() && !tr.margin_hit) {
    const auto [t, e, ver] = heap.top();
    if (t > horizon) break;
    heap.pop();
    if (ver != version[e]) continue;
    now = t;
    const int x = left + static_cast<int>(e);
    const long pj = s.label_[e];
    const long hi = s.label_[e + 1];
    s.occ_[e] = 0;
    s.occ_[e + 1] = 1;
    s.label_[e] = hi;
    s.label_[e + 1] = pj;
    ++tr.events;
    if (pj >= 0 && hi >= 0) {
      ++tr.identity_checks;
      if (x + 1 != hi - pj + 1 || x != hi - pj) ++tr.identity_failures;
    }
    if (tracked(pj) && tracked(hi)) {
      double& cell = tr.exchange[static_cast<std::size_t>(hi) * static_cast<std::size_t>(track + 1) +
                                 static_cast<std::size_t>(pj)];
      if (std::isnan(cell)) --remaining;
      cell = now;
    }
    if (pj == 0) tr.p0_jumps.push_back(now);
    if (hi == 0) tr.h0_jumps.push_back(now);
    if ((tracked(pj) && near_edge(x + 1)) || (tracked(hi) && near_edge(x))) tr.margin_hit = true;
    if (opt.record_log) {
      tr.log.push_back({now, 'P', pj, x + 1});
      tr.log.push_back({now, 'H', hi, x});
    }
    if (opt.check_invariants && !s.labels_ordered()) {
      tr.invariant_failure = true;
      break;
    }
    arm(e, now);
    if (e > 0) arm(e - 1, now);
    if (e + 1 < edges) arm(e + 1, now);
    if (opt.stop_when_complete && remaining == 0) break;
  }
  tr.end_time = (opt.stop_when_complete && remaining == 0) ? now : horizon;

  tr.particle_position.assign(static_cast<std::size_t>(track + 1), std::numeric_limits<int>::min());
  tr.hole_position.assign(static_cast<std::size_t>(track + 1), std::numeric_limits<int>::min());
  for (int x = left; x <= right; ++x) {
    const long v = s.label_[s.offset(x)];
    if (!tracked(v)) continue;
    (s.occ_[s.offset(x)] ? tr.particle_position : tr.hole_position)[static_cast<std::size_t>(v)] = x;
  }
  return tr;
}

/// Palm-conditioned start on the default window, then simulation.
inline TasepTrajectory run_tasep(double rho, double horizon, std::uint64_t seed, const TasepOptions& opt = {}) {
  const int w = default_half_width(horizon);
  return simulate(init_palm_conditioned(rho, -w, w + 1, seed), horizon, seed, opt);
}

struct BurkeMarginals {
  std::vector<double> particle;  // jump times of P_0
  std::vector<double> hole;      // jump times of H_0
};

inline BurkeMarginals burke_marginals(const TasepTrajectory& tr) { return {tr.p0_jumps, tr.h0_jumps}; }

/// Differences of consecutive event times, starting from time 0.
inline std::vector<double> interarrivals(const std::vector<double>& times) {
  std::vector<double> out;
  out.reserve(times.size());
  double last = 0.0;
  for (double t : times) {
    out.push_back(t - last);
    last = t;
  }
  return out;
}

inline void write_event_log_csv(std::ostream& out, const TasepTrajectory& tr) {
  out << "t,kind,label,site\n";
  for (const TasepEvent& ev : tr.log) {
    out << format_double(ev.t) << ',' << ev.kind << ',' << ev.label << ',' << ev.site << '\n';
  }
}

inline void write_exchange_csv(std::ostream& out, const TasepTrajectory& tr) {
  out << "i,j,T\n";
  for (int i = 0; i <= tr.track; ++i) {
    for (int j = 0; j <= tr.track; ++j) {
      out << i << ',' << j << ',';
      if (tr.recorded(i, j)) out << format_double(tr.T(i, j));
      out << '\n';
    }
  }
}

}  // namespace lpp
