#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "netbrd/game.hpp"
#include "netbrd/rng.hpp"

namespace netbrd {

// ---------------------------------------------------------------------------
// Schedules: which player revises in period k.
// ---------------------------------------------------------------------------

class Schedule {
 public:
  enum class Kind { RoundRobin, Cyclic, RandomUniform, ScriptedThenRoundRobin };

  static Schedule round_robin(int n) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    return round_robin_order(std::move(order), n);
  }

  static Schedule round_robin_order(std::vector<int> order, int n) {
    Schedule s(Kind::RoundRobin, n);
    s.sequence_ = std::move(order);
    s.check_players(s.sequence_);
    if (static_cast<int>(s.sequence_.size()) != n)
      throw std::invalid_argument("round-robin ordering must list every player once");
    std::vector<char> seen(n, 0);
    for (int p : s.sequence_) {
      if (seen[p]) throw std::invalid_argument("round-robin ordering must list every player once");
      seen[p] = 1;
    }
    return s;
  }

  // Explicit finite sequence repeated cyclically.
  static Schedule cyclic(std::vector<int> seq, int n) {
    if (seq.empty()) throw std::invalid_argument("cyclic schedule needs at least one period");
    Schedule s(Kind::Cyclic, n);
    s.sequence_ = std::move(seq);
    s.check_players(s.sequence_);
    return s;
  }

  // Seeded uniform draw each period; regularity is not guaranteed.
  static Schedule random_uniform(int n, std::uint64_t seed) {
    Schedule s(Kind::RandomUniform, n);
    s.seed_ = seed;
    return s;
  }

  static Schedule scripted_then_round_robin(std::vector<int> prefix, int n) {
    Schedule s(Kind::ScriptedThenRoundRobin, n);
    s.prefix_ = std::move(prefix);
    s.check_players(s.prefix_);
    s.sequence_.resize(n);
    for (int i = 0; i < n; ++i) s.sequence_[i] = i;
    return s;
  }

  Kind kind() const { return kind_; }
  int players() const { return n_; }
  std::uint64_t seed() const { return seed_; }

  // Window length used for regular-updating checks and convergence declaration.
  int window_hint() const {
    switch (kind_) {
      case Kind::RoundRobin: return n_;
      case Kind::Cyclic: return static_cast<int>(sequence_.size());
      default: return n_;
    }
  }

  bool regularity_guaranteed() const { return kind_ == Kind::RoundRobin; }

  std::vector<int> materialize(long horizon) const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(horizon));
    switch (kind_) {
      case Kind::RoundRobin:
      case Kind::Cyclic: {
        const auto len = sequence_.size();
        for (long k = 0; k < horizon; ++k) out.push_back(sequence_[static_cast<std::size_t>(k) % len]);
        break;
      }
      case Kind::RandomUniform: {
        Rng rng(seed_);
        for (long k = 0; k < horizon; ++k) out.push_back(static_cast<int>(rng.below(n_)));
        break;
      }
      case Kind::ScriptedThenRoundRobin: {
        for (long k = 0; k < horizon; ++k) {
          if (k < static_cast<long>(prefix_.size()))
            out.push_back(prefix_[static_cast<std::size_t>(k)]);
          else
            out.push_back(sequence_[static_cast<std::size_t>(k - prefix_.size()) % sequence_.size()]);
        }
        break;
      }
    }
    return out;
  }

  std::string describe() const {
    std::ostringstream os;
    switch (kind_) {
      case Kind::RoundRobin: {
        os << "round-robin(";
        for (std::size_t i = 0; i < sequence_.size(); ++i) os << (i ? "," : "") << sequence_[i] + 1;
        os << ")";
        break;
      }
      case Kind::Cyclic: {
        os << "cyclic(";
        for (std::size_t i = 0; i < sequence_.size(); ++i) os << (i ? "," : "") << sequence_[i] + 1;
        os << ")";
        break;
      }
      case Kind::RandomUniform:
        os << "random-uniform(seed=" << seed_ << ",regularity-not-guaranteed)";
        break;
      case Kind::ScriptedThenRoundRobin:
        os << "scripted-prefix(" << prefix_.size() << ")+round-robin";
        break;
    }
    return os.str();
  }

 private:
  Schedule(Kind kind, int n) : kind_(kind), n_(n) {
    if (n <= 0) throw std::invalid_argument("schedule needs a positive player count");
  }
  void check_players(const std::vector<int>& seq) const {
    for (int p : seq)
      if (p < 0 || p >= n_) throw std::invalid_argument("schedule refers to an unknown player");
  }

  Kind kind_;
  int n_;
  std::uint64_t seed_ = 0;
  std::vector<int> sequence_;
  std::vector<int> prefix_;
};

// True iff every player appears in every window of K consecutive periods over
// K * window_count materialized periods (Definition of regular updating).
inline bool validate_schedule_regular(const Schedule& schedule, int window, int window_count) {
  if (window <= 0 || window_count <= 0)
    throw std::invalid_argument("window and window_count must be positive");
  const long horizon = static_cast<long>(window) * window_count;
  const std::vector<int> seq = schedule.materialize(horizon);
  const int n = schedule.players();
  std::vector<long> last_seen(n, -1);
  // Sliding check: position k is fine if every player occurs in (k-window, k].
  for (long k = 0; k < horizon; ++k) {
    last_seen[seq[static_cast<std::size_t>(k)]] = k;
    if (k + 1 >= window) {
      for (int p = 0; p < n; ++p)
        if (last_seen[p] <= k - window) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Dynamic specifications (Definition 4) with concrete pickers.
// ---------------------------------------------------------------------------

enum class DynamicKind { BestResponse, Approach, Centered };

enum class OvershootRule { Positive, Negative, Alternating, Random };

template <class S>
struct DynamicSpec {
  DynamicKind kind = DynamicKind::BestResponse;
  S beta{0};           // BRAD approach parameter, in [0, 1)
  S alpha{0};          // BRCD centering parameter, in [0, 1)
  S step_fraction{1};  // lambda in [0, 1]; effective factor is lambda * beta (or alpha)
  OvershootRule overshoot = OvershootRule::Alternating;

  static DynamicSpec brd() { return DynamicSpec{}; }

  static DynamicSpec brad(S beta, S lambda = S(1)) {
    DynamicSpec d;
    d.kind = DynamicKind::Approach;
    d.beta = std::move(beta);
    d.step_fraction = std::move(lambda);
    d.validate();
    return d;
  }

  static DynamicSpec brcd(S alpha, S lambda = S(1), OvershootRule rule = OvershootRule::Alternating) {
    DynamicSpec d;
    d.kind = DynamicKind::Centered;
    d.alpha = std::move(alpha);
    d.step_fraction = std::move(lambda);
    d.overshoot = rule;
    d.validate();
    return d;
  }

  void validate() const {
    if (beta < S(0) || beta >= S(1)) throw std::invalid_argument("approach parameter must lie in [0,1)");
    if (alpha < S(0) || alpha >= S(1)) throw std::invalid_argument("centering parameter must lie in [0,1)");
    if (step_fraction < S(0) || step_fraction > S(1))
      throw std::invalid_argument("step fraction must lie in [0,1]");
  }

  bool deterministic() const {
    return kind != DynamicKind::Centered || overshoot != OvershootRule::Random;
  }

  std::string describe() const {
    std::ostringstream os;
    switch (kind) {
      case DynamicKind::BestResponse: os << "BRD"; break;
      case DynamicKind::Approach:
        os << "BRAD(beta=" << to_double(beta) << ",lambda=" << to_double(step_fraction) << ")";
        break;
      case DynamicKind::Centered:
        os << "BRCD(alpha=" << to_double(alpha) << ",lambda=" << to_double(step_fraction) << ",overshoot=";
        switch (overshoot) {
          case OvershootRule::Positive: os << "+"; break;
          case OvershootRule::Negative: os << "-"; break;
          case OvershootRule::Alternating: os << "alternating"; break;
          case OvershootRule::Random: os << "random"; break;
        }
        os << ")";
        break;
    }
    return os.str();
  }
};

// Per-run mutable state for the overshoot sign rule (alternating starts at -).
struct OvershootState {
  int sign = -1;
  int take(OvershootRule rule, Rng& rng) {
    switch (rule) {
      case OvershootRule::Positive: return 1;
      case OvershootRule::Negative: return -1;
      case OvershootRule::Alternating: {
        const int s = sign;
        sign = -sign;
        return s;
      }
      case OvershootRule::Random: return rng.rademacher();
    }
    return 1;
  }
};

template <class S>
struct StepResult {
  S new_value;
  S br;
};

// One revision of player i. BRD jumps to b; BRAD lands at b + lambda*beta*(x-b)
// (same side, no crossing); BRCD lands at b + s*lambda*alpha*|x-b| clamped to the
// box (clamping moves toward b, so the centering inequality survives).
template <class S>
StepResult<S> step_player(const Game<S>& g, const std::vector<S>& x, int i,
                          const DynamicSpec<S>& spec, Rng& rng, OvershootState& ost) {
  const S b = best_response(g, x, i);
  switch (spec.kind) {
    case DynamicKind::BestResponse:
      return {b, b};
    case DynamicKind::Approach: {
      const S factor = spec.step_fraction * spec.beta;
      return {b + factor * (x[i] - b), b};
    }
    case DynamicKind::Centered: {
      const S factor = spec.step_fraction * spec.alpha;
      const S gap = abs_value(x[i] - b);
      const int s = ost.take(spec.overshoot, rng);
      const S target = s > 0 ? S(b + factor * gap) : S(b - factor * gap);
      return {g.clamp_to_box(target, i), b};
    }
  }
  throw std::logic_error("unreachable dynamic kind");
}

// Audits a single revision against the Definition 4 inequalities.
template <class S>
bool validate_update(const S& x_before, const S& x_after, const S& br, DynamicKind kind,
                     const S& parameter, const S& tol = S(0)) {
  switch (kind) {
    case DynamicKind::BestResponse:
      return abs_value(x_after - br) <= tol;
    case DynamicKind::Approach: {
      if (abs_value(x_after - br) > parameter * abs_value(x_before - br) + tol) return false;
      if (x_after == br) return true;
      return sign_of(S(x_after - br)) == sign_of(S(x_before - br));
    }
    case DynamicKind::Centered:
      return abs_value(x_after - br) <= parameter * abs_value(x_before - br) + tol;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Trajectories and cycle detection.
// ---------------------------------------------------------------------------

enum class VerdictKind { Converged, CycleCertified, HorizonExhausted };

inline const char* to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::Converged: return "converged";
    case VerdictKind::CycleCertified: return "cycle-certified";
    default: return "horizon-exhausted";
  }
}

template <class S>
struct UpdateRecord {
  long period;
  int player;          // 0-based
  S br_value;          // best response used by the picker
  std::vector<S> profile;  // post-update profile x^{period+1}
};

template <class S>
struct Trajectory {
  std::vector<S> initial;
  std::vector<UpdateRecord<S>> records;
  VerdictKind verdict = VerdictKind::HorizonExhausted;
  long converged_at = -1;
  long cycle_entry = -1;
  long cycle_length = 0;
  std::string schedule_desc;
  std::string dynamic_desc;
  std::uint64_t seed = 0;

  const std::vector<S>& profile_at(long k) const {  // x^k
    return k == 0 ? initial : records[static_cast<std::size_t>(k - 1)].profile;
  }
  long profile_count() const { return static_cast<long>(records.size()) + 1; }
};

template <class S>
struct RunOptions {
  long horizon = 100000;
  S conv_tol = default_nash_tol<S>();
  bool detect_cycles = is_exact_scalar<S>;
  std::optional<double> quantization;  // floating-mode certification grid
};

namespace detail {

// First-occurrence profile index plus the nontriviality bookkeeping of
// Definition 6 (a revisit counts only if some intermediate profile differed).
template <class Key>
class CycleDetector {
 public:
  explicit CycleDetector(Key initial) { first_.emplace(std::move(initial), 0); }

  // Returns (entry, length) when profile x^{k+1} closes a nontrivial cycle.
  std::optional<std::pair<long, long>> observe(Key profile, long period_done, bool changed) {
    const long index = period_done + 1;
    if (changed) last_change_ = period_done;
    auto it = first_.find(profile);
    if (it != first_.end()) {
      if (last_change_ >= it->second) return std::make_pair(it->second, index - it->second);
      return std::nullopt;
    }
    first_.emplace(std::move(profile), index);
    return std::nullopt;
  }

 private:
  std::map<Key, long> first_;
  long last_change_ = -1;
};

inline std::vector<long long> quantize_profile(const std::vector<double>& x, double grid) {
  std::vector<long long> q(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) q[i] = std::llround(x[i] / grid);
  return q;
}

}  // namespace detail

template <class S>
Trajectory<S> run(const Game<S>& g, std::vector<S> x0, const Schedule& schedule,
                  const DynamicSpec<S>& spec, const RunOptions<S>& opt, std::uint64_t seed = 0);

// Offline cycle scan over a recorded trajectory (exact scalars).
inline std::optional<std::pair<long, long>> detect_cycle(const Trajectory<Rational>& traj) {
  detail::CycleDetector<std::vector<Rational>> det(traj.initial);
  const std::vector<Rational>* prev = &traj.initial;
  for (const auto& rec : traj.records) {
    const bool changed = rec.profile != *prev;
    auto hit = det.observe(rec.profile, rec.period, changed);
    if (hit) return hit;
    prev = &rec.profile;
  }
  return std::nullopt;
}

// Offline scan for floating trajectories on a declared quantization grid.
// Candidates are accepted as reported by the hash only (no replay is possible
// from a recorded trajectory alone); run() performs the replay verification.
inline std::optional<std::pair<long, long>> detect_cycle(const Trajectory<double>& traj, double grid) {
  if (!(grid > 0)) throw std::invalid_argument("quantization grid must be positive");
  detail::CycleDetector<std::vector<long long>> det(detail::quantize_profile(traj.initial, grid));
  std::vector<long long> prev = detail::quantize_profile(traj.initial, grid);
  for (const auto& rec : traj.records) {
    auto q = detail::quantize_profile(rec.profile, grid);
    const bool changed = q != prev;
    auto hit = det.observe(q, rec.period, changed);
    if (hit) return hit;
    prev = std::move(q);
  }
  return std::nullopt;
}

namespace detail {

// Replays one candidate period of the quantized dynamic and checks that it
// returns to the starting grid point. Only deterministic pickers can be replayed.
template <class S>
bool verify_quantized_cycle(const Game<S>& g, const std::vector<long long>& start, double grid,
                            const std::vector<int>& players, const DynamicSpec<S>& spec) {
  std::vector<S> x(start.size());
  for (std::size_t i = 0; i < start.size(); ++i)
    x[i] = g.clamp_to_box(static_cast<S>(static_cast<double>(start[i]) * grid), static_cast<int>(i));
  Rng rng(0);
  OvershootState ost;
  for (int p : players) {
    const auto st = step_player(g, x, p, spec, rng, ost);
    const double snapped = std::llround(to_double(st.new_value) / grid) * grid;
    x[p] = g.clamp_to_box(static_cast<S>(snapped), p);
  }
  return quantize_profile(x, grid) == start;
}

}  // namespace detail

// Executes a one-sided dynamic. Convergence is declared once the profile passes
// is_nash at conv_tol and one full regular window produced no change above
// conv_tol; exact revisits are certified as cycles on the fly.
template <class S>
Trajectory<S> run(const Game<S>& g, std::vector<S> x0, const Schedule& schedule,
                  const DynamicSpec<S>& spec, const RunOptions<S>& opt, std::uint64_t seed) {
  spec.validate();
  if (opt.horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (schedule.players() != g.size()) throw std::invalid_argument("schedule player count mismatch");
  if (!g.in_box(x0)) throw std::invalid_argument("initial profile is outside the action box");
  if (opt.conv_tol < S(0)) throw std::invalid_argument("convergence tolerance must be nonnegative");

  constexpr bool exact = is_exact_scalar<S>;
  if (opt.detect_cycles && !exact) {
    if (!opt.quantization)
      throw std::invalid_argument(
          "cycle certification in floating mode requires a quantization grid");
    if (!(*opt.quantization > 0)) throw std::invalid_argument("quantization grid must be positive");
    if (!spec.deterministic())
      throw std::invalid_argument(
          "quantized cycle certification requires a deterministic dynamic (no random overshoot)");
  }

  Trajectory<S> traj;
  traj.initial = x0;
  traj.schedule_desc = schedule.describe();
  traj.dynamic_desc = spec.describe();
  traj.seed = seed;

  const std::vector<int> players = schedule.materialize(opt.horizon);
  const int window = schedule.window_hint();

  Rng rng(seed);
  OvershootState ost;

  std::optional<detail::CycleDetector<std::vector<S>>> exact_detector;
  std::optional<detail::CycleDetector<std::vector<long long>>> grid_detector;
  std::vector<long long> prev_q;
  if (opt.detect_cycles) {
    if constexpr (exact) {
      exact_detector.emplace(x0);
    } else {
      prev_q = detail::quantize_profile(x0, *opt.quantization);
      grid_detector.emplace(prev_q);
    }
  }

  std::vector<S> x = std::move(x0);
  long quiet_streak = 0;
  for (long k = 0; k < opt.horizon; ++k) {
    const int i = players[static_cast<std::size_t>(k)];
    const auto st = step_player(g, x, i, spec, rng, ost);
    const S old = x[i];
    x[i] = st.new_value;
    const bool changed = !(x[i] == old);
    traj.records.push_back({k, i, st.br, x});

    if (opt.detect_cycles) {
      if constexpr (exact) {
        if (auto hit = exact_detector->observe(x, k, changed)) {
          traj.verdict = VerdictKind::CycleCertified;
          traj.cycle_entry = hit->first;
          traj.cycle_length = hit->second;
          return traj;
        }
      } else {
        auto q = detail::quantize_profile(x, *opt.quantization);
        const bool grid_changed = q != prev_q;
        prev_q = q;
        if (auto hit = grid_detector->observe(std::move(q), k, grid_changed)) {
          // Re-verify the candidate by exact replay of one period on the grid.
          const long entry = hit->first;
          const long len = hit->second;
          std::vector<int> slice(players.begin() + entry, players.begin() + entry + len);
          const auto start = detail::quantize_profile(
              entry == 0 ? traj.initial : traj.records[static_cast<std::size_t>(entry - 1)].profile,
              *opt.quantization);
          if (detail::verify_quantized_cycle(g, start, *opt.quantization, slice, spec)) {
            traj.verdict = VerdictKind::CycleCertified;
            traj.cycle_entry = entry;
            traj.cycle_length = len;
            return traj;
          }
        }
      }
    }

    quiet_streak = abs_value(S(x[i] - old)) <= opt.conv_tol ? quiet_streak + 1 : 0;
    if (quiet_streak >= window && is_nash(g, x, opt.conv_tol)) {
      traj.verdict = VerdictKind::Converged;
      traj.converged_at = k;
      return traj;
    }
  }
  traj.verdict = VerdictKind::HorizonExhausted;
  return traj;
}

}  // namespace netbrd
