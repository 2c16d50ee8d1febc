#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "netbrd/analysis.hpp"
#include "netbrd/game.hpp"
#include "netbrd/spectral.hpp"

namespace netbrd {

enum class BoundSide : char { AtZero, Interior, AtCap };

inline char to_char(BoundSide b) {
  switch (b) {
    case BoundSide::AtZero: return '0';
    case BoundSide::Interior: return 'i';
    default: return 'c';
  }
}

template <class S>
struct Equilibrium {
  std::vector<S> profile;
  std::vector<BoundSide> pattern;
  double residual = 0.0;  // max_i |x_i - b_i(x)|, evaluated in the game's arithmetic
};

template <class S>
struct EquilibriumSet {
  std::vector<Equilibrium<S>> equilibria;
  bool complete = false;              // exhaustive over all boundary patterns
  bool degenerate_continuum = false;  // some singular interior block had consistent rhs
};

namespace detail {

// Dense Gaussian elimination with partial pivoting; exact when S is rational.
// Returns 0 = unique solution, 1 = singular but consistent, 2 = inconsistent.
template <class S>
int solve_linear(int n, std::vector<S> a, std::vector<S> rhs, std::vector<S>& x, const S& pivot_tol) {
  std::vector<int> cols(n);
  for (int j = 0; j < n; ++j) cols[j] = j;
  int rank = n;
  for (int step = 0; step < n; ++step) {
    int pr = -1, pc = -1;
    S best(0);
    for (int i = step; i < n; ++i) {
      for (int j = step; j < n; ++j) {
        const S mag = abs_value(a[static_cast<std::size_t>(i) * n + j]);
        if (mag > best) {
          best = mag;
          pr = i;
          pc = j;
        }
      }
    }
    if (pr < 0 || !(best > pivot_tol)) {
      rank = step;
      break;
    }
    if (pr != step) {
      for (int j = 0; j < n; ++j)
        std::swap(a[static_cast<std::size_t>(pr) * n + j], a[static_cast<std::size_t>(step) * n + j]);
      std::swap(rhs[pr], rhs[step]);
    }
    if (pc != step) {
      for (int i = 0; i < n; ++i)
        std::swap(a[static_cast<std::size_t>(i) * n + pc], a[static_cast<std::size_t>(i) * n + step]);
      std::swap(cols[pc], cols[step]);
    }
    const S pivot = a[static_cast<std::size_t>(step) * n + step];
    for (int i = step + 1; i < n; ++i) {
      const S factor = a[static_cast<std::size_t>(i) * n + step] / pivot;
      if (factor == S(0)) continue;
      for (int j = step; j < n; ++j)
        a[static_cast<std::size_t>(i) * n + j] -= factor * a[static_cast<std::size_t>(step) * n + j];
      rhs[i] -= factor * rhs[step];
    }
  }
  if (rank < n) {
    for (int i = rank; i < n; ++i)
      if (abs_value(rhs[i]) > pivot_tol) return 2;
    return 1;
  }
  std::vector<S> y(n, S(0));
  for (int i = n - 1; i >= 0; --i) {
    S acc = rhs[i];
    for (int j = i + 1; j < n; ++j) acc -= a[static_cast<std::size_t>(i) * n + j] * y[j];
    y[i] = acc / a[static_cast<std::size_t>(i) * n + i];
  }
  x.assign(n, S(0));
  for (int j = 0; j < n; ++j) x[cols[j]] = y[j];
  return 0;
}

}  // namespace detail

// Exhaustive fixed-point enumeration over the 3^n boundary patterns of Lemma 1's
// piecewise-linear best responses. A pattern fixes each coordinate at 0, at its
// cap, or interior; interior coordinates solve W_SS x_S = t_S - W_SB x_B and the
// solution is kept when it satisfies the pattern's clamping conditions within tol.
template <class S>
EquilibriumSet<S> solve_enumerate(const Game<S>& g, const S& tol) {
  const int n = g.size();
  if (n > 12) throw std::invalid_argument("pattern enumeration is limited to n <= 12");
  if (tol < S(0)) throw std::invalid_argument("tolerance must be nonnegative");
  const auto& net = g.network();

  EquilibriumSet<S> out;
  out.complete = true;

  long patterns = 1;
  for (int i = 0; i < n; ++i) patterns *= 3;

  std::vector<BoundSide> pattern(n);
  std::vector<S> x(n);
  std::vector<int> interior;
  for (long code = 0; code < patterns; ++code) {
    long c = code;
    bool feasible = true;
    interior.clear();
    for (int i = 0; i < n; ++i, c /= 3) {
      const int digit = static_cast<int>(c % 3);
      if (digit == 0) {
        pattern[i] = BoundSide::AtZero;
        x[i] = S(0);
      } else if (digit == 1) {
        pattern[i] = BoundSide::Interior;
        interior.push_back(i);
      } else {
        pattern[i] = BoundSide::AtCap;
        if (!g.cap(i)) {
          feasible = false;  // no at-cap pattern for unbounded players
          break;
        }
        x[i] = *g.cap(i);
      }
    }
    if (!feasible) continue;

    const int m = static_cast<int>(interior.size());
    if (m > 0) {
      std::vector<S> a(static_cast<std::size_t>(m) * m);
      std::vector<S> rhs(m);
      for (int r = 0; r < m; ++r) {
        const int i = interior[r];
        S acc = g.target(i);
        for (int j = 0; j < n; ++j) {
          if (pattern[j] == BoundSide::Interior || j == i) continue;
          acc -= net(i, j) * x[j];
        }
        rhs[r] = acc;
        for (int s = 0; s < m; ++s) a[static_cast<std::size_t>(r) * m + s] = net(i, interior[s]);
      }
      std::vector<S> sol;
      const int status = detail::solve_linear(m, std::move(a), std::move(rhs), sol, tol);
      if (status == 1) {
        out.degenerate_continuum = true;
        continue;
      }
      if (status == 2) continue;
      for (int r = 0; r < m; ++r) x[interior[r]] = sol[r];
    }

    // Clamping conditions of Eq. 2 per coordinate, within tol.
    bool consistent = true;
    for (int i = 0; i < n && consistent; ++i) {
      const S u = unconstrained_best_response(g, x, i);
      switch (pattern[i]) {
        case BoundSide::AtZero:
          consistent = u <= tol;
          break;
        case BoundSide::Interior:
          consistent = x[i] >= S(0) - tol && (!g.cap(i) || x[i] <= *g.cap(i) + tol);
          break;
        case BoundSide::AtCap:
          consistent = u >= *g.cap(i) - tol;
          break;
      }
    }
    if (!consistent) continue;

    std::vector<S> clamped(n);
    for (int i = 0; i < n; ++i) clamped[i] = g.clamp_to_box(x[i], i);

    bool duplicate = false;
    for (const auto& eq : out.equilibria) {
      bool same = true;
      for (int i = 0; i < n && same; ++i)
        if (abs_value(S(eq.profile[i] - clamped[i])) > tol) same = false;
      if (same) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;

    S residual(0);
    for (int i = 0; i < n; ++i) {
      const S r = abs_value(S(clamped[i] - best_response(g, clamped, i)));
      if (r > residual) residual = r;
    }
    out.equilibria.push_back({clamped, pattern, to_double(residual)});
  }
  return out;
}

template <class S>
EquilibriumSet<S> solve_enumerate(const Game<S>& g) {
  return solve_enumerate(g, default_nash_tol<S>());
}

// Round-robin best-response iteration under a certified weak-influences witness;
// terminates by the Theorem 2 contraction bound.
template <class S>
std::vector<S> solve_contraction(const Game<S>& g, std::vector<S> x0, const ScalingVector<S>& witness,
                                 const S& tol, int max_passes = 10000) {
  check_scaling(witness, g.size());
  if (!is_weak_influences(rescale(g.network(), witness)))
    throw std::invalid_argument("supplied scaling is not a weak-influences witness");
  if (!g.in_box(x0)) throw std::invalid_argument("starting profile is outside the action box");
  if (tol < S(0)) throw std::invalid_argument("tolerance must be nonnegative");
  std::vector<S> x = std::move(x0);
  for (int pass = 0; pass < max_passes; ++pass) {
    for (int i = 0; i < g.size(); ++i) x[i] = best_response(g, x, i);
    S residual(0);
    for (int i = 0; i < g.size(); ++i) {
      const S r = witness[i] * abs_value(S(x[i] - best_response(g, x, i)));
      if (r > residual) residual = r;
    }
    if (residual <= tol) return x;
  }
  throw std::runtime_error("contraction iteration did not reach the tolerance within max_passes");
}

enum class UniquenessVerdict {
  UniqueSpectral,      // rho(|W| - I) < 1 certified
  UniqueEnumerated,    // enumeration found exactly one
  MultipleEnumerated,
  DegenerateContinuum,
  Unknown,
};

inline const char* to_string(UniquenessVerdict v) {
  switch (v) {
    case UniquenessVerdict::UniqueSpectral: return "unique (spectral certificate)";
    case UniquenessVerdict::UniqueEnumerated: return "unique (enumerated)";
    case UniquenessVerdict::MultipleEnumerated: return "multiple equilibria";
    case UniquenessVerdict::DegenerateContinuum: return "degenerate continuum";
    default: return "unknown";
  }
}

struct UniquenessReport {
  UniquenessVerdict verdict = UniquenessVerdict::Unknown;
  int count = -1;  // enumeration count when used
  SpectralBracket bracket{};
};

inline UniquenessReport check_uniqueness(const Game<double>& g, int enumeration_budget = 8) {
  UniquenessReport rep;
  rep.bracket = spectral_radius_abs(g.network());
  if (rep.bracket.upper < 1.0) {
    rep.verdict = UniquenessVerdict::UniqueSpectral;
    return rep;
  }
  if (g.size() <= enumeration_budget) {
    const auto set = solve_enumerate(g, 1e-9);
    rep.count = static_cast<int>(set.equilibria.size());
    if (set.degenerate_continuum)
      rep.verdict = UniquenessVerdict::DegenerateContinuum;
    else if (rep.count == 1)
      rep.verdict = UniquenessVerdict::UniqueEnumerated;
    else
      rep.verdict = UniquenessVerdict::MultipleEnumerated;
    return rep;
  }
  rep.verdict = UniquenessVerdict::Unknown;
  return rep;
}

}  // namespace netbrd
