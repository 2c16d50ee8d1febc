#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "netbrd/analysis.hpp"
#include "netbrd/game.hpp"
#include "netbrd/rng.hpp"

namespace netbrd {

// Symmetric-network best-response potential: x^T t - (1/2) x^T W x.
template <class S>
S eval_symmetric_quadratic(const Game<S>& g, const std::vector<S>& x) {
  if (!is_symmetric(g.network())) throw std::invalid_argument("network is not symmetric");
  const int n = g.size();
  const auto& net = g.network();
  S acc(0);
  for (int i = 0; i < n; ++i) {
    acc += x[i] * g.target(i);
    S row(0);
    for (int j = 0; j < n; ++j) row += net(i, j) * x[j];
    acc -= x[i] * row / S(2);
  }
  return acc;
}

namespace detail {

// phi^Q expressed through squared scalings: since a_i a_j v_ij = a_i^2 w_ij,
// phi^Q(x) = sum_i s_i x_i t_i - (1/2) sum_ij x_i x_j s_i w_ij with s_i = a_i^2.
// Rational-closed, which is what makes exact-mode ascent checks possible.
template <class S>
S rescaled_quadratic_raw(const Game<S>& g, const std::vector<S>& scaling_sq, const std::vector<S>& x) {
  const int n = g.size();
  const auto& net = g.network();
  S acc(0);
  for (int i = 0; i < n; ++i) {
    acc += scaling_sq[i] * x[i] * g.target(i);
    S row(0);
    for (int j = 0; j < n; ++j) row += net(i, j) * x[j];
    acc -= scaling_sq[i] * x[i] * row / S(2);
  }
  return acc;
}

template <class S>
S weighted_l1_raw(const Game<S>& g, const std::vector<S>& a, const std::vector<S>& x) {
  S acc(0);
  for (int i = 0; i < g.size(); ++i) acc -= a[i] * abs_value(S(x[i] - best_response(g, x, i)));
  return acc;
}

template <class S>
bool is_symmetrize_witness_squared(const Network<S>& net, const std::vector<S>& scaling_sq) {
  for (int k = 0; k < net.size(); ++k) {
    if (!(scaling_sq[k] > S(0))) return false;
    for (int l = k + 1; l < net.size(); ++l)
      if (!(net(k, l) * scaling_sq[k] == net(l, k) * scaling_sq[l])) return false;
  }
  return true;
}

}  // namespace detail

// phi^Q of the Theorem 1 proof, exact-witness form (s_i = a_i^2).
template <class S>
S eval_rescaled_quadratic_squared(const Game<S>& g, const std::vector<S>& scaling_sq,
                                  const std::vector<S>& x) {
  if (static_cast<int>(scaling_sq.size()) != g.size())
    throw std::invalid_argument("scaling length must equal n");
  if constexpr (is_exact_scalar<S>) {
    if (!detail::is_symmetrize_witness_squared(g.network(), scaling_sq))
      throw std::invalid_argument("scaling is not a symmetrize witness");
  }
  return detail::rescaled_quadratic_raw(g, scaling_sq, x);
}

// phi^Q with an explicit scaling vector a; validates that a symmetrizes the
// network within witness_tol.
inline double eval_rescaled_quadratic(const Game<double>& g, const std::vector<double>& a,
                                      const std::vector<double>& x, double witness_tol = 1e-9) {
  check_scaling(a, g.size());
  const Network<double> v = rescale(g.network(), a);
  for (int k = 0; k < g.size(); ++k)
    for (int l = k + 1; l < g.size(); ++l)
      if (std::fabs(v(k, l) - v(l, k)) > witness_tol)
        throw std::invalid_argument("scaling is not a symmetrize witness");
  std::vector<double> sq(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) sq[i] = a[i] * a[i];
  return detail::rescaled_quadratic_raw(g, sq, x);
}

// Analytic gradient of phi^Q: a_i^2 * (t_i - sum_j w_ij x_j).
inline double rescaled_quadratic_gradient(const Game<double>& g, const std::vector<double>& a,
                                          const std::vector<double>& x, int i) {
  double acc = to_double(g.target(i));
  for (int j = 0; j < g.size(); ++j) acc -= g.network()(i, j) * x[j];
  return a[i] * a[i] * acc;
}

// phi'(x) = -sum_i a_i |x_i - b_i(x)| (Proposition 5); a must be a
// weak-externalities witness.
template <class S>
S eval_weighted_l1(const Game<S>& g, const std::vector<S>& a, const std::vector<S>& x) {
  check_scaling(a, g.size());
  if (!is_weak_externalities(rescale(g.network(), a)))
    throw std::invalid_argument("scaling is not a weak-externalities witness");
  return detail::weighted_l1_raw(g, a, x);
}

// ---------------------------------------------------------------------------
// Best-response potential audit (Definition 5).
// ---------------------------------------------------------------------------

struct PotentialSpec {
  enum class Kind { SymmetricQuadratic, RescaledQuadratic, WeightedL1 };
  Kind kind = Kind::SymmetricQuadratic;
  std::vector<double> scaling;  // required by the rescaled variants

  static PotentialSpec symmetric_quadratic() { return {Kind::SymmetricQuadratic, {}}; }
  static PotentialSpec rescaled_quadratic(std::vector<double> a) {
    return {Kind::RescaledQuadratic, std::move(a)};
  }
  static PotentialSpec weighted_l1(std::vector<double> a) { return {Kind::WeightedL1, std::move(a)}; }
};

struct PotentialCounterexample {
  int player = -1;
  std::vector<double> profile;
  double argmax = 0.0;
  double br = 0.0;
};

struct PotentialAuditReport {
  bool ok = true;
  double max_deviation = 0.0;
  long samples = 0;
  std::optional<PotentialCounterexample> counterexample;
};

namespace detail {

// Golden-section maximization on [lo, hi]; sound for the concave / unimodal
// coordinate restrictions the audited potentials have when their witness is valid.
inline double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                 double resolution) {
  static const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > resolution) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2.0;
}

}  // namespace detail

// Samples profiles, maximizes the candidate potential coordinate-wise on a grid
// (locally refined to 1e-8) and compares the argmax with the best response.
// Counterexamples are data, not errors: the check is also used to exhibit that a
// candidate potential fails on a network outside its class.
inline PotentialAuditReport verify_br_potential(const Game<double>& g, const PotentialSpec& spec,
                                                long sample_count, int grid_size, std::uint64_t seed,
                                                double resolution = 1e-4) {
  if (grid_size < 3) throw std::invalid_argument("grid_size must be at least 3");
  if (sample_count < 1) throw std::invalid_argument("sample_count must be positive");
  const int n = g.size();

  std::vector<double> sq;
  if (spec.kind != PotentialSpec::Kind::SymmetricQuadratic) {
    if (static_cast<int>(spec.scaling.size()) != n)
      throw std::invalid_argument("potential scaling length must equal n");
    sq.resize(n);
    for (int i = 0; i < n; ++i) sq[i] = spec.scaling[i] * spec.scaling[i];
  } else {
    if (!is_symmetric(g.network())) throw std::invalid_argument("network is not symmetric");
  }

  auto value = [&](const std::vector<double>& x) -> double {
    switch (spec.kind) {
      case PotentialSpec::Kind::SymmetricQuadratic: {
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
          acc += x[i] * to_double(g.target(i));
          double row = 0.0;
          for (int j = 0; j < n; ++j) row += g.network()(i, j) * x[j];
          acc -= 0.5 * x[i] * row;
        }
        return acc;
      }
      case PotentialSpec::Kind::RescaledQuadratic:
        return detail::rescaled_quadratic_raw(g, sq, x);
      case PotentialSpec::Kind::WeightedL1:
        return detail::weighted_l1_raw(g, spec.scaling, x);
    }
    return 0.0;
  };

  // Surrogate bound for unbounded coordinates: the potentials under audit decay
  // past the best response, so covering it with slack is enough.
  double fallback = 1.0;
  for (int i = 0; i < n; ++i) fallback = std::max(fallback, 2.0 * to_double(g.target(i)) + 1.0);

  Rng rng(seed);
  PotentialAuditReport rep;
  std::vector<double> x(n);
  for (long s = 0; s < sample_count; ++s) {
    for (int i = 0; i < n; ++i) {
      const double hi = g.cap(i) ? to_double(*g.cap(i)) : fallback;
      x[i] = rng.uniform(0.0, hi);
    }
    for (int i = 0; i < n; ++i) {
      const double br = to_double(best_response(g, x, i));
      const double hi = g.cap(i) ? to_double(*g.cap(i)) : std::max(fallback, 2.0 * br + 1.0);
      const double keep = x[i];
      auto slice = [&](double v) {
        x[i] = v;
        const double val = value(x);
        x[i] = keep;
        return val;
      };
      int best_idx = 0;
      double best_val = slice(0.0);
      const double step = hi / (grid_size - 1);
      for (int k = 1; k < grid_size; ++k) {
        const double val = slice(k * step);
        if (val > best_val) {
          best_val = val;
          best_idx = k;
        }
      }
      const double lo = std::max(0.0, (best_idx - 1) * step);
      const double up = std::min(hi, (best_idx + 1) * step);
      const double argmax = detail::golden_section_max(slice, lo, up, 1e-8);
      const double deviation = std::fabs(argmax - br);
      rep.max_deviation = std::max(rep.max_deviation, deviation);
      if (deviation > resolution && !rep.counterexample) {
        rep.ok = false;
        rep.counterexample = PotentialCounterexample{i, x, argmax, br};
      }
      ++rep.samples;
    }
  }
  return rep;
}

}  // namespace netbrd
