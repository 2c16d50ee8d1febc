#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "netbrd/rational.hpp"

namespace netbrd {

// Directed interaction structure: n x n weight matrix with unit diagonal.
// w(i, j) is the effect of player j's good on player i.
template <class S>
class Network {
 public:
  Network(int n, std::vector<S> weights) : n_(n), w_(std::move(weights)) {
    if (n_ <= 0) throw std::invalid_argument("network needs at least one player");
    if (w_.size() != static_cast<std::size_t>(n_) * n_)
      throw std::invalid_argument("weight list length must be n*n");
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        if (!finite_value(w_[idx(i, j)])) throw std::invalid_argument("weights must be finite");
      }
      if (!(w_[idx(i, i)] == S(1))) throw std::invalid_argument("diagonal weights must equal 1");
    }
  }

  static Network from_rows(const std::vector<std::vector<S>>& rows) {
    const int n = static_cast<int>(rows.size());
    std::vector<S> flat;
    flat.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != n) throw std::invalid_argument("weight matrix must be square");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return Network(n, std::move(flat));
  }

  int size() const { return n_; }
  const S& operator()(int i, int j) const { return w_[idx(i, j)]; }
  const std::vector<S>& raw() const { return w_; }

  Network transpose() const {
    std::vector<S> t(w_.size());
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) t[static_cast<std::size_t>(j) * n_ + i] = w_[idx(i, j)];
    return Network(n_, std::move(t));
  }

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

  int n_;
  std::vector<S> w_;
};

template <class S, class T>
Network<T> network_cast(const Network<S>& net) {
  std::vector<T> out;
  out.reserve(net.raw().size());
  for (const auto& v : net.raw()) out.push_back(scalar_from_double<T>(to_double(v)));
  return Network<T>(net.size(), std::move(out));
}

inline Network<Rational> exact_network(const Network<double>& net) {
  std::vector<Rational> out;
  out.reserve(net.raw().size());
  for (double v : net.raw()) out.push_back(rational_from_double(v));
  return Network<Rational>(net.size(), std::move(out));
}

// The only benefit family the dynamics results ever instantiate: f(s) = log(1+s)
// with marginal cost c_i = 1/(1+t_i). Tag kept extensible.
enum class BenefitFamily { Logarithmic };

// Upper bound of a player's action set; nullopt means unbounded.
template <class S>
using Cap = std::optional<S>;

template <class S>
class Game {
 public:
  Game(Network<S> net, std::vector<S> targets, std::vector<Cap<S>> caps,
       BenefitFamily family = BenefitFamily::Logarithmic)
      : net_(std::move(net)), t_(std::move(targets)), caps_(std::move(caps)), family_(family) {
    const int n = net_.size();
    if (static_cast<int>(t_.size()) != n) throw std::invalid_argument("targets length must equal n");
    if (static_cast<int>(caps_.size()) != n) throw std::invalid_argument("caps length must equal n");
    for (int i = 0; i < n; ++i) {
      if (!finite_value(t_[i]) || !(t_[i] > S(0)))
        throw std::invalid_argument("targets must be finite and strictly positive");
      if (caps_[i] && !(finite_value(*caps_[i]) && *caps_[i] > S(0)))
        throw std::invalid_argument("caps must be strictly positive");
    }
  }

  int size() const { return net_.size(); }
  const Network<S>& network() const { return net_; }
  const std::vector<S>& targets() const { return t_; }
  const S& target(int i) const { return t_[i]; }
  const std::vector<Cap<S>>& caps() const { return caps_; }
  const Cap<S>& cap(int i) const { return caps_[i]; }
  BenefitFamily benefit_family() const { return family_; }

  // Marginal cost pinned by f'(t_i) = c_i for the logarithmic family.
  S cost(int i) const { return S(1) / (S(1) + t_[i]); }

  // Whether every target is interior to the action set (t_i < cap_i). The
  // parasite cycle games deliberately break this, so it is a flag, not an invariant.
  bool interior_targets() const {
    for (int i = 0; i < size(); ++i)
      if (caps_[i] && !(t_[i] < *caps_[i])) return false;
    return true;
  }

  bool in_box(const std::vector<S>& x) const {
    if (static_cast<int>(x.size()) != size()) return false;
    for (int i = 0; i < size(); ++i) {
      if (x[i] < S(0)) return false;
      if (caps_[i] && x[i] > *caps_[i]) return false;
    }
    return true;
  }

  S clamp_to_box(S v, int i) const {
    if (v < S(0)) return S(0);
    if (caps_[i] && v > *caps_[i]) return *caps_[i];
    return v;
  }

 private:
  Network<S> net_;
  std::vector<S> t_;
  std::vector<Cap<S>> caps_;
  BenefitFamily family_;
};

template <class S>
Game<S> make_game(Network<S> net, std::vector<S> targets, std::vector<S> finite_caps) {
  std::vector<Cap<S>> caps;
  caps.reserve(finite_caps.size());
  for (auto& c : finite_caps) caps.emplace_back(std::move(c));
  return Game<S>(std::move(net), std::move(targets), std::move(caps));
}

template <class S>
Game<S> make_game_unbounded(Network<S> net, std::vector<S> targets) {
  std::vector<Cap<S>> caps(net.size(), std::nullopt);
  return Game<S>(std::move(net), std::move(targets), std::move(caps));
}

template <class S>
Game<Rational> exact_game(const Game<S>& g) {
  std::vector<Rational> t;
  std::vector<Cap<Rational>> caps;
  for (int i = 0; i < g.size(); ++i) {
    t.push_back(scalar_from_double<Rational>(to_double(g.target(i))));
    if (g.cap(i))
      caps.emplace_back(scalar_from_double<Rational>(to_double(*g.cap(i))));
    else
      caps.emplace_back(std::nullopt);
  }
  return Game<Rational>(network_cast<S, Rational>(g.network()), std::move(t), std::move(caps),
                        g.benefit_family());
}

// Unconstrained best response (Eq. 3): t_i - sum_{j != i} w_ij x_j.
template <class S>
S unconstrained_best_response(const Game<S>& g, const std::vector<S>& x, int i) {
  S acc = g.target(i);
  const auto& net = g.network();
  for (int j = 0; j < g.size(); ++j) {
    if (j == i) continue;
    acc -= net(i, j) * x[j];
  }
  return acc;
}

// Three-case clamp of Eq. 2; the upper branch is skipped for unbounded caps.
template <class S>
S best_response(const Game<S>& g, const std::vector<S>& x, int i) {
  const S u = unconstrained_best_response(g, x, i);
  if (u < S(0)) return S(0);
  if (g.cap(i) && u > *g.cap(i)) return *g.cap(i);
  return u;
}

template <class S>
std::vector<S> best_response_profile(const Game<S>& g, const std::vector<S>& x) {
  std::vector<S> b(g.size());
  for (int i = 0; i < g.size(); ++i) b[i] = best_response(g, x, i);
  return b;
}

// Payoff of Eq. 1: f_i(sum_j w_ij x_j) - c_i x_i. The benefit argument must stay
// inside the logarithm's domain; the paper never defines f below it.
template <class S>
double payoff(const Game<S>& g, const std::vector<S>& x, int i) {
  const auto& net = g.network();
  S acc = S(0);
  for (int j = 0; j < g.size(); ++j) acc += net(i, j) * x[j];
  const S arg = S(1) + acc;
  if (!(arg > S(0)))
    throw std::domain_error("benefit argument 1 + sum_j w_ij x_j is outside the logarithm's domain");
  return std::log(to_double(arg)) - to_double(g.cost(i) * x[i]);
}

// Fixed-point test of Lemma 1: max_i |x_i - b_i(x)| <= tol.
template <class S>
bool is_nash(const Game<S>& g, const std::vector<S>& x, const S& tol) {
  if (tol < S(0)) throw std::invalid_argument("tolerance must be nonnegative");
  for (int i = 0; i < g.size(); ++i) {
    if (abs_value(x[i] - best_response(g, x, i)) > tol) return false;
  }
  return true;
}

template <class S>
S default_nash_tol() {
  if constexpr (is_exact_scalar<S>) {
    return Rational(0);
  } else {
    return 1e-9;
  }
}

template <class S>
bool is_nash(const Game<S>& g, const std::vector<S>& x) {
  return is_nash(g, x, default_nash_tol<S>());
}

}  // namespace netbrd
