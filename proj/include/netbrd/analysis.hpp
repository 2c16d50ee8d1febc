#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "netbrd/game.hpp"
#include "netbrd/rational.hpp"

namespace netbrd {

template <class S>
using ScalingVector = std::vector<S>;  // entries strictly positive

template <class S>
void check_scaling(const ScalingVector<S>& a, int n) {
  if (static_cast<int>(a.size()) != n) throw std::invalid_argument("scaling vector length must equal n");
  for (const auto& v : a)
    if (!(finite_value(v) && v > S(0))) throw std::invalid_argument("scaling entries must be positive");
}

// Diagonal similarity v_ij = w_ij * a_i / a_j. Preserves the unit diagonal.
template <class S>
Network<S> rescale(const Network<S>& net, const ScalingVector<S>& a) {
  const int n = net.size();
  check_scaling(a, n);
  std::vector<S> v(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      v[static_cast<std::size_t>(i) * n + j] = i == j ? S(1) : net(i, j) * a[i] / a[j];
  return Network<S>(n, std::move(v));
}

template <class S>
ScalingVector<S> inverse_scaling(const ScalingVector<S>& a) {
  ScalingVector<S> inv;
  inv.reserve(a.size());
  for (const auto& v : a) inv.push_back(S(1) / v);
  return inv;
}

template <class S>
bool is_symmetric(const Network<S>& net) {
  for (int i = 0; i < net.size(); ++i)
    for (int j = i + 1; j < net.size(); ++j)
      if (!(net(i, j) == net(j, i))) return false;
  return true;
}

// sgn(w_ij) = sgn(w_ji) for every pair; rules out one-way and parasitic links.
template <class S>
bool is_sign_symmetric(const Network<S>& net) {
  for (int i = 0; i < net.size(); ++i)
    for (int j = i + 1; j < net.size(); ++j)
      if (sign_of(net(i, j)) != sign_of(net(j, i))) return false;
  return true;
}

// r_ij = w_ij / w_ji, defined only where both weights are nonzero.
template <class S>
struct RelativeImportance {
  int n = 0;
  std::vector<S> value;        // row-major; meaningful only where defined
  std::vector<char> defined;   // row-major flags
  bool is_defined(int i, int j) const { return defined[static_cast<std::size_t>(i) * n + j] != 0; }
  const S& operator()(int i, int j) const { return value[static_cast<std::size_t>(i) * n + j]; }
};

template <class S>
RelativeImportance<S> relative_importance(const Network<S>& net) {
  const int n = net.size();
  RelativeImportance<S> r;
  r.n = n;
  r.value.assign(static_cast<std::size_t>(n) * n, S(0));
  r.defined.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * n + j;
      if (net(i, j) != S(0) && net(j, i) != S(0)) {
        r.value[k] = net(i, j) / net(j, i);
        r.defined[k] = 1;
      }
    }
  }
  return r;
}

namespace detail {

// Spanning-tree scaling of the Theorem 1 appendix proof, carried as squared
// entries s_j = a_j^2 (closed under rationals: s_j = s_i * |w_ij| / |w_ji|).
// Requires sign-symmetry; returns nullopt only on that precheck.
template <class S>
std::optional<std::vector<S>> spanning_tree_scaling_squared(const Network<S>& net) {
  const int n = net.size();
  if (!is_sign_symmetric(net)) return std::nullopt;
  std::vector<S> s(n, S(0));
  std::vector<char> seen(n, 0);
  for (int root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    s[root] = S(1);
    std::deque<int> order{root};
    while (!order.empty()) {
      const int u = order.front();
      order.pop_front();
      for (int j = 0; j < n; ++j) {
        if (seen[j] || j == u) continue;
        if (net(u, j) == S(0)) continue;  // sign-symmetry: w_uj = 0 <=> w_ju = 0
        seen[j] = 1;
        s[j] = s[u] * abs_value(net(u, j)) / abs_value(net(j, u));
        order.push_back(j);
      }
    }
  }
  return s;
}

}  // namespace detail

// Theorem 1 constructive rescaling (floating): BFS spanning-tree scaling with
// a_j = a_i * sqrt|w_ij| / sqrt|w_ji|, then pairwise check |v_kl - v_lk| <= tol.
inline std::optional<ScalingVector<double>> symmetrize(const Network<double>& net, double tol) {
  if (tol < 0) throw std::invalid_argument("tolerance must be nonnegative");
  auto squared = detail::spanning_tree_scaling_squared(net);
  if (!squared) return std::nullopt;
  const int n = net.size();
  ScalingVector<double> a(n);
  for (int i = 0; i < n; ++i) a[i] = std::sqrt((*squared)[i]);
  const Network<double> v = rescale(net, a);
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l)
      if (std::fabs(v(k, l) - v(l, k)) > tol) return std::nullopt;
  return a;
}

// Exact-mode variant: returns the squared scaling s (a = sqrt(s) entrywise).
// v_kl == v_lk is decided exactly through w_kl * s_k == w_lk * s_l.
inline std::optional<std::vector<Rational>> symmetrize_exact(const Network<Rational>& net) {
  auto squared = detail::spanning_tree_scaling_squared(net);
  if (!squared) return std::nullopt;
  const int n = net.size();
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l)
      if (net(k, l) * (*squared)[k] != net(l, k) * (*squared)[l]) return std::nullopt;
  return squared;
}

// Small-n oracle for transitive relative importance: enumerates every ordered
// tuple of 3..n distinct players and compares forward/backward weight products.
template <class S>
bool brute_force_transitive(const Network<S>& net, const S& tol) {
  const int n = net.size();
  if (n > 10) throw std::invalid_argument("brute-force transitivity oracle is limited to n <= 10");
  if (tol < S(0)) throw std::invalid_argument("tolerance must be nonnegative");
  std::vector<int> path;
  std::vector<char> used(n, 0);
  // forward[d] = w_{i1 i2} ... w_{i_d-1 i_d}; backward mirrors the reversed cycle.
  std::vector<S> forward{S(1)}, backward{S(1)};
  bool ok = true;
  auto dfs = [&](auto&& self, int depth) -> void {
    if (!ok) return;
    if (depth >= 3) {
      const S fwd = forward.back() * net(path.back(), path.front());
      const S bwd = backward.back() * net(path.front(), path.back());
      if (abs_value(fwd - bwd) > tol) {
        ok = false;
        return;
      }
    }
    if (depth == n) return;
    for (int j = 0; j < n; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      path.push_back(j);
      if (depth >= 1) {
        forward.push_back(forward.back() * net(path[depth - 1], j));
        backward.push_back(backward.back() * net(j, path[depth - 1]));
      }
      self(self, depth + 1);
      if (depth >= 1) {
        forward.pop_back();
        backward.pop_back();
      }
      path.pop_back();
      used[j] = 0;
      if (!ok) return;
    }
  };
  dfs(dfs, 0);
  return ok;
}

// Row diagonal dominance: sum_{j != i} |w_ij| < 1 for every row.
template <class S>
bool is_weak_influences(const Network<S>& net) {
  for (int i = 0; i < net.size(); ++i) {
    S sum(0);
    for (int j = 0; j < net.size(); ++j)
      if (j != i) sum += abs_value(net(i, j));
    if (!(sum < S(1))) return false;
  }
  return true;
}

// Column diagonal dominance: sum_{i != j} |w_ij| < 1 for every column.
template <class S>
bool is_weak_externalities(const Network<S>& net) {
  for (int j = 0; j < net.size(); ++j) {
    S sum(0);
    for (int i = 0; i < net.size(); ++i)
      if (i != j) sum += abs_value(net(i, j));
    if (!(sum < S(1))) return false;
  }
  return true;
}

// Definition 7 uses strict inequality; a row/column sum exactly at 1 is "not
// weak" but worth flagging in reports.
template <class S>
bool influences_at_boundary(const Network<S>& net) {
  bool at = false;
  for (int i = 0; i < net.size(); ++i) {
    S sum(0);
    for (int j = 0; j < net.size(); ++j)
      if (j != i) sum += abs_value(net(i, j));
    if (sum == S(1)) at = true;
    if (sum > S(1)) return false;
  }
  return at;
}

template <class S>
bool externalities_at_boundary(const Network<S>& net) {
  bool at = false;
  for (int j = 0; j < net.size(); ++j) {
    S sum(0);
    for (int i = 0; i < net.size(); ++i)
      if (i != j) sum += abs_value(net(i, j));
    if (sum == S(1)) at = true;
    if (sum > S(1)) return false;
  }
  return at;
}

// Unordered pairs with |w_ij * w_ji| >= 1 (Lemma 2 obstruction), 0-based.
template <class S>
std::vector<std::pair<int, int>> amplifying_links(const Network<S>& net) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < net.size(); ++i)
    for (int j = i + 1; j < net.size(); ++j)
      if (abs_value(net(i, j) * net(j, i)) >= S(1)) out.emplace_back(i, j);
  return out;
}

// Topological order of the influence graph (edge j -> i whenever w_ij != 0),
// i.e. a permutation under which W is lower triangular. Ties broken by
// ascending original index. Returns nullopt when influences form a directed cycle.
template <class S>
std::optional<std::vector<int>> dan_order(const Network<S>& net) {
  const int n = net.size();
  std::vector<int> indegree(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && net(i, j) != S(0)) ++indegree[i];
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push(i);
  std::vector<int> order;
  order.reserve(n);
  while (!ready.empty()) {
    const int j = ready.top();
    ready.pop();
    order.push_back(j);
    for (int i = 0; i < n; ++i) {
      if (i != j && net(i, j) != S(0)) {
        if (--indegree[i] == 0) ready.push(i);
      }
    }
  }
  if (static_cast<int>(order.size()) != n) return std::nullopt;
  return order;
}

// Proposition 6 recursion: in triangular order, a_last = 1 and backwards
// a_j = margin * (1 + sum_{k later} a_k |w_kj|). Guarantees the strict column
// inequality sum a_k |w_kj| < a_j for margin >= 1.
template <class S>
ScalingVector<S> dan_scaling(const Network<S>& net, const S& margin) {
  if (!(margin >= S(1))) throw std::invalid_argument("dan_scaling margin must be >= 1");
  auto order = dan_order(net);
  if (!order) throw std::invalid_argument("network is not a DAN (influence graph has a directed cycle)");
  const int n = net.size();
  ScalingVector<S> a(n, S(0));
  for (int r = n - 1; r >= 0; --r) {
    const int j = (*order)[r];
    S sum(0);
    for (int s = r + 1; s < n; ++s) {
      const int k = (*order)[s];
      sum += a[k] * abs_value(net(k, j));
    }
    a[j] = margin * (S(1) + sum);
  }
  return a;
}

// Weighted maximum norm ||v||_inf^u = max_i |v_i| / u_i.
template <class S>
S weighted_max_norm(const std::vector<S>& v, const std::vector<S>& u) {
  if (v.size() != u.size()) throw std::invalid_argument("vector and weight lengths differ");
  S best(0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(u[i] > S(0))) throw std::invalid_argument("norm weights must be positive");
    const S r = abs_value(v[i]) / u[i];
    if (r > best) best = r;
  }
  return best;
}

// Induced matrix norm: max_i (1/u_i) sum_j u_j |m_ij| (row-major m, n x n).
template <class S>
S weighted_max_norm_matrix(int n, const std::vector<S>& m, const std::vector<S>& u) {
  if (m.size() != static_cast<std::size_t>(n) * n || static_cast<int>(u.size()) != n)
    throw std::invalid_argument("matrix/weight dimensions differ");
  S best(0);
  for (int i = 0; i < n; ++i) {
    if (!(u[i] > S(0))) throw std::invalid_argument("norm weights must be positive");
    S sum(0);
    for (int j = 0; j < n; ++j) sum += u[j] * abs_value(m[static_cast<std::size_t>(i) * n + j]);
    const S r = sum / u[i];
    if (r > best) best = r;
  }
  return best;
}

template <class S>
std::vector<S> w_minus_identity(const Network<S>& net) {
  const int n = net.size();
  std::vector<S> m(static_cast<std::size_t>(n) * n, S(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) m[static_cast<std::size_t>(i) * n + j] = net(i, j);
  return m;
}

template <class S>
std::vector<double> abs_minus_identity(const Network<S>& net) {
  const int n = net.size();
  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) m[static_cast<std::size_t>(i) * n + j] = std::fabs(to_double(net(i, j)));
  return m;
}

// Contraction factor of the Theorem 2 proof: gamma = ||W - I_n||_inf^{a^{-1}}.
template <class S>
S contraction_factor(const Network<S>& net, const ScalingVector<S>& a) {
  check_scaling(a, net.size());
  return weighted_max_norm_matrix(net.size(), w_minus_identity(net), inverse_scaling(a));
}

}  // namespace netbrd
