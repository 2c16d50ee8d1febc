#include "netbrd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace netbrd {

namespace {

double inf_norm(int n, const std::vector<double>& m) {
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += std::fabs(m[static_cast<std::size_t>(i) * n + j]);
    best = std::max(best, sum);
  }
  return best;
}

std::vector<double> square(int n, const std::vector<double>& m) {
  std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const double v = m[static_cast<std::size_t>(i) * n + k];
      if (v == 0.0) continue;
      for (int j = 0; j < n; ++j)
        out[static_cast<std::size_t>(i) * n + j] += v * m[static_cast<std::size_t>(k) * n + j];
    }
  }
  return out;
}

// Power iteration on M + I + eta*E (primitive, so the iterate converges even for
// imprimitive M such as Example 2's, where M^2 = I makes plain iteration cycle).
// Collatz-Wielandt ratios are taken on M + I and shifted back, which brackets
// rho(M) for any strictly positive iterate regardless of convergence quality.
void collatz_bracket(int n, const std::vector<double>& m, const SpectralOptions& opt,
                     double& lower, double& upper, std::vector<double>* perron_out,
                     double eta) {
  std::vector<double> z(n, 1.0 / n);
  std::vector<double> shifted(n);
  for (int it = 0; it < opt.power_iterations; ++it) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int i = 0; i < n; ++i) {
      double acc = z[i];  // + I_n part
      for (int j = 0; j < n; ++j) acc += m[static_cast<std::size_t>(i) * n + j] * z[j];
      shifted[i] = acc;
      const double ratio = acc / z[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    lower = std::max(lower, lo - 1.0);
    upper = std::min(upper, hi - 1.0);
    if (hi - lo <= opt.rel_tol * std::max(1.0, hi)) break;
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
      shifted[i] += eta;  // keeps the iterate strictly positive
      mass += shifted[i];
    }
    for (int i = 0; i < n; ++i) z[i] = shifted[i] / mass;
  }
  if (perron_out) *perron_out = z;
}

}  // namespace

SpectralBracket spectral_radius_abs(const Network<double>& net, const SpectralOptions& opt) {
  if (!(opt.rel_tol > 0)) throw std::invalid_argument("spectral rel_tol must be positive");
  const int n = net.size();
  const std::vector<double> m = abs_minus_identity(net);

  SpectralBracket out;
  out.lower = 0.0;
  out.upper = std::numeric_limits<double>::infinity();

  double norm = inf_norm(n, m);
  if (norm == 0.0) {
    out.estimate = out.lower = out.upper = 0.0;
    return out;
  }

  // Gelfand iterates via repeated squaring of the normalized power; each
  // ||M^k||^(1/k) is a valid upper bound on rho.
  std::vector<double> power = m;
  for (auto& v : power) v /= norm;
  double log_norm = std::log(norm);
  double k = 1.0;
  double estimate = norm;
  out.upper = std::min(out.upper, estimate);
  bool settled = false;
  for (int d = 0; d < opt.max_doublings && !settled; ++d) {
    power = square(n, power);
    k *= 2.0;
    const double r = inf_norm(n, power);
    if (r == 0.0) {
      // Nilpotent: rho is exactly zero.
      out.estimate = out.lower = out.upper = 0.0;
      out.doublings = d + 1;
      return out;
    }
    log_norm = 2.0 * log_norm + std::log(r);
    for (auto& v : power) v /= r;
    const double next = std::exp(log_norm / k);
    out.upper = std::min(out.upper, next);
    out.doublings = d + 1;
    if (std::fabs(next - estimate) <= opt.rel_tol * std::max(next, 1e-300)) settled = true;
    estimate = next;
  }
  if (!settled)
    throw std::runtime_error("spectral radius estimate did not stabilize within the doubling budget");

  collatz_bracket(n, m, opt, out.lower, out.upper, nullptr, opt.eta);
  out.lower = std::min(out.lower, out.upper);  // guard against ulp-crossing
  out.estimate = std::clamp(estimate, out.lower, out.upper);
  return out;
}

std::optional<ScalingVector<double>> scaling_for_weak_influences(const Network<double>& net,
                                                                 double margin,
                                                                 const SpectralOptions& opt) {
  if (!(margin > 0)) throw std::invalid_argument("margin must be positive");
  const SpectralBracket bracket = spectral_radius_abs(net, opt);
  const int n = net.size();
  if (bracket.upper < 1.0) {
    const std::vector<double> m = abs_minus_identity(net);
    for (double eta = opt.eta; eta > 0.0; eta /= 2.0) {
      double lo = 0.0, hi = std::numeric_limits<double>::infinity();
      std::vector<double> u;
      collatz_bracket(n, m, opt, lo, hi, &u, eta);
      ScalingVector<double> a(n);
      for (int i = 0; i < n; ++i) a[i] = 1.0 / u[i];
      const double amax = *std::max_element(a.begin(), a.end());
      for (auto& v : a) v /= amax;
      if (is_weak_influences(rescale(net, a))) return a;
    }
    throw std::runtime_error("failed to construct a weak-influences witness despite rho < 1");
  }
  if (bracket.lower >= 1.0 - margin) return std::nullopt;
  throw IndeterminateSpectralError("spectral bracket straddles 1; classification indeterminate", bracket);
}

std::optional<ScalingVector<double>> scaling_for_weak_externalities(const Network<double>& net,
                                                                    double margin,
                                                                    const SpectralOptions& opt) {
  // Proposition 3's transpose argument: a row witness for W^T, inverted.
  auto row = scaling_for_weak_influences(net.transpose(), margin, opt);
  if (!row) return std::nullopt;
  ScalingVector<double> a = inverse_scaling(*row);
  if (!is_weak_externalities(rescale(net, a)))
    throw IndeterminateSpectralError("transposed witness failed the externalities check",
                                     spectral_radius_abs(net, opt));
  return a;
}

}  // namespace netbrd
