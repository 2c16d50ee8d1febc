#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "netbrd/analysis.hpp"
#include "netbrd/game.hpp"

namespace netbrd {

// Certified two-sided bracket for rho(|W| - I_n).
struct SpectralBracket {
  double estimate = 0.0;  // final Gelfand iterate
  double lower = 0.0;     // Collatz-Wielandt lower bound
  double upper = 0.0;     // best Gelfand / Collatz-Wielandt upper bound
  int doublings = 0;      // matrix squarings performed
};

// Raised when a classification cannot place rho on either side of 1.
class IndeterminateSpectralError : public std::runtime_error {
 public:
  IndeterminateSpectralError(const std::string& what, SpectralBracket bracket)
      : std::runtime_error(what), bracket(bracket) {}
  SpectralBracket bracket;
};

struct SpectralOptions {
  double rel_tol = 1e-10;
  int max_doublings = 200;
  double eta = 1e-12;          // positivity perturbation for the power iterate
  int power_iterations = 4000;
};

// Gelfand iterates ||M^k||_inf^(1/k) with k doubling, cross-checked by a
// Collatz-Wielandt bracket from a positive power iterate. M = |W| - I_n.
SpectralBracket spectral_radius_abs(const Network<double>& net, const SpectralOptions& opt = {});

inline SpectralBracket spectral_radius_abs(const Network<double>& net, double rel_tol) {
  SpectralOptions opt;
  opt.rel_tol = rel_tol;
  return spectral_radius_abs(net, opt);
}

// Proposition 3 witnesses. Returns a scaling when rho < 1 is certified, nullopt
// when rho >= 1 - margin is certified, and throws IndeterminateSpectralError when
// the bracket straddles 1 beyond the margin.
std::optional<ScalingVector<double>> scaling_for_weak_influences(const Network<double>& net,
                                                                 double margin = 1e-8,
                                                                 const SpectralOptions& opt = {});
std::optional<ScalingVector<double>> scaling_for_weak_externalities(const Network<double>& net,
                                                                    double margin = 1e-8,
                                                                    const SpectralOptions& opt = {});

}  // namespace netbrd
