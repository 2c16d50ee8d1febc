#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "netbrd/analysis.hpp"
#include "netbrd/spectral.hpp"

namespace netbrd {

enum class RescaleVerdict { Yes, No, Indeterminate };

inline const char* to_string(RescaleVerdict v) {
  switch (v) {
    case RescaleVerdict::Yes: return "yes";
    case RescaleVerdict::No: return "no";
    default: return "indeterminate";
  }
}

// Every positive flag carries its checkable witness (scaling vector, permutation,
// or the spectral bracket itself).
struct ClassificationReport {
  int n = 0;
  bool sign_symmetric = false;
  bool symmetrizable = false;
  std::vector<double> symmetrize_scaling;  // empty unless symmetrizable

  bool weak_influences = false;
  bool weak_externalities = false;
  bool influences_boundary = false;   // some row sum exactly 1
  bool externalities_boundary = false;

  bool dan = false;
  std::vector<int> dan_permutation;  // 0-based triangular order

  std::vector<std::pair<int, int>> amplifying;  // 0-based pairs

  SpectralBracket spectral;
  RescaleVerdict rescalable_influences = RescaleVerdict::Indeterminate;
  RescaleVerdict rescalable_externalities = RescaleVerdict::Indeterminate;
  std::vector<double> influences_scaling;
  std::vector<double> externalities_scaling;

  bool indeterminate() const {
    return rescalable_influences == RescaleVerdict::Indeterminate ||
           rescalable_externalities == RescaleVerdict::Indeterminate;
  }
};

struct ClassifyOptions {
  double tol = 1e-9;           // floating comparisons (symmetrize check)
  double margin = 1e-8;        // indeterminate band around rho = 1
  SpectralOptions spectral{};
};

// Classification is exact where the scalar allows it (sign pattern, dominance,
// DAN, amplifying links, exact symmetrize in rational mode); the spectral side
// always runs in floating point.
template <class S>
ClassificationReport classify(const Network<S>& net, const ClassifyOptions& opt = {}) {
  ClassificationReport rep;
  rep.n = net.size();
  rep.sign_symmetric = is_sign_symmetric(net);
  rep.weak_influences = is_weak_influences(net);
  rep.weak_externalities = is_weak_externalities(net);
  rep.influences_boundary = influences_at_boundary(net);
  rep.externalities_boundary = externalities_at_boundary(net);
  rep.amplifying = amplifying_links(net);

  if (auto order = dan_order(net)) {
    rep.dan = true;
    rep.dan_permutation = *order;
  }

  const Network<double> dnet = network_cast<S, double>(net);
  if constexpr (is_exact_scalar<S>) {
    if (auto squared = symmetrize_exact(net)) {
      rep.symmetrizable = true;
      rep.symmetrize_scaling.reserve(rep.n);
      for (const auto& s : *squared) rep.symmetrize_scaling.push_back(std::sqrt(to_double(s)));
    }
  } else {
    if (auto a = symmetrize(dnet, opt.tol)) {
      rep.symmetrizable = true;
      rep.symmetrize_scaling = *a;
    }
  }

  rep.spectral = spectral_radius_abs(dnet, opt.spectral);
  try {
    if (auto a = scaling_for_weak_influences(dnet, opt.margin, opt.spectral)) {
      rep.rescalable_influences = RescaleVerdict::Yes;
      rep.influences_scaling = *a;
    } else {
      rep.rescalable_influences = RescaleVerdict::No;
    }
  } catch (const IndeterminateSpectralError&) {
    rep.rescalable_influences = RescaleVerdict::Indeterminate;
  }
  try {
    if (auto a = scaling_for_weak_externalities(dnet, opt.margin, opt.spectral)) {
      rep.rescalable_externalities = RescaleVerdict::Yes;
      rep.externalities_scaling = *a;
    } else {
      rep.rescalable_externalities = RescaleVerdict::No;
    }
  } catch (const IndeterminateSpectralError&) {
    rep.rescalable_externalities = RescaleVerdict::Indeterminate;
  }
  return rep;
}

}  // namespace netbrd
