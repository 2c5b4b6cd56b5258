#pragma once

// C-infinity step psi(x): 0 for x <= 0, 1 for x >= 1, all derivatives zero
// at both ends. Usable with doubles and jets.

#include "qdecay/jet.hpp"

namespace qdecay {

template <class S>
S smooth_step(const S& x) {
  const double xv = value(x);
  // Outside [0.005, 0.995] psi differs from 0 or 1 (and its derivatives
  // from 0) by less than 1e-80.
  if (xv <= 0.005) return S(0.0);
  if (xv >= 0.995) return S(1.0);
  const S a = exp(-1.0 / x);
  const S b = exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

}  // namespace qdecay
