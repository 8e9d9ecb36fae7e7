#pragma once

#include "polyinv/spectra.hpp"

namespace polyinv {

struct ResponseReport {
  double beta = 0.0;
  double beta_max = 0.0;
  double beta_int = 0.0;
  int num_states_used = 0;
};

/// Static first hyperpolarizability by sum over states, single electron:
///   beta = 3 e^3 sum_{n,m>=1} x_0n xbar_nm x_m0 / (E_n0 E_m0).
double beta_sos(const SpectralData& s, const UnitSystem& units = kAtomicUnits);

/// Fundamental limit 3^{1/4} (e hbar / sqrt(m))^3 N_e^{3/2} / E_10^{7/2}.
double beta_limit(double e10, int num_electrons = 1,
                  const UnitSystem& units = kAtomicUnits);

ResponseReport beta_intrinsic(const SpectralData& s,
                              const UnitSystem& units = kAtomicUnits);

}  // namespace polyinv
