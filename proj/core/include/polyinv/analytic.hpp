#pragma once

#include "polyinv/spectra.hpp"

namespace polyinv {

/// Exact N-state harmonic oscillator spectra: E_n = w (n + 1/2),
/// x_{n,n+1} = sqrt((n+1) / (2 w)). Atomic units.
SpectralData qho_spectra(double omega, int num_states);

/// Exact clipped harmonic oscillator spectra (wall at x = 0): the odd
/// oscillator states, E_n = w (2n + 3/2), with closed-form half-line dipoles.
SpectralData cqho_spectra(double omega, int num_states);

}  // namespace polyinv
