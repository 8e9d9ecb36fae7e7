#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "polyinv/eigensolver.hpp"
#include "polyinv/inverse.hpp"
#include "polyinv/spectra.hpp"

namespace polyinv {

/// {"energies": [...], "dipole": [[...], ...]}; doubles print in shortest
/// round-trip form, so reading back is bit-exact.
std::string spectra_to_json(const SpectralData& s);

/// Throws Error(InvalidInput) naming the first problem found.
SpectralData spectra_from_json(std::string_view text);

SpectralData load_spectra(const std::filesystem::path& path);
void save_spectra(const std::filesystem::path& path, const SpectralData& s);

/// Coefficients, center, walls and SVD diagnostics.
std::string inverse_to_json(const Inversion& inv,
                            const WellDomain* domain = nullptr);

/// First column x, then one column psi_k per state.
std::string wavefunctions_csv(const EigenSolution& sol);

/// Two columns x, V sampled uniformly across the walls (inf outside).
std::string potential_csv(const PolynomialPotential& p, double lo, double hi,
                          int count);

/// Writes to a sibling temporary file, then renames over `path`. The target
/// is either fully written or untouched.
void write_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_text(const std::filesystem::path& path);

}  // namespace polyinv
