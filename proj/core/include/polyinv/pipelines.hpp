#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polyinv/eigensolver.hpp"
#include "polyinv/inverse.hpp"
#include "polyinv/spectra.hpp"

namespace polyinv {

enum class Family { Qho, Cqho };

enum class RecordStatus { Ok, NoMinimum, NoConfinement, NegativeResidual };

std::string_view to_string(Family f) noexcept;
std::string_view to_string(RecordStatus s) noexcept;

struct ScanConfig {
  std::uint64_t seed = 1;
  int num_samples = 75;
  double omega_log10_lo = -1.0;
  double omega_log10_hi = 2.0;
  /// When non-empty, these frequencies replace the random draws.
  std::vector<double> omega_values;
  int num_states = 6;
  std::optional<double> svd_cutoff;
  double kappa = 10.0;
  int beta_states = 15;
  int threads = 0;  // 0 = default_thread_count()

  void validate() const;
  RoundtripOptions roundtrip_options() const;
};

struct ScanRecord {
  int sample = 0;
  double omega = 0.0;
  int num_states = 0;
  double fom = 0.0;       // +inf unless Ok
  double fom_norm = 0.0;  // +inf unless Ok
  std::optional<double> beta_int;
  RecordStatus status = RecordStatus::Ok;
  /// Reconstruction, kept only where a caller needs it.
  std::shared_ptr<const RoundtripResult> detail;
};

struct OmegaScanResult {
  std::vector<ScanRecord> records;  // sample order
  std::optional<std::size_t> best;  // index of the smallest Ok FOM
};

/// Exact family spectra at sampled omega = 10^u, u uniform on the log range,
/// each run through roundtrip. Keeps the reconstruction of the best sample.
OmegaScanResult omega_scan(Family family, const ScanConfig& cfg);

/// One record per N in [n_min, n_max]: the best-FOM clipped-oscillator
/// reconstruction of an omega scan at that N.
std::vector<ScanRecord> cqho_convergence(int n_min, int n_max,
                                         const ScanConfig& cfg);

enum class EnergyPattern { ThreeLevelLike, NearDegeneratePair };

std::string_view to_string(EnergyPattern p) noexcept;

/// Three-state values at the beta_int = 1 point of the three-level model,
/// consistent with the sum rules for the given E_10 and E_20.
struct ThreeLevelValues {
  double x01, x02, x12, xbar11, xbar22;
};
/// x01 = X x_max with X = 3^{-1/4}.
ThreeLevelValues three_level_values(double e10, double e20,
                                    const UnitSystem& units = kAtomicUnits);

/// Exact three-level-limit spectra (N = 3): E = (0, 1, e20) times `scale`,
/// lengths divided by sqrt(scale).
SpectralData three_level_limit(double e20, double scale = 1.0,
                               const UnitSystem& units = kAtomicUnits);

struct SearchTargetSpec {
  int num_states = 6;
  /// Intermediate ground-state dipoles are drawn on [-eps, eps] x_max.
  double epsilon_dipole = 0.5;
  EnergyPattern energy_pattern = EnergyPattern::ThreeLevelLike;
  std::uint64_t seed = 1;
  /// Width of the intermediate level band above E_1, in units of E_10.
  double level_spread = 0.5;
  /// E_{N-1,0} / E_10.
  double top_ratio = 20.0;
  /// Energies multiply by this, lengths divide by its square root.
  double energy_scale = 1.0;

  void validate() const;
};

/// Target spectra with transitions from the ground state suppressed except
/// to states 1 and N-1. Throws NegativeResidual if the draws over-saturate
/// the ground-state sum rule.
SpectralData synthesize_target(const SearchTargetSpec& spec,
                               const UnitSystem& units = kAtomicUnits);

struct SearchRanges {
  double epsilon_lo = 0.04;  // fractions of spec.epsilon_dipole
  double epsilon_hi = 1.0;
  double spread_lo = 0.05, spread_hi = 2.0;
  double top_lo = 5.0, top_hi = 50.0;
  double scale_log10_lo = -1.0, scale_log10_hi = 2.0;
  /// Override: every trial uses exactly spec.epsilon_dipole (may be 0).
  bool fixed_epsilon = false;
};

struct SearchRecord {
  int trial = 0;
  double epsilon = 0.0;
  double level_spread = 0.0;
  double top_ratio = 0.0;
  double energy_scale = 0.0;
  double target_beta_int = 0.0;  // NaN when synthesis failed
  double fom = 0.0;
  double fom_norm = 0.0;
  std::optional<double> beta_int;
  RecordStatus status = RecordStatus::Ok;
  int rank = 0;               // 1 = largest |beta_int|; 0 when not Ok
  bool monotone_well = false; // no interior barrier below the top level
  std::shared_ptr<const RoundtripResult> detail;  // top ranks only
};

struct SearchResult {
  std::vector<SearchRecord> records;  // trial order
  std::vector<std::size_t> ranking;   // Ok records by descending |beta_int|
};

/// Random targets around `spec`, each reconstructed; ranks Ok results by
/// |beta_int| and keeps the reconstructions of the best `keep_top`.
SearchResult large_beta_search(const SearchTargetSpec& spec, int trials,
                               const ScanConfig& cfg,
                               const SearchRanges& ranges = {},
                               int keep_top = 10);

/// Local maxima of p strictly inside the walls that lie below `level`.
int interior_barriers(const PolynomialPotential& p, double level);

struct PowerScanOptions {
  int num_states = 10;
  AutoGridOptions grid = [] {
    AutoGridOptions g;
    g.policy = GridPolicy::Converged;
    return g;
  }();
  int threads = 0;
};

struct PowerRecord {
  double eta = 0.0;
  std::optional<double> beta_int;
  RecordStatus status = RecordStatus::Ok;
  GridSpec grid{};
  double top_energy = 0.0;
};

std::vector<PowerRecord> power_scan(const std::vector<double>& etas,
                                    const PowerScanOptions& opts = {});

/// `count` log-spaced values from lo to hi inclusive.
std::vector<double> log_spaced(double lo, double hi, int count);

/// CSV renderings with fixed headers. Numbers use 17 significant digits.
std::string omega_csv(const std::vector<ScanRecord>& records);
std::string convergence_csv(const std::vector<ScanRecord>& records);
std::string search_csv(const std::vector<SearchRecord>& records);
std::string power_csv(const std::vector<PowerRecord>& records);

}  // namespace polyinv
