#include "polyinv/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "polyinv/analytic.hpp"
#include "polyinv/error.hpp"
#include "polyinv/parallel.hpp"
#include "polyinv/response.hpp"
#include "polyinv/rng.hpp"

namespace polyinv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

RecordStatus status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::NoMinimum:
      return RecordStatus::NoMinimum;
    case ErrorKind::NegativeResidual:
      return RecordStatus::NegativeResidual;
    default:
      return RecordStatus::NoConfinement;
  }
}

bool recordable(ErrorKind k) {
  return k == ErrorKind::NoMinimum || k == ErrorKind::NoConfinement ||
         k == ErrorKind::UnresolvedStates || k == ErrorKind::NegativeResidual;
}

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string opt_num(const std::optional<double>& v) {
  return v ? num(*v) : std::string();
}

}  // namespace

std::string_view to_string(Family f) noexcept {
  return f == Family::Qho ? "qho" : "cqho";
}

std::string_view to_string(RecordStatus s) noexcept {
  switch (s) {
    case RecordStatus::Ok:
      return "Ok";
    case RecordStatus::NoMinimum:
      return "NoMinimum";
    case RecordStatus::NoConfinement:
      return "NoConfinement";
    case RecordStatus::NegativeResidual:
      return "NegativeResidual";
  }
  return "?";
}

std::string_view to_string(EnergyPattern p) noexcept {
  return p == EnergyPattern::ThreeLevelLike ? "three_level_like"
                                            : "near_degenerate_pair";
}

void ScanConfig::validate() const {
  if (omega_values.empty()) {
    if (num_samples < 1) {
      throw Error(ErrorKind::InvalidInput, "num_samples must be >= 1");
    }
    if (!(omega_log10_lo < omega_log10_hi)) {
      throw Error(ErrorKind::InvalidInput, "omega range needs lo < hi");
    }
  }
  for (double w : omega_values) {
    if (!(w > 0.0)) throw Error(ErrorKind::InvalidInput, "omega must be > 0");
  }
  if (num_states < 2) {
    throw Error(ErrorKind::InvalidInput, "num_states must be >= 2");
  }
  if (!(kappa > 1.0)) throw Error(ErrorKind::InvalidInput, "kappa must exceed 1");
  if (svd_cutoff && !(*svd_cutoff > 0.0 && *svd_cutoff < 1.0)) {
    throw Error(ErrorKind::InvalidInput, "svd cutoff must lie in (0, 1)");
  }
}

RoundtripOptions ScanConfig::roundtrip_options() const {
  RoundtripOptions o;
  o.cutoff = svd_cutoff;
  o.kappa = kappa;
  o.beta_states = beta_states;
  return o;
}

OmegaScanResult omega_scan(Family family, const ScanConfig& cfg) {
  cfg.validate();
  const bool listed = !cfg.omega_values.empty();
  const std::size_t count =
      listed ? cfg.omega_values.size() : static_cast<std::size_t>(cfg.num_samples);
  const RoundtripOptions ropts = cfg.roundtrip_options();

  OmegaScanResult out;
  out.records = parallel_map(
      count,
      [&](std::size_t i) {
        ScanRecord r;
        r.sample = static_cast<int>(i);
        r.num_states = cfg.num_states;
        if (listed) {
          r.omega = cfg.omega_values[i];
        } else {
          SplitMix64 rng = split_stream(cfg.seed, i);
          r.omega = std::pow(10.0, rng.uniform(cfg.omega_log10_lo,
                                               cfg.omega_log10_hi));
        }
        const SpectralData target = family == Family::Qho
                                        ? qho_spectra(r.omega, cfg.num_states)
                                        : cqho_spectra(r.omega, cfg.num_states);
        try {
          auto rt = std::make_shared<RoundtripResult>(roundtrip(target, ropts));
          r.fom = rt->fom;
          r.fom_norm = normalized_fom(rt->fom, cfg.num_states);
          r.beta_int = rt->response.beta_int;
          r.detail = std::move(rt);
        } catch (const Error& e) {
          if (!recordable(e.kind())) throw;
          r.status = status_of(e.kind());
          r.fom = r.fom_norm = kInf;
        }
        return r;
      },
      cfg.threads);

  for (std::size_t i = 0; i < out.records.size(); ++i) {
    const ScanRecord& r = out.records[i];
    if (r.status != RecordStatus::Ok) continue;
    if (!out.best || r.fom < out.records[*out.best].fom) out.best = i;
  }
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    if (!out.best || i != *out.best) out.records[i].detail.reset();
  }
  return out;
}

std::vector<ScanRecord> cqho_convergence(int n_min, int n_max,
                                         const ScanConfig& cfg) {
  if (n_min < 3 || n_max > 12 || n_min >= n_max) {
    throw Error(ErrorKind::InvalidInput,
                "convergence study needs 3 <= n_min < n_max <= 12");
  }
  std::vector<ScanRecord> out;
  for (int n = n_min; n <= n_max; ++n) {
    ScanConfig c = cfg;
    c.num_states = n;
    OmegaScanResult scan = omega_scan(Family::Cqho, c);
    if (scan.best) {
      out.push_back(scan.records[*scan.best]);
    } else {
      ScanRecord r;
      r.sample = -1;
      r.num_states = n;
      r.fom = r.fom_norm = kInf;
      r.status = scan.records.empty() ? RecordStatus::NoMinimum
                                      : scan.records.front().status;
      out.push_back(r);
    }
  }
  return out;
}

ThreeLevelValues three_level_values(double e10, double e20,
                                    const UnitSystem& units) {
  if (!(e10 > 0.0) || !(e20 > e10)) {
    throw Error(ErrorKind::InvalidInput, "three-level model needs 0 < E10 < E20");
  }
  const double s = units.sum_rule_strength();
  const double xm = units.hbar / std::sqrt(2.0 * units.mass * e10);
  const double e21 = e20 - e10;
  ThreeLevelValues v{};
  v.x01 = std::pow(3.0, -0.25) * xm;
  v.x02 = std::sqrt((s - e10 * v.x01 * v.x01) / e20);
  v.x12 = -std::sqrt((s + e10 * v.x01 * v.x01) / e21);
  v.xbar11 = -(2.0 * e20 - e10) * v.x02 * v.x12 / (e10 * v.x01);
  v.xbar22 = -(2.0 * e10 - e20) * v.x01 * v.x12 / (e20 * v.x02);
  return v;
}

SpectralData three_level_limit(double e20, double scale,
                               const UnitSystem& units) {
  const ThreeLevelValues v = three_level_values(1.0, e20, units);
  Eigen::VectorXd e(3);
  e << 0.0, 1.0, e20;
  Eigen::MatrixXd x(3, 3);
  x << 0.0, v.x01, v.x02,  //
      v.x01, v.xbar11, v.x12,  //
      v.x02, v.x12, v.xbar22;
  return SpectralData(e * scale, x / std::sqrt(scale));
}

void SearchTargetSpec::validate() const {
  const int min_states =
      energy_pattern == EnergyPattern::NearDegeneratePair ? 4 : 3;
  if (num_states < min_states) {
    throw Error(ErrorKind::InvalidInput,
                "target pattern needs at least " + std::to_string(min_states) +
                    " states");
  }
  if (!(epsilon_dipole >= 0.0)) {
    throw Error(ErrorKind::InvalidInput, "epsilon_dipole must be >= 0");
  }
  if (!(level_spread > 0.0) || !(top_ratio > 1.0 + 1.1 * level_spread) ||
      !(energy_scale > 0.0)) {
    throw Error(ErrorKind::InvalidInput,
                "target needs spread > 0, top_ratio > 1 + 1.1 spread, scale > 0");
  }
}

SpectralData synthesize_target(const SearchTargetSpec& spec,
                               const UnitSystem& units) {
  spec.validate();
  const int n = spec.num_states;
  const int top = n - 1;
  SplitMix64 rng(spec.seed);
  const double xm = units.hbar / std::sqrt(2.0 * units.mass);  // E_10 = 1
  const double eps = spec.epsilon_dipole * xm;

  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e(1) = 1.0;
  e(top) = spec.top_ratio;
  int first_band = 2;
  if (spec.energy_pattern == EnergyPattern::NearDegeneratePair) {
    e(2) = 1.0 + spec.level_spread * rng.uniform(0.01, 0.1);
    first_band = 3;
  }
  {
    std::vector<double> band;
    for (int i = first_band; i < top; ++i) {
      band.push_back(e(first_band - 1) + spec.level_spread * rng.uniform());
    }
    std::sort(band.begin(), band.end());
    for (int i = first_band; i < top; ++i) e(i) = band[i - first_band];
  }

  Eigen::MatrixXd x(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) x(i, j) = x(j, i) = rng.uniform(-eps, eps);
  }
  x(0, 0) = 0.0;

  const ThreeLevelValues tl = three_level_values(1.0, spec.top_ratio, units);
  if (spec.energy_pattern == EnergyPattern::ThreeLevelLike) {
    x(0, 1) = x(1, 0) = tl.x01;
    x(1, top) = x(top, 1) = tl.x12;
    x(1, 1) = tl.xbar11;
  } else {
    // The first-excited strength is shared between the near-degenerate pair.
    const double theta = std::numbers::pi / 4.0 + rng.uniform(-0.2, 0.2);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    x(0, 1) = x(1, 0) = tl.x01 * c;
    x(0, 2) = x(2, 0) = tl.x01 * s;
    x(1, top) = x(top, 1) = tl.x12 * c;
    x(2, top) = x(top, 2) = tl.x12 * s;
    x(1, 1) = tl.xbar11;
    x(2, 2) = tl.xbar11;
  }
  x(top, top) = tl.xbar22;
  x(0, top) = x(top, 0) = 0.0;

  SpectralData raw(e, x);
  const double x0top = complete_dipole_row(raw, top, units);
  x(0, top) = x(top, 0) = x0top;
  const double scale = spec.energy_scale;
  return SpectralData(e * scale, x / std::sqrt(scale));
}

int interior_barriers(const PolynomialPotential& p, double level) {
  if (!p.boundaries) {
    throw Error(ErrorKind::InvalidInput, "interior_barriers needs walls");
  }
  constexpr int kCells = 10000;
  const auto [lo, hi] = *p.boundaries;
  const double dx = (hi - lo) / kCells;
  int count = 0;
  double prev = p.derivative(lo + 0.5 * dx);
  for (int j = 1; j < kCells; ++j) {
    const double x = lo + (j + 0.5) * dx;
    const double d = p.derivative(x);
    if (prev > 0.0 && d <= 0.0 && p.value(x) < level) ++count;
    prev = d;
  }
  return count;
}

SearchResult large_beta_search(const SearchTargetSpec& spec, int trials,
                               const ScanConfig& cfg,
                               const SearchRanges& ranges, int keep_top) {
  if (trials < 1) throw Error(ErrorKind::InvalidInput, "trials must be >= 1");
  spec.validate();
  const RoundtripOptions ropts = cfg.roundtrip_options();

  SearchResult out;
  out.records = parallel_map(
      static_cast<std::size_t>(trials),
      [&](std::size_t t) {
        SplitMix64 rng = split_stream(spec.seed, t);
        SearchRecord r;
        r.trial = static_cast<int>(t);
        SearchTargetSpec ts = spec;
        r.epsilon = ranges.fixed_epsilon
                        ? spec.epsilon_dipole
                        : spec.epsilon_dipole *
                              rng.uniform(ranges.epsilon_lo, ranges.epsilon_hi);
        r.level_spread = rng.uniform(ranges.spread_lo, ranges.spread_hi);
        r.top_ratio = rng.uniform(std::max(ranges.top_lo, 1.0 + 1.1 * r.level_spread + 1e-9),
                                  ranges.top_hi);
        r.energy_scale = std::pow(
            10.0, rng.uniform(ranges.scale_log10_lo, ranges.scale_log10_hi));
        ts.epsilon_dipole = r.epsilon;
        ts.level_spread = r.level_spread;
        ts.top_ratio = r.top_ratio;
        ts.energy_scale = r.energy_scale;
        ts.seed = rng.next();
        r.target_beta_int = std::numeric_limits<double>::quiet_NaN();
        r.fom = r.fom_norm = kInf;
        try {
          const SpectralData target = synthesize_target(ts);
          r.target_beta_int = beta_intrinsic(target).beta_int;
          auto rt = std::make_shared<RoundtripResult>(roundtrip(target, ropts));
          r.fom = rt->fom;
          r.fom_norm = normalized_fom(rt->fom, spec.num_states);
          r.beta_int = rt->response.beta_int;
          r.monotone_well =
              interior_barriers(rt->potential,
                                rt->calc.energy(rt->calc.num_states() - 1)) == 0;
          r.detail = std::move(rt);
        } catch (const Error& e) {
          if (!recordable(e.kind())) throw;
          r.status = status_of(e.kind());
        }
        return r;
      },
      cfg.threads);

  for (std::size_t i = 0; i < out.records.size(); ++i) {
    if (out.records[i].status == RecordStatus::Ok) out.ranking.push_back(i);
  }
  std::stable_sort(out.ranking.begin(), out.ranking.end(),
                   [&](std::size_t a, std::size_t b) {
                     return std::abs(*out.records[a].beta_int) >
                            std::abs(*out.records[b].beta_int);
                   });
  for (std::size_t k = 0; k < out.ranking.size(); ++k) {
    SearchRecord& r = out.records[out.ranking[k]];
    r.rank = static_cast<int>(k) + 1;
    if (static_cast<int>(k) >= keep_top) r.detail.reset();
  }
  return out;
}

std::vector<PowerRecord> power_scan(const std::vector<double>& etas,
                                    const PowerScanOptions& opts) {
  for (double eta : etas) {
    if (!(eta > 0.0)) throw Error(ErrorKind::InvalidInput, "eta must be > 0");
  }
  if (opts.num_states < 3) {
    throw Error(ErrorKind::InvalidInput, "power scan needs at least 3 states");
  }
  return parallel_map(
      etas.size(),
      [&](std::size_t i) {
        PowerRecord r;
        r.eta = etas[i];
        const PotentialSpec p = HalfPower{r.eta};
        try {
          r.grid = auto_grid(p, opts.num_states, opts.grid);
          const EigenSolution sol = solve(p, r.grid, opts.num_states);
          r.top_energy = sol.energies(opts.num_states - 1);
          r.beta_int = beta_intrinsic(extract_spectra(sol, opts.num_states)).beta_int;
        } catch (const Error& e) {
          if (!recordable(e.kind())) throw;
          r.status = RecordStatus::NoConfinement;
        }
        return r;
      },
      opts.threads);
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) {
    throw Error(ErrorKind::InvalidInput, "log spacing needs 0 < lo <= hi");
  }
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) {
    out[i] = std::exp(a + (b - a) * i / (count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::string omega_csv(const std::vector<ScanRecord>& records) {
  std::ostringstream os;
  os << "sample,omega,fom,fom_norm,beta_int,status\n";
  for (const auto& r : records) {
    os << r.sample << ',' << num(r.omega) << ',' << num(r.fom) << ','
       << num(r.fom_norm) << ',' << opt_num(r.beta_int) << ','
       << to_string(r.status) << '\n';
  }
  return os.str();
}

std::string convergence_csv(const std::vector<ScanRecord>& records) {
  std::ostringstream os;
  os << "num_states,sample,omega,fom,fom_norm,beta_int,status\n";
  for (const auto& r : records) {
    os << r.num_states << ',' << r.sample << ',' << num(r.omega) << ','
       << num(r.fom) << ',' << num(r.fom_norm) << ',' << opt_num(r.beta_int)
       << ',' << to_string(r.status) << '\n';
  }
  return os.str();
}

std::string search_csv(const std::vector<SearchRecord>& records) {
  std::ostringstream os;
  os << "trial,epsilon,level_spread,top_ratio,energy_scale,target_beta_int,"
        "fom,fom_norm,beta_int,status,rank,monotone_well\n";
  for (const auto& r : records) {
    os << r.trial << ',' << num(r.epsilon) << ',' << num(r.level_spread) << ','
       << num(r.top_ratio) << ',' << num(r.energy_scale) << ','
       << num(r.target_beta_int) << ',' << num(r.fom) << ','
       << num(r.fom_norm) << ',' << opt_num(r.beta_int) << ','
       << to_string(r.status) << ',' << r.rank << ','
       << (r.monotone_well ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string power_csv(const std::vector<PowerRecord>& records) {
  std::ostringstream os;
  os << "eta,beta_int,status,x_min,x_max,num_points,top_energy\n";
  for (const auto& r : records) {
    os << num(r.eta) << ',' << opt_num(r.beta_int) << ','
       << to_string(r.status) << ',' << num(r.grid.x_min) << ','
       << num(r.grid.x_max) << ',' << r.grid.num_points << ','
       << num(r.top_energy) << '\n';
  }
  return os.str();
}

}  // namespace polyinv
