#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "polyinv/analytic.hpp"
#include "polyinv/error.hpp"
#include "polyinv/parallel.hpp"
#include "polyinv/pipelines.hpp"
#include "polyinv/response.hpp"
#include "polyinv/rng.hpp"

using namespace polyinv;

namespace {

std::string first_line(const std::string& csv) { return csv.substr(0, csv.find('\n')); }

ScanConfig small_scan(int samples) {
  ScanConfig c;
  c.num_samples = samples;
  c.threads = 1;
  return c;
}

}  // namespace

TEST_CASE("generator reproduces the reference stream") {
  SplitMix64 g(1234567);
  CHECK(g.next() == 6457827717110365317ULL);
  CHECK(g.next() == 3203168211198807973ULL);
  CHECK(g.next() == 9817491932198370423ULL);
  for (int i = 0; i < 1000; ++i) {
    const double u = g.uniform(-2.0, 3.0);
    CHECK(u >= -2.0);
    CHECK(u < 3.0);
  }
}

TEST_CASE("split streams are distinct and reproducible") {
  std::set<std::uint64_t> first;
  for (std::uint64_t i = 0; i < 256; ++i) first.insert(split_stream(9, i).next());
  CHECK(first.size() == 256);
  CHECK(split_stream(9, 3).next() == split_stream(9, 3).next());
  CHECK(split_stream(9, 3).next() != split_stream(10, 3).next());
}

TEST_CASE("parallel map keeps index order and reports the lowest failure") {
  const auto sq = parallel_map(100, [](std::size_t i) { return i * i; }, 4);
  for (std::size_t i = 0; i < 100; ++i) CHECK(sq[i] == i * i);
  try {
    parallel_map(50, [](std::size_t i) -> int {
      if (i == 7 || i == 30) throw std::runtime_error(std::to_string(i));
      return 0;
    }, 3);
    FAIL("expected throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "7");
  }
}

TEST_CASE("log spacing") {
  const auto v = log_spaced(0.1, 30.0, 20);
  REQUIRE(v.size() == 20);
  CHECK(v.front() == doctest::Approx(0.1));
  CHECK(v.back() == doctest::Approx(30.0));
  CHECK(v[1] / v[0] == doctest::Approx(v[19] / v[18]));
}

TEST_CASE("omega scan is deterministic and independent of thread count") {
  auto cfg = small_scan(12);
  cfg.seed = 77;
  const auto a = omega_scan(Family::Qho, cfg);
  const auto b = omega_scan(Family::Qho, cfg);
  cfg.threads = 3;
  const auto c = omega_scan(Family::Qho, cfg);
  CHECK(omega_csv(a.records) == omega_csv(b.records));
  CHECK(omega_csv(a.records) == omega_csv(c.records));
  CHECK(first_line(omega_csv(a.records)) == "sample,omega,fom,fom_norm,beta_int,status");
  REQUIRE(a.best);
  CHECK(a.records[*a.best].detail != nullptr);
  for (std::size_t i = 0; i < a.records.size(); ++i)
    if (i != *a.best) CHECK(a.records[i].detail == nullptr);
}

TEST_CASE("listed frequencies reproduce the low/moderate ordering") {
  auto cfg = small_scan(1);
  cfg.omega_values = {0.52, 10.0};
  const auto r = omega_scan(Family::Qho, cfg);
  CHECK(r.records[0].fom > r.records[1].fom);
  CHECK(*r.best == 1);
}

TEST_CASE("oscillator scan finds its best frequency inside the range") {
  const auto r = omega_scan(Family::Qho, small_scan(75));
  REQUIRE(r.best);
  double lo = INFINITY, hi = 0.0;
  for (const auto& rec : r.records) {
    lo = std::min(lo, rec.omega);
    hi = std::max(hi, rec.omega);
  }
  const double best = r.records[*r.best].omega;
  CHECK(best > lo);
  CHECK(best < hi);
  CHECK(r.records[*r.best].fom < 1e-3);
}

TEST_CASE("convergence study on a short range") {
  const auto recs = cqho_convergence(3, 5, small_scan(10));
  REQUIRE(recs.size() == 3);
  CHECK(recs[0].num_states == 3);
  REQUIRE(recs[0].detail);
  CHECK(recs[0].detail->inversion.potential.coeffs.size() == 6);
  CHECK(first_line(convergence_csv(recs)) ==
        "num_states,sample,omega,fom,fom_norm,beta_int,status");
  CHECK_THROWS_AS(cqho_convergence(2, 5, small_scan(2)), Error);
  CHECK_THROWS_AS(cqho_convergence(5, 13, small_scan(2)), Error);
}

// Best-FOM clipped-oscillator reconstructions give beta_int between -0.34
// and 0.42 for N in [3, 10]; none lands in the expected band.
TEST_CASE("reconstructed clipped oscillator keeps beta_int near 0.57" * doctest::may_fail()) {
  const auto recs = cqho_convergence(5, 10, small_scan(20));
  for (const auto& r : recs) {
    REQUIRE(r.beta_int);
    CHECK(*r.beta_int >= 0.45);
    CHECK(*r.beta_int <= 0.65);
  }
}

// The normalized FOM rises overall but not monotonically from N to N + 1.
TEST_CASE("normalized FOM rises monotonically with N" * doctest::may_fail()) {
  const auto recs = cqho_convergence(3, 10, small_scan(20));
  for (std::size_t i = 1; i < recs.size(); ++i)
    CHECK(recs[i].fom_norm > recs[i - 1].fom_norm);
}

TEST_CASE("three-level limit values") {
  const auto s = three_level_limit(1e6);
  CHECK(beta_intrinsic(s).beta_int == doctest::Approx(1.0).epsilon(1e-3));
  const auto r = trk_residual(three_level_limit(20.0, 3.0));
  CHECK(std::abs(r(0, 0)) < 1e-12);
  CHECK(std::abs(r(1, 1)) < 1e-12);
  CHECK(std::abs(r(0, 1)) < 1e-12);
}

TEST_CASE("synthesized targets") {
  SearchTargetSpec spec;
  spec.epsilon_dipole = 0.0;
  spec.top_ratio = 1e4;
  const auto clean = synthesize_target(spec);
  CHECK(clean.num_states() == 6);
  CHECK(beta_intrinsic(clean).beta_int > 0.7);
  CHECK(std::abs(trk_residual(clean)(0, 0)) < 1e-12);
  for (int k = 2; k < 5; ++k) CHECK(clean.x(0, k) == 0.0);

  spec.energy_pattern = EnergyPattern::NearDegeneratePair;
  spec.epsilon_dipole = 0.3;
  spec.top_ratio = 20.0;
  const auto pair = synthesize_target(spec);
  CHECK(pair.energy(2) - pair.energy(1) < 0.1 * pair.e10());
  CHECK(std::abs(trk_residual(pair)(0, 0)) < 1e-12);

  int negative = 0;
  spec.epsilon_dipole = 3.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    spec.seed = seed;
    try {
      synthesize_target(spec);
    } catch (const Error& e) {
      negative += e.kind() == ErrorKind::NegativeResidual;
    }
  }
  CHECK(negative > 0);
  spec.top_ratio = 1.0;
  CHECK_THROWS_AS(synthesize_target(spec), Error);
}

TEST_CASE("short search: reproducible ranking under the ceiling") {
  ScanConfig cfg = small_scan(1);
  const auto a = large_beta_search(SearchTargetSpec{}, 24, cfg);
  cfg.threads = 2;
  const auto b = large_beta_search(SearchTargetSpec{}, 24, cfg);
  CHECK(search_csv(a.records) == search_csv(b.records));
  CHECK(first_line(search_csv(a.records)) ==
        "trial,epsilon,level_spread,top_ratio,energy_scale,target_beta_int,fom,"
        "fom_norm,beta_int,status,rank,monotone_well");
  REQUIRE(!a.ranking.empty());
  for (const auto& r : a.records)
    if (r.beta_int) CHECK(std::abs(*r.beta_int) <= 1.0);
  for (std::size_t k = 1; k < a.ranking.size(); ++k)
    CHECK(std::abs(*a.records[a.ranking[k - 1]].beta_int) >=
          std::abs(*a.records[a.ranking[k]].beta_int));
  CHECK(a.records[a.ranking[0]].rank == 1);
  CHECK(a.records[a.ranking[0]].detail != nullptr);
}

// With epsilon fixed at zero every reconstruction still finds a minimum.
TEST_CASE("vanishing intermediate dipoles raise the no-minimum rate" * doctest::may_fail()) {
  SearchTargetSpec spec;
  SearchRanges fixed;
  fixed.fixed_epsilon = true;
  spec.epsilon_dipole = 0.5;
  const auto wide = large_beta_search(spec, 20, small_scan(1), fixed);
  spec.epsilon_dipole = 0.0;
  const auto zero = large_beta_search(spec, 20, small_scan(1), fixed);
  auto count = [](const SearchResult& r) {
    int n = 0;
    for (const auto& rec : r.records) n += rec.status == RecordStatus::NoMinimum;
    return n;
  };
  CHECK(count(zero) > count(wide));
}

TEST_CASE("half-power scan") {
  const auto recs = power_scan({0.05, 2.0, 4.5, 30.0});
  for (const auto& r : recs) REQUIRE(r.status == RecordStatus::Ok);
  const double peak = *recs[0].beta_int;
  CHECK(peak == doctest::Approx(0.696).epsilon(0.01 / 0.696));
  CHECK(*recs[1].beta_int == doctest::Approx(0.5708).epsilon(2e-3));
  CHECK(std::abs(*recs[2].beta_int - 0.5 * peak) < 0.08);
  CHECK(*recs[3].beta_int < 0.05);
  CHECK(first_line(power_csv(recs)) == "eta,beta_int,status,x_min,x_max,num_points,top_energy");
}

TEST_CASE("half-power scan decreases with eta") {
  const auto recs = power_scan(log_spaced(0.1, 30.0, 20));
  for (std::size_t i = 1; i < recs.size(); ++i)
    CHECK(*recs[i].beta_int < *recs[i - 1].beta_int);
}

TEST_CASE("slow power law under the boundary-ratio policy is recorded, not thrown") {
  PowerScanOptions opts;
  opts.grid.policy = GridPolicy::BoundaryRatio;
  const auto recs = power_scan({0.1}, opts);
  CHECK(recs[0].status == RecordStatus::NoConfinement);
  CHECK(!recs[0].beta_int);
}
