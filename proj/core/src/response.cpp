#include "polyinv/response.hpp"

#include <cmath>

#include "polyinv/error.hpp"

namespace polyinv {

double beta_sos(const SpectralData& s, const UnitSystem& units) {
  const int n = s.num_states();
  const double x00 = s.x(0, 0);
  double sum = 0.0;
  for (int a = 1; a < n; ++a) {
    const double left = s.x(0, a) / s.transition_energy(a, 0);
    for (int b = 1; b < n; ++b) {
      const double xbar = a == b ? s.x(a, a) - x00 : s.x(a, b);
      sum += left * xbar * s.x(b, 0) / s.transition_energy(b, 0);
    }
  }
  const double e3 = units.charge * units.charge * units.charge;
  return 3.0 * e3 * sum;
}

double beta_limit(double e10, int num_electrons, const UnitSystem& units) {
  if (!(e10 > 0.0) || num_electrons < 1) {
    throw Error(ErrorKind::InvalidInput,
                "beta_limit needs E_10 > 0 and at least one electron");
  }
  const double unit = units.charge * units.hbar / std::sqrt(units.mass);
  return std::pow(3.0, 0.25) * unit * unit * unit *
         std::pow(static_cast<double>(num_electrons), 1.5) /
         std::pow(e10, 3.5);
}

ResponseReport beta_intrinsic(const SpectralData& s, const UnitSystem& units) {
  ResponseReport r;
  r.beta = beta_sos(s, units);
  r.beta_max = beta_limit(s.e10(), 1, units);
  r.beta_int = r.beta / r.beta_max;
  r.num_states_used = s.num_states();
  return r;
}

}  // namespace polyinv
