#include "polyinv/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "polyinv/error.hpp"

namespace polyinv {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(9);
  os << v;
  return os.str();
}

}  // namespace

double PolynomialPotential::value(double x) const {
  const double y = x - center;
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * y + *it;
  return acc;
}

double PolynomialPotential::derivative(double x) const {
  const double y = x - center;
  double acc = 0.0;
  for (std::size_t q = coeffs.size(); q-- > 1;) {
    acc = acc * y + static_cast<double>(q) * coeffs[q];
  }
  return acc;
}

int PolynomialPotential::degree() const {
  for (std::size_t q = coeffs.size(); q-- > 0;) {
    if (coeffs[q] != 0.0) return static_cast<int>(q);
  }
  return -1;
}

void validate(const PotentialSpec& p) {
  std::visit(
      Overloaded{
          [](const Harmonic& h) {
            if (!(h.omega > 0.0)) {
              throw Error(ErrorKind::InvalidInput, "harmonic omega must be > 0");
            }
          },
          [](const ClippedHarmonic& h) {
            if (!(h.omega > 0.0)) {
              throw Error(ErrorKind::InvalidInput,
                          "clipped harmonic omega must be > 0");
            }
          },
          [](const HalfPower& h) {
            if (!(h.eta > 0.0)) {
              throw Error(ErrorKind::InvalidInput, "half power eta must be > 0");
            }
          },
          [](const PolynomialPotential& poly) {
            if (poly.coeffs.empty()) {
              throw Error(ErrorKind::InvalidInput,
                          "polynomial needs at least one coefficient");
            }
            if (poly.boundaries &&
                !(poly.boundaries->first < poly.boundaries->second)) {
              throw Error(ErrorKind::InvalidInput,
                          "polynomial boundaries must satisfy x_L < x_R");
            }
          },
          [](const TabulatedGrid& t) {
            if (t.x.size() != t.v.size() || t.x.size() < 2) {
              throw Error(ErrorKind::InvalidInput,
                          "tabulated potential needs matching x/V columns");
            }
            if (!std::is_sorted(t.x.begin(), t.x.end()) ||
                std::adjacent_find(t.x.begin(), t.x.end()) != t.x.end()) {
              throw Error(ErrorKind::InvalidInput,
                          "tabulated x must be strictly ascending");
            }
          },
      },
      p);
}

double evaluate_potential(const PotentialSpec& p, double x) {
  return std::visit(
      Overloaded{
          [x](const Harmonic& h) { return 0.5 * h.omega * h.omega * x * x; },
          [x](const ClippedHarmonic& h) {
            return x <= 0.0 ? kInfinitePotential
                            : 0.5 * h.omega * h.omega * x * x;
          },
          [x](const HalfPower& h) {
            return x <= 0.0 ? kInfinitePotential : std::pow(x, h.eta);
          },
          [x](const PolynomialPotential& poly) {
            if (poly.boundaries && (x <= poly.boundaries->first ||
                                    x >= poly.boundaries->second)) {
              return kInfinitePotential;
            }
            return poly.value(x);
          },
          [x](const TabulatedGrid& t) {
            if (x < t.x.front() || x > t.x.back()) return kInfinitePotential;
            auto hi = std::upper_bound(t.x.begin(), t.x.end(), x);
            if (hi == t.x.end()) return t.v.back();
            const auto j = static_cast<std::size_t>(hi - t.x.begin());
            const double x0 = t.x[j - 1];
            const double x1 = t.x[j];
            const double v0 = t.v[j - 1];
            const double v1 = t.v[j];
            if (std::isinf(v0) || std::isinf(v1)) return kInfinitePotential;
            const double w = (x - x0) / (x1 - x0);
            return v0 + w * (v1 - v0);
          },
      },
      p);
}

std::string describe(const PotentialSpec& p) {
  return std::visit(
      Overloaded{
          [](const Harmonic& h) {
            return "harmonic(omega=" + format_number(h.omega) + ")";
          },
          [](const ClippedHarmonic& h) {
            return "clipped_harmonic(omega=" + format_number(h.omega) + ")";
          },
          [](const HalfPower& h) {
            return "halfpower(eta=" + format_number(h.eta) + ")";
          },
          [](const PolynomialPotential& poly) {
            std::string s = "polynomial(degree=" +
                            std::to_string(poly.degree()) +
                            ", center=" + format_number(poly.center);
            if (poly.boundaries) {
              s += ", walls=[" + format_number(poly.boundaries->first) + ", " +
                   format_number(poly.boundaries->second) + "]";
            }
            return s + ")";
          },
          [](const TabulatedGrid& t) {
            return "tabulated(points=" + std::to_string(t.x.size()) + ")";
          },
      },
      p);
}

TabulatedGrid load_tabulated_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::InvalidInput,
                "cannot open potential file " + path.string());
  }
  TabulatedGrid out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    std::string xs, vs;
    if (!(fields >> xs >> vs)) {
      throw Error(ErrorKind::InvalidInput,
                  path.string() + ":" + std::to_string(lineno) +
                      ": expected two columns");
    }
    try {
      const double x = std::stod(xs);
      const double v = (vs == "inf" || vs == "+inf" || vs == "Infinity")
                           ? kInfinitePotential
                           : std::stod(vs);
      out.x.push_back(x);
      out.v.push_back(v);
    } catch (const std::logic_error&) {
      if (out.x.empty() && lineno == 1) continue;  // header row
      throw Error(ErrorKind::InvalidInput,
                  path.string() + ":" + std::to_string(lineno) +
                      ": not a number");
    }
  }
  validate(out);
  return out;
}

}  // namespace polyinv
