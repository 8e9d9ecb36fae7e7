#include "polyinv/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "polyinv/error.hpp"

namespace polyinv {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

std::string_view method_name(BoundaryMethod m) {
  switch (m) {
    case BoundaryMethod::Threshold:
      return "threshold";
    case BoundaryMethod::BarrierPeak:
      return "barrier_peak";
    case BoundaryMethod::ScanEdge:
      return "scan_edge";
  }
  return "?";
}

}  // namespace

std::string spectra_to_json(const SpectralData& s) {
  json doc;
  doc["energies"] = vec_json(s.energies());
  json rows = json::array();
  for (int i = 0; i < s.num_states(); ++i) {
    rows.push_back(vec_json(s.dipole().row(i).transpose()));
  }
  doc["dipole"] = std::move(rows);
  return doc.dump(2) + "\n";
}

SpectralData spectra_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput,
                std::string("spectra JSON parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("energies") || !doc.contains("dipole")) {
    throw Error(ErrorKind::InvalidInput,
                "spectra JSON needs \"energies\" and \"dipole\"");
  }
  const json& je = doc["energies"];
  const json& jx = doc["dipole"];
  if (!je.is_array() || !jx.is_array()) {
    throw Error(ErrorKind::InvalidInput, "energies and dipole must be arrays");
  }
  const auto n = static_cast<Eigen::Index>(je.size());
  Eigen::VectorXd e(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!je[i].is_number()) {
      throw Error(ErrorKind::InvalidInput,
                  "energy " + std::to_string(i) + " is not a number");
    }
    e(i) = je[i].get<double>();
  }
  if (static_cast<Eigen::Index>(jx.size()) != n) {
    throw Error(ErrorKind::InvalidInput, "dipole must have one row per energy");
  }
  Eigen::MatrixXd x(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = jx[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw Error(ErrorKind::InvalidInput,
                  "dipole row " + std::to_string(i) + " has the wrong length");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!row[j].is_number()) {
        throw Error(ErrorKind::InvalidInput,
                    "dipole entry (" + std::to_string(i) + "," +
                        std::to_string(j) + ") is not a number");
      }
      x(i, j) = row[j].get<double>();
    }
  }
  return SpectralData(std::move(e), std::move(x));
}

SpectralData load_spectra(const std::filesystem::path& path) {
  return spectra_from_json(read_text(path));
}

void save_spectra(const std::filesystem::path& path, const SpectralData& s) {
  write_atomic(path, spectra_to_json(s));
}

std::string inverse_to_json(const Inversion& inv, const WellDomain* domain) {
  json doc;
  doc["center"] = inv.potential.center;
  doc["coefficients"] = vec_json(inv.solution.coefficients);
  doc["scale_free_coefficients"] = vec_json(inv.solution.scale_free_coeffs);
  doc["singular_values"] = vec_json(inv.solution.singular_values);
  doc["effective_rank"] = inv.solution.effective_rank;
  doc["residual_norm"] = inv.solution.residual_norm;
  doc["cutoff"] = inv.solution.cutoff;
  if (domain) {
    doc["well"] = {
        {"minimum_x", domain->minimum_x},
        {"minimum_value", domain->minimum_value},
        {"x_left", domain->x_left},
        {"x_right", domain->x_right},
        {"left_method", method_name(domain->left_method)},
        {"right_method", method_name(domain->right_method)},
        {"boundary_value_ratio", domain->boundary_value_ratio},
    };
  }
  return doc.dump(2) + "\n";
}

std::string wavefunctions_csv(const EigenSolution& sol) {
  std::string out = "x";
  const auto k = sol.wavefunctions.rows();
  for (Eigen::Index s = 0; s < k; ++s) out += ",psi_" + std::to_string(s);
  out += '\n';
  for (int j = 0; j < sol.grid.num_points; ++j) {
    out += fmt17(sol.grid.x(j));
    for (Eigen::Index s = 0; s < k; ++s) {
      out += ',';
      out += fmt17(sol.wavefunctions(s, j));
    }
    out += '\n';
  }
  return out;
}

std::string potential_csv(const PolynomialPotential& p, double lo, double hi,
                          int count) {
  std::string out = "x,V\n";
  for (const auto& [x, v] : sample_polynomial(p, lo, hi, count)) {
    out += fmt17(x) + "," + (std::isinf(v) ? std::string("inf") : fmt17(v)) + "\n";
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path tmp =
      dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error(ErrorKind::InvalidInput, "cannot write " + tmp.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp, ec);
      throw Error(ErrorKind::InvalidInput, "write failed for " + path.string());
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorKind::InvalidInput, "cannot rename onto " + path.string());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace polyinv
