#include <filesystem>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "polyinv/analytic.hpp"
#include "polyinv/error.hpp"
#include "polyinv/io.hpp"

using namespace polyinv;
namespace fs = std::filesystem;

TEST_CASE("spectra JSON round-trips bit for bit") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd e(5);
  Eigen::MatrixXd x(5, 5);
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) e(i) = acc += 0.1 + std::abs(u(rng)) / 3.0;
  for (int i = 0; i < 5; ++i)
    for (int j = i; j < 5; ++j) x(i, j) = x(j, i) = u(rng) * 1e-3 / 7.0;
  const SpectralData s(e, x);
  const SpectralData back = spectra_from_json(spectra_to_json(s));
  CHECK((back.energies().array() == s.energies().array()).all());
  CHECK((back.dipole().array() == s.dipole().array()).all());
}

TEST_CASE("spectra JSON errors name the problem") {
  auto message = [](const std::string& text) {
    try {
      spectra_from_json(text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidInput);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("{\"energies\": [0, 1]}").find("dipole") != std::string::npos);
  CHECK(message(R"({"energies":[0,1],"dipole":[[0,0.5],[0.4,0]]})")
            .find("dipole not symmetric at (0,1)") != std::string::npos);
  CHECK(message(R"({"energies":[1,0],"dipole":[[0,0],[0,0]]})") != "no error");
  CHECK(message("not json") != "no error");
}

TEST_CASE("atomic writes land whole files") {
  const fs::path dir = fs::temp_directory_path() / "polyinv_io_test" / "nested";
  fs::remove_all(dir.parent_path());
  write_atomic(dir / "a.txt", "first");
  write_atomic(dir / "a.txt", "second");
  CHECK(read_text(dir / "a.txt") == "second");
  int files = 0;
  for ([[maybe_unused]] const auto& f : fs::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  save_spectra(dir / "s.json", qho_spectra(2.0, 3));
  CHECK(load_spectra(dir / "s.json").energy(2) == 5.0);
  fs::remove_all(dir.parent_path());
}

TEST_CASE("inverse JSON carries coefficients and walls") {
  const auto s = qho_spectra(10.0, 4);
  const auto inv = invert_spectra(s);
  WellDomain d;
  d.x_left = -1.0;
  d.x_right = 2.0;
  const auto doc = nlohmann::json::parse(inverse_to_json(inv, &d));
  CHECK(doc.at("coefficients").size() == 10);
  CHECK(doc.at("well").at("x_left") == -1.0);
  CHECK(doc.at("well").at("x_right") == 2.0);
  CHECK(doc.at("effective_rank") == inv.solution.effective_rank);
}

TEST_CASE("CSV dumps have the documented columns") {
  const auto sol = solve(Harmonic{1.0}, {-6.0, 6.0, 101}, 3);
  const std::string w = wavefunctions_csv(sol);
  std::istringstream lines(w);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "x,psi_0,psi_1,psi_2");
  int rows = 0;
  for (std::string l; std::getline(lines, l);) ++rows;
  CHECK(rows == 101);

  const PolynomialPotential p{{0.0, 0.0, 1.0}, 0.0, std::pair{-1.0, 1.0}};
  const std::string v = potential_csv(p, -2.0, 2.0, 5);
  CHECK(v.find("inf") != std::string::npos);
}
