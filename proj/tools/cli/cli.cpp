#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "polyinv/analytic.hpp"
#include "polyinv/eigensolver.hpp"
#include "polyinv/error.hpp"
#include "polyinv/inverse.hpp"
#include "polyinv/io.hpp"
#include "polyinv/parallel.hpp"
#include "polyinv/pipelines.hpp"
#include "polyinv/potential.hpp"
#include "polyinv/response.hpp"
#include "polyinv/spectra.hpp"

namespace polyinv::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct SolveArgs {
  std::string potential = "qho";
  double omega = 1.0;
  double eta = 1.0;
  std::vector<double> coeffs;
  double center = 0.0;
  std::vector<double> walls;
  std::string file;
  int states = 6;
  std::optional<double> x_min, x_max;
  std::optional<int> points;
  double kappa = 10.0;
  std::string grid_policy = "ratio";
  double max_width = 1e6;
  std::string out = ".";
};

struct InvertArgs {
  std::string input;
  std::optional<double> cutoff;
  double kappa = 10.0;
  int beta_states = 15;
  double max_fom_norm = 1.0;
  std::string out = ".";
};

struct ScanArgs {
  std::string kind = "omega";
  std::string family = "qho";
  std::uint64_t seed = 1;
  int samples = 75;
  std::string log10_omega = "-1:2";
  std::vector<double> omega;
  int states = 6;
  std::optional<double> cutoff;
  double kappa = 10.0;
  int beta_states = 15;
  int nmin = 3;
  int nmax = 10;
  std::string eta = "0.05:30:40";
  int power_states = 10;
  std::string grid_policy = "converged";
  int levels = 6;
  int trials = 200;
  double epsilon = 0.5;
  bool fixed_epsilon = false;
  std::string pattern = "three_level";
  int threads = 0;
  std::string out = ".";
};

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::InsufficientGrid:
    case ErrorKind::UnresolvedStates:
    case ErrorKind::NoConfinement:
      return kSolverFailure;
    case ErrorKind::NoMinimum:
      return kNoWell;
    default:
      return kInputError;
  }
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) {
      throw Error(ErrorKind::InvalidInput, "not a number: '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

// "lo:hi" or "lo:hi:count"; a plain comma list is returned as given.
std::vector<double> parse_range_or_list(const std::string& text,
                                        bool log_spacing) {
  if (text.find(':') == std::string::npos) return parse_number_list(text);
  std::string joined = text;
  std::replace(joined.begin(), joined.end(), ':', ',');
  const auto parts = parse_number_list(joined);
  if (parts.size() == 2) return parts;
  if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2])) {
    throw Error(ErrorKind::InvalidInput,
                "range must be lo:hi or lo:hi:count, got '" + text + "'");
  }
  const int count = static_cast<int>(parts[2]);
  if (log_spacing) return log_spaced(parts[0], parts[1], count);
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    out[i] = count == 1 ? parts[0]
                        : parts[0] + (parts[1] - parts[0]) * i / (count - 1);
  }
  return out;
}

GridPolicy parse_policy(const std::string& s) {
  if (s == "ratio") return GridPolicy::BoundaryRatio;
  if (s == "converged") return GridPolicy::Converged;
  throw Error(ErrorKind::InvalidInput, "grid policy must be ratio|converged");
}

PotentialSpec build_potential(const SolveArgs& a) {
  PotentialSpec p;
  if (a.potential == "qho" || a.potential == "harmonic") {
    p = Harmonic{a.omega};
  } else if (a.potential == "cqho" || a.potential == "clipped") {
    p = ClippedHarmonic{a.omega};
  } else if (a.potential == "halfpower") {
    p = HalfPower{a.eta};
  } else if (a.potential == "poly") {
    PolynomialPotential poly{a.coeffs, a.center, std::nullopt};
    if (!a.walls.empty()) {
      if (a.walls.size() != 2) {
        throw Error(ErrorKind::InvalidInput, "--walls takes x_left,x_right");
      }
      poly.boundaries = std::make_pair(a.walls[0], a.walls[1]);
    }
    p = std::move(poly);
  } else if (a.potential == "tabulated") {
    if (a.file.empty()) {
      throw Error(ErrorKind::InvalidInput, "tabulated potential needs --file");
    }
    p = load_tabulated_csv(a.file);
  } else {
    throw Error(ErrorKind::InvalidInput,
                "unknown potential '" + a.potential + "'");
  }
  validate(p);
  return p;
}

json grid_json(const GridSpec& g) {
  return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"num_points", g.num_points}};
}

json vector_json(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.begin(), v.end()));
}

json optional_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_json(const fs::path& path, const json& doc) {
  write_atomic(path, doc.dump(2) + "\n");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const PotentialSpec p = build_potential(a);
  if (a.states < 2) throw Error(ErrorKind::InvalidInput, "--states must be >= 2");
  GridSpec grid;
  const bool manual = a.x_min || a.x_max || a.points;
  if (manual) {
    if (!(a.x_min && a.x_max && a.points)) {
      throw Error(ErrorKind::InvalidInput,
                  "--xmin, --xmax and --points must be given together");
    }
    grid = GridSpec{*a.x_min, *a.x_max, *a.points};
  } else {
    AutoGridOptions g;
    g.kappa = a.kappa;
    g.policy = parse_policy(a.grid_policy);
    g.max_width = a.max_width;
    grid = auto_grid(p, a.states, g);
  }
  const EigenSolution sol = solve(p, grid, a.states);
  const SpectralData s = extract_spectra(sol, a.states);
  const ResponseReport r = beta_intrinsic(s);

  const fs::path dir = a.out;
  save_spectra(dir / "spectra.json", s);
  write_atomic(dir / "wavefunctions.csv", wavefunctions_csv(sol));
  json summary = {
      {"potential", describe(p)},
      {"grid", grid_json(grid)},
      {"energies", vector_json(s.energies())},
      {"trk_ground_residual", trk_residual(s)(0, 0)},
      {"beta", r.beta},
      {"beta_max", r.beta_max},
      {"beta_int", r.beta_int},
  };
  if (const auto* hp = std::get_if<HalfPower>(&p); hp && hp->eta == 2.0) {
    summary["note"] =
        "x^2 equals the clipped harmonic oscillator with omega = sqrt(2)";
  }
  write_json(dir / "solve_summary.json", summary);

  out << describe(p) << " on [" << grid.x_min << ", " << grid.x_max << "] x "
      << grid.num_points << "\n";
  out << std::setw(4) << "n" << std::setw(18) << "E_n" << std::setw(18)
      << "x_0n" << "\n";
  out << std::setprecision(9);
  for (int n = 0; n < s.num_states(); ++n) {
    out << std::setw(4) << n << std::setw(18) << s.energy(n) << std::setw(18)
        << s.x(0, n) << "\n";
  }
  out << "beta_int " << r.beta_int << "\n";
  return kOk;
}

int cmd_invert(const InvertArgs& a, std::ostream& out, std::ostream& err) {
  const SpectralData s = load_spectra(a.input);
  RoundtripOptions opts;
  opts.cutoff = a.cutoff;
  opts.kappa = a.kappa;
  opts.beta_states = a.beta_states;
  const fs::path dir = a.out;

  std::optional<RoundtripResult> rt;
  std::string status = "Ok";
  std::string reason;
  try {
    rt.emplace(roundtrip(s, opts));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoMinimum && e.kind() != ErrorKind::NoConfinement) {
      throw;
    }
    status = std::string(to_string(e.kind()));
    reason = e.what();
  }

  const Inversion inv = rt ? rt->inversion : invert_spectra(s, a.cutoff);
  json doc = json::parse(inverse_to_json(inv, rt ? &rt->domain : nullptr));
  const int n = s.num_states();
  if (rt) {
    const double fn = normalized_fom(rt->fom, n);
    doc["fom"] = rt->fom;
    doc["fom_norm"] = fn;
    doc["beta_int"] = rt->response.beta_int;
    doc["beta_states"] = rt->response.num_states_used;
    doc["candidates"] = rt->candidates;
    if (!(fn < a.max_fom_norm)) {
      status = "PoorReconstruction";
      reason = "normalized FOM " + std::to_string(fn) + " >= " +
               std::to_string(a.max_fom_norm);
    }
    save_spectra(dir / "reconstructed_spectra.json", rt->calc);
    const double w = rt->domain.x_right - rt->domain.x_left;
    write_atomic(dir / "potential.csv",
                 potential_csv(rt->potential, rt->domain.x_left - 0.05 * w,
                               rt->domain.x_right + 0.05 * w, 2001));
  } else {
    doc["fom"] = nullptr;
    doc["fom_norm"] = nullptr;
    doc["beta_int"] = nullptr;
  }
  doc["status"] = status;
  doc["num_states"] = n;
  doc["kappa"] = a.kappa;
  write_json(dir / "inverse.json", doc);

  out << std::setprecision(9);
  out << "states " << n << ", M " << triangular_count(n) << ", rank "
      << inv.solution.effective_rank << ", residual "
      << inv.solution.residual_norm << "\n";
  out << "a_" << inv.potential.coeffs.size() - 1 << " = "
      << inv.potential.coeffs.back() << "\n";
  if (rt) {
    out << "well [" << rt->domain.x_left << ", " << rt->domain.x_right
        << "] minimum at " << rt->domain.minimum_x << "\n";
    out << "fom " << rt->fom << " (normalized " << normalized_fom(rt->fom, n)
        << "), beta_int " << rt->response.beta_int << "\n";
  }
  out << "status " << status << "\n";
  if (status != "Ok") {
    err << "inversion produced no usable well: " << reason << "\n";
    return kNoWell;
  }
  return kOk;
}

json scan_config_json(const ScanArgs& a) {
  return {{"kind", a.kind},
          {"family", a.family},
          {"seed", a.seed},
          {"samples", a.samples},
          {"log10_omega", a.log10_omega},
          {"omega", a.omega},
          {"states", a.states},
          {"cutoff", optional_json(a.cutoff)},
          {"kappa", a.kappa},
          {"beta_states", a.beta_states},
          {"nmin", a.nmin},
          {"nmax", a.nmax},
          {"eta", a.eta},
          {"power_states", a.power_states},
          {"grid_policy", a.grid_policy},
          {"levels", a.levels},
          {"trials", a.trials},
          {"epsilon", a.epsilon},
          {"fixed_epsilon", a.fixed_epsilon},
          {"pattern", a.pattern}};
}

ScanConfig scan_config(const ScanArgs& a) {
  ScanConfig c;
  c.seed = a.seed;
  c.num_samples = a.samples;
  const auto range = parse_range_or_list(a.log10_omega, false);
  if (range.size() != 2) {
    throw Error(ErrorKind::InvalidInput, "--log10-omega takes lo:hi");
  }
  c.omega_log10_lo = range[0];
  c.omega_log10_hi = range[1];
  c.omega_values = a.omega;
  c.num_states = a.states;
  c.svd_cutoff = a.cutoff;
  c.kappa = a.kappa;
  c.beta_states = a.beta_states;
  c.threads = a.threads;
  c.validate();
  return c;
}

json scan_record_json(const ScanRecord& r) {
  return {{"sample", r.sample},
          {"omega", r.omega},
          {"num_states", r.num_states},
          {"fom", finite_or_null(r.fom)},
          {"fom_norm", finite_or_null(r.fom_norm)},
          {"beta_int", optional_json(r.beta_int)},
          {"status", to_string(r.status)}};
}

int cmd_scan(const ScanArgs& a, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path dir = a.out;
  json summary = {{"config", scan_config_json(a)}, {"seed", a.seed}};
  summary["threads"] = a.threads > 0 ? a.threads : default_thread_count();
  std::string csv;
  out << std::setprecision(9);

  if (a.kind == "omega") {
    Family fam;
    if (a.family == "qho") {
      fam = Family::Qho;
    } else if (a.family == "cqho") {
      fam = Family::Cqho;
    } else {
      throw Error(ErrorKind::InvalidInput, "--family must be qho|cqho");
    }
    const OmegaScanResult res = omega_scan(fam, scan_config(a));
    csv = omega_csv(res.records);
    if (res.best) {
      const ScanRecord& b = res.records[*res.best];
      summary["best"] = scan_record_json(b);
      out << "best sample " << b.sample << ": omega " << b.omega << ", fom "
          << b.fom << ", beta_int " << b.beta_int.value_or(NAN) << "\n";
    } else {
      summary["best"] = nullptr;
      out << "no sample produced a well\n";
    }
  } else if (a.kind == "cqho") {
    const auto rows = cqho_convergence(a.nmin, a.nmax, scan_config(a));
    csv = convergence_csv(rows);
    json all = json::array();
    for (const auto& r : rows) {
      all.push_back(scan_record_json(r));
      out << "N " << r.num_states << ": omega " << r.omega << ", fom/N^2 "
          << r.fom_norm << ", beta_int " << r.beta_int.value_or(NAN) << "\n";
    }
    summary["best"] = std::move(all);
  } else if (a.kind == "power") {
    PowerScanOptions o;
    o.num_states = a.power_states;
    o.grid.policy = parse_policy(a.grid_policy);
    o.grid.kappa = a.kappa;
    o.threads = a.threads;
    const auto rows = power_scan(parse_range_or_list(a.eta, true), o);
    csv = power_csv(rows);
    const PowerRecord* best = nullptr;
    for (const auto& r : rows) {
      if (r.beta_int && (!best || *r.beta_int > *best->beta_int)) best = &r;
    }
    if (best) {
      summary["best"] = {{"eta", best->eta}, {"beta_int", *best->beta_int}};
      out << "max beta_int " << *best->beta_int << " at eta " << best->eta
          << "\n";
    } else {
      summary["best"] = nullptr;
    }
  } else if (a.kind == "search") {
    SearchTargetSpec spec;
    spec.num_states = a.levels;
    spec.epsilon_dipole = a.epsilon;
    spec.seed = a.seed;
    if (a.pattern == "three_level") {
      spec.energy_pattern = EnergyPattern::ThreeLevelLike;
    } else if (a.pattern == "near_degenerate") {
      spec.energy_pattern = EnergyPattern::NearDegeneratePair;
    } else {
      throw Error(ErrorKind::InvalidInput,
                  "--pattern must be three_level|near_degenerate");
    }
    SearchRanges ranges;
    ranges.fixed_epsilon = a.fixed_epsilon;
    ScanArgs b = a;
    b.states = a.levels;
    const SearchResult res =
        large_beta_search(spec, a.trials, scan_config(b), ranges);
    csv = search_csv(res.records);
    int n_ok = 0, n_nomin = 0;
    double worst = 0.0;
    for (const auto& r : res.records) {
      n_ok += r.status == RecordStatus::Ok;
      n_nomin += r.status == RecordStatus::NoMinimum;
      if (r.beta_int) worst = std::max(worst, std::abs(*r.beta_int));
    }
    summary["ok_trials"] = n_ok;
    summary["no_minimum_trials"] = n_nomin;
    summary["max_abs_beta_int"] = worst;
    if (!res.ranking.empty()) {
      const SearchRecord& top = res.records[res.ranking.front()];
      summary["best"] = {{"trial", top.trial},
                         {"beta_int", *top.beta_int},
                         {"fom", top.fom},
                         {"target_beta_int", top.target_beta_int},
                         {"monotone_well", top.monotone_well}};
      if (top.detail) {
        summary["best"]["coefficients"] = top.detail->potential.coeffs;
        summary["best"]["center"] = top.detail->potential.center;
        summary["best"]["walls"] = {top.detail->domain.x_left,
                                    top.detail->domain.x_right};
      }
      out << "best trial " << top.trial << ": beta_int " << *top.beta_int
          << ", fom " << top.fom << " (" << n_ok << " Ok of " << a.trials
          << ")\n";
    } else {
      summary["best"] = nullptr;
      out << "no trial produced a well\n";
    }
  } else {
    throw Error(ErrorKind::InvalidInput,
                "--kind must be omega|cqho|power|search");
  }

  summary["timings"] = {{"total_seconds", seconds_since(t0)}};
  write_atomic(dir / (a.kind + ".csv"), csv);
  write_json(dir / (a.kind + "_summary.json"), summary);
  out << "wrote " << (dir / (a.kind + ".csv")).string() << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Polynomial potentials from energy spectra and transition "
               "dipole moments, with hyperpolarizability evaluation."};
  app.name("polyinv");
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "Flat 'key = value' file; keys are <subcommand>.<option>, "
                 "command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Forward solve a potential");
  solve_cmd->add_option("--potential", sa.potential,
                        "qho|cqho|halfpower|poly|tabulated");
  solve_cmd->add_option("--omega", sa.omega, "Oscillator frequency (a.u.)");
  solve_cmd->add_option("--eta", sa.eta, "Half-power exponent");
  solve_cmd->add_option("--coeffs", sa.coeffs, "Polynomial a_0,a_1,...")
      ->delimiter(',');
  solve_cmd->add_option("--center", sa.center, "Polynomial center c");
  solve_cmd->add_option("--walls", sa.walls, "Dirichlet walls x_left,x_right")
      ->delimiter(',');
  solve_cmd->add_option("--file", sa.file, "Two-column CSV for tabulated");
  solve_cmd->add_option("--states", sa.states, "Number of states K");
  solve_cmd->add_option("--xmin", sa.x_min, "Manual grid start");
  solve_cmd->add_option("--xmax", sa.x_max, "Manual grid end");
  solve_cmd->add_option("--points", sa.points, "Manual grid points");
  solve_cmd->add_option("--kappa", sa.kappa, "Boundary safety factor");
  solve_cmd->add_option("--grid-policy", sa.grid_policy, "ratio|converged");
  solve_cmd->add_option("--max-width", sa.max_width, "Domain width cap (a.u.)");
  solve_cmd->add_option("--out", sa.out, "Output directory");

  InvertArgs ia;
  auto* invert_cmd =
      app.add_subcommand("invert", "Recover a polynomial well from spectra");
  invert_cmd->add_option("--input", ia.input, "Spectra JSON")->required();
  invert_cmd->add_option("--cutoff", ia.cutoff,
                         "Relative SVD cutoff (default M*machine epsilon)");
  invert_cmd->add_option("--kappa", ia.kappa, "Boundary safety factor");
  invert_cmd->add_option("--beta-states", ia.beta_states,
                         "States for the reconstruction's beta_int");
  invert_cmd->add_option("--max-fom-norm", ia.max_fom_norm,
                         "Normalized FOM at or above which exit code is 3");
  invert_cmd->add_option("--out", ia.out, "Output directory");

  ScanArgs ca;
  auto* scan_cmd = app.add_subcommand("scan", "Run a study pipeline");
  scan_cmd->add_option("--kind", ca.kind, "omega|cqho|power|search");
  scan_cmd->add_option("--family", ca.family, "omega scan family: qho|cqho");
  scan_cmd->add_option("--seed", ca.seed, "Root RNG seed (SplitMix64)");
  scan_cmd->add_option("--samples", ca.samples, "Omega samples per scan");
  scan_cmd->add_option("--log10-omega", ca.log10_omega, "lo:hi of log10 omega");
  scan_cmd->add_option("--omega", ca.omega, "Fixed omega list (replaces draws)")
      ->delimiter(',');
  scan_cmd->add_option("--states", ca.states, "States N for omega scans");
  scan_cmd->add_option("--cutoff", ca.cutoff,
                       "Relative SVD cutoff (default M*machine epsilon)");
  scan_cmd->add_option("--kappa", ca.kappa, "Boundary safety factor");
  scan_cmd->add_option("--beta-states", ca.beta_states,
                       "States for reconstructed beta_int");
  scan_cmd->add_option("--nmin", ca.nmin, "cqho: smallest N");
  scan_cmd->add_option("--nmax", ca.nmax, "cqho: largest N");
  scan_cmd->add_option("--eta", ca.eta,
                       "power: lo:hi:count (log spaced) or a comma list");
  scan_cmd->add_option("--power-states", ca.power_states,
                       "power: states in beta_int");
  scan_cmd->add_option("--grid-policy", ca.grid_policy,
                       "power: converged|ratio");
  scan_cmd->add_option("--levels", ca.levels, "search: states per target");
  scan_cmd->add_option("--trials", ca.trials, "search: number of targets");
  scan_cmd->add_option("--epsilon", ca.epsilon,
                       "search: largest intermediate |x_0i| / x_max");
  scan_cmd->add_flag("--fixed-epsilon", ca.fixed_epsilon,
                     "search: use --epsilon exactly for every trial");
  scan_cmd->add_option("--pattern", ca.pattern,
                       "search: three_level|near_degenerate");
  scan_cmd->add_option("--threads", ca.threads,
                       "Workers (0 = POLYINV_THREADS or hardware)");
  scan_cmd->add_option("--out", ca.out, "Output directory");

  std::vector<std::string> argv_store{"polyinv"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(sa, out);
    if (invert_cmd->parsed()) return cmd_invert(ia, out, err);
    if (scan_cmd->parsed()) return cmd_scan(ca, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return exit_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace polyinv::cli
