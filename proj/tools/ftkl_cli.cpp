// SPDX-License-Identifier: Apache-2.0
// Experiment harness.  One subcommand per module; every run prints a JSON
// envelope {config, results, certificates, timings} with the fully resolved
// configuration, and --out/--format persist the envelope or the plot-ready
// CSV table.  Config files are flat key=value lines merged below
// command-line flags.  Exit codes: 0 success, 1 certification failure,
// 2 usage or domain error, 3 accuracy error.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ftkl/accept.hpp"
#include "ftkl/bundle.hpp"
#include "ftkl/egg.hpp"
#include "ftkl/errors.hpp"
#include "ftkl/fitter.hpp"
#include "ftkl/fock.hpp"
#include "ftkl/io.hpp"
#include "ftkl/normalform.hpp"
#include "ftkl/spectral.hpp"

namespace {

using cxd = std::complex<double>;
using ftkl::io::Json;

const auto g_start = std::chrono::steady_clock::now();

double elapsed_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       g_start)
      .count();
}

// ---------------------------------------------------------------------------
// shared plumbing

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& what) {
  std::vector<double> out;
  for (const std::string& item : split_commas(text)) {
    size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (item.empty() || pos != item.size())
      ftkl::fail_usage(what + ": cannot parse '" + item + "' as a number");
    out.push_back(v);
  }
  if (out.empty()) ftkl::fail_usage(what + ": empty list");
  return out;
}

std::vector<int> parse_int_list(const std::string& text,
                                const std::string& what) {
  std::vector<int> out;
  for (double v : parse_double_list(text, what)) {
    if (v != std::floor(v) || std::abs(v) > 1e9)
      ftkl::fail_usage(what + ": expected integers");
    out.push_back((int)v);
  }
  return out;
}

Json json_list(const std::vector<double>& v) {
  Json j = Json::array();
  for (double x : v) j.push_back(x);
  return j;
}

// Shared by every subcommand; echoed in the envelope so artifacts are
// self-describing.
struct Common {
  std::string config_file;
  std::string out;
  std::string format = "json";
  long seed = 0;
};

void add_common(CLI::App* sc, Common& c) {
  sc->add_option("--config", c.config_file,
                 "flat key=value file merged below command-line flags");
  sc->add_option("--out", c.out, "write the result artifact to this path");
  sc->add_option("--format", c.format, "artifact format for --out")
      ->check(CLI::IsMember({"json", "csv"}));
  sc->add_option("--seed", c.seed,
                 "echoed into the config block; all grids are deterministic");
}

Json output_json(const Common& c) {
  Json j;
  j["path"] = c.out;
  j["format"] = c.format;
  return j;
}

// Prints the envelope and persists the requested artifact.  Key order is
// fixed; repeated runs of one config produce byte-identical CSV bytes.
int emit(Json config, Json results, Json certificates, const Common& common,
         const ftkl::io::Csv* csv, int exit_code = 0) {
  Json timings;
  timings["seconds"] = elapsed_seconds();
  Json env = ftkl::io::envelope(std::move(config), std::move(results),
                                std::move(certificates), std::move(timings));
  std::string text = env.dump(2);
  text += '\n';
  std::fputs(text.c_str(), stdout);
  if (!common.out.empty()) {
    if (common.format == "csv") {
      if (!csv) ftkl::fail_usage("this command has no CSV table");
      ftkl::io::write_file(common.out, csv->str());
    } else {
      ftkl::io::write_file(common.out, text);
    }
  }
  return exit_code;
}

// ---------------------------------------------------------------------------
// config file merge

// Flat UTF-8 key=value lines, '#' comments, arrays comma-separated.  The
// file's pairs are injected as --key=value right after the subcommand so
// later command-line flags override them (every option takes the last
// occurrence).  Unknown keys surface as unknown flags: a usage error.
std::vector<std::string> merge_config_file(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  size_t sub = 0;
  for (size_t i = 1; i < args.size(); ++i)
    if (!args[i].empty() && args[i][0] != '-') {
      sub = i;
      break;
    }
  std::string path;
  for (size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || sub == 0) return args;
  std::string text = ftkl::io::read_file(path);
  std::vector<std::string> injected;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    std::string key = eq == std::string::npos ? "" : trim(t.substr(0, eq));
    if (key.empty())
      ftkl::fail_usage("config " + path + ":" + std::to_string(lineno) +
                       ": expected key=value");
    injected.push_back("--" + key + "=" + trim(t.substr(eq + 1)));
  }
  std::vector<std::string> out(args.begin(), args.begin() + sub + 1);
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), args.begin() + sub + 1, args.end());
  return out;
}

// ---------------------------------------------------------------------------
// fock / scaling / neumann

ftkl::fock::HomogeneousWeight make_weight(int r, const std::string& phi0) {
  using ftkl::fock::HomogeneousWeight;
  if (phi0.empty()) return HomogeneousWeight::make_radial(r);
  return HomogeneousWeight::make_poly(r, ftkl::fock::parse_poly2(phi0));
}

Json weight_json(const ftkl::fock::HomogeneousWeight& w,
                 const std::string& phi0) {
  Json j;
  j["r"] = w.r;
  j["radial"] = w.radial;
  if (!w.radial) j["phi0"] = phi0;
  j["ellipticity"] = w.ellipticity;
  return j;
}

struct FockArgs {
  Common common;
  int r = 2;
  double t = 1.0;
  int nmax = 48;
  std::string phi0;
  std::string route = "auto";
  double extent = 0.5;
  int grid = 3;
  double tol = 1e-12;
};

int run_fock(const FockArgs& a) {
  using namespace ftkl::fock;
  HomogeneousWeight w = make_weight(a.r, a.phi0);
  BasisRoute route = a.route == "gram"     ? BasisRoute::gram
                     : a.route == "radial" ? BasisRoute::radial
                                           : BasisRoute::automatic;
  int nmax = a.nmax;
  if (nmax <= 0)
    nmax = choose_nmax(w, a.t, cxd(a.extent, a.extent), 1e-10, 16, 512, route);
  FockBasis basis = build_basis(w, a.t, nmax, route, nullptr, a.tol);

  // Weighted-kernel slice along the real axis: all pairs from a 1-d grid.
  ftkl::io::Csv csv;
  csv.header = {"p1", "p2", "q1", "q2", "re", "im", "err"};
  std::vector<double> xs;
  for (int i = 0; i < a.grid; ++i)
    xs.push_back(a.grid > 1 ? a.extent * i / (a.grid - 1) : 0.0);
  for (double x : xs)
    for (double y : xs) {
      KernelValue kv = bergman_eval(basis, cxd(x, 0.0), cxd(y, 0.0));
      csv.row({ftkl::io::fmt(x), ftkl::io::fmt(0.0), ftkl::io::fmt(y),
               ftkl::io::fmt(0.0), ftkl::io::fmt(kv.value.real()),
               ftkl::io::fmt(kv.value.imag()), ftkl::io::fmt(kv.err_est)});
    }

  KernelValue origin = bergman_eval(basis, cxd(0, 0), cxd(0, 0));
  Json config;
  config["command"] = "fock";
  config["weight"] = weight_json(w, a.phi0);
  config["t"] = a.t;
  config["nmax"] = nmax;
  config["route"] = a.route;
  config["extent"] = a.extent;
  config["grid"] = a.grid;
  config["quad"] = Json{{"tol", a.tol}};
  config["seed"] = a.common.seed;
  config["output"] = output_json(a.common);

  Json results;
  results["kernel"] = "weighted: B(p,q) = sum_k s_k(p) conj(s_k(q)), "
                      "s_k = e_k e^{-t phi}";
  results["c0"] = origin.value.real();
  results["route_used"] = basis.diagonal ? "diagonal" : "gram";
  results["slice_grid"] = json_list(xs);

  Json certs;
  certs["err_est"] = basis.err_est;
  certs["ortho_defect"] = basis.ortho_defect;
  certs["origin_err_est"] = origin.err_est;
  if (w.radial) {
    double closed = std::pow(a.t, 2.0 / a.r) * model_constant_c0_closed(a.r);
    results["c0_closed"] = closed;
    certs["c0_rel_err"] = std::abs(origin.value.real() - closed) / closed;
  }
  return emit(config, results, certs, a.common, &csv);
}

struct ScalingArgs {
  Common common;
  int r = 2;
  std::string t_list;
  std::string phi0;
  double extent = 1.0;
  int grid = 5;
  int nmax = 0;
  double tol = 1e-12;
  double max_dev = 1e-6;
};

int run_scaling(const ScalingArgs& a) {
  using namespace ftkl::fock;
  HomogeneousWeight w = make_weight(a.r, a.phi0);
  std::vector<double> ts = parse_double_list(a.t_list, "scaling --t");
  ScalingReport rep =
      scaling_deviation(w, ts, a.extent, a.grid, a.tol, a.nmax);

  ftkl::io::Csv csv;
  csv.header = {"t", "deviation"};
  for (size_t i = 0; i < rep.t_values.size(); ++i)
    csv.row({ftkl::io::fmt(rep.t_values[i]),
             ftkl::io::fmt(rep.deviation_per_t[i])});

  Json config;
  config["command"] = "scaling";
  config["weight"] = weight_json(w, a.phi0);
  config["t"] = json_list(ts);
  config["extent"] = a.extent;
  config["grid"] = a.grid;
  config["nmax"] = rep.nmax_ref;
  config["tol"] = a.tol;
  config["max_dev"] = a.max_dev;
  config["seed"] = a.common.seed;
  config["output"] = output_json(a.common);

  Json results;
  results["deviation"] = rep.deviation;
  results["deviation_per_t"] = json_list(rep.deviation_per_t);
  results["nmax_ref"] = rep.nmax_ref;

  Json certs;
  certs["err_est"] = rep.err_est;
  int code = emit(config, results, certs, a.common, &csv);
  if (!(rep.deviation <= a.max_dev))
    ftkl::fail_accuracy("scaling: max deviation " +
                        ftkl::io::fmt(rep.deviation) + " exceeds " +
                        ftkl::io::fmt(a.max_dev));
  return code;
}

struct NeumannArgs {
  Common common;
  int r = 2;
  double t = 4.0;
  double eps = 0.05;
  std::string q = "x1^3";
  std::string phi0;
  double R0 = 0.0;
  int terms = 3;
  int box_nodes = 48;
  double test_extent = 0.5;
  int test_n = 5;
  double tol = 1e-12;
};

int run_neumann(const NeumannArgs& a) {
  using namespace ftkl::fock;
  HomogeneousWeight w = make_weight(a.r, a.phi0);
  Perturbation pert;
  pert.q = parse_poly2(a.q);
  for (auto& term : pert.q.terms) term.c *= a.eps;
  pert.R0 = a.R0 > 0.0 ? a.R0 : 3.0 / std::sqrt(a.t);
  NeumannOptions opt;
  opt.nmax_terms = a.terms;
  opt.box_nodes = a.box_nodes;
  opt.test_extent = a.test_extent;
  opt.test_n = a.test_n;
  opt.tol = a.tol;
  NeumannReport rep = neumann_corrected_kernel(w, pert, a.t, opt);

  ftkl::io::Csv csv;
  csv.header = {"order", "delta"};
  for (size_t i = 0; i < rep.deltas.size(); ++i)
    csv.row({std::to_string(i + 1), ftkl::io::fmt(rep.deltas[i])});

  Json config;
  config["command"] = "neumann";
  config["weight"] = weight_json(w, a.phi0);
  config["t"] = a.t;
  config["eps"] = a.eps;
  config["q"] = a.q;
  config["R0"] = pert.R0;
  config["terms"] = a.terms;
  config["box_nodes"] = a.box_nodes;
  config["test_extent"] = a.test_extent;
  config["test_n"] = a.test_n;
  config["tol"] = a.tol;
  config["seed"] = a.common.seed;
  config["output"] = output_json(a.common);

  Json results;
  results["deltas"] = json_list(rep.deltas);
  results["box_halfwidth"] = rep.box_halfwidth;
  results["nmax_used"] = rep.nmax_used;

  Json certs;
  certs["antiherm_defect"] = rep.antiherm_defect;
  certs["err_est"] = rep.err_est;
  return emit(config, results, certs, a.common, &csv);
}

// ---------------------------------------------------------------------------
// spectral

struct SpectralArgs {
  Common common;
  int r = 2;
  double t = 1.0;
  std::string t_list;
  int mesh = 1600;
  int range = 12;
};

int run_spectral(const SpectralArgs& a) {
  using namespace ftkl::spectral;
  GapConfig cfg;
  cfg.cells = a.mesh;
  cfg.sector_range = a.range;

  Json config;
  config["command"] = "spectral";
  config["r"] = a.r;
  config["mesh"] = a.mesh;
  config["range"] = a.range;
  config["seed"] = a.common.seed;
  config["output"] = output_json(a.common);

  ftkl::io::Csv csv;
  csv.header = {"t", "lambda_min_pos"};

  if (!a.t_list.empty()) {
    std::vector<double> ts = parse_double_list(a.t_list, "spectral --t-list");
    ScalingFit fit = gap_scaling(a.r, ts, cfg);
    for (size_t i = 0; i < fit.t_values.size(); ++i)
      csv.row({ftkl::io::fmt(fit.t_values[i]), ftkl::io::fmt(fit.gaps[i])});
    config["t"] = json_list(ts);
    Json results;
    results["gaps"] = json_list(fit.gaps);
    results["slope"] = fit.slope;
    results["slope_target"] = 2.0 / a.r;
    results["intercept"] = fit.intercept;
    Json certs;
    certs["mesh_doubling_tol"] = cfg.mesh_tol;
    return emit(config, results, certs, a.common, &csv);
  }

  GapReport rep = gap(a.r, a.t, cfg);
  csv.row({ftkl::io::fmt(a.t), ftkl::io::fmt(rep.gap)});
  config["t"] = a.t;
  Json results;
  results["gap"] = rep.gap;
  results["argmin_ell"] = rep.argmin_ell;
  results["rho_max"] = rep.rho_max;
  if (a.r == 2) results["reference_2t"] = 2.0 * a.t;
  Json certs;
  certs["mesh_change"] = rep.mesh_change;
  certs["zero_threshold"] = rep.zero_threshold;
  certs["max_zero_mode"] = rep.max_zero;
  return emit(config, results, certs, a.common, &csv);
}

// ---------------------------------------------------------------------------
// egg

struct EggArgs {
  Common common;
  int k = 1;
  std::string point = "degenerate";
  int rho_decades = 6;
  int per_decade = 4;
  std::string rho;
  double u = -1.0;
  double v = 0.0;
  bool u_given = false;
  double tol = 1e-10;
};

int run_egg(const EggArgs& a) {
  using namespace ftkl::egg;
  Json config;
  config["command"] = "egg";
  config["k"] = a.k;
  config["tol"] = a.tol;

  if (a.u_given) {
    // Single interior point (u, v) = (|z1|^2, |z2|^2).
    DiagValue dv = diagonal_value(a.k, a.u, a.v, a.tol);
    double rho = a.u + std::pow(a.v, a.k) - 1.0;
    ftkl::io::Csv csv;
    csv.header = {"rho", "value", "tail_bound"};
    csv.row({ftkl::io::fmt(rho), ftkl::io::fmt(dv.value),
             ftkl::io::fmt(dv.bound)});
    config["u"] = a.u;
    config["v"] = a.v;
    config["seed"] = a.common.seed;
    config["output"] = output_json(a.common);
    Json results;
    results["rho"] = rho;
    results["value"] = dv.value;
    results["terms"] = dv.terms;
    Json certs;
    certs["tail_bound"] = dv.bound;
    return emit(config, results, certs, a.common, &csv);
  }

  std::vector<double> rho;
  if (!a.rho.empty()) {
    rho = parse_double_list(a.rho, "egg --rho");
  } else {
    if (a.rho_decades < 1 || a.per_decade < 1)
      ftkl::fail_usage("egg: --rho-decades and --per-decade must be >= 1");
    int n = a.rho_decades * a.per_decade + 1;
    for (int i = 0; i < n; ++i)
      rho.push_back(
          -std::pow(10.0, -1.0 - a.rho_decades * double(i) / (n - 1)));
  }
  BoundaryPath path =
      a.point == "degenerate" ? BoundaryPath::axis : BoundaryPath::generic;
  Samples smp = boundary_samples(a.k, path, rho, a.tol);

  ftkl::io::Csv csv;
  csv.header = {"rho", "value", "tail_bound"};
  for (size_t i = 0; i < smp.rho.size(); ++i)
    csv.row({ftkl::io::fmt(smp.rho[i]), ftkl::io::fmt(smp.value[i]),
             ftkl::io::fmt(smp.bound[i])});

  std::vector<ftkl::FitSample> fs;
  for (size_t i = 0; i < smp.rho.size(); ++i)
    fs.push_back({smp.rho[i], smp.value[i]});
  ftkl::ExponentEstimate est = ftkl::estimate_leading_exponent(fs);

  config["point"] = a.point;
  config["rho"] = json_list(rho);
  config["seed"] = a.common.seed;
  config["output"] = output_json(a.common);

  // The defining function is rho = |z1|^2 + |z2|^(2k) - 1, not normalized
  // to unit gradient; exponents are invariant, coefficients depend on it.
  Json results;
  results["defining_function"] = "u + v^k - 1";
  results["values"] = json_list(smp.value);
  results["fitted_exponent"] = est.exponent;
  results["exponent_uncertainty"] = est.uncertainty;
  results["monotone"] = est.monotone;
  results["exponent_target"] =
      a.point == "degenerate" ? axis_exponent(a.k) : 3.0;

  Json certs;
  certs["tail_bounds"] = json_list(smp.bound);
  if (a.point == "degenerate") {
    results["a0_closed"] = axis_prefactor(a.k);
    double gap = 0.0;
    for (size_t i = 0; i < smp.rho.size(); ++i) {
      double closed = axis_diagonal(a.k, 1.0 + smp.rho[i]);
      gap = std::max(gap, std::abs(smp.value[i] - closed) / closed);
    }
    certs["closed_form_max_rel_gap"] = gap;
  }
  return emit(config, results, certs, a.common, &csv);
}

// ---------------------------------------------------------------------------
// fit

struct FitArgs {
  Common common;
  std::string input;
  int r = 2;
  int J = 4;
  int J_log = 1;
};

std::vector<ftkl::FitSample> read_samples_csv(const std::string& path) {
  std::string text = ftkl::io::read_file(path);
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line)) ftkl::fail_usage("fit: empty input " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_commas(line);
  int col_rho = -1, col_y = -1;
  for (size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "rho") col_rho = (int)i;
    if (header[i] == "value") col_y = (int)i;
  }
  if (col_rho < 0 || col_y < 0)
    ftkl::fail_usage("fit: input needs 'rho' and 'value' columns, got '" +
                     line + "'");
  std::vector<ftkl::FitSample> out;
  int lineno = 1;
  while (std::getline(ss, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> cells = split_commas(line);
    if (cells.size() != header.size())
      ftkl::fail_usage("fit: " + path + ":" + std::to_string(lineno) +
                       ": row width does not match the header");
    out.push_back({parse_double_list(cells[col_rho], "fit: rho")[0],
                   parse_double_list(cells[col_y], "fit: value")[0]});
  }
  return out;
}

Json coeff_json(const std::vector<ftkl::Coefficient>& cs) {
  Json arr = Json::array();
  for (const auto& c : cs) {
    Json j;
    j["value"] = c.value;
    j["halfwidth"] = c.resolved ? Json(c.halfwidth) : Json("unresolved");
    j["resolved"] = c.resolved;
    arr.push_back(j);
  }
  return arr;
}

int run_fit(const FitArgs& a) {
  std::vector<ftkl::FitSample> samples = read_samples_csv(a.input);
  ftkl::FitResult fit = ftkl::fit_power_log(samples, a.r, a.J, a.J_log);
  ftkl::ExponentEstimate est = ftkl::estimate_leading_exponent(samples);

  // Residual table over the samples the fit actually used.
  double p0 = 2.0 + 2.0 / a.r;
  ftkl::io::Csv csv;
  csv.header = {"rho", "y", "model", "residual"};
  for (const auto& s : samples) {
    double x = -s.rho;
    if (!(x >= 1e-8) || !(std::isfinite(s.y)) || s.y == 0.0) continue;
    double model = 0.0;
    for (size_t j = 0; j < fit.a.size(); ++j)
      model += fit.a[j].value * std::pow(x, -p0 + double(j) / a.r);
    for (size_t j = 0; j < fit.b.size(); ++j)
      model += fit.b[j].value * std::pow(x, double(j)) * std::log(x);
    csv.row({ftkl::io::fmt(s.rho), ftkl::io::fmt(s.y), ftkl::io::fmt(model),
             ftkl::io::fmt(s.y - model)});
  }

  Json config;
  config["command"] = "fit";
  config["input"] = a.input;
  config["r"] = a.r;
  config["J"] = a.J;
  config["J_log"] = a.J_log;
  config["samples"] = samples.size();
  config["seed"] = a.common.seed;
  config["output"] = output_json(a.common);

  Json results;
  results["a"] = coeff_json(fit.a);
  results["b"] = coeff_json(fit.b);
  results["exponent_estimate"] = fit.exponent_estimate;
  results["slope_estimate"] = Json{{"exponent", est.exponent},
                                   {"uncertainty", est.uncertainty},
                                   {"monotone", est.monotone}};

  Json certs;
  certs["residual"] = fit.residual;
  certs["condition"] = fit.condition;
  certs["rank_deficient"] = fit.rank_deficient;
  return emit(config, results, certs, a.common, &csv);
}

// ---------------------------------------------------------------------------
// bundle

struct BundleArgs {
  Common common;
  int r = 2;
  std::string m_list = "16,32,64,128,256,512,1024";
  double u = 1.0;
};

int run_bundle(const BundleArgs& a) {
  using namespace ftkl::bundle;
  std::vector<int> ms = parse_int_list(a.m_list, "bundle --m-list");
  AsymptoticsReport rep = degenerate_point_asymptotics(a.r, ms);
  PscCoefficients psc = strongly_psc_coefficients(a.r, a.u, ms);

  ftkl::io::Csv csv;
  csv.header = {"m", "value"};
  for (size_t i = 0; i < rep.m_list.size(); ++i)
    csv.row({std::to_string(rep.m_list[i]), ftkl::io::fmt(rep.values[i])});

  Json config;
  config["command"] = "bundle";
  config["r"] = a.r;
  Json mj = Json::array();
  for (int m : ms) mj.push_back(m);
  config["m_list"] = mj;
  config["u"] = a.u;
  config["seed"] = a.common.seed;
  config["output"] = output_json(a.common);

  // All densities are relative to Lebesgue measure on the affine chart
  // with potential psi = log(1 + u^{r/2}); coefficients change with the
  // volume convention, so it rides along with the numbers.
  Json results;
  results["convention"] =
      Json{{"chart_measure", "Lebesgue on the affine chart"},
           {"potential", "log(1 + u^(r/2))"}};
  results["values"] = json_list(rep.values);
  results["exponent"] = rep.exponent;
  results["exponent_target"] = 2.0 / a.r;
  results["prefactor"] = rep.prefactor;
  results["prefactor_closed"] = rep.prefactor_closed;
  results["psc"] = Json{{"u", a.u},
                        {"c0_hat", psc.c0_hat},
                        {"c1_hat", psc.c1_hat},
                        {"c2_hat", psc.c2_hat},
                        {"c0_curvature", psc.c0_curvature}};
  results["cross_module"] =
      Json{{"model_ratio", rep.model_ratio},
           {"statement", "density(m)/((m/2)^(2/r) B_1(0,0)) at the largest m"}};
  if (a.r == 2) {
    double err = 0.0;
    for (size_t i = 0; i < rep.m_list.size(); ++i) {
      double closed = closed_form_r2(rep.m_list[i], 0.0);
      err = std::max(err, std::abs(rep.values[i] - closed) / closed);
    }
    results["closed_form_r2_max_rel_err"] = err;
  }

  Json certs;
  certs["exponent_uncertainty"] = rep.exponent_uncertainty;
  certs["psc_fit_residual"] = psc.residual;
  return emit(config, results, certs, a.common, &csv);
}

// ---------------------------------------------------------------------------
// normalform

struct NormalformArgs {
  Common common;
  std::string p;
  std::string R = "none";
  int order = 0;
};

Json cert_json(const ftkl::normalform::Cert& c) {
  Json j;
  j["ok"] = c.ok;
  j["witness"] = c.witness;
  return j;
}

int run_normalform(const NormalformArgs& a) {
  using namespace ftkl::normalform;
  using ftkl::jets::Jet;

  Jet probe = ftkl::io::parse_rational_poly(a.p, 3, 24);
  int r = 0;
  for (int idx = 0; idx < probe.size(); ++idx)
    if (!probe.c[idx].is_zero()) r = std::max(r, probe.degree_of(idx));
  if (r < 2) ftkl::fail_usage("normalform: p must have degree >= 2");
  int order = a.order > 0 ? a.order : 2 * r;
  if (order < r) ftkl::fail_usage("normalform: --order below deg p");
  if (order > 24) ftkl::fail_usage("normalform: --order above 24 unsupported");

  Jet p = ftkl::io::parse_rational_poly(a.p, 3, order);
  ChristData data;
  if (a.R == "none") {
    data = ChristData::make(r, p, order);
  } else {
    std::array<Jet, 3> R{ftkl::jets::jet_zero(3, order),
                         ftkl::jets::jet_zero(3, order),
                         ftkl::jets::jet_zero(3, order)};
    std::string text = ftkl::io::read_file(a.R);
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      size_t eq = t.find('=');
      std::string key = eq == std::string::npos ? "" : trim(t.substr(0, eq));
      int j = key == "R1" ? 0 : key == "R2" ? 1 : key == "R3" ? 2 : -1;
      if (j < 0)
        ftkl::fail_usage("normalform: " + a.R + ":" + std::to_string(lineno) +
                         ": expected R1=, R2= or R3=");
      R[j] = ftkl::io::parse_rational_poly(trim(t.substr(eq + 1)), 3, order);
    }
    data = ChristData::make(r, p, R, order);
  }

  NormalFormResult nf = normal_form(data);

  ftkl::io::Csv csv;
  csv.header = {"a1", "a2", "re", "im"};
  for (int idx = 0; idx < nf.pot.phi0.size(); ++idx) {
    if (nf.pot.phi0.c[idx].is_zero()) continue;
    auto e = nf.pot.phi0.exponents(idx);
    csv.row({std::to_string(e[0]), std::to_string(e[1]),
             nf.pot.phi0.c[idx].re.str(), nf.pot.phi0.c[idx].im.str()});
  }

  Json config;
  config["command"] = "normalform";
  config["p"] = a.p;
  config["R"] = a.R;
  config["r"] = r;
  config["order"] = order;
  config["seed"] = a.common.seed;
  config["output"] = output_json(a.common);

  Json results;
  Json zt = Json::array();
  for (const Jet& z : nf.coords.ztilde) zt.push_back(ftkl::jets::to_text(z));
  Json wj = Json::array();
  for (const Jet& wji : nf.coords.w) wj.push_back(ftkl::jets::to_text(wji));
  results["ztilde"] = zt;
  results["w"] = wj;
  results["phi"] = ftkl::jets::to_text(nf.pot.phi);
  results["phi0"] = ftkl::jets::to_text(nf.pot.phi0);
  results["min_laplacian"] = nf.pot.min_laplacian;

  Json certs;
  certs["bracket_zero"] = cert_json(nf.T.bracket_zero);
  certs["w_defect"] = cert_json(nf.coords.w_defect);
  certs["a_w3_independent"] = cert_json(nf.coords.a_w3_independent);
  certs["a_constants"] = cert_json(nf.coords.a_constants);
  certs["straighten_defect"] = cert_json(nf.coords.straighten_defect);
  certs["reconstruction"] = cert_json(nf.coords.reconstruction);
  certs["potential_residual"] = cert_json(nf.pot.residual);
  certs["phi0_real"] = cert_json(nf.pot.phi0_real);
  certs["phi0_subharmonic"] = cert_json(nf.pot.phi0_subharmonic);
  certs["all_ok"] = nf.all_ok();
  return emit(config, results, certs, a.common, &csv, nf.all_ok() ? 0 : 1);
}

// ---------------------------------------------------------------------------
// accept

struct AcceptArgs {
  Common common;
  std::string outdir = "acceptance_artifacts";
};

int run_accept(const AcceptArgs& a) {
  ftkl::accept::SuiteResult suite = ftkl::accept::run_all();
  for (const auto& c : suite.criteria)
    std::printf("%-22s %s  [%6.2fs]  %s\n", c.name.c_str(),
                c.pass ? "PASS" : "FAIL", c.seconds, c.detail.c_str());
  std::error_code ec;
  std::filesystem::create_directories(a.outdir, ec);
  if (ec) ftkl::fail_usage("accept: cannot create " + a.outdir);
  for (const auto& [name, bytes] : suite.artifacts)
    ftkl::io::write_file(a.outdir + "/" + name, bytes);
  std::printf("%s\n", suite.all_pass() ? "ALL PASS" : "FAILURES PRESENT");

  if (!a.common.out.empty()) {
    ftkl::io::Csv csv;
    csv.header = {"criterion", "pass", "seconds"};
    for (const auto& c : suite.criteria)
      csv.row({c.name, c.pass ? "1" : "0", ftkl::io::fmt(c.seconds)});
    if (a.common.format == "csv") {
      ftkl::io::write_file(a.common.out, csv.str());
    } else {
      Json config;
      config["command"] = "accept";
      config["outdir"] = a.outdir;
      config["seed"] = a.common.seed;
      config["output"] = output_json(a.common);
      Json results = Json::array();
      for (const auto& c : suite.criteria)
        results.push_back(Json{{"name", c.name},
                               {"pass", c.pass},
                               {"seconds", c.seconds},
                               {"detail", c.detail}});
      Json certs;
      certs["all_pass"] = suite.all_pass();
      Json timings;
      timings["seconds"] = elapsed_seconds();
      Json env = ftkl::io::envelope(config, std::move(results),
                                    std::move(certs), std::move(timings));
      ftkl::io::write_file(a.common.out, env.dump(2) + "\n");
    }
  }
  return suite.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  auto code_for = [](ftkl::errkind k) {
    switch (k) {
      case ftkl::errkind::usage:
      case ftkl::errkind::domain: return 2;
      case ftkl::errkind::accuracy: return 3;
      case ftkl::errkind::certification: return 1;
    }
    return 1;
  };
  auto fail_json = [](const ftkl::error& e) {
    const char* kind = "certification";
    switch (e.kind) {
      case ftkl::errkind::usage: kind = "usage"; break;
      case ftkl::errkind::domain: kind = "domain"; break;
      case ftkl::errkind::accuracy: kind = "accuracy"; break;
      case ftkl::errkind::certification: break;
    }
    Json j;
    j["error"] = Json{{"kind", kind}, {"message", e.what()}};
    std::fputs((j.dump(2) + "\n").c_str(), stdout);
  };

  std::vector<std::string> args;
  try {
    args = merge_config_file(argc, argv);
  } catch (const ftkl::error& e) {
    fail_json(e);
    return code_for(e.kind);
  }

  CLI::App app{
      "Kernel-expansion laboratory: weighted Fock kernels, normal forms,\n"
      "spectral gaps, egg-domain expansions, asymptotic fits and bundle\n"
      "Fourier modes.  Every run prints a JSON envelope {config, results,\n"
      "certificates, timings}; --out/--format persist it or the CSV table.\n"
      "FTKL_THREADS caps worker threads.  Exit codes: 0 ok,\n"
      "1 certification failure, 2 usage or domain error, 3 accuracy error."};
  app.option_defaults()->always_capture_default();
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  FockArgs fock;
  auto* sc_fock = app.add_subcommand(
      "fock", "weighted-space kernel diagnostics and a kernel slice table");
  sc_fock->add_option("--r", fock.r, "weight degree")->required();
  sc_fock->add_option("--t", fock.t, "weight parameter");
  sc_fock->add_option("--nmax", fock.nmax, "basis truncation; 0: automatic");
  sc_fock->add_option("--phi0", fock.phi0,
                      "homogeneous polynomial weight (default radial |p|^r)");
  sc_fock->add_option("--route", fock.route, "orthonormalization route")
      ->check(CLI::IsMember({"auto", "gram", "radial"}));
  sc_fock->add_option("--extent", fock.extent, "slice half-width");
  sc_fock->add_option("--grid", fock.grid, "slice grid points")
      ->check(CLI::PositiveNumber);
  sc_fock->add_option("--tol", fock.tol, "quadrature tolerance");
  add_common(sc_fock, fock.common);

  ScalingArgs scaling;
  auto* sc_scaling = app.add_subcommand(
      "scaling", "rescaling identity deviation across t values");
  sc_scaling->add_option("--r", scaling.r, "weight degree")->required();
  sc_scaling->add_option("--t", scaling.t_list, "comma-separated t values")
      ->required();
  sc_scaling->add_option("--phi0", scaling.phi0,
                         "polynomial weight (default radial)");
  sc_scaling->add_option("--extent", scaling.extent, "test grid half-width");
  sc_scaling->add_option("--grid", scaling.grid, "points per axis")
      ->check(CLI::PositiveNumber);
  sc_scaling->add_option("--nmax", scaling.nmax, "truncation; 0: default 64");
  sc_scaling->add_option("--tol", scaling.tol, "quadrature tolerance");
  sc_scaling->add_option("--max-dev", scaling.max_dev,
                         "accuracy gate on the max deviation");
  add_common(sc_scaling, scaling.common);

  NeumannArgs neumann;
  auto* sc_neumann = app.add_subcommand(
      "neumann", "perturbation-series kernel vs the direct full weight");
  sc_neumann->add_option("--r", neumann.r, "weight degree");
  sc_neumann->add_option("--t", neumann.t, "weight parameter");
  sc_neumann->add_option("--eps", neumann.eps, "perturbation amplitude");
  sc_neumann->add_option("--q", neumann.q, "perturbation polynomial");
  sc_neumann->add_option("--phi0", neumann.phi0,
                         "polynomial weight (default radial)");
  sc_neumann->add_option("--R0", neumann.R0,
                         "cutoff radius; 0: 3/sqrt(t)");
  sc_neumann->add_option("--terms", neumann.terms, "series orders to keep")
      ->check(CLI::PositiveNumber);
  sc_neumann->add_option("--box-nodes", neumann.box_nodes,
                         "quadrature nodes per axis")
      ->check(CLI::PositiveNumber);
  sc_neumann->add_option("--test-extent", neumann.test_extent,
                         "comparison grid half-width");
  sc_neumann->add_option("--test-n", neumann.test_n,
                         "comparison grid points per axis")
      ->check(CLI::PositiveNumber);
  sc_neumann->add_option("--tol", neumann.tol, "quadrature tolerance");
  add_common(sc_neumann, neumann.common);

  SpectralArgs spectral;
  auto* sc_spectral = app.add_subcommand(
      "spectral", "smallest nonzero eigenvalue of the model operator");
  sc_spectral->add_option("--r", spectral.r, "weight degree")->required();
  sc_spectral->add_option("--t", spectral.t, "weight parameter");
  sc_spectral->add_option("--t-list", spectral.t_list,
                          "comma-separated t values: fit the gap exponent");
  sc_spectral->add_option("--mesh", spectral.mesh, "radial cells")
      ->check(CLI::PositiveNumber);
  sc_spectral->add_option("--range", spectral.range, "angular sector range")
      ->check(CLI::PositiveNumber);
  add_common(sc_spectral, spectral.common);

  EggArgs egg;
  auto* sc_egg = app.add_subcommand(
      "egg", "exact domain kernels along boundary approach paths");
  sc_egg->add_option("--k", egg.k, "domain parameter, type 2k at the pole")
      ->required()
      ->check(CLI::Range(1, 1000));
  sc_egg->add_option("--point", egg.point, "approach point class")
      ->check(CLI::IsMember({"degenerate", "generic"}));
  sc_egg->add_option("--rho-decades", egg.rho_decades,
                     "decades of -rho below 1e-1");
  sc_egg->add_option("--per-decade", egg.per_decade, "samples per decade");
  sc_egg->add_option("--rho", egg.rho,
                     "explicit comma-separated negative rho list");
  auto* egg_u =
      sc_egg->add_option("--u", egg.u, "evaluate one point: u = |z1|^2");
  sc_egg->add_option("--v", egg.v, "with --u: v = |z2|^2");
  sc_egg->add_option("--tol", egg.tol, "relative series tolerance");
  add_common(sc_egg, egg.common);

  FitArgs fit;
  auto* sc_fit = app.add_subcommand(
      "fit", "power-log ladder fit of a rho,value sample table");
  sc_fit->add_option("--input", fit.input, "CSV with rho and value columns")
      ->required();
  sc_fit->add_option("--r", fit.r, "type: ladder starts at -(2+2/r)")
      ->required()
      ->check(CLI::PositiveNumber);
  sc_fit->add_option("--J", fit.J, "power rungs beyond the leading one");
  sc_fit->add_option("--J-log", fit.J_log, "log-term rungs");
  add_common(sc_fit, fit.common);

  BundleArgs bundle;
  auto* sc_bundle = app.add_subcommand(
      "bundle", "Fourier-mode density asymptotics in the tensor power m");
  sc_bundle->add_option("--r", bundle.r, "vanishing order of the curvature +2")
      ->required();
  sc_bundle->add_option("--m-list", bundle.m_list,
                        "comma-separated tensor powers (>= six octaves)");
  sc_bundle->add_option("--u", bundle.u,
                        "chart point |w|^2 for the strongly pseudoconvex fit");
  add_common(sc_bundle, bundle.common);

  NormalformArgs normalform;
  auto* sc_normalform = app.add_subcommand(
      "normalform", "exact Christ normal form of a model vector field");
  sc_normalform
      ->add_option("--p", normalform.p,
                   "homogeneous polynomial in x1, x2, rational coefficients")
      ->required();
  sc_normalform->add_option(
      "--R", normalform.R,
      "'none' or a file of R1=/R2=/R3= remainder polynomials");
  sc_normalform->add_option("--order", normalform.order,
                            "jet truncation order; 0: twice deg p");
  add_common(sc_normalform, normalform.common);

  AcceptArgs accept;
  auto* sc_accept = app.add_subcommand(
      "accept", "full release suite: pass/fail table plus CSV artifacts");
  sc_accept->add_option("--outdir", accept.outdir, "artifact directory");
  add_common(sc_accept, accept.common);

  std::vector<const char*> cargv;
  cargv.reserve(args.size());
  for (const std::string& s : args) cargv.push_back(s.c_str());
  try {
    app.parse((int)cargv.size(), cargv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  egg.u_given = egg_u->count() > 0;

  try {
    if (sc_fock->parsed()) return run_fock(fock);
    if (sc_scaling->parsed()) return run_scaling(scaling);
    if (sc_neumann->parsed()) return run_neumann(neumann);
    if (sc_spectral->parsed()) return run_spectral(spectral);
    if (sc_egg->parsed()) return run_egg(egg);
    if (sc_fit->parsed()) return run_fit(fit);
    if (sc_bundle->parsed()) return run_bundle(bundle);
    if (sc_normalform->parsed()) return run_normalform(normalform);
    if (sc_accept->parsed()) return run_accept(accept);
  } catch (const ftkl::error& e) {
    fail_json(e);
    return code_for(e.kind);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return 2;
}
