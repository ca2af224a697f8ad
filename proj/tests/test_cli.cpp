// SPDX-License-Identifier: Apache-2.0
// Drives the installed binary end to end: exit codes, envelope shape,
// config-file precedence, pinned CSV headers, artifact determinism.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

#include "ftkl/io.hpp"

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(FTKL_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int status = pclose(p);
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = out;
  return r;
}

nlohmann::json parse(const std::string& text) {
  return nlohmann::json::parse(text);
}

std::filesystem::path scratch() {
  auto p = std::filesystem::temp_directory_path() / "ftkl_cli_tests";
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  return ftkl::io::read_file(p.string());
}

}  // namespace

TEST_CASE("help exits zero and lists every subcommand") {
  RunResult r = run_cli("--help");
  CHECK(r.code == 0);
  for (const char* name : {"normalform", "fock", "scaling", "neumann",
                           "spectral", "egg", "fit", "bundle", "accept"})
    CHECK(r.out.find(name) != std::string::npos);
  // Per-subcommand help carries defaults.
  RunResult h = run_cli("fock --help");
  CHECK(h.code == 0);
  CHECK(h.out.find("--nmax") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli("").code == 2);                      // missing subcommand
  CHECK(run_cli("fock").code == 2);                  // missing required --r
  CHECK(run_cli("fock --r 2 --bogus 1").code == 2);  // unknown flag
  CHECK(run_cli("fock --r nope").code == 2);         // type mismatch
  CHECK(run_cli("egg --k 0").code == 2);             // k >= 1
  CHECK(run_cli("fock --r 2 --format xml").code == 2);
}

TEST_CASE("fock run echoes the resolved radial config") {
  RunResult r = run_cli("fock --r 4 --t 1 --nmax 40");
  REQUIRE(r.code == 0);
  auto e = parse(r.out);
  CHECK(e["config"]["command"] == "fock");
  CHECK(e["config"]["weight"]["r"] == 4);
  CHECK(e["config"]["weight"]["radial"] == true);
  CHECK(e["config"]["nmax"] == 40);
  // Envelope schema and key order (parsing would re-sort, so check text).
  size_t p_config = r.out.find("\"config\"");
  size_t p_results = r.out.find("\"results\"");
  size_t p_certs = r.out.find("\"certificates\"");
  size_t p_timings = r.out.find("\"timings\"");
  REQUIRE(p_timings != std::string::npos);
  CHECK(p_config < p_results);
  CHECK(p_results < p_certs);
  CHECK(p_certs < p_timings);
  double c0 = e["results"]["c0"].get<double>();
  double closed = e["results"]["c0_closed"].get<double>();
  CHECK(std::abs(c0 - closed) / closed < 1e-8);
}

TEST_CASE("config file merges below command-line flags") {
  auto cfg = scratch() / "fock.cfg";
  ftkl::io::write_file(cfg.string(), "# defaults\nt=1\nnmax=8\n");
  RunResult file_only = run_cli("fock --r 2 --config " + cfg.string());
  REQUIRE(file_only.code == 0);
  auto e1 = parse(file_only.out);
  CHECK(e1["config"]["t"] == 1.0);
  CHECK(e1["config"]["nmax"] == 8);

  RunResult overridden =
      run_cli("fock --r 2 --config " + cfg.string() + " --t 16");
  REQUIRE(overridden.code == 0);
  auto e2 = parse(overridden.out);
  CHECK(e2["config"]["t"] == 16.0);
  CHECK(e2["config"]["nmax"] == 8);

  auto bad = scratch() / "bad.cfg";
  ftkl::io::write_file(bad.string(), "unknown_key=3\n");
  CHECK(run_cli("fock --r 2 --config " + bad.string()).code == 2);
  auto malformed = scratch() / "malformed.cfg";
  ftkl::io::write_file(malformed.string(), "just words\n");
  CHECK(run_cli("fock --r 2 --config " + malformed.string()).code == 2);
}

TEST_CASE("scaling run stays under the deviation gate") {
  RunResult r = run_cli("scaling --r 4 --t 1,16,256");
  REQUIRE(r.code == 0);
  auto e = parse(r.out);
  CHECK(e["results"]["deviation"].get<double>() <= 1e-6);
  CHECK(e["config"]["t"].size() == 3);
}

TEST_CASE("coarse spectral mesh is an accuracy error") {
  RunResult r = run_cli("spectral --r 2 --t 1 --mesh 50");
  CHECK(r.code == 3);
  auto e = parse(r.out);
  CHECK(e["error"]["kind"] == "accuracy");
  CHECK(e["error"]["message"].get<std::string>().find("mesh") !=
        std::string::npos);
}

TEST_CASE("spectral gap matches 2t for the quadratic weight") {
  RunResult r = run_cli("spectral --r 2 --t 1");
  REQUIRE(r.code == 0);
  auto e = parse(r.out);
  double gap = e["results"]["gap"].get<double>();
  CHECK(std::abs(gap - 2.0) < 0.02);
  CHECK(e["certificates"]["mesh_change"].get<double>() <= 0.01);
}

TEST_CASE("egg sample table is byte-deterministic with pinned columns") {
  auto f1 = scratch() / "egg1.csv";
  auto f2 = scratch() / "egg2.csv";
  std::string argstail = " --format csv --out ";
  RunResult r1 = run_cli("egg --k 2 --point degenerate --rho-decades 2" +
                         argstail + f1.string());
  RunResult r2 = run_cli("egg --k 2 --point degenerate --rho-decades 2" +
                         argstail + f2.string());
  REQUIRE(r1.code == 0);
  REQUIRE(r2.code == 0);
  std::string b1 = slurp(f1), b2 = slurp(f2);
  CHECK(b1 == b2);
  CHECK(b1.rfind("rho,value,tail_bound\n", 0) == 0);
  auto e = parse(r1.out);
  CHECK(std::abs(e["results"]["fitted_exponent"].get<double>() - 2.5) < 1e-2);
}

TEST_CASE("egg point mode reproduces the ball kernel") {
  RunResult r = run_cli("egg --k 1 --u 0.25 --v 0");
  REQUIRE(r.code == 0);
  auto e = parse(r.out);
  double want = 2.0 / (M_PI * M_PI) * std::pow(0.75, -3.0);
  CHECK(std::abs(e["results"]["value"].get<double>() - want) / want < 1e-9);
}

TEST_CASE("fit reads a sample table back") {
  auto table = scratch() / "fit_input.csv";
  RunResult gen = run_cli("egg --k 2 --point degenerate --rho-decades 2 "
                          "--per-decade 4 --format csv --out " +
                          table.string());
  REQUIRE(gen.code == 0);
  RunResult r = run_cli("fit --input " + table.string() + " --r 4");
  REQUIRE(r.code == 0);
  auto e = parse(r.out);
  double a0 = e["results"]["a"][0]["value"].get<double>();
  double want = 3.0 / (2.0 * M_PI * M_PI);
  CHECK(std::abs(a0 - want) / want < 0.02);
  CHECK(e["certificates"]["rank_deficient"] == false);
  CHECK(run_cli("fit --input " + table.string() + " --r 0").code == 2);
}

TEST_CASE("neumann corrections improve and stay anti-Hermitian") {
  RunResult r =
      run_cli("neumann --r 2 --t 4 --eps 0.05 --terms 2 --box-nodes 24 "
              "--test-n 3");
  REQUIRE(r.code == 0);
  auto e = parse(r.out);
  auto deltas = e["results"]["deltas"];
  REQUIRE(deltas.size() == 2);
  CHECK(deltas[1].get<double>() < deltas[0].get<double>());
  CHECK(e["certificates"]["antiherm_defect"].get<double>() <= 1e-12);
}

TEST_CASE("bundle reproduces the quadratic closed form") {
  RunResult r = run_cli("bundle --r 2 --m-list 4,16,64,400 --u 0");
  REQUIRE(r.code == 0);
  auto e = parse(r.out);
  CHECK(e["results"]["closed_form_r2_max_rel_err"].get<double>() <= 1e-12);
  auto csvf = scratch() / "bundle.csv";
  RunResult c = run_cli("bundle --r 2 --m-list 4,16,64,400 --u 0 "
                        "--format csv --out " +
                        csvf.string());
  REQUIRE(c.code == 0);
  CHECK(slurp(csvf).rfind("m,value\n", 0) == 0);
}

TEST_CASE("pinned CSV headers for fock and spectral tables") {
  auto fockf = scratch() / "fock.csv";
  RunResult f = run_cli("fock --r 2 --t 1 --nmax 16 --format csv --out " +
                        fockf.string());
  REQUIRE(f.code == 0);
  CHECK(slurp(fockf).rfind("p1,p2,q1,q2,re,im,err\n", 0) == 0);
  auto specf = scratch() / "spectral.csv";
  RunResult s =
      run_cli("spectral --r 2 --t 1 --format csv --out " + specf.string());
  REQUIRE(s.code == 0);
  CHECK(slurp(specf).rfind("t,lambda_min_pos\n", 0) == 0);
}

TEST_CASE("normal form runs exactly from the command line") {
  auto outf = scratch() / "nf.json";
  RunResult r =
      run_cli("normalform --p x1^2+x2^2 --R none --out " + outf.string());
  REQUIRE(r.code == 0);
  auto e = parse(slurp(outf));
  CHECK(e["certificates"]["all_ok"] == true);
  CHECK(e["config"]["r"] == 2);
  CHECK(e["config"]["order"] == 4);
  // phi0 = ztilde1^2 + ztilde2^2, exact rational coefficients.
  std::string phi0 = e["results"]["phi0"].get<std::string>();
  CHECK(phi0.find("2 0 0 1 0") != std::string::npos);
  CHECK(phi0.find("0 2 0 1 0") != std::string::npos);

  auto rfile = scratch() / "remainder.cfg";
  ftkl::io::write_file(rfile.string(), "R1=1/2*x2\nR2=1/3*x1\n");
  RunResult withR =
      run_cli("normalform --p x1^2+x2^2 --R " + rfile.string());
  REQUIRE(withR.code == 0);
  CHECK(parse(withR.out)["certificates"]["all_ok"] == true);

  CHECK(run_cli("normalform --p 3").code == 2);  // degree < 2
}

TEST_CASE("accept writes artifacts and passes") {
  auto dir = scratch() / "accept_artifacts";
  RunResult r = run_cli("accept --outdir " + dir.string());
  REQUIRE(r.code == 0);
  CHECK(r.out.find("ALL PASS") != std::string::npos);
  CHECK(r.out.find("model_constants") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "scaling.csv"));
  CHECK(std::filesystem::exists(dir / "determinism_probe.csv"));
}
