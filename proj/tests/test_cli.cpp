#include "doctest.h"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"
#include "pcsf/rational.hpp"
#include "plot_data.hpp"

using namespace pcsf;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  json j;
};

Run pcsf_run(const std::string& args) {
  const std::string cmd = std::string(PCSF_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.j = json::parse(r.out, nullptr, false);
  return r;
}

fs::path fresh_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("pcsf_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Every "a/b" string in the document parses and prints back unchanged.
void check_rationals_round_trip(const json& j) {
  if (j.is_object() || j.is_array()) {
    for (const auto& v : j) check_rationals_round_trip(v);
    return;
  }
  if (!j.is_string()) return;
  const auto s = j.get<std::string>();
  if (s.empty() || s.find_first_not_of("-0123456789/") != std::string::npos) return;
  CHECK(to_string(parse_rational(s)) == s);
}

}  // namespace

TEST_CASE("gadget instance certifies as a unique vertex with max coordinate 1/3") {
  auto d = fresh_dir("gadget");
  auto gen = pcsf_run("--dir " + d.string() + " gen gadget --k 6");
  REQUIRE(gen.code == 0);
  CHECK(gen.j["edges"] == 96);
  auto v = pcsf_run("--dir " + d.string() + " lp verify-vertex --family gadget");
  REQUIRE(v.code == 0);
  CHECK(v.j["feasible"] == true);
  CHECK(v.j["unique"] == true);
  CHECK(v.j["all_tight"] == true);
  CHECK(v.j["max_coord"] == "1/3");
  CHECK(v.j["rank"] == v.j["dimension"]);
  CHECK(v.j["slack"].empty());
  // The stored family file gives the same certificate.
  auto f = pcsf_run("--dir " + d.string() + " lp verify-vertex --family " + (d / "family.txt").string());
  CHECK(f.j["unique"] == true);
  check_rationals_round_trip(v.j);
  fs::remove_all(d);
}

TEST_CASE("layered explicit distribution verifies and traces") {
  auto d = fresh_dir("layered");
  REQUIRE(pcsf_run("--dir " + d.string() + " gen layered --base k4 --m 4 --k 1").code == 0);
  auto e = pcsf_run("--dir " + d.string() + " decompose explicit --alpha 9/4");
  REQUIRE(e.code == 0);
  CHECK(e.j["support"] == 17);
  auto v = pcsf_run("--dir " + d.string() + " decompose verify");
  REQUIRE(v.code == 0);
  CHECK(v.j["passes"] == true);
  CHECK(v.j["edges_ok"] == true);
  CHECK(v.j["pairs_ok"] == true);
  CHECK(v.j["branch_pairs_min"] == "1");
  CHECK(parse_rational(v.j["root_pairs_min"].get<std::string>()) >= Rational(1, 4));
  CHECK(parse_rational(v.j["max_marginal"].get<std::string>()) <= Rational(3, 4));
  // A smaller scale than the recorded one fails.
  auto tight = pcsf_run("--dir " + d.string() + " decompose verify --scale 3/2");
  CHECK(tight.j["passes"] == false);
  auto t = pcsf_run("--dir " + d.string() + " decompose trace");
  REQUIRE(t.code == 0);
  CHECK(t.j["all_hold"] == true);
  CHECK(t.j["steps"].size() == 2);
  fs::remove_all(d);
}

TEST_CASE("min-alpha writes a witness whose gap equals alpha star") {
  auto d = fresh_dir("alpha");
  REQUIRE(pcsf_run("--dir " + d.string() + " gen layered --base k4 --m 4 --k 0").code == 0);
  auto a = pcsf_run("--dir " + d.string() + " decompose min-alpha");
  REQUIRE(a.code == 0);
  CHECK(a.j["alpha_star"] == "3/2");
  CHECK(a.j["witness_written"] == true);
  CHECK(pcsf_run("--dir " + d.string() + " decompose verify").j["passes"] == true);
  auto g = pcsf_run("--dir " + d.string() + " --instance " + (d / "witness.txt").string() + " report gap");
  REQUIRE(g.code == 0);
  CHECK(parse_rational(g.j["lp"].get<std::string>()) <= 1);
  CHECK(g.j["ip"] == "3/2");
  fs::remove_all(d);
}

TEST_CASE("bounds alpha") {
  auto b = pcsf_run("bounds alpha --n 4 --k 1");
  REQUIRE(b.code == 0);
  CHECK(b.j["bound"] == "5/8");
  auto big = pcsf_run("bounds alpha --n 1000000 --k 100");
  CHECK(big.j["distance_to_limit_decimal"].get<double>() < 1e-5);
  check_rationals_round_trip(big.j);

  auto csv = fs::temp_directory_path() / ("pcsf_cli_bounds_" + std::to_string(::getpid()) + ".csv");
  auto sweep = pcsf_run("bounds alpha --n 100 --k 0 --k-max 20 --csv " + csv.string());
  REQUIRE(sweep.code == 0);
  CHECK(sweep.j["monotone_in_k"] == true);
  std::istringstream lines(slurp(csv));
  std::string line;
  std::getline(lines, line);
  CHECK(line == "n,k,l,bound,alpha_star,beta_star,ratio");
  int rows = 0;
  Rational prev(-1);
  while (std::getline(lines, line)) {
    auto fields = line.substr(0, line.find(",,"));
    Rational b = parse_rational(fields.substr(fields.rfind(',') + 1));
    CHECK(b >= prev);
    prev = b;
    ++rows;
  }
  CHECK(rows == 21);
  fs::remove(csv);
}

TEST_CASE("export_plot_data with no rows writes the header only") {
  auto csv = fs::temp_directory_path() / ("pcsf_cli_empty_" + std::to_string(::getpid()) + ".csv");
  cli::export_plot_data({}, csv);
  CHECK(slurp(csv) == "n,k,l,bound,alpha_star,beta_star,ratio\n");
  cli::export_plot_data({cli::PlotRow{5, {}, {}, {}, Rational(3, 2), {}, Rational(1)}}, csv);
  CHECK(slurp(csv) == "n,k,l,bound,alpha_star,beta_star,ratio\n5,,,,3/2,,1\n");
  fs::remove(csv);
}

TEST_CASE("gap sweep is deterministic and independent of --threads") {
  auto one = pcsf_run("report gap --sweep 6 --seed 11 --threads 1");
  auto many = pcsf_run("report gap --sweep 6 --seed 11 --threads 8");
  REQUIRE(one.code == 0);
  CHECK(one.out == many.out);
  for (const auto& row : one.j["rows"]) CHECK(parse_rational(row["ratio"].get<std::string>()) >= 1);
  CHECK(pcsf_run("report gap --sweep 6 --seed 12").out != one.out);
}

TEST_CASE("config file values yield to flags") {
  auto cfg = fs::temp_directory_path() / ("pcsf_cli_cfg_" + std::to_string(::getpid()) + ".ini");
  std::ofstream(cfg) << "[bounds.alpha]\nn = 4\nk = 3\n";
  auto from_file = pcsf_run("--config " + cfg.string() + " bounds alpha");
  CHECK(from_file.j["n"] == 4);
  CHECK(from_file.j["k"] == 3);
  auto overridden = pcsf_run("--config " + cfg.string() + " bounds alpha --k 1");
  CHECK(overridden.j["k"] == 1);
  CHECK(overridden.j["bound"] == "5/8");
  fs::remove(cfg);
}

TEST_CASE("exit codes and error JSON") {
  auto d = fresh_dir("errors");
  auto missing = pcsf_run("--dir " + d.string() + " lp check");
  CHECK(missing.code == 2);
  CHECK(missing.j["error"]["kind"] == "validation");
  CHECK(pcsf_run("round --method nearest").code == 2);
  CHECK(pcsf_run("gen gadget --k 5 --dir " + d.string()).code == 2);
  CHECK(pcsf_run("decompose explicit --alpha 7/4 --dir " + d.string()).code == 2);
  CHECK(pcsf_run("bounds alpha --threads 0").code == 2);
  CHECK(pcsf_run("").j["error"]["kind"] == "usage");

  REQUIRE(pcsf_run("--dir " + d.string() + " gen random --nodes 20 --edges 40 --seed 2").code == 0);
  auto capped = pcsf_run("--dir " + d.string() + " ip solve --max-edges 10");
  CHECK(capped.code == 3);
  CHECK(capped.j["error"]["kind"] == "scale_cap");

  fs::create_directories(d);
  std::ofstream(d / "instance.txt") << "pcsf 1\nedge a b 1\nedge c d 1\npair a c inf\n";
  auto infeasible = pcsf_run("--dir " + d.string() + " ip solve");
  CHECK(infeasible.code == 4);
  CHECK(infeasible.j["error"]["kind"] == "infeasible");
  fs::remove_all(d);
}

TEST_CASE("round reports the proven bound") {
  auto d = fresh_dir("round");
  REQUIRE(pcsf_run("--dir " + d.string() + " gen gadget --k 4").code == 0);
  auto r = pcsf_run("--dir " + d.string() + " round --method threshold --theta 1/3");
  REQUIRE(r.code == 0);
  CHECK(r.j["ratio_bound"] == "3");
  CHECK(r.j["within_bound"] == true);
  REQUIRE(pcsf_run("--dir " + d.string() + " gen layered --base k4 --m 4 --k 0").code == 0);
  auto two = pcsf_run("--dir " + d.string() + " round --method two-value --gamma 1/3 --p 3/4");
  REQUIRE(two.code == 0);
  CHECK(two.j["ratio_bound"] == "9/4");
  CHECK(two.j["within_bound"] == true);
  CHECK(pcsf_run("--dir " + d.string() + " round --method two-value --gamma 1/2").code == 2);
  fs::remove_all(d);
}
