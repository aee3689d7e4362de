#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "peanut/flatring.hpp"

#ifndef PEANUT_CLI_PATH
#define PEANUT_CLI_PATH "peanut"
#endif

namespace {

namespace fs = std::filesystem;

std::string tmp(const std::string& name) {
  return (fs::temp_directory_path() / ("peanut_cli_" + name)).string();
}

int run(const std::string& args) {
  const std::string cmd = std::string(PEANUT_CLI_PATH) + " " + args + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("eigen table: brackets, determinism, warm cache") {
  const std::string cache = tmp("cache.json");
  const std::string out1 = tmp("eig1.csv"), out2 = tmp("eig2.csv");
  std::remove(cache.c_str());
  REQUIRE(run("--cache " + cache + " eigen --k 0.6 --nu -0.5,0.5,1.5 --n-max 10 --output " +
              out1) == 0);
  auto rows = read_csv_rows(out1);
  REQUIRE(rows.size() == 34);  // header + 33 rows
  CHECK(rows[0][0] == "nu");
  double prev = -1e9;
  std::string prev_nu;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].back() == "true");  // in_bracket
    const double lam = std::stod(rows[i][3]);
    if (rows[i][0] == prev_nu) CHECK(lam > prev);  // increasing in n per family
    prev = lam;
    prev_nu = rows[i][0];
  }
  CHECK(fs::exists(cache));
  // warm rerun: identical bytes
  REQUIRE(run("--cache " + cache + " eigen --k 0.6 --nu -0.5,0.5,1.5 --n-max 10 --output " +
              out2) == 0);
  CHECK(slurp(out1) == slurp(out2));
  std::remove(cache.c_str());
}

TEST_CASE("parallelism changes wall time only, never output bytes") {
  const std::string a = tmp("p1.csv"), b = tmp("p2.csv");
  REQUIRE(run("--parallelism 1 eigen --k 0.5 --nu 0.5 --n-max 3 --output " + a) == 0);
  REQUIRE(run("--parallelism 2 eigen --k 0.5 --nu 0.5 --n-max 3 --output " + b) == 0);
  CHECK(slurp(a) == slurp(b));
}

TEST_CASE("usage and domain errors exit with code 3") {
  CHECK(run("eigen --nu 0.5") == 3);            // missing required --k
  CHECK(run("eigen --k 1.5 --nu 0.5") == 3);    // modulus outside (0,1)
  CHECK(run("verify nosuchsuite") == 3);
  CHECK(run("") == 3);                          // subcommand required
}

TEST_CASE("verify inteq1 emits passing json lines") {
  const std::string out = tmp("inteq1.jsonl");
  REQUIRE(run("verify inteq1 --k 0.6 --nu 0.5 --n-max 1 --output " + out) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("\"identity\":\"inteq1\"") != std::string::npos);
  CHECK(text.find("\"passed\":true") != std::string::npos);
  CHECK(text.find("\"passed\":false") == std::string::npos);
  CHECK(text.find("command=verify inteq1") != std::string::npos);  // config echo
}

TEST_CASE("verify addition passes and fails by tolerance") {
  const std::string out = tmp("add.jsonl");
  REQUIRE(run("verify addition --k 0.7 --m 0,1 --pairs 2 --output " + out) == 0);
  CHECK(slurp(out).find("\"passed\":true") != std::string::npos);
  // an unattainable tolerance must flip the exit code to 1
  CHECK(run("verify addition --k 0.7 --m 0 --pairs 1 --tol 1e-15 --output " + out) == 1);
}

TEST_CASE("mesh emits a unit sphere at s0 = K and a valid peanut") {
  const std::string base = tmp("sphere");
  REQUIRE(run("mesh --k 0.5 --s0-frac 1.0 --resolution 20 --output " + base) == 0);
  std::ifstream obj(base + ".obj");
  REQUIRE(obj.good());
  std::string tok;
  int vcount = 0, fquad = 0, ftri = 0;
  std::string line;
  while (std::getline(obj, line)) {
    if (line.rfind("v ", 0) == 0) {
      std::stringstream ss(line.substr(2));
      double x, y, z;
      ss >> x >> y >> z;
      CHECK(std::abs(std::sqrt(x * x + y * y + z * z) - 1.0) < 1e-9);
      ++vcount;
    } else if (line.rfind("f ", 0) == 0) {
      std::stringstream ss(line.substr(2));
      int n = 0;
      while (ss >> tok) ++n;
      (n == 4 ? fquad : ftri)++;
    }
  }
  CHECK(vcount == 20 * 20 + 2);
  CHECK(fquad == 19 * 20);
  CHECK(ftri == 2 * 20);

  const std::string pb = tmp("peanut17");
  REQUIRE(run("mesh --k 0.5 --s0-frac 1.7 --resolution 24 --output " + pb) == 0);
  const peanut::elliptic::Modulus mod(0.5);
  const peanut::flatring::PeanutRegion region(1.7 * mod.big_k(), mod);
  auto rows = read_csv_rows(pb + ".csv");
  REQUIRE(rows.size() > 24 * 24);
  for (std::size_t i = 1; i < rows.size() - 2; ++i) {  // skip header and poles
    const peanut::flatring::CartesianPoint p{std::stod(rows[i][3]), std::stod(rows[i][4]),
                                             std::stod(rows[i][5])};
    CHECK(std::abs(peanut::flatring::omega_surface_scaled(p, region)) < 1e-6);
  }
}

TEST_CASE("coordinate lines: unit circle, cuts, right angles") {
  const std::string out = tmp("lines.csv");
  REQUIRE(run("lines --samples 4000 --output " + out) == 0);
  auto rows = read_csv_rows(out);
  REQUIRE(rows.size() > 9 * 3900);
  // group by label
  std::vector<std::pair<std::string, std::vector<std::array<double, 2>>>> lines;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (lines.empty() || lines.back().first != rows[i][0])
      lines.push_back({rows[i][0], {}});
    lines.back().second.push_back({std::stod(rows[i][2]), std::stod(rows[i][3])});
  }
  REQUIRE(lines.size() == 9);
  // line 1 is s = K: the unit circle arc
  for (const auto& pt : lines[1].second)
    CHECK(std::abs(std::hypot(pt[0], pt[1]) - 1.0) < 1e-12);
  // t-lines run from the inner cut to the outer cut
  const double b = peanut::flatring::b_param(1.0 / std::sqrt(2.0));
  for (std::size_t li = 3; li < 9; ++li) {
    CHECK(lines[li].second.front()[0] < 1.03 * b);
    CHECK(lines[li].second.back()[0] > 0.97 / b);
  }
  // right angle where the s = K line meets a t-line: locate the closest pair
  // of samples and compare central-difference tangents
  const auto& sline = lines[1].second;
  const auto& tline = lines[5].second;  // t = -0.3 K'
  double best = 1e300;
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 1; i + 1 < sline.size(); ++i)
    for (std::size_t j = 1; j + 1 < tline.size(); ++j) {
      const double d = std::hypot(sline[i][0] - tline[j][0], sline[i][1] - tline[j][1]);
      if (d < best) {
        best = d;
        bi = i;
        bj = j;
      }
    }
  const double sx = sline[bi + 1][0] - sline[bi - 1][0], sy = sline[bi + 1][1] - sline[bi - 1][1];
  const double tx = tline[bj + 1][0] - tline[bj - 1][0], ty = tline[bj + 1][1] - tline[bj - 1][1];
  const double cosang = std::abs(sx * tx + sy * ty) /
                        (std::hypot(sx, sy) * std::hypot(tx, ty));
  CHECK(cosang < 1e-3);
}

TEST_SUITE_END();
