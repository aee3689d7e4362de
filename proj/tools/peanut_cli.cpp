// Command-line front end: eigenvalue tables, identity-verification suites,
// and figure-data emitters (peanut surface meshes, coordinate-line CSVs).
//
// Exit codes: 0 success, 1 verification failure, 2 numeric/solver error,
// 3 usage error.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "peanut/flatring.hpp"
#include "peanut/harmonics.hpp"
#include "peanut/limits.hpp"
#include "peanut/mode_cache.hpp"

using namespace peanut;
using elliptic::Modulus;
using flatring::FlatRingCoords;
using flatring::PeanutRegion;
using harmonics::HarmonicBasis;
using harmonics::TruncationSpec;

namespace {

struct RunConfig {
  double k = 0.7;
  std::string nu_list = "-0.5,0.5";
  int n_max = -1;  // -1 = suite default
  std::string output;
  std::string format = "csv";
  std::string cache_path;
  int parallelism = 2;
  int resolution = 64;
  double s0_frac = 1.7;  // s0 in units of K
  int samples = 2000;
  std::string m_list = "0..3";
  int pairs = 5;
  unsigned seed = 20250810;
  double tol = 0.0;  // 0 = suite default
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dots = item.find("..");
    if (dots != std::string::npos) {
      const int lo = std::stoi(item.substr(0, dots));
      const int hi = std::stoi(item.substr(dots + 2));
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else if (!item.empty()) {
      out.push_back(std::stod(item));
    }
  }
  if (out.empty()) throw std::invalid_argument("empty list option");
  return out;
}

std::string config_echo(const RunConfig& cfg, const std::string& command) {
  std::ostringstream os;
  os.precision(17);
  // parallelism is a wall-time-only knob and stays out of the echoed config
  // so that outputs are byte-identical across thread counts
  os << "command=" << command << " k=" << cfg.k << " cache="
     << (cfg.cache_path.empty() ? "(none)" : cfg.cache_path) << " seed=" << cfg.seed;
  return os.str();
}

std::ostream& open_output(const RunConfig& cfg, std::ofstream& file) {
  if (cfg.output.empty()) return std::cout;
  file.open(cfg.output);
  if (!file) throw std::runtime_error("cannot open output file " + cfg.output);
  return file;
}

lame::ModeTable& table_for(const RunConfig& cfg) {
  static std::unique_ptr<lame::ModeTable> owned;
  if (!cfg.cache_path.empty()) {
    if (!owned) owned = std::make_unique<lame::ModeTable>(cfg.cache_path);
    return *owned;
  }
  static lame::ModeTable memory_only;
  return memory_only;
}

void drain_warnings_to_stderr() {
  for (const auto& w : diag::drain_warnings()) std::cerr << "warning: " << w << "\n";
}

int cmd_eigen(const RunConfig& cfg) {
  const Modulus k(cfg.k);
  const Modulus kappa(k.k_prime());
  lame::ModeTable& table = table_for(cfg);
  const auto nus = parse_list(cfg.nu_list);
  const int n_max = cfg.n_max < 0 ? 10 : cfg.n_max;

  struct Row {
    double nu;
    int n;
    double lambda, lower, upper;
    bool inside;
  };
  std::vector<Row> rows(nus.size() * (n_max + 1));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mtx;
  for (int th = 0; th < std::max(1, cfg.parallelism); ++th)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t j = next.fetch_add(1);
        if (j >= rows.size()) return;
        const double nu = nus[j / (n_max + 1)];
        const int n = static_cast<int>(j % (n_max + 1));
        try {
          const auto mode = table.get(nu, n, kappa);
          const auto br = lame::lemma22_bracket(lame::LameProblem(nu, n, kappa));
          rows[j] = {nu, n, mode->lambda(), br.lower, br.upper,
                     br.lower - 1e-9 <= mode->lambda() && mode->lambda() <= br.upper + 1e-9};
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mtx);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);

  std::ofstream file;
  std::ostream& os = open_output(cfg, file);
  os.precision(17);
  if (cfg.format == "json") {
    os << "{\"config\":\"" << config_echo(cfg, "eigen") << "\",\"rows\":[\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      os << " {\"nu\":" << r.nu << ",\"n\":" << r.n << ",\"kappa\":" << kappa.k()
         << ",\"lambda\":" << r.lambda << ",\"lower_bound\":" << r.lower
         << ",\"upper_bound\":" << r.upper << ",\"in_bracket\":" << (r.inside ? "true" : "false")
         << (i + 1 < rows.size() ? "},\n" : "}\n");
    }
    os << "]}\n";
  } else {
    os << "# " << config_echo(cfg, "eigen") << "\n";
    os << "nu,n,kappa,lambda,lower_bound,upper_bound,in_bracket\n";
    for (const auto& r : rows)
      os << r.nu << "," << r.n << "," << kappa.k() << "," << r.lambda << "," << r.lower << ","
         << r.upper << "," << (r.inside ? "true" : "false") << "\n";
  }
  table.flush();
  const auto st = table.stats();
  std::cerr << "eigen: " << rows.size() << " rows; cache hits mem=" << st.mem_hits
            << " disk=" << st.disk_hits << " solves=" << st.solves << "\n";
  return 0;
}

int emit_reports(const RunConfig& cfg, const std::string& suite,
                 const std::vector<limits::VerificationReport>& reports) {
  std::ofstream file;
  std::ostream& os = open_output(cfg, file);
  os << "{\"config\":\"" << config_echo(cfg, "verify " + suite) << "\"}\n";
  bool all = true;
  for (const auto& r : reports) {
    os << r.to_json_line() << "\n";
    all = all && r.passed;
  }
  std::cerr << "verify " << suite << ": " << reports.size() << " checks, "
            << (all ? "all passed" : "FAILURES") << "\n";
  return all ? 0 : 1;
}

int sweep_exit(const RunConfig& cfg, const std::string& suite,
               const std::vector<std::pair<std::string, limits::LimitSweep>>& sweeps,
               double final_tol) {
  std::ofstream file;
  std::ostream& os = open_output(cfg, file);
  os << "{\"config\":\"" << config_echo(cfg, "verify " + suite) << "\"}\n";
  bool all = true;
  os.precision(17);
  for (const auto& [label, sweep] : sweeps) {
    const bool ok = sweep.monotone && sweep.final_deviation <= final_tol;
    os << "{\"identity\":\"" << label << "\",\"deviations\":[";
    for (std::size_t i = 0; i < sweep.deviations.size(); ++i)
      os << sweep.deviations[i] << (i + 1 < sweep.deviations.size() ? "," : "");
    os << "],\"monotone\":" << (sweep.monotone ? "true" : "false")
       << ",\"final\":" << sweep.final_deviation << ",\"passed\":" << (ok ? "true" : "false")
       << "}\n";
    all = all && ok;
  }
  std::cerr << "verify " << suite << ": " << (all ? "all passed" : "FAILURES") << "\n";
  return all ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite) {
  lame::ModeTable& table = table_for(cfg);
  std::vector<limits::VerificationReport> reports;

  if (suite == "addition") {
    const Modulus k(cfg.k);
    HarmonicBasis basis(k, &table);
    const double tol = cfg.tol > 0 ? cfg.tol : 1e-8;
    const int n_max = cfg.n_max < 0 ? 40 : cfg.n_max;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> us(0.15, 0.8), gap(0.55, 0.9), ut(-0.7, 0.7);
    for (double mv : parse_list(cfg.m_list)) {
      const int m = static_cast<int>(mv);
      for (int g = 0; g < cfg.pairs; ++g) {
        const double s = us(rng) * k.big_k();
        const double ss = s + gap(rng) * k.big_k();
        reports.push_back(limits::check_addition_theorem(
            basis, m, s, ut(rng) * k.big_k_prime(), ss, ut(rng) * k.big_k_prime(), n_max, tol));
      }
    }
    table.flush();
    return emit_reports(cfg, suite, reports);
  }
  if (suite == "integral") {
    const Modulus k(cfg.k);
    HarmonicBasis basis(k, &table);
    const double tol = cfg.tol > 0 ? cfg.tol : 1e-6;
    const int n_cap = cfg.n_max < 0 ? 3 : cfg.n_max;
    for (double mv : parse_list(cfg.m_list))
      for (int n = 0; n <= n_cap; ++n)
        reports.push_back(limits::check_integral_relation(
            basis, static_cast<int>(mv), n, 0.8 * k.big_k(), 1.5 * k.big_k(),
            0.3 * k.big_k_prime(), tol));
    table.flush();
    return emit_reports(cfg, suite, reports);
  }
  if (suite == "inteq1") {
    const Modulus k(cfg.k);
    HarmonicBasis basis(k, &table);
    const double tol = cfg.tol > 0 ? cfg.tol : 1e-6;
    const int n_cap = cfg.n_max < 0 ? 2 : cfg.n_max;
    for (double nu : parse_list(cfg.nu_list))
      for (int n = 0; n <= n_cap; ++n)
        reports.push_back(limits::check_inteq1(basis, nu, n, 1.3 * k.big_k(), 0.4 * k.big_k(),
                                               0.2 * k.big_k_prime(), tol));
    table.flush();
    return emit_reports(cfg, suite, reports);
  }
  if (suite == "inteq2") {
    const Modulus k(cfg.k);
    HarmonicBasis basis(k, &table);
    const double tol = cfg.tol > 0 ? cfg.tol : 1e-5;
    const int n_cap = cfg.n_max < 0 ? 1 : cfg.n_max;
    for (double nu : parse_list(cfg.nu_list))
      for (int n = 0; n <= n_cap; ++n)
        reports.push_back(limits::check_inteq2(basis, nu, n, 0.25 * k.big_k_prime(), tol));
    table.flush();
    return emit_reports(cfg, suite, reports);
  }
  if (suite == "expansion") {
    const Modulus k(cfg.k);
    HarmonicBasis basis(k, &table);
    const double tol = cfg.tol > 0 ? cfg.tol : 1e-6;
    const int n_max = cfg.n_max < 0 ? 25 : cfg.n_max;
    const int m_max = 12;
    basis.warm_up(m_max, n_max, cfg.parallelism);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> us(0.3, 0.85), gap(0.62, 0.95), ut(-0.75, 0.75),
        up(-M_PI, M_PI);
    for (int i = 0; i < cfg.pairs; ++i) {
      FlatRingCoords a(us(rng) * k.big_k(), ut(rng) * k.big_k_prime(), up(rng), k);
      FlatRingCoords b(a.s + gap(rng) * k.big_k(), ut(rng) * k.big_k_prime(), up(rng), k);
      if (harmonics::chi_cartesian(a, b) < 1.05) {
        --i;
        continue;
      }
      const auto res = expand_inverse_distance(basis, a, b, TruncationSpec(m_max, n_max, 1e-9));
      const auto pa = flatring::to_cartesian(a), pb = flatring::to_cartesian(b);
      const double direct = 1.0 / std::sqrt((pa.x - pb.x) * (pa.x - pb.x) +
                                            (pa.y - pb.y) * (pa.y - pb.y) +
                                            (pa.z - pb.z) * (pa.z - pb.z));
      reports.push_back(limits::make_report(
          "expansion",
          {{"s", a.s}, {"t", a.t}, {"s_star", b.s}, {"t_star", b.t},
           {"chi", harmonics::chi_cartesian(a, b)}, {"k", k.k()}},
          res.value, direct, res.terms_used, tol));
    }
    table.flush();
    return emit_reports(cfg, suite, reports);
  }
  if (suite == "multipole") {
    const double tol = cfg.tol > 0 ? cfg.tol : 1e-9;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uu(-1.0, 1.0);
    for (int i = 0; i < cfg.pairs; ++i) {
      flatring::CartesianPoint p{0.3 * uu(rng), 0.3 * uu(rng), 0.3 * uu(rng)};
      if (p.norm() < 0.05) {
        --i;
        continue;
      }
      const double scale = 2.0 * p.norm();
      double dx = uu(rng), dy = uu(rng), dz = uu(rng);
      const double dn = std::sqrt(dx * dx + dy * dy + dz * dz);
      if (dn < 0.05) {
        --i;
        continue;
      }
      flatring::CartesianPoint q{scale * dx / dn, scale * dy / dn, scale * dz / dn};
      const auto res = limits::spherical_multipole(p, q, TruncationSpec(40, 40, 1e-13));
      const double direct = 1.0 / std::sqrt((p.x - q.x) * (p.x - q.x) +
                                            (p.y - q.y) * (p.y - q.y) +
                                            (p.z - q.z) * (p.z - q.z));
      reports.push_back(limits::make_report("multipole", {{"r_ratio", 0.5}}, res.value, direct,
                                            res.terms_used, tol));
    }
    return emit_reports(cfg, suite, reports);
  }
  if (suite == "limit-k0") {
    const double tol = cfg.tol > 0 ? cfg.tol : 2e-3;
    const std::vector<double> seq{0.3, 0.1, 0.03, 0.01};
    std::vector<double> taus, sigmas;
    for (int i = 1; i <= 40; ++i) taus.push_back(0.1 + (M_PI - 0.2) * i / 41.0);
    for (int i = 0; i <= 20; ++i) sigmas.push_back(2.0 * i / 20.0);
    std::vector<std::pair<std::string, limits::LimitSweep>> sweeps;
    sweeps.emplace_back("gegenbauer nu=1/2 n=0",
                        limits::limit_w_gegenbauer(table, 0.5, 0, seq, taus));
    sweeps.emplace_back("gegenbauer nu=3/2 n=2",
                        limits::limit_w_gegenbauer(table, 1.5, 2, seq, taus));
    sweeps.emplace_back("exponential nu=-1/2 n=0",
                        limits::limit_w_exponential(table, -0.5, 0, seq, sigmas));
    sweeps.emplace_back("exponential nu=1/2 n=1",
                        limits::limit_w_exponential(table, 0.5, 1, seq, sigmas));
    table.flush();
    return sweep_exit(cfg, suite, sweeps, tol);
  }
  if (suite == "limit-k1") {
    const double tol = cfg.tol > 0 ? cfg.tol : 5e-3;
    const std::vector<double> seq{0.9, 0.99, 0.999};
    std::vector<std::pair<std::string, limits::LimitSweep>> sweeps;
    sweeps.emplace_back("A(0,0) -> B(0,0)",
                        limits::check_amn_to_bmn(table, 0, 0, -0.3, 0.4, 1.1, 1.9, seq));
    sweeps.emplace_back("A(1,1) -> B(1,1)",
                        limits::check_amn_to_bmn(table, 1, 1, -0.3, 0.4, 1.1, 1.9, seq));
    table.flush();
    return sweep_exit(cfg, suite, sweeps, tol);
  }
  std::cerr << "unknown verify suite '" << suite << "'\n";
  return 3;
}

int cmd_mesh(const RunConfig& cfg) {
  const Modulus k(cfg.k);
  const PeanutRegion region(cfg.s0_frac * k.big_k(), k);
  const auto mesh = flatring::mesh_peanut(region, cfg.resolution, cfg.resolution);
  const std::string base = cfg.output.empty() ? "peanut" : cfg.output;
  {
    std::ofstream obj(base + ".obj");
    obj << "# " << config_echo(cfg, "mesh") << "\n";
    flatring::write_obj(obj, mesh);
  }
  {
    std::ofstream csv(base + ".csv");
    csv << "# " << config_echo(cfg, "mesh") << "\n";
    flatring::write_mesh_csv(csv, mesh, region);
  }
  std::cerr << "mesh: " << mesh.vertices.size() << " vertices, " << mesh.quads.size()
            << " quads + " << mesh.triangles.size() << " pole triangles -> " << base
            << ".obj/.csv (area " << flatring::mesh_area(mesh) << ")\n";
  return 0;
}

int cmd_lines(const RunConfig& cfg) {
  const Modulus k(cfg.k);
  const double K = k.big_k(), kp = k.big_k_prime();
  const auto lines = flatring::coordinate_lines(
      k, {0.5 * K, K, 1.5 * K},
      {-0.7 * kp, -0.5 * kp, -0.3 * kp, 0.3 * kp, 0.5 * kp, 0.7 * kp}, cfg.samples);
  std::ofstream file;
  std::ostream& os = open_output(cfg, file);
  os << "# " << config_echo(cfg, "lines") << "\n";
  flatring::write_lines_csv(os, lines);
  std::cerr << "lines: " << lines.size() << " polylines\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"peanut harmonics in flat-ring cyclide coordinates"};
  app.set_config("--config", "", "key=value configuration file");
  RunConfig cfg;
  if (const char* env = std::getenv("PEANUT_CACHE")) cfg.cache_path = env;

  app.add_option("--cache", cfg.cache_path, "eigenvalue cache file (overrides $PEANUT_CACHE)");
  app.add_option("--parallelism", cfg.parallelism, "worker threads (output-invariant)");

  auto* eigen = app.add_subcommand("eigen", "eigenvalue table with Lemma-type brackets");
  eigen->add_option("--k", cfg.k, "coordinate modulus in (0,1)")->required();
  eigen->add_option("--nu", cfg.nu_list, "comma list of degrees nu >= -1/2");
  eigen->add_option("--n-max", cfg.n_max, "largest index n (default 10)");
  eigen->add_option("--output", cfg.output, "output path (default stdout)");
  eigen->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* verify = app.add_subcommand("verify", "identity / limit verification suites");
  std::string suite;
  verify->add_option("suite", suite,
                     "addition|integral|inteq1|inteq2|limit-k0|limit-k1|expansion|multipole")
      ->required();
  verify->add_option("--k", cfg.k, "coordinate modulus");
  verify->add_option("--m", cfg.m_list, "azimuthal orders, e.g. 0..3 or 0,1,2");
  verify->add_option("--nu", cfg.nu_list, "degrees for the inteq suites");
  verify->add_option("--n-max", cfg.n_max, "series truncation / index cap");
  verify->add_option("--pairs", cfg.pairs, "random geometries per case");
  verify->add_option("--seed", cfg.seed, "random seed");
  verify->add_option("--tol", cfg.tol, "override the suite tolerance");
  verify->add_option("--output", cfg.output, "JSON-lines report path (default stdout)");

  auto* mesh = app.add_subcommand("mesh", "peanut surface mesh (OBJ + CSV)");
  mesh->add_option("--k", cfg.k, "coordinate modulus")->required();
  mesh->add_option("--s0-frac", cfg.s0_frac, "s0 in units of K, in (0,2)");
  mesh->add_option("--resolution", cfg.resolution, "grid resolution per direction");
  mesh->add_option("--output", cfg.output, "output basename (default 'peanut')");

  auto* lines = app.add_subcommand("lines", "coordinate lines in the (R,z) half plane");
  lines->add_option("--k", cfg.k, "coordinate modulus (default 2^-1/2)");
  lines->add_option("--samples", cfg.samples, "points per polyline");
  lines->add_option("--output", cfg.output, "CSV path (default stdout)");

  app.require_subcommand(1);
  cfg.k = 1.0 / std::sqrt(2.0);  // lines default; --k overrides
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }

  try {
    int rc = 3;
    if (eigen->parsed())
      rc = cmd_eigen(cfg);
    else if (verify->parsed())
      rc = cmd_verify(cfg, suite);
    else if (mesh->parsed())
      rc = cmd_mesh(cfg);
    else if (lines->parsed())
      rc = cmd_lines(cfg);
    drain_warnings_to_stderr();
    return rc;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  }
}
