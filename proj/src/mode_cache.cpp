#include "peanut/mode_cache.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace peanut::lame {

namespace {

std::string make_key(double nu, int n, double kappa) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.12g|%d|%.12g", nu, n, kappa);
  return buf;
}

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

ModeTable::ModeTable(std::string disk_path) : disk_path_(std::move(disk_path)) {
  if (disk_path_.empty()) return;
  std::ifstream in(disk_path_);
  if (!in) return;
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception&) {
    return;  // unreadable cache is treated as empty
  }
  if (!doc.is_array()) return;
  for (const auto& item : doc) {
    try {
      ModeRecord rec;
      rec.nu = item.at("nu").get<double>();
      rec.n = item.at("n").get<int>();
      rec.kappa = item.at("kappa").get<double>();
      rec.lambda = item.at("lambda").get<double>();
      rec.norm_constant = item.at("norm_constant").get<double>();
      rec.frobenius_a0 = item.at("frobenius_a0").get<double>();
      rec.parity = item.at("parity").get<std::string>();
      rec.solver_version = item.at("solver_version").get<int>();
      if (rec.solver_version != kSolverVersion) continue;
      records_.emplace(make_key(rec.nu, rec.n, rec.kappa), std::move(rec));
    } catch (const nlohmann::json::exception&) {
      continue;
    }
  }
}

std::shared_ptr<const LameMode> ModeTable::get(double nu, int n, const Modulus& kappa) {
  const std::string key = make_key(nu, n, kappa.k());
  std::shared_future<std::shared_ptr<const LameMode>> fut;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = futures_.find(key);
    if (it != futures_.end()) {
      ++stats_.mem_hits;
      fut = it->second;
    } else {
      fut = std::async(std::launch::deferred,
                       [this, nu, n, kappa, key] { return build(nu, n, kappa, key); })
                .share();
      futures_.emplace(key, fut);
    }
  }
  return fut.get();
}

std::shared_ptr<const LameMode> ModeTable::build(double nu, int n, const Modulus& kappa,
                                                 const std::string& key) {
  ModeRecord rec;
  bool have_record = false;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = records_.find(key);
    if (it != records_.end()) {
      rec = it->second;
      have_record = true;
    }
  }

  if (have_record) {
    try {
      auto mode = std::shared_ptr<LameMode>(new LameMode(LameProblem(nu, n, kappa)));
      mode->lambda_ = rec.lambda;
      mode->build_from_lambda(SolveOptions{});  // throws if the eigencondition fails
      if (close_rel(mode->norm_constant(), rec.norm_constant, 1e-8) &&
          close_rel(mode->frobenius_a0(), rec.frobenius_a0, 1e-8) &&
          mode->residual_sample() < 1e-7) {
        std::lock_guard<std::mutex> lock(mutex_);
        ++stats_.disk_hits;
        return mode;
      }
    } catch (const std::exception&) {
      // stale record; fall through to a full solve
    }
  }

  auto solved = std::make_shared<LameMode>(solve_eigen(LameProblem(nu, n, kappa)));
  {
    std::lock_guard<std::mutex> lock(mutex_);
    ++stats_.solves;
    if (records_.find(key) == records_.end()) {
      ModeRecord out;
      out.nu = nu;
      out.n = n;
      out.kappa = kappa.k();
      out.lambda = solved->lambda();
      out.norm_constant = solved->norm_constant();
      out.frobenius_a0 = solved->frobenius_a0();
      out.parity = solved->parity() == Parity::even ? "even" : "odd";
      records_.emplace(key, std::move(out));
    }
  }
  return solved;
}

void ModeTable::flush() const {
  if (disk_path_.empty()) return;
  nlohmann::json doc = nlohmann::json::array();
  {
    std::lock_guard<std::mutex> lock(mutex_);
    for (const auto& [key, rec] : records_) {
      doc.push_back({{"nu", rec.nu},
                     {"n", rec.n},
                     {"kappa", rec.kappa},
                     {"lambda", rec.lambda},
                     {"norm_constant", rec.norm_constant},
                     {"frobenius_a0", rec.frobenius_a0},
                     {"parity", rec.parity},
                     {"solver_version", rec.solver_version}});
    }
  }
  namespace fs = std::filesystem;
  const fs::path target(disk_path_);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << doc.dump(1) << "\n";
  }
  fs::rename(tmp, target);
}

ModeTable::Stats ModeTable::stats() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return stats_;
}

ModeTable& ModeTable::global() {
  static ModeTable table([] {
    const char* env = std::getenv("PEANUT_CACHE");
    return std::string(env ? env : "");
  }());
  return table;
}

}  // namespace peanut::lame
