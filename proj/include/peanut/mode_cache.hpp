#ifndef PEANUT_MODE_CACHE_HPP
#define PEANUT_MODE_CACHE_HPP

#include <future>
#include <map>
#include <memory>
#include <string>

#include "peanut/lame.hpp"

// In-process memo of solved Lame-Wangerin modes plus an optional JSON disk
// cache.  Disk records hold the scalar data only ({nu, n, kappa, lambda,
// norm_constant, frobenius_a0, parity, solver_version}); on a hit the dense
// evaluators are rebuilt from the cached eigenvalue and revalidated against
// the eigencondition before use.  Decimal representations round-trip exactly
// (shortest-round-trip formatting); records loaded from disk are written
// back verbatim, so a warm rerun reproduces the file byte for byte.

namespace peanut::lame {

inline constexpr int kSolverVersion = 1;

struct ModeRecord {
  double nu = 0.0;
  int n = 0;
  double kappa = 0.0;
  double lambda = 0.0;
  double norm_constant = 0.0;
  double frobenius_a0 = 0.0;
  std::string parity;
  int solver_version = kSolverVersion;
};

class ModeTable {
public:
  // Empty path disables the disk layer.
  explicit ModeTable(std::string disk_path = "");

  std::shared_ptr<const LameMode> get(double nu, int n, const Modulus& kappa);

  // Atomic-rename rewrite of the disk cache (no-op without a path).
  void flush() const;

  struct Stats {
    long mem_hits = 0, disk_hits = 0, solves = 0;
  };
  Stats stats() const;

  const std::string& disk_path() const { return disk_path_; }

  // Shared table; disk path taken from $PEANUT_CACHE when set.
  static ModeTable& global();

private:
  std::shared_ptr<const LameMode> build(double nu, int n, const Modulus& kappa,
                                        const std::string& key);

  std::string disk_path_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_future<std::shared_ptr<const LameMode>>> futures_;
  std::map<std::string, ModeRecord> records_;
  mutable Stats stats_;
};

}  // namespace peanut::lame

#endif
