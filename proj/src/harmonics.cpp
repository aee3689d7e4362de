#include "peanut/harmonics.hpp"

#include <atomic>
#include <cmath>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "peanut/quadrature.hpp"
#include "peanut/specfun.hpp"

namespace peanut::harmonics {

using elliptic::SnCnDn;

HarmonicBasis::HarmonicBasis(Modulus k, ModeTable* table)
    : k_(k), kappa_(k.k_prime()), table_(table ? table : &ModeTable::global()) {}

std::shared_ptr<const LameMode> HarmonicBasis::mode(int m, int n) const {
  return table_->get(std::abs(m) - 0.5, n, kappa_);
}

std::shared_ptr<const LameMode> HarmonicBasis::mode_nu(double nu, int n) const {
  return table_->get(nu, n, kappa_);
}

void HarmonicBasis::warm_up(int m_max, int n_max, int threads) const {
  std::vector<std::pair<int, int>> jobs;
  for (int m = 0; m <= m_max; ++m)
    for (int n = 0; n <= n_max; ++n) jobs.emplace_back(m, n);
  std::atomic<std::size_t> next{0};
  const int nthreads = std::max(1, threads);
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mtx;
  for (int i = 0; i < nthreads; ++i)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t j = next.fetch_add(1);
        if (j >= jobs.size()) return;
        try {
          auto mode = this->mode(jobs[j].first, jobs[j].second);
          mode->wronskian();  // also builds the imaginary-axis mesh
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mtx);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

void require_same_modulus(const HarmonicBasis& basis, const FlatRingCoords& c,
                          const char* where) {
  if (c.modulus.k() != basis.coordinate_modulus().k())
    throw std::invalid_argument(std::string(where) + ": coordinate modulus mismatch");
}

std::complex<double> phase_factor(int n) { return (n % 2 == 0) ? 1.0 : kI; }

// real-representative radial x transverse product at (s_arg, t)
double radial_transverse(const LameMode& mode, double s_arg, double t) {
  return mode.eval_w_imag(s_arg).value * mode.eval_w(t);
}

}  // namespace

std::complex<double> internal_g(const HarmonicBasis& basis, PeanutHarmonicIndex idx,
                                const FlatRingCoords& c) {
  require_same_modulus(basis, c, "internal_g");
  const auto mode = basis.mode(idx.m, idx.n);
  const double R = flatring::radius_R(c.s, c.t, c.modulus);
  const double core = radial_transverse(*mode, c.s, c.t) / std::sqrt(R);
  return phase_factor(idx.n) * core * std::exp(kI * (static_cast<double>(idx.m) * c.phi));
}

std::complex<double> external_h(const HarmonicBasis& basis, PeanutHarmonicIndex idx,
                                const FlatRingCoords& c) {
  require_same_modulus(basis, c, "external_h");
  const auto mode = basis.mode(idx.m, idx.n);
  const double two_k = 2.0 * basis.coordinate_modulus().big_k();
  const double R = flatring::radius_R(c.s, c.t, c.modulus);
  const double core = radial_transverse(*mode, two_k - c.s, c.t) / std::sqrt(R);
  return phase_factor(idx.n) * core * std::exp(kI * (static_cast<double>(idx.m) * c.phi));
}

double chi(double s, double t, double s_star, double t_star, const Modulus& k) {
  const double kk = k.k(), kp = k.k_prime();
  const SnCnDn a = k.sncndn(s);
  const SnCnDn b = k.sncndn(s_star);
  const SnCnDn u = elliptic::jacobi_sncndn(t, kp);
  const SnCnDn v = elliptic::jacobi_sncndn(t_star, kp);
  const double sc_t = u.sn / u.cn, sc_ts = v.sn / v.cn;
  const double nc_t = 1.0 / u.cn, nc_ts = 1.0 / v.cn;
  const double dc_t = u.dn / u.cn, dc_ts = v.dn / v.cn;
  return -kk * kk * a.sn * b.sn * sc_t * sc_ts -
         (kk * kk / (kp * kp)) * a.cn * b.cn * nc_t * nc_ts +
         (1.0 / (kp * kp)) * a.dn * b.dn * dc_t * dc_ts;
}

double chi_cartesian(const FlatRingCoords& c, const FlatRingCoords& c_star) {
  const double R = flatring::radius_R(c.s, c.t, c.modulus);
  const double Rs = flatring::radius_R(c_star.s, c_star.t, c_star.modulus);
  const double z = flatring::height_z(c.s, c.t, c.modulus);
  const double zs = flatring::height_z(c_star.s, c_star.t, c_star.modulus);
  return (R * R + Rs * Rs + (z - zs) * (z - zs)) / (2.0 * R * Rs);
}

std::complex<double> chi_shifted(double u, double t, double t0, const Modulus& k) {
  const double kp = k.k_prime();
  const SnCnDn ju = elliptic::jacobi_sncndn(u, kp);
  const SnCnDn jt = elliptic::jacobi_sncndn(t, kp);
  const SnCnDn j0 = elliptic::jacobi_sncndn(t0, kp);
  const double sc_nd = (ju.sn / ju.cn) / ju.dn;
  const double real_part = (jt.dn / jt.cn) * (j0.dn / j0.cn) / kp;
  return real_part + kI * (k.k() * f_kernel(t, t0, k) * sc_nd);
}

double f_kernel(double t, double t0, const Modulus& k) {
  const double kk = k.k(), kp = k.k_prime();
  const SnCnDn jt = elliptic::jacobi_sncndn(t, kp);
  const SnCnDn j0 = elliptic::jacobi_sncndn(t0, kp);
  return (kk / kp) / (jt.cn * j0.cn) - kk * (jt.sn / jt.cn) * (j0.sn / j0.cn);
}

ExpansionResult expand_inverse_distance(const HarmonicBasis& basis, const FlatRingCoords& c,
                                        const FlatRingCoords& c_star,
                                        const TruncationSpec& trunc) {
  require_same_modulus(basis, c, "expand_inverse_distance");
  require_same_modulus(basis, c_star, "expand_inverse_distance");
  if (!(c.s < c_star.s))
    throw std::invalid_argument("expand_inverse_distance: requires s < s_star");

  const double two_k = 2.0 * basis.coordinate_modulus().big_k();
  const double R = flatring::radius_R(c.s, c.t, c.modulus);
  const double Rs = flatring::radius_R(c_star.s, c_star.t, c_star.modulus);
  const double pref = 1.0 / std::sqrt(R * Rs);
  const double dphi = c.phi - c_star.phi;

  ExpansionResult out;
  double sum = 0.0;
  double scale = 0.0;
  double tail = 0.0;
  int small_blocks = 0;
  for (int m = 0; m <= trunc.m_max; ++m) {
    const double az = (m == 0) ? 1.0 : 2.0 * std::cos(m * dphi);
    const double az_mag = (m == 0) ? 1.0 : 2.0;
    double block_peak = 0.0;
    double last_mag = 0.0, prev_mag = 0.0;
    int consecutive_small = 0;
    for (int n = 0; n <= trunc.n_max; ++n) {
      const auto mode = basis.mode(m, n);
      const double term = 2.0 * pref * mode->eval_w_imag(c.s).value * mode->eval_w(c.t) *
                          mode->eval_w_imag(two_k - c_star.s).value *
                          mode->eval_w(c_star.t) / mode->wronskian();
      sum += az * term;
      ++out.terms_used;
      const double mag = az_mag * std::abs(term);
      scale = std::max({scale, std::abs(sum), mag});
      block_peak = std::max(block_peak, mag);
      prev_mag = last_mag;
      last_mag = mag;
      if (mag < trunc.tol * scale) {
        if (++consecutive_small >= 3) break;
      } else {
        consecutive_small = 0;
      }
    }
    // tail of the n series for this m: blocks that hit the early-stop have
    // demonstrated decay below the floor (remainder of one more floor-sized
    // term); n_max-truncated blocks get the geometric extrapolation
    if (last_mag > 0.0) {
      if (consecutive_small >= 3) {
        tail += last_mag;
      } else {
        const double ratio = prev_mag > 0.0 ? std::min(0.95, last_mag / prev_mag) : 0.5;
        tail += last_mag * ratio / (1.0 - ratio);
      }
    }
    if (block_peak < trunc.tol * scale) {
      if (++small_blocks >= 2) break;
    } else {
      small_blocks = 0;
    }
  }
  out.value = sum;
  out.tail_estimate = tail;
  out.converged = tail <= 10.0 * trunc.tol * std::max(scale, 1e-300);
  if (!out.converged)
    diag::warn("expand_inverse_distance: tail estimate above 10*tol at the truncation");
  return out;
}

std::vector<double> azimuthal_fourier(const FlatRingCoords& c, const FlatRingCoords& c_star,
                                      int m_max) {
  if (m_max < 0) throw std::domain_error("azimuthal_fourier: m_max >= 0");
  const double x = chi_cartesian(c, c_star);
  const double R = flatring::radius_R(c.s, c.t, c.modulus);
  const double Rs = flatring::radius_R(c_star.s, c_star.t, c_star.modulus);
  const double pre = 1.0 / (M_PI * std::sqrt(R * Rs));
  std::vector<double> coeffs(m_max + 1);
  for (int m = 0; m <= m_max; ++m)
    coeffs[m] = pre * specfun::legendre_q(m - 0.5, x);
  return coeffs;
}

double azimuthal_sum(const std::vector<double>& coeffs, double dphi) {
  if (coeffs.empty()) return 0.0;
  double acc = coeffs[0];
  for (std::size_t m = 1; m < coeffs.size(); ++m)
    acc += 2.0 * coeffs[m] * std::cos(m * dphi);
  return acc;
}

// --- Dirichlet -------------------------------------------------------------

BoundaryGrid::BoundaryGrid(std::vector<double> t_nodes, std::vector<double> phi_nodes,
                           std::vector<std::complex<double>> values)
    : t_(std::move(t_nodes)), phi_(std::move(phi_nodes)), v_(std::move(values)) {
  if (t_.size() < 4 || phi_.size() < 4 || v_.size() != t_.size() * phi_.size())
    throw std::invalid_argument("BoundaryGrid: need >= 4x4 uniform samples");
}

BoundaryGrid BoundaryGrid::sample(const std::function<std::complex<double>(double, double)>& g,
                                  double t_halfwidth, int n_t, int n_phi) {
  std::vector<double> tn(n_t), pn(n_phi);
  for (int i = 0; i < n_t; ++i) tn[i] = -t_halfwidth + 2.0 * t_halfwidth * i / (n_t - 1.0);
  for (int j = 0; j < n_phi; ++j) pn[j] = -M_PI + 2.0 * M_PI * j / n_phi;
  std::vector<std::complex<double>> vals(static_cast<std::size_t>(n_t) * n_phi);
  for (int i = 0; i < n_t; ++i)
    for (int j = 0; j < n_phi; ++j) vals[i * n_phi + j] = g(tn[i], pn[j]);
  return BoundaryGrid(std::move(tn), std::move(pn), std::move(vals));
}

namespace {
// Catmull-Rom weights for fractional position u in [0,1]
std::array<double, 4> catmull_rom(double u) {
  const double u2 = u * u, u3 = u2 * u;
  return {-0.5 * u3 + u2 - 0.5 * u, 1.5 * u3 - 2.5 * u2 + 1.0, -1.5 * u3 + 2.0 * u2 + 0.5 * u,
          0.5 * u3 - 0.5 * u2};
}
}  // namespace

std::complex<double> BoundaryGrid::interpolate(double t, double phi) const {
  const int nt = static_cast<int>(t_.size()), np = static_cast<int>(phi_.size());
  const double ht = t_[1] - t_[0];
  const double hp = phi_[1] - phi_[0];
  double ft = (t - t_[0]) / ht;
  int it = static_cast<int>(std::floor(ft));
  it = std::clamp(it, 0, nt - 2);
  const auto wt = catmull_rom(ft - it);
  phi = std::remainder(phi - phi_[0], 2.0 * M_PI);
  if (phi < 0) phi += 2.0 * M_PI;
  const double fp = phi / hp;
  int ip = static_cast<int>(std::floor(fp)) % np;
  const auto wp = catmull_rom(fp - std::floor(fp));
  std::complex<double> acc = 0.0;
  for (int a = -1; a <= 2; ++a) {
    const int row = std::clamp(it + a, 0, nt - 1);  // clamped in t
    std::complex<double> rowacc = 0.0;
    for (int b = -1; b <= 2; ++b) {
      const int col = ((ip + b) % np + np) % np;  // periodic in phi
      rowacc += wp[b + 1] * v_[static_cast<std::size_t>(row) * np + col];
    }
    acc += wt[a + 1] * rowacc;
  }
  return acc;
}

BoundaryGrid BoundaryGrid::read_csv(std::istream& is) {
  std::string line;
  std::vector<double> ts, ps;
  std::vector<std::array<double, 4>> rows;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("t,", 0) == 0) continue;
    std::array<double, 4> row{};
    std::istringstream ss(line);
    std::string cell;
    for (int i = 0; i < 4 && std::getline(ss, cell, ','); ++i) row[i] = std::stod(cell);
    rows.push_back(row);
  }
  for (const auto& r : rows) {
    if (ts.empty() || r[0] > ts.back() + 1e-15) ts.push_back(r[0]);
  }
  const std::size_t np = rows.size() / ts.size();
  for (std::size_t j = 0; j < np; ++j) ps.push_back(rows[j][1]);
  std::vector<std::complex<double>> vals(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) vals[i] = {rows[i][2], rows[i][3]};
  return BoundaryGrid(std::move(ts), std::move(ps), std::move(vals));
}

void BoundaryGrid::write_csv(std::ostream& os) const {
  os.precision(17);
  os << "t,phi,re_g,im_g\n";
  for (std::size_t i = 0; i < t_.size(); ++i)
    for (std::size_t j = 0; j < phi_.size(); ++j) {
      const auto& v = v_[i * phi_.size() + j];
      os << t_[i] << "," << phi_[j] << "," << v.real() << "," << v.imag() << "\n";
    }
}

void CoefficientTable::write_json(std::ostream& os) const {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& e : entries)
    doc.push_back({{"m", e.m}, {"n", e.n}, {"re", e.value.real()}, {"im", e.value.imag()}});
  os << doc.dump(1) << "\n";
}

CoefficientTable CoefficientTable::read_json(std::istream& is) {
  nlohmann::json doc;
  is >> doc;
  CoefficientTable table;
  for (const auto& item : doc)
    table.entries.push_back({item.at("m").get<int>(), item.at("n").get<int>(),
                             {item.at("re").get<double>(), item.at("im").get<double>()}});
  return table;
}

namespace {

// checks dS = h R dt dphi against the embedded surface element (once per
// modulus; the identity is used by every surface quadrature below)
void check_surface_element(const HarmonicBasis& basis, const PeanutRegion& region) {
  static std::map<double, bool> checked;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  const double key = basis.coordinate_modulus().k();
  if (checked.count(key)) return;
  const Modulus& k = region.modulus;
  const double kt = k.big_k_prime();
  const double s0 = region.s0;
  for (double tf : {-0.52, 0.11, 0.63}) {
    const double t = tf * kt;
    const double eps_t = 1e-5 * kt, eps_p = 1e-5;
    const auto at = [&](double tt, double pp) {
      return flatring::to_cartesian(FlatRingCoords(s0, tt, pp, k));
    };
    const auto pt = at(t + eps_t, 0.3), mt = at(t - eps_t, 0.3);
    const auto pp = at(t, 0.3 + eps_p), mp = at(t, 0.3 - eps_p);
    const double dt_x = (pt.x - mt.x) / (2 * eps_t), dt_y = (pt.y - mt.y) / (2 * eps_t),
                 dt_z = (pt.z - mt.z) / (2 * eps_t);
    const double dp_x = (pp.x - mp.x) / (2 * eps_p), dp_y = (pp.y - mp.y) / (2 * eps_p),
                 dp_z = (pp.z - mp.z) / (2 * eps_p);
    const double cx = dt_y * dp_z - dt_z * dp_y;
    const double cy = dt_z * dp_x - dt_x * dp_z;
    const double cz = dt_x * dp_y - dt_y * dp_x;
    const double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
    const double hr = flatring::scale_h(s0, t, k) * flatring::radius_R(s0, t, k);
    if (std::abs(cross - hr) > 1e-5 * hr)
      throw std::logic_error("surface element identity dS = h R dt dphi failed the check");
  }
  checked[key] = true;
}

}  // namespace

CoefficientTable dirichlet_coefficients(
    const HarmonicBasis& basis, const std::function<std::complex<double>(double, double)>& g,
    const PeanutRegion& region, const TruncationSpec& trunc, const DirichletOptions& opts) {
  const Modulus& k = basis.coordinate_modulus();
  if (region.modulus.k() != k.k())
    throw std::invalid_argument("dirichlet_coefficients: modulus mismatch");
  const double kt = k.big_k_prime();  // transverse quarter period K' = K(kappa)

  const auto compute = [&](int n_t, int n_phi) {
    CoefficientTable table;
    for (int m = -trunc.m_max; m <= trunc.m_max; ++m) {
      const double nu = std::abs(m) - 0.5;
      const quad::Rule& rule = quad::gauss_jacobi_cached(n_t, nu + 1.0, nu + 1.0);
      // g on the tensor grid for this |m|
      std::vector<std::complex<double>> gmat(static_cast<std::size_t>(n_t) * n_phi);
      for (int i = 0; i < n_t; ++i)
        for (int j = 0; j < n_phi; ++j) {
          const double t = kt * rule.nodes[i];
          const double phi = -M_PI + 2.0 * M_PI * j / n_phi;
          gmat[static_cast<std::size_t>(i) * n_phi + j] = g(t, phi);
        }
      for (int n = 0; n <= trunc.n_max; ++n) {
        const auto mode = basis.mode(m, n);
        std::vector<double> wred(n_t);
        for (int i = 0; i < n_t; ++i) {
          const double x = rule.nodes[i];
          wred[i] = mode->eval_w(kt * x) / std::pow((1.0 - x) * (1.0 + x), nu + 1.0);
        }
        std::complex<double> acc = 0.0;
        for (int j = 0; j < n_phi; ++j) {
          const double phi = -M_PI + 2.0 * M_PI * j / n_phi;
          const std::complex<double> e = std::exp(-kI * (static_cast<double>(m) * phi));
          std::complex<double> tacc = 0.0;
          for (int i = 0; i < n_t; ++i)
            tacc += rule.weights[i] * wred[i] * gmat[static_cast<std::size_t>(i) * n_phi + j];
          acc += e * tacc;
        }
        acc *= kt * (2.0 * M_PI / n_phi);
        const double u_s0 = mode->eval_w_imag(region.s0).value;
        std::complex<double> c_tilde = acc / (2.0 * M_PI * u_s0);
        // paper phase: c = c~ / i^(n mod 2)
        const std::complex<double> c_true = (n % 2 == 0) ? c_tilde : c_tilde * (-kI);
        table.entries.push_back({m, n, c_true});
      }
    }
    return table;
  };

  CoefficientTable table = compute(opts.t_nodes, opts.phi_nodes);
  if (opts.resolution_check) {
    const CoefficientTable fine = compute(2 * opts.t_nodes, 2 * opts.phi_nodes);
    double scale = 1e-300;
    for (const auto& e : fine.entries) scale = std::max(scale, std::abs(e.value));
    for (std::size_t i = 0; i < table.entries.size(); ++i) {
      if (std::abs(table.entries[i].value - fine.entries[i].value) > 1e-6 * scale) {
        diag::warn("dirichlet_coefficients: node doubling moved a kept coefficient by > 1e-6");
        break;
      }
    }
    table = fine;
  }
  return table;
}

CoefficientTable dirichlet_coefficients(const HarmonicBasis& basis, const BoundaryGrid& g,
                                        const PeanutRegion& region, const TruncationSpec& trunc,
                                        const DirichletOptions& opts) {
  return dirichlet_coefficients(
      basis, [&](double t, double phi) { return g.interpolate(t, phi); }, region, trunc, opts);
}

std::complex<double> dirichlet_solve(const HarmonicBasis& basis, const CoefficientTable& coeffs,
                                     const PeanutRegion& region, const FlatRingCoords& c) {
  require_same_modulus(basis, c, "dirichlet_solve");
  if (!(c.s < region.s0))
    throw std::invalid_argument("dirichlet_solve: requires s < s0 (interior of the region)");
  const double R = flatring::radius_R(c.s, c.t, c.modulus);
  const double pref = 1.0 / std::sqrt(R);

  // group by m, n ascending, with the expansion's early-stop policy
  std::vector<const CoefficientEntry*> order;
  order.reserve(coeffs.entries.size());
  for (const auto& e : coeffs.entries) order.push_back(&e);
  std::sort(order.begin(), order.end(), [](const CoefficientEntry* a, const CoefficientEntry* b) {
    if (std::abs(a->m) != std::abs(b->m)) return std::abs(a->m) < std::abs(b->m);
    if (a->m != b->m) return a->m < b->m;
    return a->n < b->n;
  });
  std::complex<double> acc = 0.0;
  double scale = 0.0;
  int consecutive_small = 0;
  int current_m = order.empty() ? 0 : order.front()->m;
  for (const CoefficientEntry* e : order) {
    if (e->m != current_m) {
      current_m = e->m;
      consecutive_small = 0;
    }
    if (consecutive_small >= 3) continue;  // rest of this m's n-tail is negligible
    const auto mode = basis.mode(e->m, e->n);
    const std::complex<double> c_tilde = (e->n % 2 == 0) ? e->value : e->value * kI;
    const double core = pref * mode->eval_w_imag(c.s).value * mode->eval_w(c.t);
    const std::complex<double> term =
        c_tilde * core * std::exp(kI * (static_cast<double>(e->m) * c.phi));
    acc += term;
    scale = std::max(scale, std::abs(acc));
    if (std::abs(term) < 1e-14 * std::max(scale, 1e-300))
      ++consecutive_small;
    else
      consecutive_small = 0;
  }
  return acc;
}

std::complex<double> external_from_integral(const HarmonicBasis& basis, PeanutHarmonicIndex idx,
                                            const PeanutRegion& region,
                                            const CartesianPoint& p_star, int t_nodes,
                                            int phi_nodes) {
  const Modulus& k = basis.coordinate_modulus();
  if (region.modulus.k() != k.k())
    throw std::invalid_argument("external_from_integral: modulus mismatch");
  if (flatring::region_classify(p_star, region) != flatring::Classification::exterior)
    throw std::invalid_argument("external_from_integral: p_star must lie outside the region");
  check_surface_element(basis, region);

  const auto mode = basis.mode(idx.m, idx.n);
  const double nu = idx.nu();
  const double kt = k.big_k_prime();
  const quad::Rule& rule = quad::gauss_jacobi_cached(t_nodes, nu + 1.0, nu + 1.0);
  std::complex<double> acc = 0.0;
  for (int i = 0; i < t_nodes; ++i) {
    const double x = rule.nodes[i];
    const double t = kt * x;
    const double wred = mode->eval_w(t) / std::pow((1.0 - x) * (1.0 + x), nu + 1.0);
    const double R = flatring::radius_R(region.s0, t, k);
    std::complex<double> pacc = 0.0;
    for (int j = 0; j < phi_nodes; ++j) {
      const double phi = -M_PI + 2.0 * M_PI * j / phi_nodes;
      const CartesianPoint p = flatring::to_cartesian(FlatRingCoords(region.s0, t, phi, k));
      const double dx = p.x - p_star.x, dy = p.y - p_star.y, dz = p.z - p_star.z;
      const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
      pacc += std::exp(kI * (static_cast<double>(idx.m) * phi)) / dist;
    }
    acc += rule.weights[i] * wred * std::sqrt(R) * pacc;
  }
  acc *= kt * (2.0 * M_PI / phi_nodes);
  const double u_s0 = mode->eval_w_imag(region.s0).value;
  const std::complex<double> value =
      phase_factor(idx.n) * (mode->wronskian() / (4.0 * M_PI * u_s0 * u_s0)) * u_s0 * acc;
  return value;
}

}  // namespace peanut::harmonics
