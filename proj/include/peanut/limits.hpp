#ifndef PEANUT_LIMITS_HPP
#define PEANUT_LIMITS_HPP

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "peanut/harmonics.hpp"

// Executable checks of the identity and limit theorems: the Q_{m-1/2}
// addition theorem, the Lame-Wangerin integral identities, the k->0
// Gegenbauer/Ferrers and exponential-decay limits, and the k->1 reduction of
// the peanut expansion to the spherical multipole expansion.

namespace peanut::limits {

using harmonics::HarmonicBasis;
using harmonics::TruncationSpec;
using flatring::CartesianPoint;

struct VerificationReport {
  std::string identity;
  std::vector<std::pair<std::string, double>> params;
  std::complex<double> lhs{}, rhs{};
  double abs_residual = 0.0;
  double rel_residual = 0.0;  // |lhs-rhs| / max(|lhs|,|rhs|,1e-300)
  int nodes_used = 0;
  double tolerance = 0.0;
  bool passed = false;

  std::string to_json_line() const;
};

VerificationReport make_report(std::string identity,
                               std::vector<std::pair<std::string, double>> params,
                               std::complex<double> lhs, std::complex<double> rhs,
                               int nodes_used, double tolerance);

// Q_{m-1/2}(chi) = 2 pi sum_n (1/w_m^n) W(is) W(t) W(2iK-is*) W(t*).
VerificationReport check_addition_theorem(const HarmonicBasis& basis, int m, double s, double t,
                                          double s_star, double t_star, int n_max,
                                          double tolerance);

// int Q_{m-1/2}(chi) W(t) dt = (2 pi / w_m^n) W(is) W(2iK-is*) W(t*);
// Gauss-Jacobi transverse quadrature with node-doubling stability control.
VerificationReport check_integral_relation(const HarmonicBasis& basis, int m, int n, double s,
                                           double s_star, double t_star, double tolerance);

// 2 pi V(2K-s0) V(it0) V(s1) = [V~,V] int Q_nu(chi(s1,t,s0,t0)) V(it) dt,
// general degree nu >= -1/2.
VerificationReport check_inteq1(const HarmonicBasis& basis, double nu, int n, double s0,
                                double s1, double t0, double tolerance);

// L_nu(k) = lim_{u->K'-} cn(u,k')^{-nu-1} V_nu(iu), with a Richardson
// cross-check by direct evaluation near the endpoint.
double compute_L(const HarmonicBasis& basis, double nu, int n);

// The inteq2 identity with the complex prefactor and V(K - iK') by
// complex-path continuation; the imaginary part of the right-hand side must
// cancel below 1e-8 of its magnitude.
VerificationReport check_inteq2(const HarmonicBasis& basis, double nu, int n, double t0,
                                double tolerance);

struct LimitSweep {
  std::vector<double> moduli;      // the kappa (or k) sequence
  std::vector<double> deviations;  // sup-deviation per entry
  bool monotone = false;
  double final_deviation = 0.0;
};

// tau^{-nu-1} W_nu^n(K - tau, kappa) -> e_nu^n^{-1/2} (sin tau / tau)^{nu+1}
// C_n^{nu+1}(cos tau) as kappa -> 0.
LimitSweep limit_w_gegenbauer(lame::ModeTable& table, double nu, int n,
                              const std::vector<double>& kappa_sequence,
                              const std::vector<double>& tau_grid);

// W_nu^n(i(K'-sigma),kappa) / W_nu^n(iK',kappa) -> exp(-(n+nu+1) sigma).
LimitSweep limit_w_exponential(lame::ModeTable& table, double nu, int n,
                               const std::vector<double>& kappa_sequence,
                               const std::vector<double>& sigma_grid);

// Spherical multipole sum in the B-form (normalized Ferrers products);
// requires |p| < |p_star|.
harmonics::ExpansionResult spherical_multipole(const CartesianPoint& p,
                                               const CartesianPoint& p_star,
                                               const TruncationSpec& trunc);

// Laplace form sum_n (r^n / r*^{n+1}) P_n(cos gamma).
double laplace_sum(const CartesianPoint& p, const CartesianPoint& p_star, int n_max);

// A_{m,n}(sigma,sigma*,tau,tau*,k) for one coordinate modulus.
double a_coefficient(const HarmonicBasis& basis, int m, int n, double sigma, double sigma_star,
                     double tau, double tau_star);
// B_{m,n}(r, r*, theta, theta*), the k->1 limit value.
double b_coefficient(int m, int n, double r, double r_star, double theta, double theta_star);

// |A - B| along a k -> 1 sequence.
LimitSweep check_amn_to_bmn(lame::ModeTable& table, int m, int n, double sigma,
                            double sigma_star, double tau, double tau_star,
                            const std::vector<double>& k_sequence);

}  // namespace peanut::limits

#endif
