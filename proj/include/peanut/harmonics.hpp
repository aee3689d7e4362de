#ifndef PEANUT_HARMONICS_HPP
#define PEANUT_HARMONICS_HPP

#include <complex>
#include <functional>
#include <iosfwd>

#include "peanut/flatring.hpp"
#include "peanut/mode_cache.hpp"

// Internal and external peanut harmonics
//   G_m^n = R^{-1/2} W^n_{|m|-1/2}(is,k') W^n_{|m|-1/2}(t,k') e^{im phi},
//   H_m^n = R^{-1/2} W^n_{|m|-1/2}(2iK-is,k') W^n_{|m|-1/2}(t,k') e^{im phi},
// the expansion 1/|r-r*| = 2 sum_m sum_n (1/w_m^n) G_m^n(r) H_{-m}^n(r*),
// and the Dirichlet machinery for peanut regions.
//
// Internally everything runs on the real representative of W(is,k'): for odd
// n the true imaginary-axis values are i times the stored real function, and
// every formula here pairs two such factors against one Wronskian, so the
// phases cancel.  The public G/H values carry the paper's complex phases.

namespace peanut::harmonics {

using flatring::CartesianPoint;
using flatring::FlatRingCoords;
using flatring::Modulus;
using flatring::PeanutRegion;
using lame::LameMode;
using lame::ModeTable;

struct PeanutHarmonicIndex {
  int m = 0;
  int n = 0;
  double nu() const { return std::abs(m) - 0.5; }
};

struct TruncationSpec {
  int m_max;
  int n_max;
  double tol;

  TruncationSpec(int m_max_, int n_max_, double tol_) : m_max(m_max_), n_max(n_max_), tol(tol_) {
    if (m_max < 0 || n_max < 0 || !(tol > 0.0))
      throw std::domain_error("TruncationSpec: positive fields required");
  }
};

// Mode access for one coordinate modulus k; the eigenproblem modulus is k'.
class HarmonicBasis {
public:
  explicit HarmonicBasis(Modulus k, ModeTable* table = nullptr);

  const Modulus& coordinate_modulus() const { return k_; }
  const Modulus& kappa() const { return kappa_; }

  std::shared_ptr<const LameMode> mode(int m, int n) const;  // nu = |m| - 1/2
  std::shared_ptr<const LameMode> mode_nu(double nu, int n) const;

  // Solve (or load) all modes up to the truncation, in parallel.
  void warm_up(int m_max, int n_max, int threads) const;

  ModeTable& table() const { return *table_; }

private:
  Modulus k_;
  Modulus kappa_;
  ModeTable* table_;
};

std::complex<double> internal_g(const HarmonicBasis& basis, PeanutHarmonicIndex idx,
                                const FlatRingCoords& c);
std::complex<double> external_h(const HarmonicBasis& basis, PeanutHarmonicIndex idx,
                                const FlatRingCoords& c);

// chi in the elliptic product form (all imaginary pairs reduced to real
// quotients of modulus k').
double chi(double s, double t, double s_star, double t_star, const Modulus& k);
// chi = (R^2 + R*^2 + (z-z*)^2) / (2 R R*).
double chi_cartesian(const FlatRingCoords& c, const FlatRingCoords& c_star);
// chi(iu, t, K+iu, t0; k) = i k f(t,t0) sc(u,k') nd(u,k') + dc(t,k')dc(t0,k')/k'.
std::complex<double> chi_shifted(double u, double t, double t0, const Modulus& k);
// f(t,t0) = (k/k') nc(t,k') nc(t0,k') - k sc(t,k') sc(t0,k')  (>= k(1/k'-1) > 0).
double f_kernel(double t, double t0, const Modulus& k);

struct ExpansionResult {
  double value = 0.0;
  int terms_used = 0;
  double tail_estimate = 0.0;
  bool converged = false;
};

// Partial sum of the fundamental-solution expansion; requires c.s < c_star.s.
ExpansionResult expand_inverse_distance(const HarmonicBasis& basis, const FlatRingCoords& c,
                                        const FlatRingCoords& c_star,
                                        const TruncationSpec& trunc);

// Azimuthal Fourier coefficients Q_{m-1/2}(chi) / (pi sqrt(R R*)), m = 0..m_max.
std::vector<double> azimuthal_fourier(const FlatRingCoords& c, const FlatRingCoords& c_star,
                                      int m_max);
// c_0 + 2 sum_m c_m cos(m dphi); with the coefficients above this reproduces
// the inverse distance.
double azimuthal_sum(const std::vector<double>& coeffs, double dphi);

// --- Dirichlet problem -----------------------------------------------------

// Boundary samples g(t,phi) on a uniform product grid (t including both ends,
// phi excluding the right end), resampled by bicubic interpolation.
class BoundaryGrid {
public:
  BoundaryGrid(std::vector<double> t_nodes, std::vector<double> phi_nodes,
               std::vector<std::complex<double>> values);  // row-major [t][phi]

  static BoundaryGrid sample(const std::function<std::complex<double>(double, double)>& g,
                             double t_halfwidth, int n_t, int n_phi);

  std::complex<double> interpolate(double t, double phi) const;

  static BoundaryGrid read_csv(std::istream& is);      // rows t,phi,re_g,im_g
  void write_csv(std::ostream& os) const;

private:
  std::vector<double> t_, phi_;
  std::vector<std::complex<double>> v_;
};

struct CoefficientEntry {
  int m = 0, n = 0;
  std::complex<double> value;  // paper-convention coefficient
};

struct CoefficientTable {
  std::vector<CoefficientEntry> entries;

  void write_json(std::ostream& os) const;  // [{m, n, re, im}]
  static CoefficientTable read_json(std::istream& is);
};

struct DirichletOptions {
  int t_nodes = 96;
  int phi_nodes = 128;
  bool resolution_check = true;  // recompute with doubled nodes, warn on drift
};

CoefficientTable dirichlet_coefficients(
    const HarmonicBasis& basis, const std::function<std::complex<double>(double, double)>& g,
    const PeanutRegion& region, const TruncationSpec& trunc, const DirichletOptions& opts = {});

CoefficientTable dirichlet_coefficients(const HarmonicBasis& basis, const BoundaryGrid& g,
                                        const PeanutRegion& region, const TruncationSpec& trunc,
                                        const DirichletOptions& opts = {});

// u(r) = sum c_m^n G_m^n(r) inside the region; requires c.s < region.s0.
std::complex<double> dirichlet_solve(const HarmonicBasis& basis, const CoefficientTable& coeffs,
                                     const PeanutRegion& region, const FlatRingCoords& c);

// H_m^n(r*) from the surface integral of G_m^n over the peanut s = s0
// (dS = h R dt dphi); r* must be exterior to the closed region.
std::complex<double> external_from_integral(const HarmonicBasis& basis, PeanutHarmonicIndex idx,
                                            const PeanutRegion& region,
                                            const CartesianPoint& p_star, int t_nodes = 96,
                                            int phi_nodes = 96);

}  // namespace peanut::harmonics

#endif
