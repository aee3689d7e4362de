#ifndef PEANUT_LAME_HPP
#define PEANUT_LAME_HPP

#include <memory>
#include <mutex>
#include <vector>

#include "peanut/elliptic.hpp"
#include "peanut/ode.hpp"

// Eigenpairs of the modified Lame equation
//
//     w'' + (lambda - nu(nu+1) dc^2(t,kappa)) w = 0,   -K < t < K,  K = K(kappa),
//
// with the solution recessive (exponent nu+1) at both singular endpoints.
// Eigenvalues are found by shooting from a Frobenius seed at t = K - delta
// inward to the parity condition at t = 0, with the eigenvalue index pinned
// by the accumulated Pruefer phase.  The solved eigenfunction is normalized
// to unit L^2 norm on (-K,K) and extended to the imaginary axis through the
// real representative of W(is,kappa).

namespace peanut::lame {

using elliptic::Modulus;

enum class Parity { even, odd };

struct LameProblem {
  double nu;
  int n;
  Modulus kappa;

  LameProblem(double nu_, int n_, Modulus kappa_) : nu(nu_), n(n_), kappa(std::move(kappa_)) {
    if (!(nu >= -0.5)) throw std::domain_error("LameProblem: nu >= -1/2 required");
    if (n < 0) throw std::domain_error("LameProblem: n >= 0 required");
  }
};

struct Bracket {
  double lower, upper;
};

// Two-sided eigenvalue bounds (reversed branch for -1/2 <= nu < 0).
Bracket lemma22_bracket(const LameProblem& p);

struct SeedValues {
  double w, dw;  // w and dw/dt at t = K - delta
};

// Endpoint Frobenius series w = sum_j a_j (K-t)^{j+nu+1} with a_0 = 1,
// evaluated at t = K - delta for a trial eigenvalue.
SeedValues frobenius_seed(const LameProblem& p, double lambda_trial, double delta, int order);

struct SolveOptions {
  double delta_frac = 1e-3;   // Frobenius handoff at x = delta_frac * K
  int series_order = 20;
  double rtol_search = 1e-8;  // integration tolerance while bracketing
  double rtol_final = 2e-13;  // final pass / refinement tolerance
  int max_iter = 200;
};

struct ImagValue {
  double value;     // real representative
  bool imaginary;   // true for odd n: the function value is i * value
};

class LameMode {
public:
  const LameProblem& problem() const { return problem_; }
  double lambda() const { return lambda_; }
  Parity parity() const { return parity_; }
  double norm_constant() const { return norm_constant_; }

  // a0 of the normalized eigenfunction at t = K (Richardson-validated).
  double frobenius_a0() const;

  double w_at_zero() const { return w0_; }
  double dw_at_zero() const { return dw0_; }

  // Normalized eigenfunction on (-K, K); throws outside.
  double eval_w(double t) const;
  double eval_w_deriv(double t) const;

  // Real representative of W(is, kappa) on the imaginary axis, with the
  // parity phase flag (value is purely imaginary for odd n).  The mesh grows
  // on demand; a range error is thrown when values pass 1e300.
  ImagValue eval_w_imag(double s) const;
  double eval_w_imag_deriv(double s) const;  // derivative of the real representative

  // Constant w~ = V(s)U'(s) - V'(s)U(s) of U(s) = (real rep of) W(is,kappa)
  // and V(s) = U(2Kc - s), Kc = K(kappa').  Computed from the real
  // representative; for odd n the paper's complex convention differs by -1.
  double wronskian() const;

  double delta() const { return delta_; }
  double big_k() const { return problem_.kappa.big_k(); }

  // ODE residual of the dense representation, measured with an independent
  // five-point stencil; used to revalidate cache hits.
  double residual_sample() const;

private:
  friend LameMode solve_eigen(const LameProblem&, const SolveOptions&);
  friend class ModeTable;
  LameMode(LameProblem p) : problem_(std::move(p)) {}

  void build_from_lambda(const SolveOptions& opts);  // everything after the root find
  void ensure_imag_range(double s) const;

  LameProblem problem_;
  double lambda_ = 0.0;
  Parity parity_ = Parity::even;
  double norm_constant_ = 0.0;
  double w0_ = 0.0, dw0_ = 0.0;
  double delta_ = 0.0;
  std::vector<double> series_;  // normalized Frobenius coefficients d * a_j
  ode::Trajectory real_;        // x = K - t on [delta, K], a0 = 1 scale

  // in a unique_ptr so modes stay movable
  mutable std::unique_ptr<std::mutex> imag_mutex_ = std::make_unique<std::mutex>();
  mutable ode::Trajectory imag_;
  mutable double wronskian_ = 0.0;
  mutable bool wronskian_ready_ = false;
};

LameMode solve_eigen(const LameProblem& p, const SolveOptions& opts = {});

// Inner product of two modes of the same (nu, kappa) family over (-K, K).
double mode_inner_product(const LameMode& a, const LameMode& b);

}  // namespace peanut::lame

#endif
