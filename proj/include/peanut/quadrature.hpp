#ifndef PEANUT_QUADRATURE_HPP
#define PEANUT_QUADRATURE_HPP

#include <Eigen/Core>
#include <functional>

#include "peanut/common.hpp"

namespace peanut::quad {

// Nodes and weights on [-1,1].
struct Rule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Golub-Welsch from the three-term recurrence, eigensolve of the symmetric
// tridiagonal Jacobi matrix.
Rule gauss_legendre(int n);

// Weight (1-x)^alpha (1+x)^beta, alpha,beta > -1.
Rule gauss_jacobi(int n, double alpha, double beta);

// Cached access (rules are immutable and shared).
const Rule& gauss_legendre_cached(int n);
const Rule& gauss_jacobi_cached(int n, double alpha, double beta);

template <typename F>
double apply(const Rule& rule, double a, double b, F&& f) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * acc;
}

// Adaptive Gauss-Kronrod 7/15 with interval bisection.
struct AdaptiveResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  bool converged = false;
};

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol = 1e-12, double abs_tol = 0.0,
                                  int max_intervals = 4000);

// Chebyshev interpolant of a smooth function on [a,b]; evaluation by
// Clenshaw recurrence.
class ChebyshevSeries {
public:
  ChebyshevSeries() = default;
  ChebyshevSeries(const std::function<double(double)>& f, double a, double b, int n);

  double operator()(double x) const;
  double tail_magnitude(int count = 4) const;  // max |c_j| over the last `count`
  int size() const { return static_cast<int>(coeff_.size()); }

  // Fit with n nodes, doubling until the coefficient tail drops below
  // tol * max|c|; throws ConvergenceError past max_n.
  static ChebyshevSeries fit_adaptive(const std::function<double(double)>& f, double a, double b,
                                      double tol = 1e-15, int n = 33, int max_n = 2049);

private:
  double a_ = -1.0, b_ = 1.0;
  std::vector<double> coeff_;
};

}  // namespace peanut::quad

#endif
