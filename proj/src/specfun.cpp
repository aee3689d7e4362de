#include "peanut/specfun.hpp"

#include <cmath>

#include "peanut/quadrature.hpp"

namespace peanut::specfun {

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: x > 0 required");
  return std::lgamma(x);
}

namespace {

void check_q_domain(double nu, double z, const char* where) {
  if (!(z > 1.0)) throw std::domain_error(std::string(where) + ": z > 1 required");
  if (!(nu >= -0.5)) throw std::domain_error(std::string(where) + ": nu >= -1/2 required");
}

}  // namespace

double legendre_q(double nu, double z) {
  check_q_domain(nu, z, "legendre_q");
  if (z < 1.0 + 1e-6)
    diag::warn("legendre_q: z within 1e-6 of the logarithmic singularity at 1");
  const double b = std::sqrt((z - 1.0) * (z + 1.0));
  const double p = nu + 1.0;
  // Truncation point: integrand decayed by ~1e17 relative to tau = 0.
  const double factor = std::pow(10.0, 17.0 / p);
  const double arg = ((z + b) * factor - z) / b;
  const double t_end = std::log(arg + std::sqrt(arg * arg - 1.0));
  const auto integrand = [&](double tau) { return std::pow(z + b * std::cosh(tau), -p); };
  // Geometric panels keep the adaptive pass cheap on the long flat/decay tail.
  double total = 0.0;
  double left = 0.0;
  double width = 1.0;
  while (left < t_end) {
    const double right = std::min(left + width, t_end);
    auto r = quad::integrate_adaptive(integrand, left, right, 1e-13, 1e-18 * (1.0 + total));
    total += r.value;
    left = right;
    width *= 2.0;
  }
  return total;
}

double legendre_q_series(double nu, double z) {
  check_q_domain(nu, z, "legendre_q_series");
  // Q_nu(z) = sqrt(pi) Gamma(nu+1) / (2^{nu+1} Gamma(nu+3/2)) z^{-nu-1}
  //           * 2F1(nu/2+1, nu/2+1/2; nu+3/2; 1/z^2)
  const double x = 1.0 / (z * z);
  const double a = 0.5 * nu + 1.0, b = 0.5 * nu + 0.5, c = nu + 1.5;
  double term = 1.0, sum = 1.0;
  for (int j = 0; j < 100000; ++j) {
    term *= (a + j) * (b + j) / ((c + j) * (j + 1.0)) * x;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) {
      const double logpre = 0.5 * std::log(M_PI) + log_gamma(nu + 1.0) -
                            (nu + 1.0) * std::log(2.0) - log_gamma(nu + 1.5) -
                            (nu + 1.0) * std::log(z);
      return std::exp(logpre) * sum;
    }
  }
  throw ConvergenceError("legendre_q_series: series did not converge (z too close to 1)");
}

double ferrers_p(int n, int m, double x) {
  if (n < 0 || m < 0 || m > n) throw std::domain_error("ferrers_p: need 0 <= m <= n");
  if (!(x >= -1.0 && x <= 1.0)) throw std::domain_error("ferrers_p: x in [-1,1] required");
  double pmm = 1.0;
  if (m > 0) {
    const double sx = std::sqrt((1.0 - x) * (1.0 + x));
    double fact = 1.0;
    for (int i = 0; i < m; ++i) {
      pmm *= -fact * sx;
      fact += 2.0;
    }
  }
  if (n == m) return pmm;
  double pm1 = x * (2.0 * m + 1.0) * pmm;
  if (n == m + 1) return pm1;
  double p = 0.0;
  for (int l = m + 2; l <= n; ++l) {
    p = ((2.0 * l - 1.0) * x * pm1 - (l + m - 1.0) * pmm) / (l - m);
    pmm = pm1;
    pm1 = p;
  }
  return p;
}

double ferrers_p_normalized(int n, int m, double x) {
  if (n < 0 || m < 0 || m > n) throw std::domain_error("ferrers_p_normalized: need 0 <= m <= n");
  if (!(x >= -1.0 && x <= 1.0)) throw std::domain_error("ferrers_p_normalized: x in [-1,1]");
  // seed: sqrt((2m-1)!!/(2m)!!) (1-x^2)^{m/2} (-1)^m
  double pmm = 1.0;
  const double sx = std::sqrt((1.0 - x) * (1.0 + x));
  for (int i = 1; i <= m; ++i) pmm *= -sx * std::sqrt((2.0 * i - 1.0) / (2.0 * i));
  if (n == m) return pmm;
  double pl1 = pmm;                                      // level m
  double pl = x * std::sqrt(2.0 * m + 1.0) * pmm;        // level m+1
  for (int l = m + 1; l < n; ++l) {
    const double a = std::sqrt((l + 1.0 - m) / (l + 1.0 + m));
    const double b = std::sqrt((l + 0.0 + m) * (l - m) * (l + 1.0 - m) / (l + 1.0 + m));
    const double next = ((2.0 * l + 1.0) * x * a * pl - b * pl1) / (l - m + 1.0);
    pl1 = pl;
    pl = next;
  }
  return pl;
}

double gegenbauer_c(int n, double lam, double x) {
  if (n < 0) throw std::domain_error("gegenbauer_c: n >= 0 required");
  if (!(lam > -0.5)) throw std::domain_error("gegenbauer_c: lam > -1/2 required");
  if (!(x >= -1.0 && x <= 1.0)) throw std::domain_error("gegenbauer_c: x in [-1,1] required");
  if (n == 0) return 1.0;
  double cm1 = 1.0;
  double c = 2.0 * lam * x;
  for (int j = 2; j <= n; ++j) {
    const double next = (2.0 * x * (j + lam - 1.0) * c - (j + 2.0 * lam - 2.0) * cm1) / j;
    cm1 = c;
    c = next;
  }
  return c;
}

double legendre_p(int n, double x) { return gegenbauer_c(n, 0.5, x); }

double e_coefficient(double nu, int n) {
  if (n < 0 || !(nu >= -0.5)) throw std::domain_error("e_coefficient: nu >= -1/2, n >= 0");
  const double log_e = std::log(M_PI) + log_gamma(n + 2.0 * nu + 2.0) -
                       (2.0 * nu + 1.0) * std::log(2.0) - log_gamma(n + 1.0) -
                       std::log(n + nu + 1.0) - 2.0 * log_gamma(nu + 1.0);
  return std::exp(log_e);
}

}  // namespace peanut::specfun
