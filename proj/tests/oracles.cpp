#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace oracles {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double m, double b,
                   double fa, double fm, double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0) return left + right;
  if (std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double simpson(const std::function<double(double)>& f, double a, double b, double tol,
               int max_depth) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, max_depth);
}

peanut::elliptic::SnCnDn sncndn_series_duplication(double u, double k) {
  const double m = k * k, m2 = m * m, m3 = m2 * m, m4 = m2 * m2;
  int doublings = 0;
  while (std::abs(u) > 0.0625) {
    u *= 0.5;
    ++doublings;
  }
  const double u2 = u * u;
  // DLMF 22.10.4-6 through u^9 / u^8
  const double sn =
      u * (1.0 - (1.0 + m) * u2 / 6.0 + (1.0 + 14.0 * m + m2) * u2 * u2 / 120.0 -
           (1.0 + 135.0 * m + 135.0 * m2 + m3) * u2 * u2 * u2 / 5040.0 +
           (1.0 + 1228.0 * m + 5478.0 * m2 + 1228.0 * m3 + m4) * u2 * u2 * u2 * u2 / 362880.0);
  const double cn =
      1.0 - u2 / 2.0 + (1.0 + 4.0 * m) * u2 * u2 / 24.0 -
      (1.0 + 44.0 * m + 16.0 * m2) * u2 * u2 * u2 / 720.0 +
      (1.0 + 408.0 * m + 912.0 * m2 + 64.0 * m3) * u2 * u2 * u2 * u2 / 40320.0;
  const double dn =
      1.0 - m * u2 / 2.0 + m * (4.0 + m) * u2 * u2 / 24.0 -
      m * (16.0 + 44.0 * m + m2) * u2 * u2 * u2 / 720.0 +
      m * (64.0 + 912.0 * m + 408.0 * m2 + m3) * u2 * u2 * u2 * u2 / 40320.0;
  peanut::elliptic::SnCnDn j{sn, cn, dn};
  for (int i = 0; i < doublings; ++i) {
    const double s2 = j.sn * j.sn;
    const double den = 1.0 - m * s2 * s2;
    const double sn2 = 2.0 * j.sn * j.cn * j.dn / den;
    const double cn2 = (j.cn * j.cn - s2 * j.dn * j.dn) / den;
    const double dn2 = (j.dn * j.dn - m * s2 * j.cn * j.cn) / den;
    j = {sn2, cn2, dn2};
  }
  return j;
}

double complete_k_quadrature(double k, double tol) {
  const double m = k * k;
  return simpson([&](double th) { return 1.0 / std::sqrt(1.0 - m * std::sin(th) * std::sin(th)); },
                 0.0, 0.5 * M_PI, tol);
}

double legendre_q_quadrature(double nu, double z, double tol) {
  // substitute tau = -log(v): int_0^1 (z + B (v + 1/v)/2)^{-nu-1} dv / v
  const double b = std::sqrt((z - 1.0) * (z + 1.0));
  const auto g = [&](double v) {
    if (v <= 0.0) return 0.0;
    return std::pow(z + 0.5 * b * (v + 1.0 / v), -nu - 1.0) / v;
  };
  // integrable endpoint singularity v^nu at 0 for nu in (-1,0): split and
  // substitute v = y^2 there to smooth it
  const double split = 0.5;
  const double inner =
      simpson([&](double y) { return 2.0 * y * g(y * y); }, 0.0, std::sqrt(split), tol);
  const double outer = simpson(g, split, 1.0, tol);
  return inner + outer;
}

double ferrers_rodrigues(int n, int m, double x) {
  if (m > n) throw std::domain_error("ferrers_rodrigues: m <= n");
  // Legendre coefficients by the recurrence on polynomial arrays
  std::vector<std::vector<double>> p(n + 1);
  p[0] = {1.0};
  if (n >= 1) p[1] = {0.0, 1.0};
  for (int l = 2; l <= n; ++l) {
    p[l].assign(l + 1, 0.0);
    for (int j = 0; j + 1 <= l; ++j) p[l][j + 1] += (2.0 * l - 1.0) * p[l - 1][j] / l;
    for (std::size_t j = 0; j < p[l - 2].size(); ++j) p[l][j] -= (l - 1.0) * p[l - 2][j] / l;
  }
  std::vector<double> c = p[n];
  for (int d = 0; d < m; ++d) {
    std::vector<double> dc(c.size() > 1 ? c.size() - 1 : 1, 0.0);
    for (std::size_t j = 1; j < c.size(); ++j) dc[j - 1] = j * c[j];
    c = dc;
  }
  double val = 0.0;
  for (int j = static_cast<int>(c.size()) - 1; j >= 0; --j) val = val * x + c[j];
  return std::pow(-1.0, m) * std::pow((1.0 - x) * (1.0 + x), 0.5 * m) * val;
}

double gegenbauer_2f1(int n, double lam, double x) {
  // C_n^lam(x) = ((2 lam)_n / n!) 2F1(-n, 2 lam + n; lam + 1/2; (1-x)/2)
  double poch = 1.0;
  for (int j = 0; j < n; ++j) poch *= (2.0 * lam + j) / (j + 1.0);
  const double arg = 0.5 * (1.0 - x);
  double term = 1.0, sum = 1.0;
  for (int j = 0; j < n; ++j) {
    term *= (-n + j) * (2.0 * lam + n + j) / ((lam + 0.5 + j) * (j + 1.0)) * arg;
    sum += term;
  }
  return poch * sum;
}

double e_coefficient_quadrature(double nu, int n, double tol) {
  const auto f = [&](double x) {
    double c = 1.0, cm1 = 1.0;
    if (n >= 1) c = 2.0 * (nu + 1.0) * x;
    for (int j = 2; j <= n; ++j) {
      const double next =
          (2.0 * x * (j + nu) * c - (j + 2.0 * nu) * cm1) / j;
      cm1 = c;
      c = next;
    }
    const double cn = (n == 0) ? 1.0 : c;
    return std::pow((1.0 - x) * (1.0 + x), nu + 0.5) * cn * cn;
  };
  return simpson(f, -1.0, 1.0, tol);
}

namespace {

// count of eigenvalues of the symmetric tridiagonal (d, e) strictly below x
int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
  int count = 0;
  double q = d[0] - x;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (q == 0.0) q = 1e-300;
    q = d[i] - x - e[i - 1] * e[i - 1] / q;
    if (q < 0.0) ++count;
  }
  return count;
}

}  // namespace

double lame_matrix_eigenvalue(double nu, int n, const peanut::elliptic::Modulus& kappa, int N) {
  // w = cn^{nu+1}(t,kappa) v puts the problem into -(p v')' - p S v = lam p v
  // with p = cn^{2nu+2} and S = -(nu+1)^2 dn^2 + (nu+1) kappa^2 sn^2.
  const double K = kappa.big_k();
  const double h = 2.0 * K / N;
  const auto p_at = [&](double t) {
    const auto j = kappa.sncndn(t);
    return std::pow(std::abs(j.cn), 2.0 * nu + 2.0);
  };
  const auto s_at = [&](double t) {
    const auto j = kappa.sncndn(t);
    return -(nu + 1.0) * (nu + 1.0) * j.dn * j.dn +
           (nu + 1.0) * kappa.k() * kappa.k() * j.sn * j.sn;
  };
  std::vector<double> d(N), e(N - 1);
  std::vector<double> pc(N), pf(N + 1);  // cell centers and faces
  for (int i = 0; i < N; ++i) pc[i] = p_at(-K + (i + 0.5) * h);
  for (int i = 0; i <= N; ++i) pf[i] = (i == 0 || i == N) ? 0.0 : p_at(-K + i * h);
  for (int i = 0; i < N; ++i)
    d[i] = (pf[i] + pf[i + 1]) / (h * h * pc[i]) - s_at(-K + (i + 0.5) * h);
  for (int i = 0; i + 1 < N; ++i) e[i] = -pf[i + 1] / (h * h * std::sqrt(pc[i] * pc[i + 1]));

  double lo = d[0], hi = d[0];
  for (int i = 0; i < N; ++i) {
    const double r = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i + 1 < N ? std::abs(e[i]) : 0.0);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  while (hi - lo > 1e-13 * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(d, e, mid) >= n + 1)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double lame_matrix_eigenvalue_extrapolated(double nu, int n,
                                           const peanut::elliptic::Modulus& kappa, int base_n) {
  const double l1 = lame_matrix_eigenvalue(nu, n, kappa, base_n);
  const double l2 = lame_matrix_eigenvalue(nu, n, kappa, 2 * base_n);
  const double l3 = lame_matrix_eigenvalue(nu, n, kappa, 4 * base_n);
  const double r12 = (4.0 * l2 - l1) / 3.0;
  const double r23 = (4.0 * l3 - l2) / 3.0;
  return (16.0 * r23 - r12) / 15.0;
}

}  // namespace oracles
