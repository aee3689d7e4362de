#include "peanut/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>

namespace peanut::quad {

namespace {

Rule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& subdiag, double mu0) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, subdiag, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw ConvergenceError("golub_welsch: tridiagonal eigensolve failed");
  Rule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(diag.size());
  for (int i = 0; i < diag.size(); ++i) {
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

double log_gamma_local(double x) { return std::lgamma(x); }

}  // namespace

Rule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1 > 0 ? n - 1 : 0);
  for (int j = 1; j < n; ++j) sub[j - 1] = j / std::sqrt(4.0 * j * j - 1.0);
  return golub_welsch(diag, sub, 2.0);
}

Rule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: n >= 1 required");
  if (alpha <= -1.0 || beta <= -1.0)
    throw std::invalid_argument("gauss_jacobi: alpha,beta > -1 required");
  const double ab = alpha + beta;
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(n - 1 > 0 ? n - 1 : 0);
  diag[0] = (beta - alpha) / (ab + 2.0);
  for (int j = 1; j < n; ++j) {
    const double d = 2.0 * j + ab;
    diag[j] = (beta * beta - alpha * alpha) / (d * (d + 2.0));
    double e2;
    if (j == 1)
      e2 = 4.0 * (alpha + 1.0) * (beta + 1.0) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
    else
      e2 = 4.0 * j * (j + alpha) * (j + beta) * (j + ab) /
           (d * d * (d + 1.0) * (d - 1.0));
    sub[j - 1] = std::sqrt(e2);
  }
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + log_gamma_local(alpha + 1.0) +
                              log_gamma_local(beta + 1.0) - log_gamma_local(ab + 2.0));
  return golub_welsch(diag, sub, mu0);
}

const Rule& gauss_legendre_cached(int n) {
  static std::map<int, Rule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
  return it->second;
}

const Rule& gauss_jacobi_cached(int n, double alpha, double beta) {
  static std::map<std::tuple<int, double, double>, Rule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_tuple(n, alpha, beta);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, gauss_jacobi(n, alpha, beta)).first;
  return it->second;
}

namespace {

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
    0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.10479001032225018, 0.14065325971552592,
    0.16900472663926790, 0.19035057806478540, 0.20443294007529889, 0.20948214108472782};
constexpr double kWg[4] = {
    0.12948496616886969, 0.27970539148927664, 0.38183005050511894, 0.41795918367346938};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b, int& evals) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const double fc = f(mid);
  evals += 15;
  double res_g = kWg[3] * fc;
  double res_k = kWgk[7] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(mid - dx), f2 = f(mid + dx);
    res_k += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) res_g += kWg[j / 2] * (f1 + f2);
  }
  res_g *= half;
  res_k *= half;
  return {a, b, res_k, std::abs(res_k - res_g)};
}

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol, double abs_tol, int max_intervals) {
  AdaptiveResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<Panel> panels;
  panels.push(gk15(f, a, b, out.evaluations));
  double total = panels.top().value;
  double err = panels.top().error;
  int n_panels = 1;
  while (n_panels < max_intervals) {
    const double tol = std::max(abs_tol, rel_tol * std::abs(total));
    if (err <= tol) break;
    Panel worst = panels.top();
    panels.pop();
    const double m = 0.5 * (worst.a + worst.b);
    if (m <= worst.a || m >= worst.b) {  // interval exhausted at machine precision
      panels.push({worst.a, worst.b, worst.value, 0.0});
      err -= worst.error;
      continue;
    }
    Panel left = gk15(f, worst.a, m, out.evaluations);
    Panel right = gk15(f, m, worst.b, out.evaluations);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++n_panels;
  }
  out.value = total;
  out.error_estimate = err;
  out.converged = err <= std::max(abs_tol, rel_tol * std::abs(total));
  return out;
}

ChebyshevSeries::ChebyshevSeries(const std::function<double(double)>& f, double a, double b, int n)
    : a_(a), b_(b), coeff_(n) {
  // interpolation at Chebyshev points of the first kind
  std::vector<double> fv(n);
  for (int i = 0; i < n; ++i) {
    const double theta = M_PI * (i + 0.5) / n;
    const double x = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(theta);
    fv[i] = f(x);
  }
  for (int j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += fv[i] * std::cos(M_PI * j * (i + 0.5) / n);
    coeff_[j] = 2.0 * acc / n;
  }
  coeff_[0] *= 0.5;
}

double ChebyshevSeries::operator()(double x) const {
  const double u = (2.0 * x - (a_ + b_)) / (b_ - a_);
  double b1 = 0.0, b2 = 0.0;
  for (int j = static_cast<int>(coeff_.size()) - 1; j >= 1; --j) {
    const double t = 2.0 * u * b1 - b2 + coeff_[j];
    b2 = b1;
    b1 = t;
  }
  return u * b1 - b2 + coeff_[0];
}

double ChebyshevSeries::tail_magnitude(int count) const {
  double m = 0.0;
  const int n = static_cast<int>(coeff_.size());
  for (int j = std::max(0, n - count); j < n; ++j) m = std::max(m, std::abs(coeff_[j]));
  return m;
}

ChebyshevSeries ChebyshevSeries::fit_adaptive(const std::function<double(double)>& f, double a,
                                              double b, double tol, int n, int max_n) {
  for (; n <= max_n; n = 2 * n - 1) {
    ChebyshevSeries s(f, a, b, n);
    double scale = 0.0;
    for (double c : s.coeff_) scale = std::max(scale, std::abs(c));
    if (s.tail_magnitude() <= tol * std::max(scale, 1e-300)) return s;
  }
  throw ConvergenceError("ChebyshevSeries::fit_adaptive: coefficient tail did not settle");
}

}  // namespace peanut::quad
