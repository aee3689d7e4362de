#include "peanut/ode.hpp"

#include <algorithm>

#include "peanut/quadrature.hpp"

namespace peanut::ode {

namespace {

// two-point Taylor (quintic Hermite) coefficients in xi = (t-t0)/h
struct Quintic {
  double a0, a1, a2, a3, a4, a5;
};

Quintic fit(double h, double w0, double m0t, double c0t, double w1, double m1t, double c1t) {
  const double m0 = h * m0t, m1 = h * m1t;
  const double c0 = h * h * c0t, c1 = h * h * c1t;
  const double A = w1 - w0 - m0 - 0.5 * c0;
  const double B = m1 - m0 - c0;
  const double C = c1 - c0;
  return {w0,
          m0,
          0.5 * c0,
          10.0 * A - 4.0 * B + 0.5 * C,
          -15.0 * A + 7.0 * B - C,
          6.0 * A - 3.0 * B + 0.5 * C};
}

}  // namespace

void Trajectory::eval(double t, double* w, double* dw) const {
  if (t_.empty()) throw std::logic_error("Trajectory::eval: empty trajectory");
  if (t < t_.front() - 1e-12 || t > t_.back() + 1e-12)
    throw std::domain_error("Trajectory::eval: t outside stored range");
  t = std::clamp(t, t_.front(), t_.back());
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = (it == t_.begin()) ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
  if (i >= t_.size() - 1) i = t_.size() - 2;
  const double h = t_[i + 1] - t_[i];
  const double xi = (t - t_[i]) / h;
  const Quintic p = fit(h, w_[i], dw_[i], ddw_[i], w_[i + 1], dw_[i + 1], ddw_[i + 1]);
  const double v = p.a0 + xi * (p.a1 + xi * (p.a2 + xi * (p.a3 + xi * (p.a4 + xi * p.a5))));
  if (w) *w = v;
  if (dw) {
    const double d =
        p.a1 + xi * (2 * p.a2 + xi * (3 * p.a3 + xi * (4 * p.a4 + xi * 5 * p.a5)));
    *dw = d / h;
  }
}

double Trajectory::integral_w2() const {
  if (t_.size() < 2) return 0.0;
  const quad::Rule& g5 = quad::gauss_legendre_cached(5);
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
    const double h = t_[i + 1] - t_[i];
    const Quintic p = fit(h, w_[i], dw_[i], ddw_[i], w_[i + 1], dw_[i + 1], ddw_[i + 1]);
    double s = 0.0;
    for (int j = 0; j < 5; ++j) {
      const double xi = 0.5 * (1.0 + g5.nodes[j]);
      const double v =
          p.a0 + xi * (p.a1 + xi * (p.a2 + xi * (p.a3 + xi * (p.a4 + xi * p.a5))));
      s += g5.weights[j] * v * v;
    }
    acc += 0.5 * h * s;
  }
  return acc;
}

}  // namespace peanut::ode
