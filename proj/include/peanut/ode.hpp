#ifndef PEANUT_ODE_HPP
#define PEANUT_ODE_HPP

#include <cmath>
#include <complex>
#include <vector>

#include "peanut/common.hpp"

// Adaptive Dormand-Prince 5(4) for the scalar second-order linear equation
// w'' = q(t) w, templated on the state scalar (double or complex<double>).
// Accepted steps are reported to an observer; a quintic-Hermite trajectory
// (with exact second derivatives from the ODE) provides dense output.

namespace peanut::ode {

template <typename Scalar>
struct State {
  Scalar w{};
  Scalar dw{};
};

struct StepControl {
  double rtol = 1e-12;
  double atol = 0.0;       // absolute floor, in units of the local solution scale
  double h_init = 1e-4;
  double h_min = 1e-14;
  double h_max = 0.25;
  long max_steps = 5'000'000;
  // When > 0, w and dw/couple are error-controlled against their joint
  // amplitude (the natural scale for oscillatory w'' = q w; keeps the scale
  // away from zero at nodes of w).
  double couple = 0.0;
};

namespace detail {
inline double mag(double x) { return std::abs(x); }
template <typename T>
double mag(const T& x) { return std::abs(x); }
}  // namespace detail

// Integrates from t0 to t1 (t0 < t1).  CoefFn: Scalar-convertible q(double t).
// Observer: void obs(double t, const State<Scalar>&) called at t0 and at every
// accepted step.
template <typename Scalar, typename CoefFn, typename Observer>
State<Scalar> integrate_linear2(CoefFn&& q, double t0, double t1, State<Scalar> y,
                                const StepControl& ctl, Observer&& obs) {
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                          a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                          b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                          e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
  static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

  if (!(t1 > t0)) throw std::invalid_argument("integrate_linear2: t1 > t0 required");
  double t = t0;
  double h = std::min({ctl.h_init, ctl.h_max, t1 - t0});
  obs(t, y);

  auto rhs = [&](double tt, const State<Scalar>& s) -> State<Scalar> {
    return {s.dw, Scalar(q(tt)) * s.w};
  };
  State<Scalar> k1 = rhs(t, y);

  for (long step = 0; step < ctl.max_steps; ++step) {
    if (t >= t1) return y;
    h = std::min(h, t1 - t);
    const auto axpy = [&](double a, const State<Scalar>& u, State<Scalar> acc) {
      acc.w += a * u.w;
      acc.dw += a * u.dw;
      return acc;
    };
    State<Scalar> s2{y.w + h * a21 * k1.w, y.dw + h * a21 * k1.dw};
    State<Scalar> k2 = rhs(t + c2 * h, s2);
    State<Scalar> s3{y.w + h * (a31 * k1.w + a32 * k2.w), y.dw + h * (a31 * k1.dw + a32 * k2.dw)};
    State<Scalar> k3 = rhs(t + c3 * h, s3);
    State<Scalar> s4{y.w + h * (a41 * k1.w + a42 * k2.w + a43 * k3.w),
                     y.dw + h * (a41 * k1.dw + a42 * k2.dw + a43 * k3.dw)};
    State<Scalar> k4 = rhs(t + c4 * h, s4);
    State<Scalar> s5{y.w + h * (a51 * k1.w + a52 * k2.w + a53 * k3.w + a54 * k4.w),
                     y.dw + h * (a51 * k1.dw + a52 * k2.dw + a53 * k3.dw + a54 * k4.dw)};
    State<Scalar> k5 = rhs(t + c5 * h, s5);
    State<Scalar> s6{y.w + h * (a61 * k1.w + a62 * k2.w + a63 * k3.w + a64 * k4.w + a65 * k5.w),
                     y.dw + h * (a61 * k1.dw + a62 * k2.dw + a63 * k3.dw + a64 * k4.dw +
                                 a65 * k5.dw)};
    State<Scalar> k6 = rhs(t + h, s6);
    State<Scalar> y5{
        y.w + h * (b1 * k1.w + b3 * k3.w + b4 * k4.w + b5 * k5.w + b6 * k6.w),
        y.dw + h * (b1 * k1.dw + b3 * k3.dw + b4 * k4.dw + b5 * k5.dw + b6 * k6.dw)};
    State<Scalar> k7 = rhs(t + h, y5);
    State<Scalar> err{};
    err = axpy(e1, k1, err);
    err = axpy(e3, k3, err);
    err = axpy(e4, k4, err);
    err = axpy(e5, k5, err);
    err = axpy(e6, k6, err);
    err = axpy(e7, k7, err);

    double ew, edw;
    if (ctl.couple > 0.0) {
      const double amp = std::max(std::max(detail::mag(y.w), detail::mag(y5.w)),
                                  std::max(detail::mag(y.dw), detail::mag(y5.dw)) / ctl.couple);
      const double common = ctl.atol + ctl.rtol * amp;
      ew = common > 0 ? h * detail::mag(err.w) / common : 0.0;
      edw = common > 0 ? h * detail::mag(err.dw) / (ctl.couple * common) : 0.0;
    } else {
      const double scale_w =
          ctl.atol + ctl.rtol * std::max(detail::mag(y.w), detail::mag(y5.w));
      const double scale_dw =
          ctl.atol + ctl.rtol * std::max(detail::mag(y.dw), detail::mag(y5.dw));
      ew = scale_w > 0 ? h * detail::mag(err.w) / scale_w : 0.0;
      edw = scale_dw > 0 ? h * detail::mag(err.dw) / scale_dw : 0.0;
    }
    const double en = std::sqrt(0.5 * (ew * ew + edw * edw));

    if (en <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;  // FSAL
      obs(t, y);
      if (t1 - t <= 1e-14 * (std::abs(t1) + 1.0)) return y;
      const double grow = en > 1e-30 ? 0.9 * std::pow(en, -0.2) : 5.0;
      h = std::min({h * std::min(5.0, grow), ctl.h_max});
    } else {
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      if (h < ctl.h_min)
        throw ConvergenceError("integrate_linear2: step size underflow");
    }
  }
  throw ConvergenceError("integrate_linear2: max step count exceeded");
}

// Accepted-node record of a real integration with quintic-Hermite dense
// output; second derivatives come from the ODE at the nodes.
class Trajectory {
public:
  void reserve(std::size_t n) {
    t_.reserve(n);
    w_.reserve(n);
    dw_.reserve(n);
    ddw_.reserve(n);
  }
  void append(double t, double w, double dw, double ddw) {
    t_.push_back(t);
    w_.push_back(w);
    dw_.push_back(dw);
    ddw_.push_back(ddw);
  }
  bool empty() const { return t_.empty(); }
  std::size_t size() const { return t_.size(); }
  double t_front() const { return t_.front(); }
  double t_back() const { return t_.back(); }
  double w_back() const { return w_.back(); }
  double dw_back() const { return dw_.back(); }

  void eval(double t, double* w, double* dw) const;

  // integral of w(t)^2 over [t_front, t_back] (per-interval Gauss on the
  // Hermite quintic)
  double integral_w2() const;

  const std::vector<double>& nodes() const { return t_; }
  const std::vector<double>& values() const { return w_; }

private:
  std::vector<double> t_, w_, dw_, ddw_;
};

// Unwrapped scaled-Pruefer phase atan2(c*w, dw) accumulated along accepted
// nodes; advances by pi at every zero of w.
class PhaseTracker {
public:
  explicit PhaseTracker(double scale) : c_(scale) {}
  void observe(double /*t*/, double w, double dw) {
    const double raw = std::atan2(c_ * w, dw);
    if (first_) {
      phi_ = raw;
      first_ = false;
    } else {
      double d = raw - prev_;
      while (d > M_PI) d -= 2.0 * M_PI;
      while (d <= -M_PI) d += 2.0 * M_PI;
      phi_ += d;
    }
    prev_ = raw;
  }
  double phase() const { return phi_; }

private:
  double c_;
  double phi_ = 0.0, prev_ = 0.0;
  bool first_ = true;
};

}  // namespace peanut::ode

#endif
