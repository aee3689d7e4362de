#include "peanut/lame.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "peanut/quadrature.hpp"

namespace peanut::lame {

namespace {

// ---------------------------------------------------------------------------
// Per-modulus tables: the smooth part S(x) = ns^2(x,kappa) - 1/x^2 as a power
// series at 0 (Weierstrass Laurent coefficients, DLMF 23.9.1-3) and as a
// Chebyshev interpolant over [0, K] for the shooting right-hand side.
// ---------------------------------------------------------------------------

std::vector<double> weierstrass_coeffs(double m /* = kappa^2 */, int count) {
  // ns^2(x,k) = 1/x^2 + (1+k^2)/3 + sum_{i>=1} c_i x^{2i} with the c_i the
  // Laurent coefficients of the equianharmonic-normalized Weierstrass P
  // (e1 - e3 = 1, k^2 = (e2-e3)/(e1-e3)).
  const double g2 = 4.0 / 3.0 * (1.0 - m + m * m);
  const double g3 = -4.0 / 27.0 * (2.0 - m) * (2.0 * m - 1.0) * (1.0 + m);
  std::vector<double> c(count + 1, 0.0);
  c[0] = (1.0 + m) / 3.0;  // S(0), stored alongside the c_i for convenience
  if (count >= 1) c[1] = g2 / 20.0;
  if (count >= 2) c[2] = g3 / 28.0;
  for (int i = 3; i <= count; ++i) {
    double acc = 0.0;
    for (int l = 1; l <= i - 2; ++l) acc += c[l] * c[i - 1 - l];
    c[i] = 3.0 * acc / ((2.0 * i + 3.0) * (i - 2.0));
  }
  return c;
}

struct KappaTables {
  double K = 0.0, Kp = 0.0;
  std::vector<double> scoef;      // scoef[0] = S(0), scoef[i] = c_i
  quad::ChebyshevSeries s_cheb;   // S(x) on [0, K]
};

const KappaTables& kappa_tables(const elliptic::Modulus& kappa) {
  static std::map<double, KappaTables> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(kappa.k());
  if (it != cache.end()) return it->second;

  KappaTables tab;
  tab.K = kappa.big_k();
  tab.Kp = kappa.big_k_prime();
  tab.scoef = weierstrass_coeffs(kappa.k() * kappa.k(), 24);
  const double series_radius = 2.0 * std::min(tab.K, tab.Kp);
  const double handoff = 0.3 * series_radius;
  const auto s_hybrid = [&](double x) {
    if (x < handoff) {
      const double x2 = x * x;
      double acc = 0.0;
      for (int i = static_cast<int>(tab.scoef.size()) - 1; i >= 1; --i)
        acc = (acc + tab.scoef[i]) * x2;
      return tab.scoef[0] + acc;
    }
    const elliptic::SnCnDn j = kappa.sncndn(x);
    return 1.0 / (j.sn * j.sn) - 1.0 / (x * x);
  };
  tab.s_cheb = quad::ChebyshevSeries::fit_adaptive(s_hybrid, 0.0, tab.K, 1e-12, 65);
  return cache.emplace(kappa.k(), std::move(tab)).first->second;
}

// ---------------------------------------------------------------------------
// Frobenius series at the right endpoint, x = K - t:
//   W(x) = x^{nu+1} sum_j a_j x^j  (even j only),  a_0 given.
// ---------------------------------------------------------------------------

struct EndpointSeries {
  double nu;
  std::vector<double> a;

  void eval(double x, double* w, double* dwdx) const {
    double p = 0.0, dp = 0.0;
    for (int j = static_cast<int>(a.size()) - 1; j >= 0; --j) {
      dp = dp * x + p;
      p = p * x + a[j];
    }
    const int jlast = static_cast<int>(a.size()) - 1;
    const double last = std::abs(a[jlast] * std::pow(x, jlast));
    if (!(last <= 1e-10 * std::abs(p)))
      throw ConvergenceError("frobenius series: truncation tail exceeds 1e-10 of the sum");
    const double xp = std::pow(x, nu);
    if (w) *w = xp * x * p;
    if (dwdx) *dwdx = xp * ((nu + 1.0) * p + x * dp);
  }

  // int_0^delta W(x)^2 dx
  double integral2(double delta) const {
    return product_integral(*this, delta);
  }

  double product_integral(const EndpointSeries& other, double delta) const {
    const int na = static_cast<int>(a.size()), nb = static_cast<int>(other.a.size());
    const double base = std::pow(delta, 2.0 * nu + 3.0);
    double acc = 0.0;
    for (int i = 0; i < na; ++i) {
      if (a[i] == 0.0) continue;
      for (int j = 0; j < nb; ++j) {
        if (other.a[j] == 0.0) continue;
        acc += a[i] * other.a[j] * std::pow(delta, i + j) / (i + j + 2.0 * nu + 3.0);
      }
    }
    return base * acc;
  }
};

EndpointSeries build_series(double nu, double lambda, const std::vector<double>& scoef,
                            int order) {
  const double nu1 = nu * (nu + 1.0);
  EndpointSeries ser;
  ser.nu = nu;
  ser.a.assign(order + 1, 0.0);
  ser.a[0] = 1.0;
  const auto u = [&](int i) {
    return i == 0 ? nu1 * scoef[0] - lambda : nu1 * scoef[i];
  };
  for (int j = 2; j <= order; j += 2) {
    double acc = 0.0;
    for (int i = 0; 2 * i <= j - 2; ++i) acc += u(i) * ser.a[j - 2 - 2 * i];
    ser.a[j] = acc / (j * (j + 2.0 * nu + 1.0));
  }
  return ser;
}

double phase_target(int n) {
  return (n % 2 == 0) ? (n / 2) * M_PI + 0.5 * M_PI : ((n + 1) / 2) * M_PI;
}

}  // namespace

Bracket lemma22_bracket(const LameProblem& p) {
  const double omega2 = p.kappa.omega() * p.kappa.omega();
  const double nu1 = p.nu * (p.nu + 1.0);
  const double core = omega2 * (p.n + p.nu + 1.0) * (p.n + p.nu + 1.0);
  const double shift = nu1 * (1.0 - omega2);
  if (p.nu >= 0.0) return {core, shift + core};
  return {shift + core, core};
}

SeedValues frobenius_seed(const LameProblem& p, double lambda_trial, double delta, int order) {
  const double K = p.kappa.big_k();
  if (!(delta > 0.0 && delta <= 0.05 * K))
    throw std::domain_error("frobenius_seed: need 0 < delta <= 0.05*K");
  if (order < 8) throw std::domain_error("frobenius_seed: order >= 8 required");
  const KappaTables& tab = kappa_tables(p.kappa);
  const EndpointSeries ser = build_series(p.nu, lambda_trial, tab.scoef, order);
  double w, dwdx;
  ser.eval(delta, &w, &dwdx);
  return {w, -dwdx};  // d/dt = -d/dx
}

LameMode solve_eigen(const LameProblem& p, const SolveOptions& opts) {
  const KappaTables& tab = kappa_tables(p.kappa);
  const double K = tab.K;
  const double nu1 = p.nu * (p.nu + 1.0);
  const double delta = opts.delta_frac * K;
  const double target = phase_target(p.n);

  const auto coef = [&, nu1](double x) { return nu1 * (tab.s_cheb(x) + 1.0 / (x * x)); };

  int evals = 0;
  const auto phase_at = [&](double lam, double rtol) {
    if (++evals > opts.max_iter)
      throw ConvergenceError("solve_eigen: no convergence after max_iter shots");
    const EndpointSeries ser = build_series(p.nu, lam, tab.scoef, opts.series_order);
    ode::State<double> y;
    double dwdx;
    ser.eval(delta, &y.w, &dwdx);
    y.dw = dwdx;
    const double c = std::sqrt(std::max(std::abs(lam), 0.25));
    ode::PhaseTracker ph(c);
    ode::StepControl ctl;
    ctl.rtol = rtol;
    ctl.atol = 0.0;
    ctl.couple = c;
    ctl.h_init = 0.25 * delta;
    const auto q = [&](double x) { return coef(x) - lam; };
    ode::integrate_linear2<double>(q, delta, K, y, ctl,
                                   [&](double t, const ode::State<double>& s) {
                                     ph.observe(t, s.w, s.dw);
                                   });
    return ph.phase();
  };

  Bracket br = lemma22_bracket(p);
  if (p.nu >= 0.0) {
    // eq. lower bound nu(nu+1) + omega^2 (n+1)^2 tightens the left edge
    const double omega2 = p.kappa.omega() * p.kappa.omega();
    br.lower = std::max(br.lower, nu1 + omega2 * (p.n + 1.0) * (p.n + 1.0));
  }
  const double pad = 0.01 * (br.upper - br.lower) + 1e-8 * (1.0 + std::abs(br.upper));
  double lo = br.lower - pad, hi = br.upper + pad;

  double flo = phase_at(lo, opts.rtol_search) - target;
  double fhi = phase_at(hi, opts.rtol_search) - target;
  if (!(flo <= 0.0 && fhi >= 0.0))
    throw ConvergenceError(
        "solve_eigen: eigencondition does not change sign in the padded Lemma 2.2 bracket");

  // coarse bisection on the Pruefer phase
  while (hi - lo > 1e-5 * std::max(1.0, std::abs(hi))) {
    const double mid = 0.5 * (lo + hi);
    const double fm = phase_at(mid, opts.rtol_search) - target;
    if (fm < 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }

  // safeguarded secant at the tight tolerance
  double a = lo, b = hi;
  double fa = phase_at(a, opts.rtol_final) - target;
  double fb = phase_at(b, opts.rtol_final) - target;
  const double lam_tol = 1e-12 * std::max(1.0, 0.5 * (std::abs(a) + std::abs(b)));
  if (fa > 0.0 && fb > 0.0) b = a;  // tight signs may disagree at the edge; shrink
  if (fa < 0.0 && fb < 0.0) a = b;
  while (b - a > lam_tol) {
    double x;
    if (fb != fa) {
      x = b - fb * (b - a) / (fb - fa);
      if (!(x > a + 0.1 * lam_tol && x < b - 0.1 * lam_tol)) x = 0.5 * (a + b);
    } else {
      x = 0.5 * (a + b);
    }
    const double fx = phase_at(x, opts.rtol_final) - target;
    if (fx < 0.0) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
  }

  LameMode mode(p);
  mode.lambda_ = std::abs(fa) <= std::abs(fb) ? a : b;
  mode.build_from_lambda(opts);
  return mode;
}

void LameMode::build_from_lambda(const SolveOptions& opts) {
  const LameProblem& p = problem_;
  const KappaTables& tab = kappa_tables(p.kappa);
  const double K = tab.K;
  const double nu1 = p.nu * (p.nu + 1.0);
  delta_ = opts.delta_frac * K;
  parity_ = (p.n % 2 == 0) ? Parity::even : Parity::odd;

  const EndpointSeries ser = build_series(p.nu, lambda_, tab.scoef, opts.series_order);
  ode::State<double> y;
  double dwdx;
  ser.eval(delta_, &y.w, &dwdx);
  y.dw = dwdx;

  const auto q = [&](double x) { return nu1 * (tab.s_cheb(x) + 1.0 / (x * x)) - lambda_; };
  const double c = std::sqrt(std::max(std::abs(lambda_), 0.25));
  ode::PhaseTracker ph(c);
  ode::StepControl ctl;
  ctl.rtol = opts.rtol_final;
  ctl.atol = 0.0;
  ctl.couple = c;
  ctl.h_init = 0.25 * delta_;
  real_ = ode::Trajectory();
  real_.reserve(8192);
  ode::integrate_linear2<double>(q, delta_, K, y, ctl,
                                 [&](double t, const ode::State<double>& s) {
                                   ph.observe(t, s.w, s.dw);
                                   real_.append(t, s.w, s.dw, q(t) * s.w);
                                 });

  const double target = phase_target(p.n);
  if (std::abs(ph.phase() - target) > 1e-5)
    throw ConvergenceError("LameMode: dense pass does not satisfy the eigencondition");

  // index check: exactly floor(n/2) zeros on (0, K) away from the origin
  {
    const auto& w = real_.values();
    double wmax = 0.0;
    for (double v : w) wmax = std::max(wmax, std::abs(v));
    int crossings = 0;
    double last = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {  // skip the t=0 node itself
      const double v = w[i];
      if (std::abs(v) <= 1e-9 * wmax) continue;
      if (last != 0.0 && v * last < 0.0) ++crossings;
      last = v;
    }
    if (crossings != p.n / 2)
      throw ConvergenceError("LameMode: interior zero count does not match the index");
  }

  const double norm2 = 2.0 * (real_.integral_w2() + ser.integral2(delta_));
  norm_constant_ = 1.0 / std::sqrt(norm2);

  if (parity_ == Parity::even) {
    w0_ = norm_constant_ * real_.w_back();
    dw0_ = 0.0;
  } else {
    w0_ = 0.0;
    dw0_ = -norm_constant_ * real_.dw_back();
  }

  series_.assign(ser.a.begin(), ser.a.end());
  for (double& v : series_) v *= norm_constant_;

  // Richardson validation of the leading coefficient against the dense mesh
  {
    const double d1 = 8e-3 * K, d2 = 4e-3 * K, d3 = 2e-3 * K;
    const auto probe = [&](double d) {
      double w;
      real_.eval(d, &w, nullptr);  // trajectory parameter is x = K - t
      return norm_constant_ * w / std::pow(d, p.nu + 1.0);
    };
    const double r1 = probe(d1), r2 = probe(d2), r3 = probe(d3);
    const double R12 = (4.0 * r2 - r1) / 3.0, R23 = (4.0 * r3 - r2) / 3.0;
    const double extr = (16.0 * R23 - R12) / 15.0;
    if (std::abs(extr - series_[0]) > 1e-6 * std::abs(series_[0]))
      throw ConvergenceError("LameMode: Richardson check of the leading coefficient failed");
  }
}

double LameMode::frobenius_a0() const { return series_[0]; }

namespace {
void eval_series(const std::vector<double>& a, double nu, double x, double* w, double* dwdx) {
  double pv = 0.0, dp = 0.0;
  for (int j = static_cast<int>(a.size()) - 1; j >= 0; --j) {
    dp = dp * x + pv;
    pv = pv * x + a[j];
  }
  const double xp = std::pow(x, nu);
  if (w) *w = xp * x * pv;
  if (dwdx) *dwdx = xp * ((nu + 1.0) * pv + x * dp);
}
}  // namespace

double LameMode::eval_w(double t) const {
  const double K = big_k();
  const double at = std::abs(t);
  if (!(at < K)) throw std::domain_error("eval_w: |t| < K required");
  const double sign = (t < 0.0 && parity_ == Parity::odd) ? -1.0 : 1.0;
  const double x = K - at;
  double w;
  if (x < delta_) {
    eval_series(series_, problem_.nu, x, &w, nullptr);
  } else {
    real_.eval(x, &w, nullptr);
    w *= norm_constant_;
  }
  return sign * w;
}

double LameMode::eval_w_deriv(double t) const {
  const double K = big_k();
  const double at = std::abs(t);
  if (!(at < K)) throw std::domain_error("eval_w_deriv: |t| < K required");
  const double x = K - at;
  double dwdx;
  if (x < delta_) {
    eval_series(series_, problem_.nu, x, nullptr, &dwdx);
  } else {
    real_.eval(x, nullptr, &dwdx);
    dwdx *= norm_constant_;
  }
  // w' is an even function when w is odd and vice versa
  double d = -dwdx;  // value for t >= 0
  if (t < 0.0 && parity_ == Parity::even) d = -d;
  return d;
}

void LameMode::ensure_imag_range(double s) const {
  std::lock_guard<std::mutex> lock(*imag_mutex_);
  const double want = std::abs(s) + 1e-9;
  if (!imag_.empty() && imag_.t_back() >= want) return;
  const double kp = problem_.kappa.k_prime();
  const double nu1 = problem_.nu * (problem_.nu + 1.0);
  const auto q = [&](double u) {
    const elliptic::SnCnDn j = elliptic::jacobi_sncndn(u, kp);
    return lambda_ - nu1 * j.dn * j.dn;
  };
  ode::StepControl ctl;
  ctl.rtol = 1e-12;
  ctl.atol = 0.0;
  ctl.couple = std::sqrt(std::max(std::abs(lambda_), 0.25));
  double start;
  ode::State<double> y;
  if (imag_.empty()) {
    start = 0.0;
    y = {w0_, dw0_};
    imag_.append(0.0, y.w, y.dw, q(0.0) * y.w);
  } else {
    start = imag_.t_back();
    y = {imag_.w_back(), imag_.dw_back()};
  }
  const double growth = std::sqrt(std::max(1.0, q(start)));
  double chunk = std::max(0.25, std::min(1.0, 40.0 / growth));
  double t = start;
  while (t < want) {
    const double t1 = std::min(t + chunk, want);
    y = ode::integrate_linear2<double>(
        q, t, t1, y, ctl, [&](double u, const ode::State<double>& st) {
          if (u > t) imag_.append(u, st.w, st.dw, q(u) * st.w);
        });
    t = t1;
    if (std::abs(y.w) > 1e290 || std::abs(y.dw) > 1e290)
      throw std::range_error("eval_w_imag: values past 1e300 (overflow guard)");
  }
}

ImagValue LameMode::eval_w_imag(double s) const {
  ensure_imag_range(s);
  std::lock_guard<std::mutex> lock(*imag_mutex_);
  double w;
  imag_.eval(std::abs(s), &w, nullptr);
  if (s < 0.0 && parity_ == Parity::odd) w = -w;
  return {w, parity_ == Parity::odd};
}

double LameMode::eval_w_imag_deriv(double s) const {
  ensure_imag_range(s);
  std::lock_guard<std::mutex> lock(*imag_mutex_);
  double dw;
  imag_.eval(std::abs(s), nullptr, &dw);
  if (s < 0.0 && parity_ == Parity::even) dw = -dw;
  return dw;
}

double LameMode::wronskian() const {
  {
    std::lock_guard<std::mutex> lock(*imag_mutex_);
    if (wronskian_ready_) return wronskian_;
  }
  const double kc = problem_.kappa.big_k_prime();  // quarter period K(kappa')
  ensure_imag_range(1.5 * kc + 1e-6);
  std::lock_guard<std::mutex> lock(*imag_mutex_);
  const auto wr = [&](double s) {
    double u, du, v, dv;
    imag_.eval(s, &u, &du);
    imag_.eval(2.0 * kc - s, &v, &dv);
    // V(s) = U(2Kc - s) => V'(s) = -U'(2Kc - s)
    return v * du + dv * u;
  };
  const double w1 = wr(0.5 * kc), w2 = wr(kc), w3 = wr(1.5 * kc);
  const double lo = std::min({w1, w2, w3}), hi = std::max({w1, w2, w3});
  const double scale = std::max({std::abs(w1), std::abs(w2), std::abs(w3)});
  if (!(hi - lo <= 1e-8 * scale))
    throw ConvergenceError("wronskian: evaluations at different points disagree");
  wronskian_ = w2;
  wronskian_ready_ = true;
  return wronskian_;
}

double LameMode::residual_sample() const {
  const double K = big_k();
  const double nu1 = problem_.nu * (problem_.nu + 1.0);
  const double h = 3e-3 * K;
  double worst = 0.0;
  for (int i = 0; i < 9; ++i) {
    const double t = (0.12 + 0.095 * i) * K;
    const double f2 = (-eval_w(t - 2 * h) + 16 * eval_w(t - h) - 30 * eval_w(t) +
                       16 * eval_w(t + h) - eval_w(t + 2 * h)) /
                      (12 * h * h);
    const elliptic::SnCnDn j = problem_.kappa.sncndn(t);
    const double dc2 = (j.dn / j.cn) * (j.dn / j.cn);
    const double rhs = (nu1 * dc2 - lambda_) * eval_w(t);
    const double scale = (std::abs(lambda_) + nu1 * dc2) * std::abs(eval_w(t)) +
                         std::abs(f2) + 1e-30;
    worst = std::max(worst, std::abs(f2 - rhs) / scale);
  }
  return worst;
}

double mode_inner_product(const LameMode& a, const LameMode& b) {
  if (a.problem().nu != b.problem().nu ||
      a.problem().kappa.k() != b.problem().kappa.k())
    throw std::invalid_argument("mode_inner_product: modes from different families");
  if (a.parity() != b.parity()) return 0.0;
  const double K = a.big_k();
  const auto f = [&](double t) { return a.eval_w(t) * b.eval_w(t); };
  const auto r = quad::integrate_adaptive(f, 0.0, K * (1.0 - 1e-12), 3e-12, 1e-13);
  return 2.0 * r.value;
}

}  // namespace peanut::lame
