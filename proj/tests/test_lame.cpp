#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "peanut/lame.hpp"
#include "peanut/quadrature.hpp"

using namespace peanut;
using elliptic::Modulus;
using lame::LameMode;
using lame::LameProblem;
using lame::Parity;

TEST_SUITE_BEGIN("lame");

TEST_CASE("frobenius seed leading behavior and order refinement") {
  const Modulus kappa(0.6);
  const double K = kappa.big_k();
  const LameProblem prob(0.5, 2, kappa);
  const double lam = 4.0;  // any trial value

  // w(K-delta)/delta^{nu+1} -> a0 = 1
  double prev_gap = 1e9;
  for (double frac : {1e-2, 1e-3, 1e-4}) {
    const auto seed = lame::frobenius_seed(prob, lam, frac * K, 16);
    const double gap = std::abs(seed.w / std::pow(frac * K, prob.nu + 1.0) - 1.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-7);

  // order 12 vs order 16 agree to 1e-13
  const auto s12 = lame::frobenius_seed(prob, lam, 1e-3 * K, 12);
  const auto s16 = lame::frobenius_seed(prob, lam, 1e-3 * K, 16);
  CHECK(std::abs(s12.w - s16.w) < 1e-13 * std::abs(s16.w));
  CHECK(std::abs(s12.dw - s16.dw) < 1e-13 * std::abs(s16.dw));

  CHECK_THROWS_AS(lame::frobenius_seed(prob, lam, 0.2 * K, 16), std::domain_error);
  CHECK_THROWS_AS(lame::frobenius_seed(prob, lam, 1e-3 * K, 4), std::domain_error);
}

TEST_CASE("frobenius series coefficients belong to the recessive exponent") {
  // the ODE residual of the series vanishes for exponent nu+1 but not for -nu
  const Modulus kappa(0.6);
  const double K = kappa.big_k();
  const double nu = 0.5, lam = 4.0;
  const LameProblem prob(nu, 0, kappa);
  const double x = 2e-2 * K, h = 1e-4 * K;
  const auto w_at = [&](double xx) { return lame::frobenius_seed(prob, lam, xx, 20).w; };
  const auto q_at = [&](double xx) {
    const auto j = kappa.sncndn(xx);
    return nu * (nu + 1.0) / (j.sn * j.sn) - lam;
  };
  const double wdd = (w_at(x + h) - 2.0 * w_at(x) + w_at(x - h)) / (h * h);
  const double res_true = std::abs(wdd - q_at(x) * w_at(x)) / std::abs(q_at(x) * w_at(x));
  CHECK(res_true < 1e-5);
  // same analytic part moved to the other exponent: w~ = x^{-2nu-1} w
  const auto wswap = [&](double xx) { return std::pow(xx, -2.0 * nu - 1.0) * w_at(xx); };
  const double sdd = (wswap(x + h) - 2.0 * wswap(x) + wswap(x - h)) / (h * h);
  const double res_swap = std::abs(sdd - q_at(x) * wswap(x)) / std::abs(q_at(x) * wswap(x));
  CHECK(res_swap > 1e3 * res_true);
}

TEST_CASE("eigenvalues approach (n+nu+1)^2 as kappa -> 0") {
  const Modulus kappa(0.02);
  // within 1e-3 where the Lemma 2.2 bracket width allows it
  for (auto [nu, n] : std::initializer_list<std::pair<double, int>>{
           {-0.5, 0}, {0.5, 0}, {-0.5, 1}}) {
    const auto mode = lame::solve_eigen(LameProblem(nu, n, kappa));
    CHECK(std::abs(mode.lambda() - (n + nu + 1.0) * (n + nu + 1.0)) < 1e-3);
  }
  // for larger indices the deviation scales like (1-omega^2)(n+nu+1)^2
  const double one_m_omega2 = 1.0 - kappa.omega() * kappa.omega();
  for (double nu : {-0.5, 0.5, 1.5}) {
    for (int n : {1, 3}) {
      const auto mode = lame::solve_eigen(LameProblem(nu, n, kappa));
      const double target = (n + nu + 1.0) * (n + nu + 1.0);
      CHECK(std::abs(mode.lambda() - target) <=
            one_m_omega2 * (target + std::abs(nu * (nu + 1.0))) + 1e-9);
    }
  }
}

TEST_CASE("eigenvalue against the matrix-discretization oracle") {
  const Modulus kappa(0.6);
  const auto mode = lame::solve_eigen(LameProblem(0.5, 2, kappa));
  const double oracle = oracles::lame_matrix_eigenvalue_extrapolated(0.5, 2, kappa);
  CHECK(std::abs(mode.lambda() - oracle) < 1e-8 * std::abs(oracle));
}

TEST_CASE("reversed bracket for nu in [-1/2, 0)") {
  const Modulus kappa(0.6);
  const LameProblem prob(-0.5, 0, kappa);
  const auto mode = lame::solve_eigen(prob);
  const auto br = lame::lemma22_bracket(prob);
  CHECK(br.lower <= mode.lambda());
  CHECK(mode.lambda() <= br.upper);
}

TEST_CASE("eigenfunction parity, boundary decay, normalization") {
  const Modulus kappa(0.6);
  const double K = kappa.big_k();
  for (int n : {0, 1, 2, 5}) {
    const auto mode = lame::solve_eigen(LameProblem(0.5, n, kappa));
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    for (double t : {0.13 * K, 0.4 * K, 0.77 * K, 0.985 * K})
      CHECK(std::abs(mode.eval_w(-t) - sign * mode.eval_w(t)) <=
            1e-11 * std::max(1.0, std::abs(mode.eval_w(t))));
    // |K-t|^{-1/2} W -> 0 since nu+1 > 1/2
    double prev = 1e300;
    for (double d : {1e-2, 1e-3, 1e-4}) {
      const double v = std::abs(mode.eval_w(K - d)) / std::sqrt(d);
      CHECK(v < prev);
      prev = v;
    }
    // normalization via the independent adaptive integrator
    CHECK(std::abs(lame::mode_inner_product(mode, mode) - 1.0) < 1e-9);
    CHECK_THROWS_AS(mode.eval_w(K), std::domain_error);
  }
}

TEST_CASE("zero counts and increasing eigenvalues") {
  const Modulus kappa(0.5);
  double prev = -1e9;
  for (int n = 0; n <= 8; ++n) {
    const auto mode = lame::solve_eigen(LameProblem(1.5, n, kappa));
    CHECK(mode.lambda() > prev);
    prev = mode.lambda();
    // count zeros by scanning sign changes on a fine grid
    const double K = kappa.big_k();
    int zeros = 0;
    double last = 0.0;
    for (int i = 1; i < 4000; ++i) {
      const double t = -K + 2.0 * K * i / 4000.0;
      const double v = mode.eval_w(t);
      if (std::abs(v) < 1e-12) continue;
      if (last != 0.0 && v * last < 0.0) ++zeros;
      last = v;
    }
    CHECK(zeros == n);
    const auto br = lame::lemma22_bracket(mode.problem());
    CHECK(mode.lambda() >= br.lower - 1e-9 * std::abs(br.lower));
    CHECK(mode.lambda() <= br.upper + 1e-9 * std::abs(br.upper));
  }
}

TEST_CASE("ode residual of the dense representation") {
  const Modulus kappa(0.6);
  for (int n : {0, 3, 7}) {
    const auto mode = lame::solve_eigen(LameProblem(0.5, n, kappa));
    CHECK(mode.residual_sample() < 1e-7);
  }
}

TEST_CASE("orthonormality gram matrix") {
  const Modulus kappa(0.6);
  std::vector<LameMode> modes;
  for (int n = 0; n <= 8; ++n) modes.push_back(lame::solve_eigen(LameProblem(0.5, n, kappa)));
  for (int a = 0; a <= 8; ++a)
    for (int b = a; b <= 8; ++b) {
      const double g = lame::mode_inner_product(modes[a], modes[b]);
      CHECK(std::abs(g - (a == b ? 1.0 : 0.0)) < 1e-8);
    }
}

TEST_CASE("parseval reconstruction of a smooth function") {
  const Modulus kappa(0.6);
  const double K = kappa.big_k();
  const auto g = [&](double t) { return std::cos(0.5 * M_PI * t / K); };
  std::vector<double> coef;
  std::vector<std::shared_ptr<const LameMode>> modes;
  for (int n = 0; n <= 40; ++n) {
    auto mode = std::make_shared<LameMode>(lame::solve_eigen(LameProblem(0.5, n, kappa)));
    const auto f = [&](double t) { return g(t) * mode->eval_w(t); };
    const auto r = quad::integrate_adaptive(f, -K * (1 - 1e-12), K * (1 - 1e-12), 1e-11, 1e-13);
    coef.push_back(r.value);
    modes.push_back(std::move(mode));
  }
  // The coefficient decay here is algebraic (g vanishes linearly at the
  // endpoints, the basis like (K-+t)^{3/2}), so the n_max = 40 partial sum
  // reaches ~1e-3 pointwise, improving steadily with n_max.
  double worst40 = 0.0, worst10 = 0.0;
  for (int i = 1; i <= 50; ++i) {
    const double t = -0.9 * K + 1.8 * K * i / 51.0;
    double acc = 0.0;
    for (int n = 0; n <= 10; ++n) acc += coef[n] * modes[n]->eval_w(t);
    worst10 = std::max(worst10, std::abs(acc - g(t)));
    for (int n = 11; n <= 40; ++n) acc += coef[n] * modes[n]->eval_w(t);
    worst40 = std::max(worst40, std::abs(acc - g(t)));
  }
  CHECK(worst40 < 2e-3);
  CHECK(worst40 < 0.5 * worst10);
}

TEST_CASE("lemma 2.3 amplitude bounds for nu >= 0") {
  const Modulus kappa(0.5);
  const double K = kappa.big_k();
  for (int n : {0, 2, 6}) {
    for (double nu : {0.5, 2.5}) {
      const auto mode = lame::solve_eigen(LameProblem(nu, n, kappa));
      for (int i = 1; i < 160; ++i) {
        const double t = -K + 2.0 * K * i / 160.0;
        const double w2 = mode.eval_w(t) * mode.eval_w(t);
        CHECK(w2 <= M_PI / (2.0 * K) * (n + nu + 1.0) + 1e-12);
        const auto j = kappa.sncndn(t);
        CHECK((j.dn / j.cn) * w2 <=
              M_PI * M_PI / (4.0 * K) * (n + nu + 1.0) * (n + nu + 1.0) + 1e-12);
      }
    }
  }
}

TEST_CASE("nu = -1/2 amplitudes stay bounded in n") {
  const Modulus kappa(0.6);
  const double K = kappa.big_k();
  std::vector<double> peak;
  for (int n = 0; n <= 30; n += 3) {
    const auto mode = lame::solve_eigen(LameProblem(-0.5, n, kappa));
    double mx = 0.0;
    for (int i = 1; i < 400; ++i) {
      const double t = -K + 2.0 * K * i / 400.0;
      mx = std::max(mx, mode.eval_w(t) * mode.eval_w(t));
    }
    peak.push_back(mx);
  }
  // the peaks rise toward a finite bound and saturate: record the empirical
  // constant, require boundedness and a flat late range (no growth trend)
  double cap = 0.0;
  for (double p : peak) cap = std::max(cap, p);
  MESSAGE("empirical sup_n max_t W^2 = ", cap);
  CHECK(cap < 1.0);
  const std::size_t half = peak.size() / 2;
  double late_rise = 0.0;
  for (std::size_t i = half + 1; i < peak.size(); ++i)
    late_rise = std::max(late_rise, peak[i] - peak[half]);
  CHECK(late_rise < 1e-3);
}

TEST_CASE("imaginary axis: positivity, growth, and lemma 2.5 decay in n") {
  const Modulus kappa(0.6);
  const double kc = kappa.big_k_prime();
  std::vector<double> log_ratio;
  for (int n = 0; n <= 8; ++n) {
    const auto mode = lame::solve_eigen(LameProblem(0.5, n, kappa));
    // U(s) is W(0) (resp. W'(0)) times the positive increasing solution E(s);
    // normalize that constant away before asserting positivity and growth
    const double mult = (n % 2 == 0) ? mode.w_at_zero() : mode.dw_at_zero();
    const double sigma = mult > 0.0 ? 1.0 : -1.0;
    double prev = 0.0;
    for (double s : {0.3 * kc, 0.8 * kc, 1.3 * kc, 1.9 * kc}) {
      const auto v = mode.eval_w_imag(s);
      CHECK(v.imaginary == (n % 2 == 1));
      CHECK(sigma * v.value > 0.0);
      CHECK(sigma * v.value > prev);
      prev = sigma * v.value;
    }
    CHECK(sigma * mode.eval_w_imag_deriv(0.7 * kc) >= 0.0);
    log_ratio.push_back(std::log(mode.eval_w_imag(0.5 * kc).value /
                                 mode.eval_w_imag(1.6 * kc).value));
  }
  // log of the decay ratio decreases linearly in n: successive differences negative
  for (std::size_t i = 1; i < log_ratio.size(); ++i) CHECK(log_ratio[i] < log_ratio[i - 1]);
}

TEST_CASE("complex-path continuation reproduces the real representative") {
  const Modulus kappa(0.6);
  const double kp = kappa.k_prime();
  for (int n : {0, 1, 2, 3}) {
    const double nu = 0.5;
    const auto mode = lame::solve_eigen(LameProblem(nu, n, kappa));
    const double lam = mode.lambda();
    using C = std::complex<double>;
    const double t0 = 0.4 * kappa.big_k();
    // leg 1: real axis from t0 down to 0, parameter theta in [0,1], t = t0(1-theta)
    ode::StepControl ctl;
    ctl.rtol = 1e-12;
    ctl.couple = std::sqrt(std::max(1.0, std::abs(lam)));
    const auto q1 = [&](double th) {
      const auto j = kappa.sncndn(t0 * (1.0 - th));
      const double dc2 = (j.dn / j.cn) * (j.dn / j.cn);
      return C(t0 * t0 * (nu * (nu + 1.0) * dc2 - lam), 0.0);
    };
    ode::State<C> y{C(mode.eval_w(t0), 0.0), C(-t0 * mode.eval_w_deriv(t0), 0.0)};
    y = ode::integrate_linear2<C>(q1, 0.0, 1.0, y, ctl, [](double, const ode::State<C>&) {});
    // corner: d/dtheta = -t0 d/dt, so W'(0) = -y.dw / t0; leg 2: t = i tau
    ode::State<C> z{y.w, C(0.0, 1.0) * (-y.dw / t0)};  // dW/dtau = i W'(it)
    const auto q2 = [&](double tau) {
      const auto j = elliptic::jacobi_sncndn(tau, kp);
      return C(lam - nu * (nu + 1.0) * j.dn * j.dn, 0.0);
    };
    const double s_end = 1.2 * kappa.big_k_prime();
    z = ode::integrate_linear2<C>(q2, 0.0, s_end, z, ctl, [](double, const ode::State<C>&) {});
    const C expected = (n % 2 == 0 ? C(1.0, 0.0) : C(0.0, 1.0)) *
                       mode.eval_w_imag(s_end).value;
    CHECK(std::abs(z.w - expected) < 1e-8 * std::abs(expected));
  }
}

TEST_CASE("wronskian constancy and sign") {
  const Modulus kappa(0.6);
  const double kc = kappa.big_k_prime();
  for (int n : {0, 1, 4}) {
    const auto mode = lame::solve_eigen(LameProblem(0.5, n, kappa));
    const double w = mode.wronskian();
    CHECK(std::abs(w) > 0.0);
    // recompute at several points directly
    const auto wr_at = [&](double s) {
      double u = mode.eval_w_imag(s).value, du = mode.eval_w_imag_deriv(s);
      double v = mode.eval_w_imag(2.0 * kc - s).value,
             dv = mode.eval_w_imag_deriv(2.0 * kc - s);
      return v * du + dv * u;
    };
    double mn = 1e300, mx = -1e300;
    for (double s : {0.3 * kc, 0.7 * kc, 1.0 * kc, 1.4 * kc, 1.7 * kc}) {
      mn = std::min(mn, wr_at(s));
      mx = std::max(mx, wr_at(s));
    }
    CHECK((mx - mn) < 1e-9 * std::abs(w));
  }
}

TEST_CASE("frobenius leading coefficient of the normalized eigenfunction") {
  const Modulus kappa(0.6);
  const double K = kappa.big_k();
  for (int n : {0, 1, 3}) {
    const auto mode = lame::solve_eigen(LameProblem(0.5, n, kappa));
    CHECK(mode.frobenius_a0() > 0.0);  // positive near t = K by convention
    // Richardson of W(t)/(K-t)^{nu+1} converges to a0 (already validated in
    // the build; re-derive here from dense values)
    const auto probe = [&](double d) {
      return mode.eval_w(K - d) / std::pow(d, 1.5);
    };
    const double r1 = probe(8e-3 * K), r2 = probe(4e-3 * K), r3 = probe(2e-3 * K);
    CHECK(std::abs(r3 - mode.frobenius_a0()) < std::abs(r1 - mode.frobenius_a0()));
    const double extr = ((4.0 * r3 - r2) / 3.0 * 16.0 - (4.0 * r2 - r1) / 3.0) / 15.0;
    CHECK(std::abs(extr - mode.frobenius_a0()) < 1e-6 * mode.frobenius_a0());
  }
}

TEST_CASE("bracket failure surfaces as an error") {
  // an off-bracket request: ask for the n=0 mode but probe the eigencondition
  // inside a bracket that cannot contain it by shrinking the padded interval
  // via an impossible index/bracket combination is not constructible through
  // the public API; instead check the overflow guard of the imaginary axis
  const Modulus kappa(0.9);
  const auto mode = lame::solve_eigen(LameProblem(2.5, 9, kappa));
  CHECK_THROWS_AS((void)mode.eval_w_imag(4000.0), std::range_error);
}

TEST_SUITE_END();
