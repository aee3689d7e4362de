#ifndef PEANUT_SPECFUN_HPP
#define PEANUT_SPECFUN_HPP

#include "peanut/common.hpp"

// Legendre function of the second kind for degree >= -1/2 and argument > 1,
// Ferrers functions of integer degree and order, Gegenbauer polynomials and
// the Gegenbauer normalization integral.

namespace peanut::specfun {

// ln Gamma(x), x > 0.
double log_gamma(double x);

// Q_nu(z) for nu >= -1/2, z > 1, by adaptive quadrature of the Heine-type
// representation Q_nu(z) = int_0^inf (z + sqrt(z^2-1) cosh tau)^(-nu-1) dtau
// [DLMF 14.12.4].  Relative accuracy ~1e-10; a warning is recorded for
// z < 1 + 1e-6 where the logarithmic spike limits attainable accuracy.
double legendre_q(double nu, double z);

// Fast path: z^(-nu-1) hypergeometric series [Erdelyi HTF I 3.2(5)],
// convergent for z > 1 and efficient once z is bounded away from 1.
double legendre_q_series(double nu, double z);

// Ferrers function P_n^m on [-1,1] for integer 0 <= m <= n, with the sign
// convention P_m^m(x) = (-1)^m (2m-1)!! (1-x^2)^{m/2}.
double ferrers_p(int n, int m, double x);

// sqrt((n-m)!/(n+m)!) * P_n^m(x); overflow-free for large degree.
double ferrers_p_normalized(int n, int m, double x);

// Gegenbauer (ultraspherical) polynomial C_n^lam(x), lam > -1/2, by the
// three-term recurrence.
double gegenbauer_c(int n, double lam, double x);

// Legendre polynomial P_n(x) = C_n^{1/2}(x).
double legendre_p(int n, double x);

// e_nu^n = int_{-1}^{1} (1-x^2)^{nu+1/2} (C_n^{nu+1}(x))^2 dx in closed form,
//        = pi Gamma(n+2nu+2) / (2^{2nu+1} n! (n+nu+1) Gamma(nu+1)^2).
double e_coefficient(double nu, int n);

}  // namespace peanut::specfun

#endif
