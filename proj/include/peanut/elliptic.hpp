#ifndef PEANUT_ELLIPTIC_HPP
#define PEANUT_ELLIPTIC_HPP

#include <string_view>

#include "peanut/common.hpp"

// Complete elliptic integrals and Jacobian elliptic functions for real
// arguments, plus the purely real data of Jacobi's imaginary transformation.
// Conventions follow DLMF chapters 19 and 22 (modulus k, not parameter m).

namespace peanut::elliptic {

struct SnCnDn {
  double sn, cn, dn;
};

// Complete elliptic integral of the first kind K(k), by the arithmetic-
// geometric mean M(1,k'): K = pi / (2 M(1,k'))  [DLMF 19.8.5].
double complete_k(double k);

// sn, cn, dn by the descending Landen (Gauss) transformation, DLMF 22.7.1-3,
// recursing until the modulus drops below 1e-14, then the k->0 expansions
// DLMF 22.10.4-6.
SnCnDn jacobi_sncndn(double u, double k);

// The twelve Glaisher quotients pq(u,k) = p(u,k)/q(u,k), DLMF 22.2.
enum class Glaisher { sc, cs, nc, ns, dc, nd, cd, dn, sn, cn, sd, ds };

Glaisher glaisher_from_string(std::string_view code);
const char* to_string(Glaisher code);

// Throws PoleError when the denominator function vanishes (|q| < 1e-13).
double glaisher(Glaisher code, double u, double k);

enum class JacobiFn { sn, cn, dn };

// Value of fn(i t, k) written as a real magnitude plus a purely-imaginary
// flag:  sn(it,k) = i sc(t,k'),  cn(it,k) = nc(t,k'),  dn(it,k) = dc(t,k')
// [DLMF Table 22.6.1].  Requires |t| < K'(k); throws PoleError at the poles.
struct FlaggedReal {
  double value;
  bool imaginary;
};

FlaggedReal jacobi_imag(JacobiFn fn, double t, double k);

// An elliptic modulus with its derived constants.  Values of k within 1e-12
// of 0 or 1 are clamped (with a warning); outside (0,1) is a domain error.
class Modulus {
public:
  explicit Modulus(double k);

  double k() const { return k_; }
  double k_prime() const { return kp_; }
  double big_k() const { return big_k_; }        // K(k)
  double big_k_prime() const { return big_kp_; } // K(k')
  double omega() const { return omega_; }        // pi / (2 K)

  Modulus complement() const { return Modulus(kp_); }

  SnCnDn sncndn(double u) const { return jacobi_sncndn(u, k_); }

private:
  double k_, kp_, big_k_, big_kp_, omega_;
};

}  // namespace peanut::elliptic

#endif
