#include "peanut/elliptic.hpp"

#include <cmath>
#include <cstdlib>

namespace peanut::elliptic {

namespace {

constexpr double kModulusFloor = 1e-12;
constexpr double kPoleTol = 1e-13;

void check_modulus(double k, const char* where) {
  if (!(k > 0.0 && k < 1.0))
    throw std::domain_error(std::string(where) + ": modulus k must lie in (0,1)");
}

// sn,cn,dn for k below the Landen recursion floor, DLMF 22.10.4-6
// (error O(k^4), with k <= 1e-7 here).
SnCnDn sncndn_small_k(double u, double k) {
  const double m = k * k;
  const double su = std::sin(u), cu = std::cos(u);
  const double w = 0.25 * m * (u - su * cu);
  return {su - w * cu, cu + w * su, 1.0 - 0.5 * m * su * su};
}

SnCnDn sncndn_rec(double u, double k) {
  if (k < 1e-7) return sncndn_small_k(u, k);
  // descending Landen: k1 = (1-k')/(1+k'), z1 = z/(1+k1)
  const double kp = std::sqrt((1.0 - k) * (1.0 + k));
  const double k1 = (1.0 - kp) / (1.0 + kp);
  const SnCnDn j = sncndn_rec(u / (1.0 + k1), k1);
  const double s2 = j.sn * j.sn;
  const double den = 1.0 + k1 * s2;
  // DLMF 22.7.1-3, with dn rewritten via dn^2 = 1 - k1^2 sn^2 so that the
  // quotient stays conditioned as k1 -> 0.
  return {(1.0 + k1) * j.sn / den, j.cn * j.dn / den, (1.0 - k1 * s2) / den};
}

}  // namespace

namespace {
// K from the complementary modulus: K = pi / (2 M(1, k')); exact for the
// near-degenerate corners where 1 - k^2 would round away.
double complete_k_from_complement(double kc) {
  double a = 1.0, b = kc;
  for (int i = 0; i < 80 && a - b > 4e-16 * a; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return M_PI / (a + b);
}
}  // namespace

double complete_k(double k) {
  check_modulus(k, "complete_k");
  return complete_k_from_complement(std::sqrt((1.0 - k) * (1.0 + k)));
}

SnCnDn jacobi_sncndn(double u, double k) {
  check_modulus(k, "jacobi_sncndn");
  if (!std::isfinite(u)) throw std::domain_error("jacobi_sncndn: u must be finite");
  return sncndn_rec(u, k);
}

Glaisher glaisher_from_string(std::string_view code) {
  static constexpr std::pair<std::string_view, Glaisher> table[] = {
      {"sc", Glaisher::sc}, {"cs", Glaisher::cs}, {"nc", Glaisher::nc},
      {"ns", Glaisher::ns}, {"dc", Glaisher::dc}, {"nd", Glaisher::nd},
      {"cd", Glaisher::cd}, {"dn", Glaisher::dn}, {"sn", Glaisher::sn},
      {"cn", Glaisher::cn}, {"sd", Glaisher::sd}, {"ds", Glaisher::ds}};
  for (const auto& [name, g] : table)
    if (name == code) return g;
  throw std::invalid_argument("glaisher_from_string: unknown code '" + std::string(code) + "'");
}

const char* to_string(Glaisher code) {
  switch (code) {
    case Glaisher::sc: return "sc";
    case Glaisher::cs: return "cs";
    case Glaisher::nc: return "nc";
    case Glaisher::ns: return "ns";
    case Glaisher::dc: return "dc";
    case Glaisher::nd: return "nd";
    case Glaisher::cd: return "cd";
    case Glaisher::dn: return "dn";
    case Glaisher::sn: return "sn";
    case Glaisher::cn: return "cn";
    case Glaisher::sd: return "sd";
    case Glaisher::ds: return "ds";
  }
  return "?";
}

double glaisher(Glaisher code, double u, double k) {
  const SnCnDn j = jacobi_sncndn(u, k);
  const auto pick = [&](char c) {
    switch (c) {
      case 's': return j.sn;
      case 'c': return j.cn;
      case 'd': return j.dn;
      default: return 1.0;  // 'n'
    }
  };
  const char* name = to_string(code);
  const double num = pick(name[0]);
  const double den = pick(name[1]);
  if (std::abs(den) < kPoleTol)
    throw PoleError(std::string("glaisher: pole of ") + name + " (denominator vanished)");
  return num / den;
}

FlaggedReal jacobi_imag(JacobiFn fn, double t, double k) {
  check_modulus(k, "jacobi_imag");
  const double kp = std::sqrt((1.0 - k) * (1.0 + k));
  const double big_kp = complete_k(kp);
  if (!(std::abs(t) < big_kp))
    throw PoleError("jacobi_imag: |t| must be < K'(k)");
  const SnCnDn j = jacobi_sncndn(t, kp);
  if (std::abs(j.cn) < kPoleTol)
    throw PoleError("jacobi_imag: pole at |t| -> K'");
  switch (fn) {
    case JacobiFn::sn: return {j.sn / j.cn, true};   // i sc(t,k')
    case JacobiFn::cn: return {1.0 / j.cn, false};   // nc(t,k')
    case JacobiFn::dn: return {j.dn / j.cn, false};  // dc(t,k')
  }
  std::abort();
}

Modulus::Modulus(double k) {
  if (!(k > 0.0 && k < 1.0))
    throw std::domain_error("Modulus: k must lie in (0,1)");
  if (k < kModulusFloor) {
    diag::warn("Modulus: k clamped up to 1e-12");
    k = kModulusFloor;
  } else if (k > 1.0 - kModulusFloor) {
    diag::warn("Modulus: k clamped down to 1-1e-12");
    k = 1.0 - kModulusFloor;
  }
  k_ = k;
  kp_ = std::sqrt((1.0 - k) * (1.0 + k));
  big_k_ = complete_k_from_complement(kp_);
  big_kp_ = complete_k_from_complement(k_);
  omega_ = M_PI / (2.0 * big_k_);
}

}  // namespace peanut::elliptic
