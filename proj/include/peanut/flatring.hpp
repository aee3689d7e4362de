#ifndef PEANUT_FLATRING_HPP
#define PEANUT_FLATRING_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "peanut/elliptic.hpp"

// Flat-ring cyclide coordinates (s, t, phi):
//   x = R cos phi,  y = R sin phi,
//   R = k' cn(t,k') / (k cn(s,k) + dn(s,k) dn(t,k')),
//   z = k k' sn(s,k) sn(t,k') / (k cn(s,k) + dn(s,k) dn(t,k')),
// with s in (0,2K), t in (-K',K'), phi in [-pi,pi).  The surface s = s0 is a
// peanut cyclide; s = K is the unit sphere; inversion at the unit sphere is
// s -> 2K - s.

namespace peanut::flatring {

using elliptic::Modulus;

struct CartesianPoint {
  double x = 0.0, y = 0.0, z = 0.0;

  double cyl_r() const;
  double norm() const;
};

struct FlatRingCoords {
  double s, t, phi;
  Modulus modulus;

  // validates s in (0,2K), t in (-K',K'); phi is wrapped into [-pi,pi)
  FlatRingCoords(double s, double t, double phi, Modulus modulus);
};

struct PeanutRegion {
  double s0;
  Modulus modulus;

  PeanutRegion(double s0, Modulus modulus);
};

// Half-plane profile functions.
double radius_R(double s, double t, const Modulus& k);
double height_z(double s, double t, const Modulus& k);
// The equivalent sum form 1/R = (1/k') dn(s,k) dn(it,k) + (k/k') cn(s,k) cn(it,k),
// written through the imaginary transformation; kept separate as a cross-check.
double radius_R_sumform(double s, double t, const Modulus& k);

CartesianPoint to_cartesian(const FlatRingCoords& c);

// phi = atan2(y,x); (s,t) by damped Newton on the (R,z) residual with an
// analytic Jacobian, multistart from a per-modulus 32x32 grid.  Points on the
// z-axis or within 1e-10 of the cut disks {z=0, R<=b or R>=1/b} are rejected.
FlatRingCoords from_cartesian(const CartesianPoint& p, const Modulus& k);

// b = (1-k)/k' = sqrt((1-k)/(1+k)), the inner cut radius.
double b_param(double k);

// Quartic surface function whose zero set carries the s = s0 surface;
// undefined at s0 = K (cn(K,k) = 0).
double omega_surface(const CartesianPoint& p, const PeanutRegion& region);
// |Omega| normalized by its largest term (the scale-aware boundary measure).
double omega_surface_scaled(const CartesianPoint& p, const PeanutRegion& region);

CartesianPoint invert_sphere(const CartesianPoint& p);

enum class Classification { interior, boundary, exterior };
Classification region_classify(const CartesianPoint& p, const PeanutRegion& region);

// h = k R (sn^2(s,k) - sn^2(it,k))^{1/2} = k R sqrt(sn^2(s,k) + sc^2(t,k')),
// the scale function in the Dirichlet coefficient formula; the surface
// element of s = s0 is dS = h R dt dphi.
double scale_h(double s, double t, const Modulus& k);

// --- emitters ------------------------------------------------------------

struct SurfaceMesh {
  std::vector<std::array<double, 3>> vertices;
  std::vector<std::array<double, 2>> tphi;   // (t, phi) per vertex; poles use t = +-K'
  std::vector<std::array<int, 4>> quads;
  std::vector<std::array<int, 3>> triangles; // pole fans
};

SurfaceMesh mesh_peanut(const PeanutRegion& region, int n_t, int n_phi);
double mesh_area(const SurfaceMesh& mesh);
void write_obj(std::ostream& os, const SurfaceMesh& mesh);
void write_mesh_csv(std::ostream& os, const SurfaceMesh& mesh, const PeanutRegion& region);

struct Polyline {
  std::string label;
  std::vector<std::array<double, 2>> rz;
};

std::vector<Polyline> coordinate_lines(const Modulus& k, const std::vector<double>& s_values,
                                       const std::vector<double>& t_values, int samples);
void write_lines_csv(std::ostream& os, const std::vector<Polyline>& lines);

}  // namespace peanut::flatring

#endif
