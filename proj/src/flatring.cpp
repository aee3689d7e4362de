#include "peanut/flatring.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>

namespace peanut::flatring {

using elliptic::SnCnDn;

double CartesianPoint::cyl_r() const { return std::hypot(x, y); }
double CartesianPoint::norm() const { return std::sqrt(x * x + y * y + z * z); }

FlatRingCoords::FlatRingCoords(double s_, double t_, double phi_, Modulus modulus_)
    : s(s_), t(t_), phi(phi_), modulus(std::move(modulus_)) {
  const double K = modulus.big_k(), Kp = modulus.big_k_prime();
  if (!(s > 0.0 && s < 2.0 * K))
    throw std::domain_error("FlatRingCoords: s in (0,2K) required");
  if (!(std::abs(t) < Kp))
    throw std::domain_error("FlatRingCoords: t in (-K',K') required");
  phi = std::remainder(phi, 2.0 * M_PI);
  if (phi >= M_PI) phi -= 2.0 * M_PI;  // remainder returns (-pi, pi]
}

PeanutRegion::PeanutRegion(double s0_, Modulus modulus_)
    : s0(s0_), modulus(std::move(modulus_)) {
  if (!(s0 > 0.0 && s0 < 2.0 * modulus.big_k()))
    throw std::domain_error("PeanutRegion: s0 in (0,2K) required");
}

namespace {

struct Profile {
  double R, z;
  double R_s, R_t, z_s, z_t;  // partials
};

Profile profile(double s, double t, const Modulus& k) {
  const SnCnDn a = k.sncndn(s);                              // modulus k
  const SnCnDn b = elliptic::jacobi_sncndn(t, k.k_prime());  // modulus k'
  const double kk = k.k(), kp = k.k_prime();
  const double D = kk * a.cn + a.dn * b.dn;
  const double D_s = -a.sn * (kk * a.dn + kk * kk * a.cn * b.dn);
  const double D_t = -kp * kp * a.dn * b.sn * b.cn;
  Profile p;
  p.R = kp * b.cn / D;
  p.z = kk * kp * a.sn * b.sn / D;
  p.R_s = -kp * b.cn * D_s / (D * D);
  p.R_t = kp * (-b.sn * b.dn * D - b.cn * D_t) / (D * D);
  p.z_s = kk * kp * b.sn * (a.cn * a.dn * D - a.sn * D_s) / (D * D);
  p.z_t = kk * kp * a.sn * (b.cn * b.dn * D - b.sn * D_t) / (D * D);
  return p;
}

struct StartGrid {
  std::vector<double> s, t, R, z;  // 32x32 flattened
};

const StartGrid& start_grid(const Modulus& k) {
  static std::map<double, StartGrid> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(k.k());
  if (it != cache.end()) return it->second;
  StartGrid g;
  const int N = 32;
  const double K = k.big_k(), Kp = k.big_k_prime();
  g.s.reserve(N * N);
  for (int i = 0; i < N; ++i) {
    const double s = 2.0 * K * (i + 0.5) / N;
    for (int j = 0; j < N; ++j) {
      const double t = -Kp + 2.0 * Kp * (j + 0.5) / N;
      const Profile p = profile(s, t, k);
      g.s.push_back(s);
      g.t.push_back(t);
      g.R.push_back(p.R);
      g.z.push_back(p.z);
    }
  }
  return cache.emplace(k.k(), std::move(g)).first->second;
}

}  // namespace

double radius_R(double s, double t, const Modulus& k) {
  const SnCnDn a = k.sncndn(s);
  const SnCnDn b = elliptic::jacobi_sncndn(t, k.k_prime());
  return k.k_prime() * b.cn / (k.k() * a.cn + a.dn * b.dn);
}

double height_z(double s, double t, const Modulus& k) {
  const SnCnDn a = k.sncndn(s);
  const SnCnDn b = elliptic::jacobi_sncndn(t, k.k_prime());
  return k.k() * k.k_prime() * a.sn * b.sn / (k.k() * a.cn + a.dn * b.dn);
}

double radius_R_sumform(double s, double t, const Modulus& k) {
  const SnCnDn a = k.sncndn(s);
  const auto dn_it = elliptic::jacobi_imag(elliptic::JacobiFn::dn, t, k.k());
  const auto cn_it = elliptic::jacobi_imag(elliptic::JacobiFn::cn, t, k.k());
  const double inv =
      a.dn * dn_it.value / k.k_prime() + k.k() * a.cn * cn_it.value / k.k_prime();
  return 1.0 / inv;
}

CartesianPoint to_cartesian(const FlatRingCoords& c) {
  const Profile p = profile(c.s, c.t, c.modulus);
  return {p.R * std::cos(c.phi), p.R * std::sin(c.phi), p.z};
}

FlatRingCoords from_cartesian(const CartesianPoint& p, const Modulus& k) {
  const double R0 = p.cyl_r(), z0 = p.z;
  if (R0 < 1e-10)
    throw std::domain_error("from_cartesian: point on the z-axis (chart degenerates)");
  const double b = b_param(k.k());
  if (std::abs(z0) < 1e-10 && (R0 < b + 1e-10 || R0 > 1.0 / b - 1e-10))
    throw std::domain_error("from_cartesian: point on a cut disk of the chart");
  const double phi = std::atan2(p.y, p.x);
  const double K = k.big_k(), Kp = k.big_k_prime();
  const double scale = std::max({1.0, R0, std::abs(z0)});

  const StartGrid& grid = start_grid(k);
  // rank starts by (R,z) distance
  std::vector<int> order(grid.s.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  const auto dist2 = [&](int i) {
    const double dr = grid.R[i] - R0, dz = grid.z[i] - z0;
    return dr * dr + dz * dz;
  };
  std::partial_sort(order.begin(), order.begin() + 8, order.end(),
                    [&](int i, int j) { return dist2(i) < dist2(j); });

  for (int attempt = 0; attempt < 8; ++attempt) {
    double s = grid.s[order[attempt]], t = grid.t[order[attempt]];
    double fr = radius_R(s, t, k) - R0, fz = height_z(s, t, k) - z0;
    double res = std::hypot(fr, fz);
    for (int iter = 0; iter < 80; ++iter) {
      if (res < 1e-12 * scale) {
        const double eps = 1e-14;
        s = std::clamp(s, eps, 2.0 * K - eps);
        t = std::clamp(t, -Kp + eps, Kp - eps);
        return FlatRingCoords(s, t, phi, k);
      }
      const Profile pr = profile(s, t, k);
      const double det = pr.R_s * pr.z_t - pr.R_t * pr.z_s;
      if (std::abs(det) < 1e-300) break;
      double ds = -(fr * pr.z_t - fz * pr.R_t) / det;
      double dt = -(pr.R_s * fz - pr.z_s * fr) / det;
      // damped update: halve on overshoot
      double step = 1.0;
      for (int halve = 0; halve < 25; ++halve) {
        double sn = std::clamp(s + step * ds, 1e-9, 2.0 * K - 1e-9);
        double tn = std::clamp(t + step * dt, -Kp + 1e-9, Kp - 1e-9);
        const double gr = radius_R(sn, tn, k) - R0, gz = height_z(sn, tn, k) - z0;
        const double rn = std::hypot(gr, gz);
        if (rn < res || step < 1e-6) {
          s = sn;
          t = tn;
          fr = gr;
          fz = gz;
          res = rn;
          break;
        }
        step *= 0.5;
      }
    }
  }
  throw ConvergenceError("from_cartesian: Newton iteration did not converge");
}

double b_param(double k) {
  if (!(k > 0.0 && k < 1.0)) throw std::domain_error("b_param: k in (0,1) required");
  const double form1 = (1.0 - k) / std::sqrt((1.0 - k) * (1.0 + k));
  const double form2 = std::sqrt((1.0 - k) / (1.0 + k));
  if (std::abs(form1 - form2) > 1e-14 * form2)
    throw std::logic_error("b_param: printed forms disagree");
  return form2;
}

namespace {

std::array<double, 3> omega_terms(const CartesianPoint& p, const PeanutRegion& region) {
  const Modulus& k = region.modulus;
  if (std::abs(region.s0 - k.big_k()) < 1e-10)
    throw std::domain_error("omega_surface: undefined at s0 = K (cn(K,k) = 0)");
  const SnCnDn a = k.sncndn(region.s0);
  const double r2 = p.x * p.x + p.y * p.y + p.z * p.z;
  const double kk = k.k();
  return {kk * kk * (r2 + 1.0) * (r2 + 1.0) / (a.dn * a.dn),
          -(r2 - 1.0) * (r2 - 1.0) / (a.cn * a.cn), 4.0 * p.z * p.z / (a.sn * a.sn)};
}

}  // namespace

double omega_surface(const CartesianPoint& p, const PeanutRegion& region) {
  const auto t = omega_terms(p, region);
  return t[0] + t[1] + t[2];
}

double omega_surface_scaled(const CartesianPoint& p, const PeanutRegion& region) {
  const auto t = omega_terms(p, region);
  const double scale = std::max({std::abs(t[0]), std::abs(t[1]), std::abs(t[2]), 1e-300});
  return (t[0] + t[1] + t[2]) / scale;
}

CartesianPoint invert_sphere(const CartesianPoint& p) {
  const double n2 = p.x * p.x + p.y * p.y + p.z * p.z;
  if (n2 < 1e-300) throw std::domain_error("invert_sphere: origin has no image");
  return {p.x / n2, p.y / n2, p.z / n2};
}

Classification region_classify(const CartesianPoint& p, const PeanutRegion& region) {
  const double K = region.modulus.big_k();
  const double nrm = p.norm();
  if (std::abs(region.s0 - K) < 1e-10) {
    if (std::abs(nrm - 1.0) < 1e-8) return Classification::boundary;
    return nrm < 1.0 ? Classification::interior : Classification::exterior;
  }
  const double om = omega_surface_scaled(p, region);
  const bool in_ball = nrm < 1.0;
  if (region.s0 < K) {
    // D2 = B intersect {Omega < 0}; the boundary is the Omega = 0 sheet inside B
    if (std::abs(om) < 1e-8 && nrm <= 1.0 + 1e-8) return Classification::boundary;
    return (in_ball && om < 0.0) ? Classification::interior : Classification::exterior;
  }
  // K < s0 < 2K: D2 = B union {Omega > 0}; the boundary sheet lies outside B
  if (std::abs(om) < 1e-8 && nrm >= 1.0 - 1e-8) return Classification::boundary;
  return (in_ball || om > 0.0) ? Classification::interior : Classification::exterior;
}

double scale_h(double s, double t, const Modulus& k) {
  const SnCnDn a = k.sncndn(s);
  const SnCnDn b = elliptic::jacobi_sncndn(t, k.k_prime());
  const double sc = b.sn / b.cn;
  return k.k() * radius_R(s, t, k) * std::sqrt(a.sn * a.sn + sc * sc);
}

SurfaceMesh mesh_peanut(const PeanutRegion& region, int n_t, int n_phi) {
  if (n_t < 2 || n_phi < 3)
    throw std::invalid_argument("mesh_peanut: need n_t >= 2 and n_phi >= 3");
  const Modulus& k = region.modulus;
  const double Kp = k.big_k_prime();
  SurfaceMesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(n_t) * n_phi + 2);
  for (int i = 0; i < n_t; ++i) {
    const double t = -Kp + 2.0 * Kp * (i + 1.0) / (n_t + 1.0);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = -M_PI + 2.0 * M_PI * j / n_phi;
      const CartesianPoint p = to_cartesian(FlatRingCoords(region.s0, t, phi, k));
      mesh.vertices.push_back({p.x, p.y, p.z});
      mesh.tphi.push_back({t, phi});
    }
  }
  for (int i = 0; i + 1 < n_t; ++i)
    for (int j = 0; j < n_phi; ++j) {
      const int jn = (j + 1) % n_phi;
      mesh.quads.push_back(
          {i * n_phi + j, i * n_phi + jn, (i + 1) * n_phi + jn, (i + 1) * n_phi + j});
    }
  // apex points on the z-axis: t -> -K' (z < 0) and t -> +K' (z > 0)
  const SnCnDn a = k.sncndn(region.s0);
  const double z_apex = k.k_prime() * a.sn / (a.cn + a.dn);
  const int south = static_cast<int>(mesh.vertices.size());
  mesh.vertices.push_back({0.0, 0.0, -z_apex});
  mesh.tphi.push_back({-Kp, 0.0});
  const int north = south + 1;
  mesh.vertices.push_back({0.0, 0.0, z_apex});
  mesh.tphi.push_back({Kp, 0.0});
  for (int j = 0; j < n_phi; ++j) {
    const int jn = (j + 1) % n_phi;
    mesh.triangles.push_back({south, jn, j});
    mesh.triangles.push_back({north, (n_t - 1) * n_phi + j, (n_t - 1) * n_phi + jn});
  }
  return mesh;
}

double mesh_area(const SurfaceMesh& mesh) {
  const auto tri_area = [&](int i, int j, int l) {
    const auto &A = mesh.vertices[i], &B = mesh.vertices[j], &C = mesh.vertices[l];
    const double ux = B[0] - A[0], uy = B[1] - A[1], uz = B[2] - A[2];
    const double vx = C[0] - A[0], vy = C[1] - A[1], vz = C[2] - A[2];
    const double cx = uy * vz - uz * vy, cy = uz * vx - ux * vz, cz = ux * vy - uy * vx;
    return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
  };
  double area = 0.0;
  for (const auto& q : mesh.quads)
    area += tri_area(q[0], q[1], q[2]) + tri_area(q[0], q[2], q[3]);
  for (const auto& t : mesh.triangles) area += tri_area(t[0], t[1], t[2]);
  return area;
}

void write_obj(std::ostream& os, const SurfaceMesh& mesh) {
  os.precision(17);
  for (const auto& v : mesh.vertices) os << "v " << v[0] << " " << v[1] << " " << v[2] << "\n";
  for (const auto& q : mesh.quads)
    os << "f " << q[0] + 1 << " " << q[1] + 1 << " " << q[2] + 1 << " " << q[3] + 1 << "\n";
  for (const auto& t : mesh.triangles)
    os << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
}

void write_mesh_csv(std::ostream& os, const SurfaceMesh& mesh, const PeanutRegion& region) {
  os.precision(17);
  os << "s0,t,phi,x,y,z\n";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    os << region.s0 << "," << mesh.tphi[i][0] << "," << mesh.tphi[i][1] << ","
       << mesh.vertices[i][0] << "," << mesh.vertices[i][1] << "," << mesh.vertices[i][2]
       << "\n";
}

std::vector<Polyline> coordinate_lines(const Modulus& k, const std::vector<double>& s_values,
                                       const std::vector<double>& t_values, int samples) {
  if (samples < 2) throw std::invalid_argument("coordinate_lines: samples >= 2 required");
  const double K = k.big_k(), Kp = k.big_k_prime();
  std::vector<Polyline> lines;
  for (double s : s_values) {
    Polyline line;
    line.label = "s=" + std::to_string(s);
    for (int i = 0; i < samples; ++i) {
      const double t = -Kp + 2.0 * Kp * (i + 0.5) / samples;
      line.rz.push_back({radius_R(s, t, k), height_z(s, t, k)});
    }
    lines.push_back(std::move(line));
  }
  for (double t : t_values) {
    Polyline line;
    line.label = "t=" + std::to_string(t);
    for (int i = 0; i < samples; ++i) {
      const double s = 2.0 * K * (i + 0.5) / samples;
      line.rz.push_back({radius_R(s, t, k), height_z(s, t, k)});
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

void write_lines_csv(std::ostream& os, const std::vector<Polyline>& lines) {
  os.precision(17);
  os << "line,index,R,z\n";
  for (const auto& line : lines)
    for (std::size_t i = 0; i < line.rz.size(); ++i)
      os << line.label << "," << i << "," << line.rz[i][0] << "," << line.rz[i][1] << "\n";
}

}  // namespace peanut::flatring
