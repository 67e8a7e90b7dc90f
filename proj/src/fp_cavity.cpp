#include "cavityj/fp_cavity.hpp"

#include <cmath>

#include "cavityj/errors.hpp"
#include "cavityj/units.hpp"

namespace cavityj {

FabryPerotGeometry::FabryPerotGeometry(double d, double z) : mirror_distance(d), probe_height(z) {
  if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("FabryPerotGeometry: d must be positive");
  if (!(z > 0.0) || !(z < d)) throw DomainError("FabryPerotGeometry: need 0 < z < d");
}

double FabryPerotGeometry::omega_c() const { return fundamental_fp_energy(mirror_distance); }

double fp_dispersion(const FabryPerotGeometry& g, int branch_n, double k_par) {
  if (branch_n < 1) throw DomainError("fp_dispersion: branch index must be >= 1");
  if (!(k_par >= 0.0)) throw DomainError("fp_dispersion: k_par must be >= 0");
  const double a = branch_n * g.omega_c();
  const double b = kHbarC * k_par;
  return std::hypot(a, b);
}

namespace {

int branch_count(double omega, double wc) {
  if (!(omega >= 0.0)) throw DomainError("fp pdos: omega must be >= 0");
  return static_cast<int>(std::floor(omega / wc));
}

double sin_sq(int n, const FabryPerotGeometry& g) {
  const double s = std::sin(n * kPi * g.probe_height / g.mirror_distance);
  return s * s;
}

}  // namespace

FpBranchSums fp_branch_sums(const FabryPerotGeometry& g, int n_max) {
  double A = 0.0, B = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const double s = sin_sq(n, g);
    A += s;
    B += static_cast<double>(n) * n * s;
  }
  return {A, B};
}

double fp_pdos_parallel(const FabryPerotGeometry& g, double omega) {
  const double wc = g.omega_c();
  const int nmax = branch_count(omega, wc);
  if (nmax < 1) return 0.0;
  double sum = 0.0;
  for (int n = 1; n <= nmax; ++n) {
    const double r = n * wc / omega;
    sum += (1.0 + r * r) * sin_sq(n, g);
  }
  return 1.5 * wc * omega * sum;
}

double fp_pdos_perp(const FabryPerotGeometry& g, double omega) {
  const double wc = g.omega_c();
  const int nmax = branch_count(omega, wc);
  double sum = 0.5;
  for (int n = 1; n <= nmax; ++n) {
    const double r = n * wc / omega;
    const double c = std::cos(n * kPi * g.probe_height / g.mirror_distance);
    sum += (1.0 - r * r) * c * c;
  }
  return 3.0 * wc * omega * sum;
}

double fp_delta_pdos(const FabryPerotGeometry& g, double omega) {
  return fp_pdos_parallel(g, omega) - omega * omega;
}

}  // namespace cavityj
