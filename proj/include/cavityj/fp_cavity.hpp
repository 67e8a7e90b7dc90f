#pragma once

// Ideal two-mirror Fabry-Perot cavity. PDOS values are rho/rho0 in eV^2, so free space
// is omega^2.

namespace cavityj {

struct FabryPerotGeometry {
  double mirror_distance;  // d, nm
  double probe_height;     // z, nm, 0 < z < d

  FabryPerotGeometry(double d, double z);
  static FabryPerotGeometry midplane(double d) { return FabryPerotGeometry(d, 0.5 * d); }

  double omega_c() const;
  // Perfect-mirror model tagged invalid once hbar*omega_c exceeds this energy.
  static constexpr double kValidityLimitEv = 12.0;
  bool outside_model_validity() const { return omega_c() > kValidityLimitEv; }
};

// omega(n, k_par) = sqrt((n omega_c)^2 + (hbar c k_par)^2), n >= 1, k_par in 1/nm.
double fp_dispersion(const FabryPerotGeometry& g, int branch_n, double k_par);

// In-plane projected PDOS,
// (3/2) omega_c omega sum_{n <= omega/omega_c} [1 + (n omega_c/omega)^2] sin^2(n pi z/d).
double fp_pdos_parallel(const FabryPerotGeometry& g, double omega);

// Out-of-plane projected PDOS,
// 3 omega_c omega [1/2 + sum_{n <= omega/omega_c} (1 - (n omega_c/omega)^2) cos^2(n pi z/d)].
double fp_pdos_perp(const FabryPerotGeometry& g, double omega);

// In-plane PDOS minus free space.
double fp_delta_pdos(const FabryPerotGeometry& g, double omega);

// Coefficients of the in-plane PDOS on (n omega_c, (n+1) omega_c):
// rho/rho0 = (3/2) omega_c (A omega + B omega_c^2 / omega).
struct FpBranchSums {
  double A;
  double B;
};
FpBranchSums fp_branch_sums(const FabryPerotGeometry& g, int n_max);

}  // namespace cavityj
