#pragma once

// Single vacuum/dielectric interface: surface polaritons (closed form) and bulk modes of a
// slab of height L_perp with metallic walls (transcendental interface equations).
// PDOS values are rho/rho0 in eV^2; wavevectors in 1/nm.

#include <functional>
#include <string>
#include <vector>

#include "cavityj/dielectric.hpp"

namespace cavityj {

struct SurfaceCavityGeometry {
  DielectricModel substrate;
  double probe_height;  // z, nm
  double slab_height;   // L_perp, nm

  static constexpr double kDefaultSlabHeightM = 10.0;

  SurfaceCavityGeometry(DielectricModel substrate, double z, double l_perp_nm = 1e10);
  // True when L_perp is below one metre, where bulk sums are usually not converged.
  bool slab_height_warning() const { return slab_height < 1e9; }
};

enum class ModeClass { propagating, evanescent, revanescent, surface };
enum class Polarization { TE, TM };

std::string to_string(ModeClass c);

// omega_inf = sqrt((eps_inf w_LO^2 + w_TO^2) / (1 + eps_inf)), where eps = -1.
double surface_limit_frequency(const DielectricModel& m);

// Lower polariton branch of the closed-form dispersion. The bound surface segment is
// q > surface_threshold_wavevector, where omega_q runs from omega_TO to omega_inf.
double surface_dispersion(const DielectricModel& m, double q);
double surface_threshold_wavevector(const DielectricModel& m);
double surface_dispersion_slope(const DielectricModel& m, double q);  // d omega / d q, eV nm

// Surface mode normalization N_S^2 (nm), Hopfield-weighted, per unit area.
double surface_normalization_sq(const DielectricModel& m, double q);

// Closed-form surface PDOS, zero outside (omega_TO, omega_inf).
double surface_pdos(const SurfaceCavityGeometry& g, double omega);

// Int d omega (rho_surf / rho0) / omega * F(omega), evaluated as a mode sum over q.
double surface_kernel_q_integral(const SurfaceCavityGeometry& g,
                                 const std::function<double(double)>& F, double tol_rel = 1e-12);

// Same integral by direct double-exponential quadrature in omega; for cross-checks.
double surface_kernel_omega_integral(const SurfaceCavityGeometry& g,
                                     const std::function<double(double)>& F,
                                     double tol_rel = 1e-12);

// Nodes and weights with sum_i w_i F(omega_i) = int (rho_surf/rho0)/omega F d omega.
struct QuadratureNodes {
  std::vector<double> omega;
  std::vector<double> weight;
};
QuadratureNodes surface_kernel_nodes(const SurfaceCavityGeometry& g, double tol_rel = 1e-13);

// ---- bulk modes ----------------------------------------------------------------------

// Dielectric response at one frequency.
struct MediumResponse {
  double eps;   // eps(omega)
  double deps;  // d eps / d omega, 1/eV
};
MediumResponse medium_response(const DielectricModel& m, double omega);

struct BulkRoot {
  ModeClass mode_class;
  Polarization polarization;
  double k_gt;       // |k_>| (vacuum side), 1/nm
  bool k_gt_imag;    // k_> = i k_gt
  double k_lt;       // |k_<| (substrate side)
  bool k_lt_imag;
  double k_par;      // in-plane momentum
  double dk_gt_domega;  // d|k_>|/d omega along the branch, 1/(nm eV)
  double residual;      // scaled residual of the interface equation
};

// All interface-equation roots at fixed omega, ordered by decreasing k_>^2 (propagating and
// revanescent first, then evanescent, then the surface root if present).
std::vector<BulkRoot> bulk_mode_roots(const SurfaceCavityGeometry& g, double omega,
                                      Polarization pol);
std::vector<BulkRoot> bulk_mode_roots(MediumResponse medium, double omega, double l_perp,
                                      Polarization pol);

// Bond-projected (in-plane, azimuth averaged) PDOS of all non-surface modes at height z.
double bulk_pdos(const SurfaceCavityGeometry& g, double omega);
double bulk_pdos(MediumResponse medium, double omega, double z, double l_perp);

// Contribution of a single root to bulk_pdos.
double bulk_root_pdos(const BulkRoot& r, MediumResponse medium, double omega, double z,
                      double l_perp);

// Re-evaluates the interface equation for a root; used as a post-condition check.
double bulk_root_residual(const BulkRoot& r, MediumResponse medium, double omega, double l_perp);

// d|k_>|/d omega by central differences of re-solved roots with one Richardson step.
double bulk_root_derivative_fd(const BulkRoot& r, const DielectricModel& m, double omega,
                               double l_perp, double rel_step = 1e-6);

struct BulkConvergence {
  double pdos;
  double pdos_doubled;
  double relative_change;
};
BulkConvergence bulk_pdos_convergence(const SurfaceCavityGeometry& g, double omega);

}  // namespace cavityj
