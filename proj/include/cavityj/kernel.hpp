#pragma once

// Spectral kernel kappa(omega) = P0 Delta rho(omega) / omega, stored as a quadrature rule:
// int kappa(w) F(w) dw = sum_i weight_i F(omega_i).

#include <functional>
#include <string>
#include <vector>

#include "cavityj/fp_cavity.hpp"
#include "cavityj/surface_cavity.hpp"
#include "cavityj/units.hpp"

namespace cavityj {

struct Mode {
  double omega;  // Omega_lambda, eV
  double g2;     // |g_lambda|^2
  double g2_longitudinal = 0.0;
};

class ModeSet {
 public:
  ModeSet() = default;
  explicit ModeSet(std::vector<Mode> modes);
  const std::vector<Mode>& modes() const { return modes_; }
  std::size_t size() const { return modes_.size(); }
  double sum_g2() const;
  double sum_omega_g2() const;
  double sum_omega_g2_longitudinal() const;

 private:
  std::vector<Mode> modes_;
};

enum class KernelKind { delta_comb, fabry_perot, surface, tabulated, composite };
enum class SurfaceModes { surface, bulk, both };

SurfaceModes parse_surface_modes(const std::string& s);

// Gaussian regulator g_eta(omega) = exp(-(eta omega)^2); eta = 0 gives 1.
double regulator(double omega, double eta);

class DeltaPdos {
 public:
  static DeltaPdos zero();
  static DeltaPdos delta_comb(const ModeSet& modes, double p0rho0 = 0.0);
  // rho - rho0 = rho0 omega*^3 w delta(omega - omega*).
  static DeltaPdos single_delta(double omega_star, double weight, double p0rho0);
  // Exact to g_eta < 1e-18, built for regulators eta >= eta_min.
  static DeltaPdos fabry_perot(const FabryPerotGeometry& g, double bond_length, double eta_min);
  // Bulk part tabulated on bulk_grid; unused when modes == surface.
  static DeltaPdos surface(const SurfaceCavityGeometry& g, double bond_length, SurfaceModes modes,
                           const EnergyGrid& bulk_grid = EnergyGrid(), int threads = 1);
  // Delta rho / rho0 in eV^2 on a grid, trapezoid rule.
  static DeltaPdos tabulated(const EnergyGrid& grid, const std::vector<double>& delta_rho,
                             double bond_length);

  DeltaPdos operator+(const DeltaPdos& other) const;

  KernelKind kind() const { return kind_; }
  const std::vector<double>& omega() const { return omega_; }
  const std::vector<double>& weight() const { return weight_; }
  std::size_t size() const { return omega_.size(); }
  double p0rho0() const { return p0rho0_; }
  // Smallest eta for which the rule is complete; 0 when no regulator is needed.
  double eta_min() const { return eta_min_; }
  bool requires_regularization() const { return eta_min_ > 0.0; }
  // Omega*: omega_c (FP), omega_inf (surface), the mode energy (single mode) or the
  // |weight|-weighted mean frequency otherwise.
  double characteristic_frequency() const { return omega_star_; }

  // sum_i w_i g_eta(omega_i) F(omega_i), compensated.
  double integrate(const std::function<double(double)>& F, double eta) const;

 private:
  KernelKind kind_ = KernelKind::tabulated;
  std::vector<double> omega_;
  std::vector<double> weight_;
  double p0rho0_ = 0.0;
  double eta_min_ = 0.0;
  double omega_star_ = 0.0;

  void set_mean_frequency();
};

}  // namespace cavityj
