#pragma once

// Unit convention: energies in eV, lengths in nm, hbar*omega written as omega.

#include <numbers>
#include <vector>

namespace cavityj {

struct PhysicalConstants {
  static constexpr double hbar_c = 197.3269804;            // eV nm
  static constexpr double coulomb_const_e2 = 1.43996454;   // k_e e^2, eV nm
  static constexpr double fine_structure = 1.0 / 137.035999;
};

inline constexpr double kHbarC = PhysicalConstants::hbar_c;
inline constexpr double kCoulombE2 = PhysicalConstants::coulomb_const_e2;
inline constexpr double kAlpha = PhysicalConstants::fine_structure;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kEvPerThz = 4.13567e-3;

inline constexpr double thz_to_ev(double f_thz) { return kEvPerThz * f_thz; }
inline constexpr double um_to_nm(double x) { return 1e3 * x; }
inline constexpr double m_to_nm(double x) { return 1e9 * x; }

// Wavevector (1/nm) of a photon with energy omega (eV).
inline constexpr double wavevector(double omega) { return omega / kHbarC; }

// P0*rho0 in eV^-2 for a bond of length a (nm). Zero length gives zero.
double p0_rho0(double bond_length);

// hbar*omega_c = pi*hbar*c/d for mirror distance d (nm).
double fundamental_fp_energy(double mirror_distance);

enum class Spacing { linear, logarithmic };

class EnergyGrid {
 public:
  EnergyGrid() = default;
  EnergyGrid(std::vector<double> points, Spacing spacing);

  static EnergyGrid linear(double lo, double hi, int n);
  static EnergyGrid logarithmic(double lo, double hi, int n);

  const std::vector<double>& points() const { return points_; }
  Spacing spacing() const { return spacing_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }

 private:
  std::vector<double> points_;
  Spacing spacing_ = Spacing::linear;
};

}  // namespace cavityj
