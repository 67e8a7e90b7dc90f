#pragma once

// Linear spin-wave theory of the two-sublattice square-lattice antiferromagnet with nearest (J)
// and next-nearest (K) neighbor exchange. Momenta in units of 1/lattice_constant.

#include <array>
#include <string>
#include <vector>

#include "cavityj/units.hpp"

namespace cavityj {

struct KPoint {
  double kx;
  double ky;
};

struct SpinWaveModel {
  double J;
  double K = 0.0;
  double S = 0.5;
  double lattice_constant = 1.0;

  // Throws DomainError unless J > 0, S > 0 and h0^2 >= hx^2 on a 64 x 64 zone grid.
  SpinWaveModel(double J, double K = 0.0, double S = 0.5, double lattice_constant = 1.0);
};

struct MagnonHamiltonian {
  double h0;
  double hx;
};
MagnonHamiltonian magnon_hamiltonian(const SpinWaveModel& m, KPoint k);

// Psi = U Phi with U = [[cosh(theta/2), sinh(theta/2)], [sinh(theta/2), cosh(theta/2)]],
// theta = -artanh(hx/h0).
struct BogoliubovFactors {
  double U11, U12, U21, U22;
  double theta;
  double energy;
};
BogoliubovFactors bogoliubov(const SpinWaveModel& m, KPoint k);

double magnon_dispersion(const SpinWaveModel& m, KPoint k);

// |off-diagonal| of U^T H U relative to the magnon energy (absolute when the energy is 0).
double diagonalization_residual(const SpinWaveModel& m, KPoint k);

enum class Broadening { lorentzian, gaussian };
Broadening parse_broadening(const std::string& s);

// Unit-area line shape; width is the HWHM (Lorentzian) or the standard deviation (Gaussian).
double line_shape(Broadening b, double x, double width);

struct Spectrum {
  EnergyGrid omega_grid;
  std::vector<double> intensity;
  double linewidth = 0.0;
};

// Peak position by parabolic refinement around the grid maximum.
double spectrum_peak(const Spectrum& s);

enum class SpinComponent { plus_minus, minus_plus };

// Spectral weight 2S [U12 U11 + U11 U11 + U12 U21 + U11 U21] of the delta peak at eps_q.
double structure_factor_weight(const SpinWaveModel& m, KPoint q,
                               SpinComponent c = SpinComponent::plus_minus);

Spectrum structure_factor_transverse(const SpinWaveModel& m, KPoint q, const EnergyGrid& grid,
                                     double linewidth, Broadening b = Broadening::lorentzian,
                                     SpinComponent c = SpinComponent::plus_minus);

// Pair-creation vertex r_x = sinh(theta) f0 + cosh(theta) fx for in-plane polarizations.
double raman_vertex(const SpinWaveModel& m, std::array<double, 2> e_in, std::array<double, 2> e_out,
                    KPoint k);

struct RamanOptions {
  int grid_n = 256;
  Broadening broadening = Broadening::lorentzian;
  int threads = 1;
};

// P(w) = sum_k |r_x|^2 L(w - 2 eps_k) over an N x N Monkhorst-Pack grid, divided by N^2.
Spectrum raman_spectrum(const SpinWaveModel& m, std::array<double, 2> e_in,
                        std::array<double, 2> e_out, const EnergyGrid& grid, double linewidth,
                        const RamanOptions& options = {});

// Path such as "G,M,X,G" through labelled points G (0,0), M (pi,0), X (pi/2,pi/2), Y (0,pi).
struct PathPoint {
  KPoint k;
  double distance;    // cumulative path length
  std::string label;  // high-symmetry label or empty
};
KPoint high_symmetry_point(const std::string& label);
// n points per segment; endpoints included when midpoints == false, otherwise the segment
// midpoints (j + 1/2)/n are used.
std::vector<PathPoint> sample_path(const std::string& path, int n_per_segment, bool midpoints);

}  // namespace cavityj
