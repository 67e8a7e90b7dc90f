#pragma once

// Cavity-dressed magnetic exchange of a half-filled Hubbard dimer in the dark-cavity limit.
// Ratios are J / J0 with J0 = 4 t^2 / U0 unless stated as J / J~ (J~ = 4 t^2 / U).

#include <array>
#include <string>
#include <vector>

#include "cavityj/dielectric.hpp"
#include "cavityj/kernel.hpp"

namespace cavityj {

struct HubbardBond {
  double t;            // hopping, eV
  double U0;           // bare on-site repulsion, eV
  double a;            // bond length, nm
  std::array<double, 2> direction{1.0, 0.0};

  HubbardBond(double t, double U0, double a, std::array<double, 2> direction = {1.0, 0.0});
  double J0() const { return 4.0 * t * t / U0; }
  // Strong-coupling validity warnings (t/U0 >= 0.25).
  std::vector<std::string> warnings() const;
};

enum class ScreeningMethod { none, image_charge, dipole_mode_sum };
std::string to_string(ScreeningMethod m);

struct ScreeningResult {
  double delta_U = 0.0;
  ScreeningMethod method = ScreeningMethod::none;
};

// Delta U = -eta_ic k_e e^2 (1/(2z) - 1/sqrt(4z^2 + a^2)).
ScreeningResult delta_u_image_charge(const HubbardBond& bond, const DielectricModel& substrate,
                                     double z);

// Delta U = -sum_q omega_q |g_{q,L}|^2 over quasi-static surface modes (dipole limit z >> a).
ScreeningResult delta_u_dipole_mode_sum(const HubbardBond& bond, const DielectricModel& substrate,
                                        double z);

// M(x) = int kappa(w) (exp(-w x / U) - 1) g_eta(w) dw.
double modification_function(const DeltaPdos& kernel, double x, double U, double eta);
// lim_{x -> inf} M(x) = -int kappa g_eta.
double modification_limit(const DeltaPdos& kernel, double eta);

// int_0^inf exp(-x) expm1(M(x)) dx, i.e. J/J~ - 1 at screened U.
double dynamical_integral(const DeltaPdos& kernel, double U, double eta, double tol_rel = 1e-10);

struct ExchangeOptions {
  bool bare_U_in_M = false;  // use U0 instead of U0 + Delta U inside M
  double tol_rel = 1e-10;
};

struct ExchangeResult {
  double J_over_J0 = 1.0;
  double contribution_dynamical = 1.0;  // screening off
  double contribution_screening = 1.0;  // kernel off
  double delta_U = 0.0;
  double theta = 0.0;
  double g_eff_sq = 0.0;
  // Deviations from unity, computed without cancellation.
  double delta_total = 0.0;
  double delta_dynamical = 0.0;
  double delta_screening = 0.0;
  std::vector<std::string> warnings;
};

ExchangeResult exchange_resummed(const HubbardBond& bond, const DeltaPdos& kernel,
                                 const ScreeningResult& screening, double eta,
                                 const ExchangeOptions& options = {});

// Coupled sum over mode occupations, J/J~ at U = U0. At most four modes.
double exchange_multinomial_oracle(const HubbardBond& bond, const ModeSet& modes, int k_max = -1);

// g~^2 = Omega*^-1 int P0 (rho - rho0) g_eta dw.
double effective_coupling_g2(const DeltaPdos& kernel, double omega_star, double eta);

// J/J~ = 1 / (1 + theta g~^2).
double exchange_perturbative(double g2, double theta);
double exchange_perturbative(const HubbardBond& bond, double g2, double omega_star);

// K^(n) = rho0^-1 int (w^n / w*^(n+3)) (rho - rho0) g_eta dw, n >= -1.
double single_mode_weight(const DeltaPdos& kernel, int n, double omega_star, double eta = 0.0);

// Single mode J/J~ = e^{-g} sum_n g^n / (n! (1 + n theta)) by independent routes.
double exchange_single_mode_closed_form(double g2, double theta);
double exchange_single_mode_series_small_g(double g2, double theta);
double exchange_single_mode_series_small_theta(double g2, double theta);
double exchange_single_mode_leading_theta(double g2, double theta);
double exchange_single_mode_quadrature(double g2, double theta);

// <e^M> under the measure exp(-x + alpha/(x + U eta)^2), alpha = P0 rho0 U^2.
double exchange_model_regularized(const HubbardBond& bond, const DeltaPdos& kernel, double eta,
                                  double U);

struct VariationalResult {
  double J_over_J0;    // maximum over s in [0, 1.5]
  double s_opt;
  double J_bound_s1;   // s = 1 lower bound, J / J0
  double derivative_residual;
  double delta_U;      // -1/2 sum omega |g_L|^2
};
VariationalResult variational_exchange(const HubbardBond& bond, const ModeSet& modes);

}  // namespace cavityj
