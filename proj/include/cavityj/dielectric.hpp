#pragma once

#include <string>

namespace cavityj {

enum class DielectricKind { lorentzian, drude };

// Lossless single-oscillator substrate,
// eps(w) = eps_inf (1 + (w_TO^2 - w_LO^2) / (w^2 - w_TO^2)).
// Drude metals use w_TO = 0, eps_inf = 1 and w_LO = plasma energy.
class DielectricModel {
 public:
  DielectricModel(double eps_inf, double omega_TO, double omega_LO);

  static DielectricModel lorentzian(double eps_inf, double omega_TO, double omega_LO);
  static DielectricModel drude(double plasma_energy);

  DielectricKind kind() const { return kind_; }
  double eps_inf() const { return eps_inf_; }
  double omega_TO() const { return omega_TO_; }
  double omega_LO() const { return omega_LO_; }

 private:
  DielectricKind kind_;
  double eps_inf_;
  double omega_TO_;
  double omega_LO_;
};

double epsilon(const DielectricModel& m, double omega);

// d eps / d omega, closed form.
double epsilon_derivative(const DielectricModel& m, double omega);

// Static limit eps(0); +infinity for a Drude metal.
double epsilon_static(const DielectricModel& m);

// V(w) = eps + (w/2) d eps/d w.
double hopfield_factor(const DielectricModel& m, double omega);

// (eps(0) - 1) / (eps(0) + 1); exactly 1 for a Drude metal.
double image_charge_factor(const DielectricModel& m);

// Zero crossing of eps above the pole.
double epsilon_zero_frequency(const DielectricModel& m);

// Preset JSON: kind, eps_inf, omega_TO_eV | omega_TO_THz, omega_LO_eV | omega_LO_THz | plasma_eV.
DielectricModel load_dielectric_preset(const std::string& path);
DielectricModel parse_dielectric_json(const std::string& text);

}  // namespace cavityj
