#include "cavityj/dielectric.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cavityj/errors.hpp"
#include "cavityj/units.hpp"

namespace cavityj {

DielectricModel::DielectricModel(double eps_inf, double omega_TO, double omega_LO)
    : kind_(omega_TO == 0.0 && eps_inf == 1.0 ? DielectricKind::drude : DielectricKind::lorentzian),
      eps_inf_(eps_inf),
      omega_TO_(omega_TO),
      omega_LO_(omega_LO) {
  if (!std::isfinite(eps_inf) || eps_inf < 1.0)
    throw DomainError("DielectricModel: eps_inf must be >= 1");
  if (!(omega_TO >= 0.0) || !(omega_LO > omega_TO) || !std::isfinite(omega_LO))
    throw DomainError("DielectricModel: need 0 <= omega_TO < omega_LO");
}

DielectricModel DielectricModel::lorentzian(double eps_inf, double omega_TO, double omega_LO) {
  return DielectricModel(eps_inf, omega_TO, omega_LO);
}

DielectricModel DielectricModel::drude(double plasma_energy) {
  return DielectricModel(1.0, 0.0, plasma_energy);
}

double epsilon(const DielectricModel& m, double omega) {
  if (!(omega >= 0.0)) throw DomainError("epsilon: omega must be >= 0");
  const double t2 = m.omega_TO() * m.omega_TO();
  const double l2 = m.omega_LO() * m.omega_LO();
  const double den = omega * omega - t2;
  if (den == 0.0) throw NumericalError("epsilon: pole at omega_TO");
  return m.eps_inf() * (1.0 + (t2 - l2) / den);
}

double epsilon_derivative(const DielectricModel& m, double omega) {
  const double t2 = m.omega_TO() * m.omega_TO();
  const double l2 = m.omega_LO() * m.omega_LO();
  const double den = omega * omega - t2;
  if (den == 0.0) throw NumericalError("epsilon_derivative: pole at omega_TO");
  return -2.0 * m.eps_inf() * omega * (t2 - l2) / (den * den);
}

double epsilon_static(const DielectricModel& m) {
  if (m.omega_TO() == 0.0) return std::numeric_limits<double>::infinity();
  const double r = m.omega_LO() / m.omega_TO();
  return m.eps_inf() * r * r;
}

double hopfield_factor(const DielectricModel& m, double omega) {
  if (!(omega > m.omega_TO())) throw DomainError("hopfield_factor: need omega > omega_TO");
  const double t2 = m.omega_TO() * m.omega_TO();
  const double l2 = m.omega_LO() * m.omega_LO();
  const double den = omega * omega - t2;
  return m.eps_inf() * (1.0 - t2 * (t2 - l2) / (den * den));
}

double image_charge_factor(const DielectricModel& m) {
  const double e0 = epsilon_static(m);
  if (std::isinf(e0)) return 1.0;
  return (e0 - 1.0) / (e0 + 1.0);
}

double epsilon_zero_frequency(const DielectricModel& m) {
  // eps = 0  <=>  w^2 = w_LO^2
  return m.omega_LO();
}

namespace {

double read_energy(const nlohmann::json& j, const std::string& stem, bool required) {
  if (j.contains(stem + "_eV")) return j.at(stem + "_eV").get<double>();
  if (j.contains(stem + "_THz")) return thz_to_ev(j.at(stem + "_THz").get<double>());
  if (required) throw ConfigError("dielectric preset: missing " + stem + "_eV or " + stem + "_THz");
  return std::numeric_limits<double>::quiet_NaN();
}

void reject_complex(const nlohmann::json& j) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& v = it.value();
    if (v.is_array() || v.is_object())
      throw ConfigError("dielectric preset: key '" + it.key() +
                        "' is not a real scalar; only lossless models are supported");
  }
  for (const char* k : {"gamma_eV", "damping_eV", "gamma_THz", "eps_imag"})
    if (j.contains(k)) throw ConfigError(std::string("dielectric preset: absorptive key '") + k +
                                         "' is not supported");
}

}  // namespace

DielectricModel parse_dielectric_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("dielectric preset: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("dielectric preset: expected a JSON object");
  reject_complex(j);
  const std::string kind = j.value("kind", std::string("lorentzian"));
  try {
    if (kind == "drude") {
      double wp = std::numeric_limits<double>::quiet_NaN();
      if (j.contains("plasma_eV")) wp = j.at("plasma_eV").get<double>();
      else wp = read_energy(j, "omega_LO", true);
      if (j.contains("eps_inf") && j.at("eps_inf").get<double>() != 1.0)
        throw ConfigError("dielectric preset: drude requires eps_inf = 1");
      return DielectricModel::drude(wp);
    }
    if (kind == "lorentzian") {
      const double eps_inf = j.value("eps_inf", 1.0);
      return DielectricModel::lorentzian(eps_inf, read_energy(j, "omega_TO", true),
                                         read_energy(j, "omega_LO", true));
    }
  } catch (const DomainError& e) {
    throw ConfigError(std::string("dielectric preset: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("dielectric preset: ") + e.what());
  }
  throw ConfigError("dielectric preset: unknown kind '" + kind + "'");
}

DielectricModel load_dielectric_preset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open substrate preset '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dielectric_json(ss.str());
}

}  // namespace cavityj
