#include <doctest.h>

#include <cmath>
#include <string>

#include "cavityj/dielectric.hpp"
#include "cavityj/errors.hpp"
#include "cavityj/surface_cavity.hpp"
#include "cavityj/units.hpp"
#include "oracles.hpp"

using namespace cavityj;

TEST_CASE("epsilon matches the oscillator form") {
  const auto m = DielectricModel::lorentzian(2.5, 0.1, 0.3);
  for (double w : {0.0, 0.05, 0.15, 0.29, 0.31, 1.0, 10.0})
    CHECK(epsilon(m, w) == doctest::Approx(oracle::lorentz_eps(2.5, 0.1, 0.3, w)).epsilon(1e-13));
  const auto au = DielectricModel::drude(9.45);
  CHECK(au.kind() == DielectricKind::drude);
  CHECK(epsilon(au, 4.725) == doctest::Approx(1.0 - 4.0));
  CHECK_THROWS_AS(epsilon(m, 0.1), NumericalError);
}

TEST_CASE("derivative agrees with a central difference") {
  const auto m = DielectricModel::lorentzian(1.7, 0.2, 0.5);
  for (double w : {0.05, 0.3, 0.45, 0.9}) {
    const double h = 1e-6 * w;
    const double fd = (epsilon(m, w + h) - epsilon(m, w - h)) / (2 * h);
    CHECK(epsilon_derivative(m, w) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("sign structure and high-frequency limit") {
  const auto m = DielectricModel::lorentzian(3.0, 0.2, 0.6);
  CHECK(epsilon_zero_frequency(m) == doctest::Approx(0.6));
  CHECK(std::abs(epsilon(m, 0.6)) < 1e-12);
  for (double w = 0.21; w < 0.6; w += 0.03) CHECK(epsilon(m, w) < 0.0);
  for (double w = 0.61; w < 5.0; w += 0.3) CHECK(epsilon(m, w) > 0.0);
  double prev = epsilon(m, 0.61);
  for (double w = 0.7; w < 50.0; w *= 1.3) {
    const double e = epsilon(m, w);
    CHECK(e > prev);
    CHECK(e < 3.0);
    prev = e;
  }
}

TEST_CASE("Hopfield factor") {
  const auto m = DielectricModel::lorentzian(2.0, 0.2, 0.5);
  for (double w : {0.25, 0.4, 0.55, 2.0}) {
    const double expect = epsilon(m, w) + 0.5 * w * epsilon_derivative(m, w);
    CHECK(hopfield_factor(m, w) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(hopfield_factor(m, w) >= epsilon(m, w));
  }
  const auto au = DielectricModel::drude(9.45);
  for (double w : {0.5, 3.0, 20.0}) CHECK(hopfield_factor(au, w) == doctest::Approx(1.0));
  CHECK_THROWS_AS(hopfield_factor(m, 0.1), DomainError);
}

TEST_CASE("static limit and image-charge factor") {
  CHECK(image_charge_factor(DielectricModel::drude(9.45)) == 1.0);
  CHECK(std::isinf(epsilon_static(DielectricModel::drude(9.45))));
  // eps(0) = 16.36 from eps_inf = 1 and (w_LO/w_TO)^2 = 16.36.
  const auto m = DielectricModel::lorentzian(1.0, 1.0, std::sqrt(16.36));
  CHECK(epsilon_static(m) == doctest::Approx(16.36));
  CHECK(image_charge_factor(m) == doctest::Approx(0.8848).epsilon(1e-4));
}

TEST_CASE("surface limit frequency examples") {
  CHECK(surface_limit_frequency(DielectricModel::drude(9.45)) ==
        doctest::Approx(9.45 / std::sqrt(2.0)).epsilon(1e-14));
  const auto sto = DielectricModel::lorentzian(1.0, thz_to_ev(7.92), thz_to_ev(32.04));
  CHECK(surface_limit_frequency(sto) / thz_to_ev(1.0) == doctest::Approx(23.34).epsilon(1e-3));
  CHECK(surface_limit_frequency(sto) == doctest::Approx(0.0965).epsilon(2e-3));
}

TEST_CASE("invalid models are rejected") {
  CHECK_THROWS_AS(DielectricModel(0.5, 0.1, 0.2), DomainError);
  CHECK_THROWS_AS(DielectricModel(1.0, 0.3, 0.2), DomainError);
  CHECK_THROWS_AS(DielectricModel(1.0, -0.1, 0.2), DomainError);
  CHECK_THROWS_AS(DielectricModel::drude(0.0), DomainError);
}

TEST_CASE("presets and JSON parsing") {
  const std::string dir = CAVITYJ_PRESET_DIR;
  const auto au = load_dielectric_preset(dir + "/gold.json");
  CHECK(au.kind() == DielectricKind::drude);
  CHECK(au.omega_LO() == 9.45);
  const auto sto = load_dielectric_preset(dir + "/srtio3.json");
  CHECK(sto.eps_inf() == 1.0);
  CHECK(sto.omega_TO() == doctest::Approx(thz_to_ev(7.92)));
  CHECK(sto.omega_LO() == doctest::Approx(thz_to_ev(32.04)));

  CHECK(parse_dielectric_json(R"({"kind":"lorentzian","omega_TO_eV":0.1,"omega_LO_eV":0.2})")
            .eps_inf() == 1.0);
  CHECK_THROWS_AS(parse_dielectric_json("{"), ConfigError);
  CHECK_THROWS_AS(parse_dielectric_json(R"({"kind":"lorentzian","omega_TO_eV":0.1})"), ConfigError);
  CHECK_THROWS_AS(parse_dielectric_json(R"({"kind":"drude","plasma_eV":9,"eps_inf":2})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_dielectric_json(R"({"kind":"drude","plasma_eV":9,"gamma_eV":0.1})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_dielectric_json(R"({"kind":"lorentzian","omega_TO_eV":0.3,"omega_LO_eV":0.2})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_dielectric_json(R"({"kind":"debye"})"), ConfigError);
  CHECK_THROWS_AS(load_dielectric_preset(dir + "/missing.json"), ConfigError);
}
