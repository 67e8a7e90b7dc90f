#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cavityj/errors.hpp"
#include "cavityj/spinwave.hpp"
#include "cavityj/units.hpp"
#include "oracles.hpp"

using namespace cavityj;

namespace {

const SpinWaveModel kNeel(0.1);

double oracle_energy(double J, double K, double S, double kx, double ky) {
  const double h0 = 4 * J * S - 4 * K * S + 2 * K * S * (std::cos(kx + ky) + std::cos(kx - ky));
  const double hx = 2 * J * S * (std::cos(kx) + std::cos(ky));
  return std::sqrt(h0 * h0 - hx * hx);
}

}  // namespace

TEST_CASE("dispersion at high-symmetry points") {
  CHECK(magnon_dispersion(kNeel, {0.0, 0.0}) == 0.0);
  CHECK(magnon_dispersion(kNeel, high_symmetry_point("M")) == doctest::Approx(0.2));
  CHECK(magnon_dispersion(kNeel, high_symmetry_point("X")) == doctest::Approx(0.2));
  for (double f = 0.0; f <= 1.0; f += 0.125) {
    const KPoint k{kPi - f * 0.5 * kPi, f * 0.5 * kPi};
    CHECK(magnon_dispersion(kNeel, k) == doctest::Approx(0.2).epsilon(1e-12));
  }
}

TEST_CASE("dispersion matches the closed form and its symmetries") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  const SpinWaveModel m(0.1, 0.01, 1.5);
  for (int i = 0; i < 200; ++i) {
    const double kx = u(rng), ky = u(rng);
    const double e = magnon_dispersion(m, {kx, ky});
    CHECK(e == doctest::Approx(oracle_energy(0.1, 0.01, 1.5, kx, ky)).epsilon(1e-12));
    for (KPoint p : {KPoint{ky, kx}, KPoint{-kx, ky}, KPoint{kx, -ky}, KPoint{-ky, kx},
                     KPoint{kx + kPi, ky + kPi}})
      CHECK(magnon_dispersion(m, p) == doctest::Approx(e).epsilon(1e-10).scale(1e-12));
  }
}

TEST_CASE("Bogoliubov factors are para-unitary and diagonalize") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (const SpinWaveModel& m : {kNeel, SpinWaveModel(0.1, 0.02, 0.5), SpinWaveModel(0.05, 0.0, 2.0)}) {
    for (int i = 0; i < 300; ++i) {
      const KPoint k{u(rng), u(rng)};
      const BogoliubovFactors b = bogoliubov(m, k);
      CHECK(std::abs(b.U11 * b.U11 - b.U12 * b.U12 - 1.0) < 1e-12 * b.U11 * b.U11);
      CHECK(b.U21 == b.U12);
      CHECK(b.U22 == b.U11);
      CHECK(diagonalization_residual(m, k) < 1e-10);
      // Rotated diagonal equals the magnon energy.
      const MagnonHamiltonian h = magnon_hamiltonian(m, k);
      const double diag = b.U11 * (h.h0 * b.U11 + h.hx * b.U21) + b.U21 * (h.hx * b.U11 + h.h0 * b.U21);
      CHECK(diag == doctest::Approx(b.energy).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(bogoliubov(kNeel, {0.0, 0.0}), NumericalError);
}

TEST_CASE("stability check") {
  CHECK_THROWS_AS(SpinWaveModel(0.1, 0.1), DomainError);
  CHECK_THROWS_AS(SpinWaveModel(-0.1), DomainError);
  CHECK_THROWS_AS(SpinWaveModel(0.1, 0.0, 0.0), DomainError);
  CHECK_NOTHROW(SpinWaveModel(0.1, 0.02));
}

TEST_CASE("line shapes have unit area") {
  for (Broadening b : {Broadening::lorentzian, Broadening::gaussian}) {
    const double w = 0.002;
    const double area = oracle::simpson([&](double x) { return line_shape(b, x, w); }, -2000 * w, 2000 * w, 400000);
    CHECK(area == doctest::Approx(1.0).epsilon(b == Broadening::gaussian ? 1e-10 : 1e-3));
  }
  CHECK(line_shape(Broadening::lorentzian, 0.002, 0.002) ==
        doctest::Approx(0.5 * line_shape(Broadening::lorentzian, 0.0, 0.002)));
  CHECK(parse_broadening("gaussian") == Broadening::gaussian);
  CHECK_THROWS_AS(parse_broadening("voigt"), ConfigError);
}

TEST_CASE("transverse structure factor") {
  const auto grid = EnergyGrid::linear(1e-4, 0.4, 4000);
  const auto path = sample_path("M,X", 6, true);
  for (const auto& p : path) {
    const Spectrum s = structure_factor_transverse(kNeel, p.k, grid, 0.002);
    CHECK(spectrum_peak(s) == doctest::Approx(0.2).epsilon(5e-3));
    for (double v : s.intensity) CHECK(v >= 0.0);
  }
  // Sum rule against the broadening-free weight.
  const KPoint q{1.1, 0.4};
  const double e = magnon_dispersion(kNeel, q);
  const double sig = 0.001;
  const auto fine = EnergyGrid::linear(e - 12 * sig, e + 12 * sig, 20001);
  const Spectrum s = structure_factor_transverse(kNeel, q, fine, sig, Broadening::gaussian);
  const double h = fine[1] - fine[0];
  double area = 0.0;
  for (std::size_t i = 0; i < fine.size(); ++i)
    area += (i == 0 || i + 1 == fine.size() ? 0.5 : 1.0) * s.intensity[i] * h;
  CHECK(area == doctest::Approx(structure_factor_weight(kNeel, q)).epsilon(1e-6));
  // Weight 2S e^theta with theta = -atanh(hx/h0).
  const MagnonHamiltonian hm = magnon_hamiltonian(kNeel, q);
  const double r = hm.hx / hm.h0;
  CHECK(structure_factor_weight(kNeel, q) == doctest::Approx(std::sqrt((1 - r) / (1 + r))).epsilon(1e-12));
  CHECK(structure_factor_weight(kNeel, q, SpinComponent::minus_plus) ==
        doctest::Approx(structure_factor_weight(kNeel, q)).epsilon(1e-12));
  CHECK(structure_factor_weight(kNeel, {0.0, 0.0}) == 0.0);
  CHECK_THROWS_AS(structure_factor_weight(kNeel, {kPi, kPi}), NumericalError);
}

TEST_CASE("structure factor near the zone centre sits at low energy") {
  const auto grid = EnergyGrid::linear(1e-4, 0.4, 4000);
  const Spectrum s = structure_factor_transverse(kNeel, {0.02, 0.0}, grid, 0.001);
  CHECK(spectrum_peak(s) < 0.01);
}

TEST_CASE("Raman vertex") {
  const KPoint k{0.7, -1.3};
  const BogoliubovFactors b = bogoliubov(kNeel, k);
  const double fx = 2 * kNeel.J * kNeel.S * std::cos(k.kx);
  CHECK(raman_vertex(kNeel, {1, 0}, {1, 0}, k) == doctest::Approx(std::cosh(b.theta) * fx));
  // Cross polarization vanishes without second-neighbour exchange.
  CHECK(raman_vertex(kNeel, {1, 0}, {0, 1}, k) == 0.0);
  const SpinWaveModel mk(0.1, 0.01);
  const double f0 = 2 * 0.01 * 0.5 * (std::cos(k.kx + k.ky) - std::cos(k.kx - k.ky));
  CHECK(raman_vertex(mk, {1, 0}, {0, 1}, k) ==
        doctest::Approx(std::sinh(bogoliubov(mk, k).theta) * f0).epsilon(1e-12));
}

TEST_CASE("two-magnon Raman peak and shift") {
  const auto grid = EnergyGrid::linear(0.2, 0.5, 3001);
  RamanOptions opt;
  opt.threads = 2;
  auto peak = [&](double J) {
    return spectrum_peak(raman_spectrum(SpinWaveModel(J), {1, 0}, {1, 0}, grid, 0.002, opt));
  };
  const double p0 = peak(0.1);
  CHECK(std::abs(p0 - 0.4) < 0.002);
  for (double dj : {0.02, 0.04}) CHECK((peak(0.1 * (1 + dj)) - p0) == doctest::Approx(4 * 0.1 * dj).epsilon(0.02));
  const Spectrum xy = raman_spectrum(kNeel, {1, 0}, {0, 1}, grid, 0.002, opt);
  for (double v : xy.intensity) CHECK(v == 0.0);
}

TEST_CASE("Raman spectra are independent of the thread count") {
  const auto grid = EnergyGrid::linear(0.3, 0.45, 301);
  RamanOptions a, b;
  a.grid_n = b.grid_n = 64;
  a.threads = 1;
  b.threads = 3;
  const Spectrum sa = raman_spectrum(kNeel, {1, 0}, {1, 0}, grid, 0.002, a);
  const Spectrum sb = raman_spectrum(kNeel, {1, 0}, {1, 0}, grid, 0.002, b);
  CHECK(sa.intensity == sb.intensity);
  CHECK_THROWS_AS(raman_spectrum(kNeel, {1, 1}, {1, 0}, grid, 0.002, a), DomainError);
  CHECK_THROWS_AS(raman_spectrum(kNeel, {1, 0}, {1, 0}, grid, 0.0, a), DomainError);
}

TEST_CASE("paths") {
  const auto p = sample_path("G,M,X,G", 4, false);
  CHECK(p.size() == 13);
  CHECK(p.front().label == "G");
  CHECK(p[4].label == "M");
  CHECK(p[8].label == "X");
  CHECK(p.back().label == "G");
  CHECK(p.back().distance == doctest::Approx(kPi + kPi / std::sqrt(2.0) + kPi / std::sqrt(2.0)));
  const auto mid = sample_path("G,M", 4, true);
  CHECK(mid.size() == 4);
  CHECK(mid[0].k.kx == doctest::Approx(kPi / 8));
  CHECK_THROWS_AS(sample_path("G", 4, false), ConfigError);
  CHECK_THROWS_AS(sample_path("G,Q", 4, false), ConfigError);
}
