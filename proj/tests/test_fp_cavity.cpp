#include <doctest.h>

#include <cmath>

#include "cavityj/errors.hpp"
#include "cavityj/fp_cavity.hpp"
#include "cavityj/kernel.hpp"
#include "cavityj/units.hpp"
#include "oracles.hpp"

using namespace cavityj;

TEST_CASE("geometry and dispersion") {
  const auto g = FabryPerotGeometry::midplane(1000.0);
  CHECK(g.omega_c() == doctest::Approx(0.6200).epsilon(1e-4));
  CHECK_FALSE(g.outside_model_validity());
  CHECK(FabryPerotGeometry::midplane(50.0).outside_model_validity());
  CHECK(fp_dispersion(g, 2, 0.0) == doctest::Approx(2.0 * g.omega_c()));
  for (double k : {0.0, 1e-3, 0.02})
    CHECK(fp_dispersion(g, 3, k) >= 3.0 * g.omega_c());
  CHECK(fp_dispersion(g, 1, 1.0) == doctest::Approx(std::hypot(g.omega_c(), kHbarC)));
  CHECK_THROWS_AS(fp_dispersion(g, 0, 0.1), DomainError);
  CHECK_THROWS_AS(FabryPerotGeometry(100.0, 100.0), DomainError);
  CHECK_THROWS_AS(FabryPerotGeometry(100.0, 0.0), DomainError);
  CHECK_THROWS_AS(FabryPerotGeometry(-1.0, 0.5), DomainError);
}

TEST_CASE("PDOS matches the term-by-term mode sum") {
  for (double d : {500.0, 1000.0, 3300.0}) {
    for (double zf : {0.5, 0.21, 0.9}) {
      const FabryPerotGeometry g(d, zf * d);
      for (double w = 0.013; w < 9.0; w *= 1.37) {
        CHECK(fp_pdos_parallel(g, w) ==
              doctest::Approx(oracle::fp_parallel(d, zf * d, w)).epsilon(1e-12));
        CHECK(fp_pdos_perp(g, w) == doctest::Approx(oracle::fp_perp(d, zf * d, w)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("gapped support below the fundamental") {
  const auto g = FabryPerotGeometry::midplane(1000.0);
  for (double f : {0.01, 0.3, 0.999}) {
    const double w = f * g.omega_c();
    CHECK(fp_pdos_parallel(g, w) == 0.0);
    CHECK(fp_delta_pdos(g, w) == -w * w);
  }
}

TEST_CASE("midpoint parity") {
  const auto g = FabryPerotGeometry::midplane(1000.0);
  const double wc = g.omega_c();
  // Between 2 wc and 3 wc only n = 1 contributes to the in-plane density.
  for (double f : {2.1, 2.5, 2.9}) {
    const double w = f * wc, r = wc / w;
    CHECK(fp_pdos_parallel(g, w) == doctest::Approx(1.5 * wc * w * (1.0 + r * r)).epsilon(1e-12));
  }
  // Out of plane: the even branches and the homogeneous term only.
  for (double f : {1.5, 2.5}) {
    const double w = f * wc;
    double expect = 0.5;
    if (f > 2.0) expect += 1.0 - (2.0 / f) * (2.0 / f);
    CHECK(fp_pdos_perp(g, w) == doctest::Approx(3.0 * wc * w * expect).epsilon(1e-12));
  }
}

TEST_CASE("jumps only at branch thresholds") {
  const auto g = FabryPerotGeometry(1000.0, 310.0);
  const double wc = g.omega_c();
  for (int n = 1; n < 8; ++n) {
    const double lo = fp_pdos_parallel(g, n * wc * (1 - 1e-12));
    const double hi = fp_pdos_parallel(g, n * wc * (1 + 1e-12));
    CHECK(hi > lo);
    const double a = fp_pdos_parallel(g, (n + 0.5) * wc);
    const double b = fp_pdos_parallel(g, (n + 0.5) * wc * (1 + 1e-9));
    CHECK(std::abs(b - a) < 1e-6 * a);
  }
}

TEST_CASE("interval averages approach free space") {
  const auto g = FabryPerotGeometry::midplane(1000.0);
  const double wc = g.omega_c();
  double prev = INFINITY;
  for (int n = 1; n <= 20; ++n) {
    const double a = (2 * n + 1) * wc, b = (2 * n + 3) * wc;
    const double dr = oracle::simpson([&](double w) { return fp_delta_pdos(g, w); }, a, b - 1e-12, 4000);
    const double fr = oracle::simpson([](double w) { return w * w; }, a, b, 4000);
    const double ratio = std::abs(dr) / fr;
    CHECK(ratio < 0.1);
    if (n % 5 == 0) {
      CHECK(ratio < prev);
      prev = ratio;
    }
  }
}

TEST_CASE("branch sums") {
  const auto g = FabryPerotGeometry::midplane(1000.0);
  const FpBranchSums s = fp_branch_sums(g, 5);
  CHECK(s.A == doctest::Approx(3.0));
  CHECK(s.B == doctest::Approx(1.0 + 9.0 + 25.0));
}

TEST_CASE("kernel quadrature reproduces direct integration") {
  const double d = 1000.0, a = 0.6, eta = 1.0 / 20.0;
  const FabryPerotGeometry g(d, 0.5 * d);
  const DeltaPdos k = DeltaPdos::fabry_perot(g, a, eta);
  CHECK(k.requires_regularization());
  CHECK(k.characteristic_frequency() == doctest::Approx(g.omega_c()));
  const double pr = p0_rho0(a), wc = g.omega_c();
  for (double x : {0.0, 0.3, 2.0}) {
    auto F = [&](double w) { return std::expm1(-w * x / 5.0) + (x == 0.0 ? 1.0 : 0.0); };
    double ref = 0.0;
    for (int n = 0; n * wc < 6.5 / eta; ++n) {
      const double lo = n * wc, hi = std::min((n + 1) * wc, 6.5 / eta);
      ref += oracle::simpson(
          [&](double w) {
            if (w <= 0.0) return 0.0;
            const double dr = oracle::fp_parallel(d, 0.5 * d, std::min(w, hi * (1 - 1e-14))) - w * w;
            return pr * dr / w * std::exp(-eta * eta * w * w) * F(w);
          },
          lo * (1 + 1e-14) + (n == 0 ? 1e-12 : 0.0), hi * (1 - 1e-14), 200);
    }
    CHECK(k.integrate(F, eta) == doctest::Approx(ref).epsilon(1e-7));
  }
  CHECK_THROWS_AS(DeltaPdos::fabry_perot(g, a, 0.0), DomainError);
}
