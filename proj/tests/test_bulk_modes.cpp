#include <doctest.h>

#include <cmath>
#include <set>

#include "cavityj/dielectric.hpp"
#include "cavityj/errors.hpp"
#include "cavityj/surface_cavity.hpp"
#include "cavityj/units.hpp"

#include "oracles.hpp"

using namespace cavityj;

namespace {

const DielectricModel kGold = DielectricModel::drude(9.45);
const DielectricModel kSto = DielectricModel::lorentzian(1.0, thz_to_ev(7.92), thz_to_ev(32.04));

std::size_t count_bulk(const std::vector<BulkRoot>& r) {
  std::size_t n = 0;
  for (const auto& x : r) n += x.mode_class != ModeClass::surface;
  return n;
}

}  // namespace

TEST_CASE("vacuum slab roots are standing waves") {
  const double L = 1e4, w = 0.5;
  for (Polarization pol : {Polarization::TE, Polarization::TM}) {
    const auto roots = bulk_mode_roots(MediumResponse{1.0, 0.0}, w, L, pol);
    const double k = w / kHbarC;
    REQUIRE(roots.size() == static_cast<std::size_t>(std::floor(k * L / kPi)));
    for (std::size_t i = 0; i < roots.size(); ++i) {
      const double m = static_cast<double>(roots.size() - i);
      CHECK(roots[i].k_gt == doctest::Approx(m * kPi / L).epsilon(1e-12));
      CHECK(roots[i].mode_class == ModeClass::propagating);
      CHECK(roots[i].residual < 1e-12);
    }
  }
}

TEST_CASE("root count grows linearly with the slab height") {
  const double w = 3.0;
  const auto med = medium_response(kSto, w);
  const double n1 = static_cast<double>(count_bulk(bulk_mode_roots(med, w, 2e5, Polarization::TE)));
  const double n2 = static_cast<double>(count_bulk(bulk_mode_roots(med, w, 4e5, Polarization::TE)));
  const double n4 = static_cast<double>(count_bulk(bulk_mode_roots(med, w, 8e5, Polarization::TE)));
  CHECK(n2 / n1 == doctest::Approx(2.0).epsilon(2e-3));
  CHECK(n4 / n2 == doctest::Approx(2.0).epsilon(2e-3));
}

TEST_CASE("mode classes follow the sign of epsilon") {
  const double L = 3e5;
  auto classes = [&](const DielectricModel& m, double w, Polarization pol) {
    std::set<ModeClass> s;
    for (const auto& r : bulk_mode_roots(medium_response(m, w), w, L, pol)) {
      s.insert(r.mode_class);
      const double e = epsilon(m, w);
      const double k = w / kHbarC;
      const double kg2 = r.k_gt_imag ? -r.k_gt * r.k_gt : r.k_gt * r.k_gt;
      const double kl2 = r.k_lt_imag ? -r.k_lt * r.k_lt : r.k_lt * r.k_lt;
      CHECK(kl2 - kg2 == doctest::Approx((e - 1.0) * k * k).epsilon(1e-9));
      switch (r.mode_class) {
        case ModeClass::propagating: CHECK((!r.k_gt_imag && !r.k_lt_imag)); break;
        case ModeClass::evanescent: CHECK((r.k_gt_imag && !r.k_lt_imag)); break;
        case ModeClass::revanescent: CHECK((!r.k_gt_imag && r.k_lt_imag)); break;
        case ModeClass::surface: CHECK((r.k_gt_imag && r.k_lt_imag)); break;
      }
    }
    return s;
  };
  // eps > 1: propagating plus evanescent (total internal reflection in the substrate).
  const double w_hi = 15.0;
  REQUIRE(epsilon(kGold, w_hi) < 1.0);
  const auto sto_hi = classes(kSto, 0.2, Polarization::TE);
  REQUIRE(epsilon(kSto, 0.2) > 0.0);
  CHECK(sto_hi.count(ModeClass::propagating));
  // 0 < eps < 1: propagating and revanescent.
  const auto au_hi = classes(kGold, w_hi, Polarization::TE);
  CHECK(au_hi.count(ModeClass::propagating));
  CHECK(au_hi.count(ModeClass::revanescent));
  CHECK_FALSE(au_hi.count(ModeClass::evanescent));
  // eps < -1: revanescent, plus one bound surface root for TM.
  const auto au_te = classes(kGold, 3.0, Polarization::TE);
  CHECK(au_te == std::set<ModeClass>{ModeClass::revanescent});
  const auto au_tm = classes(kGold, 3.0, Polarization::TM);
  CHECK(au_tm.count(ModeClass::surface));
  CHECK(au_tm.count(ModeClass::revanescent));
  // Low-frequency side of a polar crystal, eps > 1.
  const double w_low = 0.5 * kSto.omega_TO();
  REQUIRE(epsilon(kSto, w_low) > 1.0);
  const auto sto_low = classes(kSto, w_low, Polarization::TM);
  CHECK(sto_low.count(ModeClass::propagating));
  CHECK(sto_low.count(ModeClass::evanescent));
}

TEST_CASE("implicit derivative agrees with finite differences") {
  const double L = 2e5;
  for (auto [m, w] : {std::pair{kGold, 3.0}, std::pair{kGold, 12.0}, std::pair{kSto, 0.02}}) {
    for (Polarization pol : {Polarization::TE, Polarization::TM}) {
      const auto roots = bulk_mode_roots(medium_response(m, w), w, L, pol);
      REQUIRE(!roots.empty());
      for (std::size_t i : {std::size_t{0}, roots.size() / 3, roots.size() - 1}) {
        const BulkRoot& r = roots[i];
        const double fd = bulk_root_derivative_fd(r, m, w, L);
        const double fd_half = bulk_root_derivative_fd(r, m, w, L, 5e-7);
        CHECK(r.dk_gt_domega == doctest::Approx(fd).epsilon(1e-5));
        CHECK(fd_half == doctest::Approx(fd).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("bound root reproduces the analytic surface PDOS") {
  for (double z : {2.0, 10.0}) {
    const SurfaceCavityGeometry g(kGold, z, 1e6);
    for (double w : {3.0, 5.0, 6.5}) {
      for (const auto& r : bulk_mode_roots(g, w, Polarization::TM)) {
        if (r.mode_class != ModeClass::surface) continue;
        const double a = bulk_root_pdos(r, medium_response(kGold, w), w, z, 1e6);
        CHECK(a == doctest::Approx(surface_pdos(g, w)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("residuals are small and the PDOS is non-negative") {
  const SurfaceCavityGeometry g(kSto, 50.0, 1e6);
  for (double w : {0.01, 0.05, 0.09, 0.2, 0.5}) {
    for (Polarization pol : {Polarization::TE, Polarization::TM}) {
      const auto med = medium_response(kSto, w);
      for (const auto& r : bulk_mode_roots(g, w, pol)) {
        CHECK(r.residual < 1e-10);
        CHECK(bulk_root_residual(r, med, w, 1e6) == doctest::Approx(r.residual).epsilon(1e-6));
        if (r.mode_class != ModeClass::surface) CHECK(bulk_root_pdos(r, med, w, 50.0, 1e6) >= 0.0);
      }
    }
    CHECK(bulk_pdos(g, w) >= 0.0);
  }
}

TEST_CASE("free-space recovery far from the interface") {
  const SurfaceCavityGeometry g(kSto, 2e4, 1e7);
  const double w = 1.0;
  CHECK(bulk_pdos(g, w) / (w * w) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("surface weight dominates bulk inside the band at small distance") {
  const double winf = surface_limit_frequency(kSto);
  const double z = 1e-3 * 2.0 * kPi * kHbarC / winf;
  const SurfaceCavityGeometry g(kSto, z, 1e7);
  const double lo = kSto.omega_TO();
  for (double f : {0.5, 0.8}) CHECK(surface_pdos(g, lo + f * (winf - lo)) > bulk_pdos(g, lo + f * (winf - lo)));
  // Orders of magnitude in the limit-frequency peak and in the band-integrated weight.
  for (double f : {0.99, 0.995, 0.999}) {
    const double w = lo + f * (winf - lo);
    CHECK(surface_pdos(g, w) > 1e3 * bulk_pdos(g, w));
  }
  const double surf = surface_kernel_omega_integral(g, [](double w) { return w; });
  const double bulk = oracle::simpson([&](double w) { return bulk_pdos(g, w); }, lo * (1 + 1e-9), winf, 200);
  CHECK(surf > 1e3 * bulk);
}

TEST_CASE("convergence check doubles the slab") {
  const SurfaceCavityGeometry g(kGold, 10.0, 1e6);
  const BulkConvergence c = bulk_pdos_convergence(g, 12.0);
  CHECK(c.pdos > 0.0);
  CHECK(c.relative_change < 1e-2);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(bulk_mode_roots(MediumResponse{1.0, 0.0}, 0.0, 1e4, Polarization::TE), DomainError);
  CHECK_THROWS_AS(bulk_mode_roots(MediumResponse{1.0, 0.0}, 1.0, INFINITY, Polarization::TE),
                  DomainError);
}
