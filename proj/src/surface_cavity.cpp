#include "cavityj/surface_cavity.hpp"

#include <cmath>
#include <limits>

#include "cavityj/errors.hpp"
#include "cavityj/numerics.hpp"
#include "cavityj/units.hpp"

namespace cavityj {

SurfaceCavityGeometry::SurfaceCavityGeometry(DielectricModel m, double z, double l_perp_nm)
    : substrate(m), probe_height(z), slab_height(l_perp_nm) {
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("SurfaceCavityGeometry: need z > 0");
  if (!(l_perp_nm > 2.0 * z) || !std::isfinite(l_perp_nm))
    throw DomainError("SurfaceCavityGeometry: need finite L_perp > 2 z");
}

std::string to_string(ModeClass c) {
  switch (c) {
    case ModeClass::propagating: return "propagating";
    case ModeClass::evanescent: return "evanescent";
    case ModeClass::revanescent: return "revanescent";
    case ModeClass::surface: return "surface";
  }
  return "unknown";
}

double surface_limit_frequency(const DielectricModel& m) {
  const double e = m.eps_inf();
  const double l2 = m.omega_LO() * m.omega_LO();
  const double t2 = m.omega_TO() * m.omega_TO();
  return std::sqrt((e * l2 + t2) / (1.0 + e));
}

double surface_dispersion(const DielectricModel& m, double q) {
  if (!(q >= 0.0)) throw DomainError("surface_dispersion: need q >= 0");
  if (std::isinf(q)) return surface_limit_frequency(m);
  const double e = m.eps_inf();
  const double l2 = m.omega_LO() * m.omega_LO();
  const double t2 = m.omega_TO() * m.omega_TO();
  const double Q = (kHbarC * q) * (kHbarC * q);
  // Lower root of e w^4 - w^2 (e L + Q (1 + e)) + Q (e L + T) = 0, written without cancellation.
  const double s = e * l2 + Q * (1.0 + e);
  const double disc = s * s - 4.0 * e * Q * (e * l2 + t2);
  const double w2 = 2.0 * Q * (e * l2 + t2) / (s + std::sqrt(std::max(disc, 0.0)));
  return std::sqrt(w2);
}

double surface_threshold_wavevector(const DielectricModel& m) { return wavevector(m.omega_TO()); }

double surface_dispersion_slope(const DielectricModel& m, double q) {
  const double w = surface_dispersion(m, q);
  const double eps = epsilon(m, w);
  const double deps = epsilon_derivative(m, w);
  // q^2 = (w/hc)^2 eps/(eps+1); implicit derivative.
  const double k = w / kHbarC;
  const double r = eps / (eps + 1.0);
  const double dq2_dw = 2.0 * w / (kHbarC * kHbarC) * r + k * k * deps / ((eps + 1.0) * (eps + 1.0));
  return 2.0 * q / dq2_dw;
}

namespace {

// Quantities of the bound surface mode at frequency w with |eps| > 1, eps < 0.
struct SurfaceModeAt {
  double q;      // in-plane momentum
  double kappa;  // vacuum decay constant
  double n2;     // N_S^2
};

SurfaceModeAt surface_mode_at_omega(const DielectricModel& m, double w) {
  const double ae = -epsilon(m, w);
  const double vf = epsilon(m, w) + 0.5 * w * epsilon_derivative(m, w);
  const double k = w / kHbarC;
  const double kappa = k / std::sqrt(ae - 1.0);
  const double q = std::sqrt(ae) * kappa;
  const double n2 = (1.0 + ae) / (2.0 * kappa) * (1.0 + vf / (ae * ae));
  return {q, kappa, n2};
}

SurfaceModeAt surface_mode_at_q(const DielectricModel& m, double q, double& w) {
  w = surface_dispersion(m, q);
  const double ae = -epsilon(m, w);
  const double vf = epsilon(m, w) + 0.5 * w * epsilon_derivative(m, w);
  const double kappa = q / std::sqrt(ae);
  const double n2 = (1.0 + ae) / (2.0 * kappa) * (1.0 + vf / (ae * ae));
  return {q, kappa, n2};
}

// (3/4) pi (hbar c)^3: mode-sum prefactor converting |f|^2 q dq into rho/rho0 d omega.
constexpr double kModeSumPrefactor = 0.75 * kPi * kHbarC * kHbarC * kHbarC;

}  // namespace

double surface_normalization_sq(const DielectricModel& m, double q) {
  if (!(q > surface_threshold_wavevector(m)))
    throw DomainError("surface_normalization_sq: q below the surface-mode threshold");
  double w = 0.0;
  return surface_mode_at_q(m, q, w).n2;
}

double surface_pdos(const SurfaceCavityGeometry& g, double omega) {
  const DielectricModel& m = g.substrate;
  const double w_inf = surface_limit_frequency(m);
  if (!(omega * omega > m.omega_TO() * m.omega_TO()) || !(omega < w_inf)) return 0.0;
  // Far below the plasma edge the mode is photon-like and its weight vanishes as omega^4.
  if (omega < 1e-8 * m.omega_LO() || !(-epsilon(m, omega) > 1.0)) return 0.0;
  const SurfaceModeAt s = surface_mode_at_omega(m, omega);
  const double eps = epsilon(m, omega);
  const double deps = epsilon_derivative(m, omega);
  const double k = omega / kHbarC;
  const double dq2_dw =
      2.0 * omega / (kHbarC * kHbarC) * eps / (eps + 1.0) + k * k * deps / ((eps + 1.0) * (eps + 1.0));
  const double dq_dw = dq2_dw / (2.0 * s.q);
  const double decay = std::exp(-2.0 * s.kappa * g.probe_height);
  if (decay == 0.0) return 0.0;
  return kModeSumPrefactor * s.q * decay / s.n2 * dq_dw;
}

namespace {

// Composite Gauss-Legendre nodes in q for the surface branch; panels geometric towards the
// threshold and towards large q.
QuadratureNodes surface_nodes_with_panels(const SurfaceCavityGeometry& g, int split) {
  const DielectricModel& m = g.substrate;
  const double q0 = surface_threshold_wavevector(m);
  const double k_inf = wavevector(surface_limit_frequency(m));
  const double u_max = 40.0 / g.probe_height + 10.0 * k_inf;
  std::vector<double> edges{0.0};
  for (int j = 60; j >= 0; --j) edges.push_back(u_max * std::ldexp(1.0, -j));
  const GaussRule& gl = gauss_legendre_rule(30);
  QuadratureNodes out;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a0 = edges[p], b0 = edges[p + 1];
    for (int s = 0; s < split; ++s) {
      const double a = a0 + (b0 - a0) * s / split;
      const double b = a0 + (b0 - a0) * (s + 1) / split;
      const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
      for (std::size_t i = 0; i < gl.x.size(); ++i) {
        const double q = q0 + mid + half * gl.x[i];
        if (!(q > q0)) continue;
        const double w_probe = surface_dispersion(m, q);
        if (!(w_probe > m.omega_TO()) || !(-epsilon(m, w_probe) > 1.0)) continue;
        double w = 0.0;
        const SurfaceModeAt sm = surface_mode_at_q(m, q, w);
        const double decay = std::exp(-2.0 * sm.kappa * g.probe_height);
        if (decay == 0.0 || !(w > 0.0)) continue;
        out.omega.push_back(w);
        out.weight.push_back(half * gl.w[i] * kModeSumPrefactor * q * decay / sm.n2 / w);
      }
    }
  }
  return out;
}

double apply_nodes(const QuadratureNodes& n, const std::function<double(double)>& F) {
  CompensatedSum s;
  for (std::size_t i = 0; i < n.omega.size(); ++i) s.add(n.weight[i] * F(n.omega[i]));
  return s.value();
}

}  // namespace

QuadratureNodes surface_kernel_nodes(const SurfaceCavityGeometry& g, double tol_rel) {
  const double w_inf = surface_limit_frequency(g.substrate);
  auto probe = [&](const QuadratureNodes& n) {
    return std::pair{apply_nodes(n, [](double) { return 1.0; }),
                     apply_nodes(n, [&](double w) { return w / w_inf; })};
  };
  QuadratureNodes prev = surface_nodes_with_panels(g, 1);
  auto pv = probe(prev);
  for (int split = 2; split <= 64; split *= 2) {
    QuadratureNodes cur = surface_nodes_with_panels(g, split);
    auto cv = probe(cur);
    const bool ok0 = std::abs(cv.first - pv.first) <= tol_rel * std::abs(cv.first) + 1e-300;
    const bool ok1 = std::abs(cv.second - pv.second) <= tol_rel * std::abs(cv.second) + 1e-300;
    if (ok0 && ok1) return cur;
    prev = std::move(cur);
    pv = cv;
  }
  throw NumericalError("surface_kernel_nodes: q-space quadrature did not converge");
}

double surface_kernel_q_integral(const SurfaceCavityGeometry& g,
                                 const std::function<double(double)>& F, double tol_rel) {
  double prev = apply_nodes(surface_nodes_with_panels(g, 1), F);
  for (int split = 2; split <= 64; split *= 2) {
    const double cur = apply_nodes(surface_nodes_with_panels(g, split), F);
    if (std::abs(cur - prev) <= tol_rel * std::abs(cur) || cur == prev) return cur;
    prev = cur;
  }
  throw NumericalError("surface_kernel_q_integral: tolerance not met after refinement");
}

double surface_kernel_omega_integral(const SurfaceCavityGeometry& g,
                                     const std::function<double(double)>& F, double tol_rel) {
  const double lo = g.substrate.omega_TO();
  const double hi = surface_limit_frequency(g.substrate);
  return integrate_tanh_sinh(
      [&](double w) {
        if (!(w > lo) || !(w < hi)) return 0.0;
        return surface_pdos(g, w) / w * F(w);
      },
      lo, hi, tol_rel);
}

MediumResponse medium_response(const DielectricModel& m, double omega) {
  return {epsilon(m, omega), epsilon_derivative(m, omega)};
}

}  // namespace cavityj
