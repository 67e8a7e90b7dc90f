// Independent reference implementations used only by the tests.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>

namespace oracle {

inline constexpr double kHbarC = 197.3269804;
inline constexpr double kPi = std::numbers::pi;

// Plain bisection on a sign change.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Composite Simpson rule.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

// Lorentz oscillator dielectric function.
inline double lorentz_eps(double eps_inf, double w_to, double w_lo, double w) {
  return eps_inf * (w_lo * w_lo - w * w) / (w_to * w_to - w * w);
}

// In-plane Fabry-Perot PDOS, rho/rho0 in eV^2, summed term by term.
inline double fp_parallel(double d, double z, double w) {
  const double wc = kPi * kHbarC / d;
  double s = 0.0;
  for (int n = 1; n * wc < w; ++n) {
    const double r = n * wc / w;
    const double sn = std::sin(n * kPi * z / d);
    s += (1.0 + r * r) * sn * sn;
  }
  return 1.5 * wc * w * s;
}

// Out-of-plane Fabry-Perot PDOS including the homogeneous n = 0 mode.
inline double fp_perp(double d, double z, double w) {
  const double wc = kPi * kHbarC / d;
  double s = 0.5;
  for (int n = 1; n * wc < w; ++n) {
    const double r = n * wc / w;
    const double cn = std::cos(n * kPi * z / d);
    s += (1.0 - r * r) * cn * cn;
  }
  return 3.0 * wc * w * s;
}

// Single-mode J/J~ = int_0^inf exp(-x) exp(g (exp(-theta x) - 1)) dx by Simpson.
inline double single_mode(double g2, double theta) {
  return simpson([&](double x) { return std::exp(-x + g2 * std::expm1(-theta * x)); }, 0.0, 60.0,
                 200000);
}

}  // namespace oracle
