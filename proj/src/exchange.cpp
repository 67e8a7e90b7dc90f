#include "cavityj/exchange.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/special_functions/hypergeometric_1F1.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "cavityj/errors.hpp"
#include "cavityj/numerics.hpp"
#include "cavityj/surface_cavity.hpp"
#include "cavityj/units.hpp"

namespace cavityj {

HubbardBond::HubbardBond(double t_, double U0_, double a_, std::array<double, 2> dir)
    : t(t_), U0(U0_), a(a_), direction(dir) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("HubbardBond: need t > 0");
  if (!(U0 > 0.0) || !std::isfinite(U0)) throw DomainError("HubbardBond: need U0 > 0");
  if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("HubbardBond: need a >= 0");
  const double n = std::hypot(dir[0], dir[1]);
  if (!(std::abs(n - 1.0) < 1e-9)) throw DomainError("HubbardBond: direction must be a unit vector");
}

std::vector<std::string> HubbardBond::warnings() const {
  std::vector<std::string> w;
  if (t / U0 >= 0.25) w.push_back("t/U0 >= 0.25: strong-coupling expansion unreliable");
  return w;
}

std::string to_string(ScreeningMethod m) {
  switch (m) {
    case ScreeningMethod::none: return "none";
    case ScreeningMethod::image_charge: return "image_charge";
    case ScreeningMethod::dipole_mode_sum: return "dipole_mode_sum";
  }
  return "unknown";
}

ScreeningResult delta_u_image_charge(const HubbardBond& bond, const DielectricModel& substrate,
                                     double z) {
  if (!(z > 0.0)) throw DomainError("delta_u_image_charge: need z > 0");
  const double eta = image_charge_factor(substrate);
  const double du = -eta * kCoulombE2 * (0.5 / z - 1.0 / std::sqrt(4.0 * z * z + bond.a * bond.a));
  if (!(bond.U0 + du > 0.0)) throw DomainError("delta_u_image_charge: U0 + Delta U <= 0");
  return {du, ScreeningMethod::image_charge};
}

ScreeningResult delta_u_dipole_mode_sum(const HubbardBond& bond, const DielectricModel& substrate,
                                        double z) {
  if (!(z > 0.0)) throw DomainError("delta_u_dipole_mode_sum: need z > 0");
  if (bond.a == 0.0) return {0.0, ScreeningMethod::dipole_mode_sum};
  const double vf = hopfield_factor(substrate, surface_limit_frequency(substrate));
  // |e . f_q(z)|^2 = q/(1 + V) exp(-2 q z) cos^2(phi) per unit area.
  const int n_phi = 64;
  double ang = 0.0;
  for (int i = 0; i < n_phi; ++i) {
    const double phi = 2.0 * kPi * i / n_phi;
    const double c = std::cos(phi) * bond.direction[0] + std::sin(phi) * bond.direction[1];
    ang += c * c;
  }
  ang *= 2.0 * kPi / n_phi;
  const double radial = integrate_adaptive(
      [&](double q) { return q * q * std::exp(-2.0 * q * z); }, 0.0,
      std::numeric_limits<double>::infinity(), 1e-12);
  const double mode_sum = ang * radial / (4.0 * kPi * kPi * (1.0 + vf));
  // omega |g_L|^2 = (e a)^2 |e.f|^2 / (2 eps0) = 2 pi k_e e^2 a^2 |e.f|^2.
  const double du = -2.0 * kPi * kCoulombE2 * bond.a * bond.a * mode_sum;
  if (!(bond.U0 + du > 0.0)) throw DomainError("delta_u_dipole_mode_sum: U0 + Delta U <= 0");
  return {du, ScreeningMethod::dipole_mode_sum};
}

namespace {

// M(x) evaluator: direct weighted sum for small rules, Chebyshev memo in log(1 + x) otherwise.
class ModificationEvaluator {
 public:
  ModificationEvaluator(const DeltaPdos& k, double U, double eta, double x_max) {
    if (!(U > 0.0)) throw DomainError("modification function: need U > 0");
    if (k.requires_regularization() && eta < k.eta_min())
      throw DomainError("modification function: kernel built for eta >= " +
                        std::to_string(k.eta_min()));
    wg_.resize(k.size());
    r_.resize(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) {
      wg_[i] = k.weight()[i] * regulator(k.omega()[i], eta);
      r_[i] = k.omega()[i] / U;
      scale_ += std::abs(wg_[i]);
      limit_.add(-wg_[i]);
    }
    if (k.size() > 2000 && x_max > 0.0) {
      const double ref = std::abs(limit_.value()) + std::abs(direct(1.0));
      const double tol = std::max(1e-13, 256.0 * std::numeric_limits<double>::epsilon() * scale_ /
                                             std::max(ref, 1e-300));
      cheb_ = Chebyshev([&](double t) { return direct(std::expm1(t)); }, 0.0, std::log1p(x_max),
                        tol, 32, 512);
      use_cheb_ = cheb_.converged();
    }
  }

  double operator()(double x) const { return use_cheb_ ? cheb_(std::log1p(x)) : direct(x); }
  double direct(double x) const {
    CompensatedSum s;
    for (std::size_t i = 0; i < wg_.size(); ++i) s.add(wg_[i] * std::expm1(-r_[i] * x));
    return s.value();
  }
  double limit() const { return limit_.value(); }
  double scale() const { return scale_; }

 private:
  std::vector<double> wg_, r_;
  double scale_ = 0.0;
  CompensatedSum limit_;
  Chebyshev cheb_;
  bool use_cheb_ = false;
};

double x_upper(const DeltaPdos& k, double eta) {
  return 40.0 + 10.0 * std::abs(modification_limit(k, eta));
}

}  // namespace

double modification_function(const DeltaPdos& kernel, double x, double U, double eta) {
  if (!(x >= 0.0)) throw DomainError("modification_function: need x >= 0");
  return ModificationEvaluator(kernel, U, eta, 0.0).direct(x);
}

double modification_limit(const DeltaPdos& kernel, double eta) {
  CompensatedSum s;
  for (std::size_t i = 0; i < kernel.size(); ++i)
    s.add(-kernel.weight()[i] * regulator(kernel.omega()[i], eta));
  return s.value();
}

double dynamical_integral(const DeltaPdos& kernel, double U, double eta, double tol_rel) {
  if (kernel.size() == 0) return 0.0;
  const double x_max = x_upper(kernel, eta);
  const ModificationEvaluator M(kernel, U, eta, x_max);
  if (M.scale() == 0.0) return 0.0;
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * M.scale();
  return integrate_adaptive([&](double x) { return std::exp(-x) * std::expm1(M(x)); }, 0.0, x_max,
                            tol_rel, floor);
}

double effective_coupling_g2(const DeltaPdos& kernel, double omega_star, double eta) {
  if (!(omega_star > 0.0)) throw DomainError("effective_coupling_g2: need Omega* > 0");
  return kernel.integrate([](double w) { return w; }, eta) / omega_star;
}

ExchangeResult exchange_resummed(const HubbardBond& bond, const DeltaPdos& kernel,
                                 const ScreeningResult& screening, double eta,
                                 const ExchangeOptions& options) {
  ExchangeResult r;
  r.warnings = bond.warnings();
  const double du = screening.delta_U;
  const double Us = bond.U0 + du;
  if (!(Us > 0.0)) throw DomainError("exchange_resummed: U0 + Delta U <= 0 (model breakdown)");
  const double UM = options.bare_U_in_M ? bond.U0 : Us;
  const double I = dynamical_integral(kernel, UM, eta, options.tol_rel);
  const double I0 = (du == 0.0 || options.bare_U_in_M)
                        ? I
                        : dynamical_integral(kernel, bond.U0, eta, options.tol_rel);
  const double pre_m1 = -du / Us;
  r.delta_U = du;
  r.delta_screening = pre_m1;
  r.contribution_screening = bond.U0 / Us;
  r.delta_dynamical = I0;
  r.contribution_dynamical = 1.0 + I0;
  r.delta_total = pre_m1 + (1.0 + pre_m1) * I;
  r.J_over_J0 = (bond.U0 / Us) * (1.0 + I);
  const double ws = kernel.characteristic_frequency();
  r.theta = ws / UM;
  r.g_eff_sq = ws > 0.0 ? effective_coupling_g2(kernel, ws, eta) : 0.0;
  if (kernel.kind() == KernelKind::delta_comb) {
    for (double w : kernel.omega()) {
      const double m = std::round(UM / w);
      if (m >= 1.0 && std::abs(UM - m * w) < 1e-3 * UM)
        r.warnings.push_back("U is within 1e-3 of a multiple of a mode energy; expansion unreliable");
    }
  }
  return r;
}

double exchange_multinomial_oracle(const HubbardBond& bond, const ModeSet& modes, int k_max) {
  const auto& ms = modes.modes();
  if (ms.size() > 4)
    throw DomainError("exchange_multinomial_oracle: more than 4 modes; use exchange_resummed");
  if (ms.empty()) return 1.0;
  int K = k_max;
  if (K < 0) {
    K = 0;
    for (const Mode& m : ms) {
      // Poisson tail sum_{k > K} g^k / k! below 1e-16.
      int k = 0;
      double term = 1.0;
      while (true) {
        term *= m.g2 / (k + 1);
        const double ratio = m.g2 / (k + 2);
        if (ratio < 1.0 && term / (1.0 - ratio) < 1e-16) break;
        ++k;
        if (k > 400) throw NumericalError("exchange_multinomial_oracle: coupling too large");
      }
      K = std::max(K, k);
    }
  }
  const std::size_t nm = ms.size();
  std::vector<std::vector<double>> pw(nm, std::vector<double>(K + 1));
  for (std::size_t l = 0; l < nm; ++l) {
    pw[l][0] = 1.0;
    for (int k = 1; k <= K; ++k) pw[l][k] = pw[l][k - 1] * ms[l].g2 / k;
  }
  const double U = bond.U0;
  CompensatedSum total;
  std::function<void(std::size_t, double, double)> rec = [&](std::size_t l, double w, double e) {
    if (l == nm) {
      total.add(w * U / (U + e));
      return;
    }
    for (int k = 0; k <= K; ++k) rec(l + 1, w * pw[l][k], e + k * ms[l].omega);
  };
  rec(0, 1.0, 0.0);
  return std::exp(-modes.sum_g2()) * total.value();
}

double exchange_perturbative(double g2, double theta) { return 1.0 / (1.0 + theta * g2); }

double exchange_perturbative(const HubbardBond& bond, double g2, double omega_star) {
  return exchange_perturbative(g2, omega_star / bond.U0);
}

double single_mode_weight(const DeltaPdos& kernel, int n, double omega_star, double eta) {
  if (n < -1) throw DomainError("single_mode_weight: need n >= -1");
  if (!(omega_star > 0.0)) throw DomainError("single_mode_weight: need omega* > 0");
  if (!(kernel.p0rho0() > 0.0)) throw DomainError("single_mode_weight: kernel has no P0 rho0");
  const double s = kernel.integrate(
      [&](double w) { return std::pow(w / omega_star, n + 1); }, eta);
  return s / (kernel.p0rho0() * omega_star * omega_star);
}

double exchange_single_mode_series_small_g(double g2, double theta) {
  if (!(theta > 0.0) || !std::isfinite(g2)) throw DomainError("single mode: need theta > 0, finite g2");
  // 1F1(1; b; -g) = sum (-g)^n / (b)_n, b = 1 + 1/theta.
  const double b = 1.0 + 1.0 / theta;
  CompensatedSum s;
  double term = 1.0;
  for (int n = 0; n < 500; ++n) {
    s.add(term);
    term *= -g2 / (b + n);
    if (std::abs(term) < 1e-18 * std::abs(s.value())) break;
  }
  return s.value();
}

double exchange_single_mode_closed_form(double g2, double theta) {
  if (!(theta > 0.0) || !std::isfinite(g2)) throw DomainError("single mode: need theta > 0, finite g2");
  if (g2 == 0.0) return 1.0;
  try {
    const double v = boost::math::hypergeometric_1F1(1.0, 1.0 + 1.0 / theta, -g2);
    if (std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  return exchange_single_mode_series_small_g(g2, theta);
}

double exchange_single_mode_series_small_theta(double g2, double theta) {
  if (!(theta >= 0.0) || !(g2 >= 0.0)) throw DomainError("single mode: need theta >= 0, g2 >= 0");
  // sum_j (-theta)^j T_j(g), T_j the Touchard polynomials (Poisson moments).
  constexpr int J = 60;
  std::vector<std::vector<double>> S(J + 1, std::vector<double>(J + 1, 0.0));
  S[0][0] = 1.0;
  for (int j = 1; j <= J; ++j)
    for (int k = 1; k <= j; ++k) S[j][k] = k * S[j - 1][k] + S[j - 1][k - 1];
  CompensatedSum s;
  double prev = std::numeric_limits<double>::infinity();
  double tp = 1.0;
  for (int j = 0; j <= J; ++j) {
    double T = 0.0, gk = 1.0;
    for (int k = 0; k <= j; ++k) {
      T += S[j][k] * gk;
      gk *= g2;
    }
    const double term = tp * T;
    if (std::abs(term) > prev) break;  // asymptotic series: stop at the smallest term
    s.add(term);
    prev = std::abs(term);
    if (prev < 1e-18) break;
    tp *= -theta;
  }
  return s.value();
}

double exchange_single_mode_leading_theta(double g2, double theta) {
  return 1.0 / (1.0 + g2 * theta);
}

double exchange_single_mode_quadrature(double g2, double theta) {
  if (!(theta > 0.0) || !std::isfinite(g2)) throw DomainError("single mode: need theta > 0, finite g2");
  const double x_max = 40.0 + 10.0 * std::abs(g2);
  return 1.0 + integrate_adaptive(
                   [&](double x) { return std::exp(-x) * std::expm1(g2 * std::expm1(-x * theta)); },
                   0.0, x_max, 1e-13, 1e-300);
}

double exchange_model_regularized(const HubbardBond& bond, const DeltaPdos& kernel, double eta,
                                  double U) {
  if (!(eta > 0.0)) throw DomainError("exchange_model_regularized: eta must be > 0");
  if (!(U > 0.0)) throw DomainError("exchange_model_regularized: need U > 0");
  const double alpha = p0_rho0(bond.a) * U * U;
  const double eta_m = kernel.requires_regularization() ? eta : 0.0;
  const double x_max = x_upper(kernel, eta_m);
  const ModificationEvaluator M(kernel, U, eta_m, x_max);
  auto Z = [&](double x) { return -x + alpha / ((x + U * eta) * (x + U * eta)); };
  const double den = integrate_adaptive([&](double x) { return std::exp(Z(x)); }, 0.0, x_max,
                                        1e-13, 1e-300);
  if (kernel.size() == 0 || M.scale() == 0.0) return 1.0;
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * M.scale();
  const double num = integrate_adaptive(
      [&](double x) { return std::exp(Z(x)) * std::expm1(M(x)); }, 0.0, x_max, 1e-10, floor);
  return 1.0 + num / den;
}

VariationalResult variational_exchange(const HubbardBond& bond, const ModeSet& modes) {
  const double G = modes.sum_g2();
  const double W = modes.sum_omega_g2();
  const double du = -0.5 * modes.sum_omega_g2_longitudinal();
  const double U = bond.U0 + du;
  if (!(U > 0.0)) throw DomainError("variational_exchange: U0 + Delta U <= 0");
  auto ratio = [&](double s) {
    return bond.U0 * std::exp(-0.5 * (1.0 - s) * (1.0 - s) * G) / (U + 0.5 * s * s * W);
  };
  auto dlog = [&](double s) { return (1.0 - s) * G - s * W / (U + 0.5 * s * s * W); };
  double s_opt;
  const double lo = 0.0, hi = 1.5;
  const double flo = dlog(lo), fhi = dlog(hi);
  if (flo <= 0.0) {
    s_opt = lo;
  } else if (fhi >= 0.0) {
    s_opt = hi;
  } else {
    boost::uintmax_t it = 200;
    auto r = boost::math::tools::toms748_solve(dlog, lo, hi, flo, fhi,
                                               boost::math::tools::eps_tolerance<double>(52), it);
    s_opt = 0.5 * (r.first + r.second);
  }
  VariationalResult v{};
  v.s_opt = s_opt;
  v.J_over_J0 = ratio(s_opt);
  v.J_bound_s1 = ratio(1.0);
  v.derivative_residual = std::abs(dlog(s_opt));
  v.delta_U = du;
  return v;
}

}  // namespace cavityj
