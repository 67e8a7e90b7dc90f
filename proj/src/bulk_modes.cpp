#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "cavityj/errors.hpp"
#include "cavityj/surface_cavity.hpp"
#include "cavityj/units.hpp"

namespace cavityj {

namespace {

// Forward-mode dual number carrying partials with respect to the momentum parameter p and
// the energy E.
struct D2 {
  double v, dp, dE;
};
D2 operator+(D2 a, D2 b) { return {a.v + b.v, a.dp + b.dp, a.dE + b.dE}; }
D2 operator-(D2 a, D2 b) { return {a.v - b.v, a.dp - b.dp, a.dE - b.dE}; }
D2 operator-(D2 a) { return {-a.v, -a.dp, -a.dE}; }
D2 operator*(D2 a, D2 b) { return {a.v * b.v, a.dp * b.v + a.v * b.dp, a.dE * b.v + a.v * b.dE}; }
D2 operator*(double s, D2 a) { return {s * a.v, s * a.dp, s * a.dE}; }
D2 sqrt(D2 a) {
  const double r = std::sqrt(a.v);
  const double d = r > 0.0 ? 0.5 / r : 0.0;
  return {r, d * a.dp, d * a.dE};
}
D2 sin(D2 a) { const double c = std::cos(a.v); return {std::sin(a.v), c * a.dp, c * a.dE}; }
D2 cos(D2 a) { const double s = -std::sin(a.v); return {std::cos(a.v), s * a.dp, s * a.dE}; }
D2 tanh(D2 a) {
  const double t = std::tanh(a.v);
  const double d = 1.0 - t * t;
  return {t, d * a.dp, d * a.dE};
}
D2 operator-(D2 a, double b) { return {a.v - b, a.dp, a.dE}; }

struct Setup {
  Polarization pol;
  double eps;
  double deps;
  double E;
  double L;
};

// Interface equation for a given parameterization of k_> (p, real or i p) and k_<
// (real or imaginary), each form normalized to stay bounded at large L.
template <class T>
T interface_eq(const Setup& s, bool gi, bool li, T p, T E, T eps, T* k_lt_out = nullptr) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  using std::tanh;
  const double hc = kHbarC;
  T k = (1.0 / hc) * E;
  T s_gt = gi ? -(p * p) : p * p;
  T c = (eps - 1.0) * k * k;
  T s_lt = s_gt + c;
  T q = sqrt(li ? -s_lt : s_lt);
  if (k_lt_out) *k_lt_out = q;
  T a = (0.5 * s.L) * p;
  T b = (0.5 * s.L) * q;
  if (s.pol == Polarization::TE) {
    if (!gi && !li) return p * cos(a) * sin(b) + q * cos(b) * sin(a);
    if (gi && !li) return p * sin(b) + q * cos(b) * tanh(a);
    if (!gi && li) return p * cos(a) * tanh(b) + q * sin(a);
    return p + q;
  }
  if (!gi && !li) return q * cos(a) * sin(b) + eps * p * cos(b) * sin(a);
  if (gi && !li) return q * sin(b) - eps * p * cos(b) * tanh(a);
  if (!gi && li) return -(q * cos(a) * tanh(b)) + eps * p * sin(a);
  return q * tanh(b) + eps * p * tanh(a);
}

double eq_value(const Setup& s, bool gi, bool li, double p) {
  return interface_eq<double>(s, gi, li, p, s.E, s.eps);
}

D2 eq_dual(const Setup& s, bool gi, bool li, double p, double* k_lt) {
  D2 q{};
  D2 r = interface_eq<D2>(s, gi, li, D2{p, 1.0, 0.0}, D2{s.E, 0.0, 1.0},
                          D2{s.eps, 0.0, s.deps}, &q);
  if (k_lt) *k_lt = q.v;
  return r;
}

BulkRoot make_root(const Setup& s, bool gi, bool li, double p, ModeClass cls) {
  double q = 0.0;
  const D2 f = eq_dual(s, gi, li, p, &q);
  const double k = s.E / kHbarC;
  const double scale = (p + q) * std::max(1.0, std::abs(s.eps));
  BulkRoot r{};
  r.mode_class = cls;
  r.polarization = s.pol;
  r.k_gt = p;
  r.k_gt_imag = gi;
  r.k_lt = q;
  r.k_lt_imag = li;
  r.k_par = std::sqrt(std::max(0.0, k * k - (gi ? -p * p : p * p)));
  r.dk_gt_domega = f.dp != 0.0 ? -f.dE / f.dp : std::numeric_limits<double>::quiet_NaN();
  r.residual = std::abs(f.v) / (std::abs(f.dp) * p + scale);
  return r;
}

double refine(const Setup& s, bool gi, bool li, double lo, double hi, double flo, double fhi) {
  boost::uintmax_t iters = 200;
  auto f = [&](double p) { return eq_value(s, gi, li, p); };
  auto tol = [](double a, double b) {
    return std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(a);
  };
  auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (r.first + r.second);
}

// Increasing sample points where the phase of a momentum crosses multiples of pi/4.
class PhaseGrid {
 public:
  // kind 0: p itself; kind 1: k_< = sqrt(p^2 + c); kind 2: k_< = sqrt(c - p^2).
  PhaseGrid(int kind, double c, double step, double lo, double hi)
      : kind_(kind), c_(c), step_(step), lo_(lo), hi_(hi) {
    if (kind_ == 0) {
      j_ = std::floor(lo / step) + 1.0;
    } else if (kind_ == 1) {
      j_ = std::floor(std::sqrt(std::max(0.0, lo * lo + c)) / step) + 1.0;
    } else {
      j_ = std::ceil(std::sqrt(std::max(0.0, c - lo * lo)) / step) - 1.0;
    }
  }
  double next() {
    for (;;) {
      double p;
      if (kind_ == 0) {
        p = j_ * step_;
        j_ += 1.0;
      } else if (kind_ == 1) {
        const double kl = j_ * step_;
        p = std::sqrt(std::max(0.0, kl * kl - c_));
        j_ += 1.0;
      } else {
        if (j_ < 0.0) return kInf;
        const double kl = j_ * step_;
        p = std::sqrt(std::max(0.0, c_ - kl * kl));
        j_ -= 1.0;
      }
      if (p >= hi_) return kInf;
      if (p > lo_) return p;
    }
  }
  static constexpr double kInf = std::numeric_limits<double>::infinity();

 private:
  int kind_;
  double c_, step_, lo_, hi_;
  double j_;
};

void scan_segment(const Setup& s, bool gi, bool li, double lo, double hi, int grid_kind_a,
                  int grid_kind_b, double c, ModeClass cls, std::vector<BulkRoot>& out) {
  if (!(hi > lo)) return;
  const double step = kPi / (2.0 * s.L);  // phase pi/4 in k L / 2
  const double gap = 1e-9 * (hi - lo);
  PhaseGrid ga(grid_kind_a, c, step, lo, hi);
  PhaseGrid gb(grid_kind_b >= 0 ? grid_kind_b : 0, c, step, lo, hi);
  double na = grid_kind_a >= 0 ? ga.next() : PhaseGrid::kInf;
  double nb = grid_kind_b >= 0 ? gb.next() : PhaseGrid::kInf;
  double p_prev = lo + gap;
  double f_prev = eq_value(s, gi, li, p_prev);
  bool done = false;
  while (!done) {
    double p;
    if (na <= nb && na < PhaseGrid::kInf) {
      p = na;
      na = ga.next();
    } else if (nb < PhaseGrid::kInf) {
      p = nb;
      nb = gb.next();
    } else {
      p = hi - gap;
      done = true;
    }
    if (!(p > p_prev)) continue;
    const double f = eq_value(s, gi, li, p);
    if (f == 0.0) {
      out.push_back(make_root(s, gi, li, p, cls));
    } else if (f_prev != 0.0 && std::signbit(f) != std::signbit(f_prev)) {
      out.push_back(make_root(s, gi, li, refine(s, gi, li, p_prev, p, f_prev, f), cls));
    }
    p_prev = p;
    f_prev = f;
  }
}

std::vector<BulkRoot> roots_impl(const Setup& s) {
  if (!(s.E > 0.0)) throw DomainError("bulk_mode_roots: need omega > 0");
  if (!(s.L > 0.0) || !std::isfinite(s.L)) throw DomainError("bulk_mode_roots: need finite L_perp");
  const double k = s.E / kHbarC;
  const double c = (s.eps - 1.0) * k * k;
  std::vector<BulkRoot> out;
  // Real k_> in (0, k].
  if (s.eps >= 1.0) {
    scan_segment(s, false, false, 0.0, k, 0, 1, c, ModeClass::propagating, out);
  } else if (s.eps > 0.0) {
    const double pb = k * std::sqrt(1.0 - s.eps);
    scan_segment(s, false, true, 0.0, pb, 0, -1, c, ModeClass::revanescent, out);
    scan_segment(s, false, false, pb, k, 0, 1, c, ModeClass::propagating, out);
  } else {
    scan_segment(s, false, true, 0.0, k, 0, -1, c, ModeClass::revanescent, out);
  }
  // Imaginary k_> with real k_<.
  if (s.eps > 1.0) {
    scan_segment(s, true, false, 0.0, std::sqrt(c), -1, 2, c, ModeClass::evanescent, out);
  }
  // Bound surface polariton: both momenta imaginary.
  if (s.pol == Polarization::TM && s.eps < -1.0) {
    auto f = [&](double p) { return eq_value(s, true, true, p); };
    const double lo = 1e-12 * k;
    double hi = 2.0 * k / std::sqrt(-s.eps - 1.0);
    int guard = 0;
    while (f(hi) > 0.0 && guard++ < 200) hi *= 2.0;
    const double flo = f(lo), fhi = f(hi);
    if (!(flo > 0.0) || !(fhi < 0.0))
      throw NumericalError("bulk_mode_roots: surface root not bracketed on [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
    out.push_back(make_root(s, true, true, refine(s, true, true, lo, hi, flo, fhi),
                            ModeClass::surface));
  }
  std::stable_sort(out.begin(), out.end(), [](const BulkRoot& a, const BulkRoot& b) {
    const double sa = a.k_gt_imag ? -a.k_gt * a.k_gt : a.k_gt * a.k_gt;
    const double sb = b.k_gt_imag ? -b.k_gt * b.k_gt : b.k_gt * b.k_gt;
    return sa > sb;
  });
  return out;
}

// ln |sin(p y)|^2 and ln |cos(p y)|^2 for real p or p -> i p.
double log_sin2(double p, bool imag, double y) {
  const double x = p * y;
  if (!imag) return 2.0 * std::log(std::abs(std::sin(x)));
  if (x < 20.0) return 2.0 * std::log(std::sinh(x));
  return 2.0 * (x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0));
}

// (sinh(2x)/(2x) - 1) and (1 - sin(2x)/(2x)) without cancellation at small x.
double shc_minus_one(double x) {
  const double t = 4.0 * x * x;
  if (x < 0.1) return t / 6.0 * (1.0 + t / 20.0 * (1.0 + t / 42.0 * (1.0 + t / 72.0)));
  return std::sinh(2.0 * x) / (2.0 * x) - 1.0;
}
double one_minus_sinc(double x) {
  const double t = 4.0 * x * x;
  if (x < 0.1) return t / 6.0 * (1.0 - t / 20.0 * (1.0 - t / 42.0 * (1.0 - t / 72.0)));
  return 1.0 - std::sin(2.0 * x) / (2.0 * x);
}

// ln of int_0^Y |sin(p y)|^2 dy and int_0^Y |cos(p y)|^2 dy.
double log_int_sin2(double p, bool imag, double Y) {
  const double x = p * Y;
  if (!imag) return std::log(0.5 * Y * one_minus_sinc(x));
  if (x < 300.0) return std::log(0.5 * Y * shc_minus_one(x));
  return 2.0 * x - std::log(8.0 * p) + std::log1p(-4.0 * x * std::exp(-2.0 * x));
}

double log_int_cos2(double p, bool imag, double Y) {
  const double x = p * Y;
  if (!imag) return std::log(0.5 * Y * (2.0 - one_minus_sinc(x)));
  if (x < 300.0) return std::log(0.5 * Y * (2.0 + shc_minus_one(x)));
  return 2.0 * x - std::log(8.0 * p) + std::log1p(4.0 * x * std::exp(-2.0 * x));
}

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace

std::vector<BulkRoot> bulk_mode_roots(MediumResponse medium, double omega, double l_perp,
                                      Polarization pol) {
  return roots_impl(Setup{pol, medium.eps, medium.deps, omega, l_perp});
}

std::vector<BulkRoot> bulk_mode_roots(const SurfaceCavityGeometry& g, double omega,
                                      Polarization pol) {
  return bulk_mode_roots(medium_response(g.substrate, omega), omega, g.slab_height, pol);
}

double bulk_root_residual(const BulkRoot& r, MediumResponse medium, double omega, double l_perp) {
  const Setup s{r.polarization, medium.eps, medium.deps, omega, l_perp};
  double q = 0.0;
  const D2 f = eq_dual(s, r.k_gt_imag, r.k_lt_imag, r.k_gt, &q);
  const double scale = (r.k_gt + q) * std::max(1.0, std::abs(medium.eps));
  return std::abs(f.v) / (std::abs(f.dp) * r.k_gt + scale);
}

double bulk_root_pdos(const BulkRoot& r, MediumResponse medium, double omega, double z,
                      double l_perp) {
  const double Y = 0.5 * l_perp;
  if (!(z > 0.0) || !(z < Y)) throw DomainError("bulk_root_pdos: need 0 < z < L_perp/2");
  const double p1 = r.k_gt, p2 = r.k_lt;
  const bool i1 = r.k_gt_imag, i2 = r.k_lt_imag;
  const double vf = medium.eps + 0.5 * omega * medium.deps;
  if (!(vf > 0.0)) throw NumericalError("bulk_root_pdos: non-positive Hopfield factor");
  const double lnum = log_sin2(p1, i1, Y - z) + log_sin2(p2, i2, Y);
  double lside1, lside2;
  if (r.polarization == Polarization::TE) {
    lside1 = log_int_sin2(p1, i1, Y);
    lside2 = log_int_sin2(p2, i2, Y);
  } else {
    const double kp2 = r.k_par * r.k_par;
    lside1 = log_add(log_int_sin2(p1, i1, Y), std::log(kp2 / (p1 * p1)) + log_int_cos2(p1, i1, Y));
    lside2 = log_add(log_int_sin2(p2, i2, Y), std::log(kp2 / (p2 * p2)) + log_int_cos2(p2, i2, Y));
  }
  const double lden =
      log_add(log_sin2(p2, i2, Y) + lside1, std::log(vf) + log_sin2(p1, i1, Y) + lside2);
  const double f2 = std::exp(lnum - lden);
  const double k = omega / kHbarC;
  const double dk = r.dk_gt_domega;
  // k_par d k_par / d omega with k_par^2 = k^2 - k_>^2.
  const double jac = k / kHbarC - (i1 ? -p1 * dk : p1 * dk);
  const double pref = 0.75 * kHbarC * kHbarC * kHbarC * kPi;
  return pref * f2 * jac;
}

double bulk_pdos(MediumResponse medium, double omega, double z, double l_perp) {
  double total = 0.0;
  for (Polarization pol : {Polarization::TE, Polarization::TM}) {
    for (const BulkRoot& r : bulk_mode_roots(medium, omega, l_perp, pol)) {
      if (r.mode_class == ModeClass::surface) continue;
      total += bulk_root_pdos(r, medium, omega, z, l_perp);
    }
  }
  return total;
}

double bulk_pdos(const SurfaceCavityGeometry& g, double omega) {
  return bulk_pdos(medium_response(g.substrate, omega), omega, g.probe_height, g.slab_height);
}

namespace {

// Re-solves the root of the same class nearest to p at a shifted energy.
double track_root(const BulkRoot& r, const DielectricModel& m, double omega, double l_perp) {
  const MediumResponse med = medium_response(m, omega);
  const Setup s{r.polarization, med.eps, med.deps, omega, l_perp};
  const bool gi = r.k_gt_imag, li = r.k_lt_imag;
  double h = 1e-3 * kPi / l_perp;
  for (int it = 0; it < 60; ++it, h *= 1.5) {
    const double lo = std::max(r.k_gt - h, 0.5 * r.k_gt);
    const double hi = r.k_gt + h;
    const double flo = eq_value(s, gi, li, lo), fhi = eq_value(s, gi, li, hi);
    if (std::isfinite(flo) && std::isfinite(fhi) && std::signbit(flo) != std::signbit(fhi))
      return refine(s, gi, li, lo, hi, flo, fhi);
  }
  throw NumericalError("bulk_root_derivative_fd: could not re-bracket root");
}

}  // namespace

double bulk_root_derivative_fd(const BulkRoot& r, const DielectricModel& m, double omega,
                               double l_perp, double rel_step) {
  auto central = [&](double h) {
    return (track_root(r, m, omega + h, l_perp) - track_root(r, m, omega - h, l_perp)) / (2.0 * h);
  };
  const double h = rel_step * omega;
  const double d1 = central(h);
  const double d2 = central(0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

BulkConvergence bulk_pdos_convergence(const SurfaceCavityGeometry& g, double omega) {
  const MediumResponse med = medium_response(g.substrate, omega);
  BulkConvergence c{};
  c.pdos = bulk_pdos(med, omega, g.probe_height, g.slab_height);
  c.pdos_doubled = bulk_pdos(med, omega, g.probe_height, 2.0 * g.slab_height);
  c.relative_change = c.pdos != 0.0 ? std::abs(c.pdos_doubled - c.pdos) / std::abs(c.pdos) : 0.0;
  return c;
}

}  // namespace cavityj
