#include "cavityj/kernel.hpp"

#include <cmath>

#include "cavityj/errors.hpp"
#include "cavityj/numerics.hpp"

namespace cavityj {

ModeSet::ModeSet(std::vector<Mode> modes) : modes_(std::move(modes)) {
  for (const Mode& m : modes_) {
    if (!(m.omega > 0.0) || !std::isfinite(m.omega)) throw DomainError("ModeSet: need Omega > 0");
    if (!(m.g2_longitudinal >= 0.0) || !(m.g2 >= m.g2_longitudinal) || !std::isfinite(m.g2))
      throw DomainError("ModeSet: need g2 >= g2_L >= 0");
  }
}

double ModeSet::sum_g2() const {
  double s = 0.0;
  for (const Mode& m : modes_) s += m.g2;
  return s;
}

double ModeSet::sum_omega_g2() const {
  double s = 0.0;
  for (const Mode& m : modes_) s += m.omega * m.g2;
  return s;
}

double ModeSet::sum_omega_g2_longitudinal() const {
  double s = 0.0;
  for (const Mode& m : modes_) s += m.omega * m.g2_longitudinal;
  return s;
}

SurfaceModes parse_surface_modes(const std::string& s) {
  if (s == "surface") return SurfaceModes::surface;
  if (s == "bulk") return SurfaceModes::bulk;
  if (s == "both") return SurfaceModes::both;
  throw ConfigError("modes must be surface, bulk or both (got '" + s + "')");
}

double regulator(double omega, double eta) {
  const double u = eta * omega;
  return std::exp(-u * u);
}

DeltaPdos DeltaPdos::zero() {
  DeltaPdos k;
  k.kind_ = KernelKind::tabulated;
  return k;
}

DeltaPdos DeltaPdos::delta_comb(const ModeSet& modes, double p0rho0) {
  DeltaPdos k;
  k.kind_ = KernelKind::delta_comb;
  k.p0rho0_ = p0rho0;
  for (const Mode& m : modes.modes()) {
    k.omega_.push_back(m.omega);
    k.weight_.push_back(m.g2);
  }
  k.set_mean_frequency();
  return k;
}

DeltaPdos DeltaPdos::single_delta(double omega_star, double weight, double p0rho0) {
  if (!(omega_star > 0.0)) throw DomainError("single_delta: need omega* > 0");
  if (!(p0rho0 > 0.0)) throw DomainError("single_delta: need P0 rho0 > 0");
  DeltaPdos k;
  k.kind_ = KernelKind::delta_comb;
  k.p0rho0_ = p0rho0;
  k.omega_ = {omega_star};
  k.weight_ = {p0rho0 * omega_star * omega_star * weight};
  k.omega_star_ = omega_star;
  return k;
}

DeltaPdos DeltaPdos::fabry_perot(const FabryPerotGeometry& g, double bond_length, double eta_min) {
  if (!(eta_min > 0.0))
    throw DomainError("fabry_perot kernel: the oscillatory tail needs a Gaussian regulator eta > 0");
  DeltaPdos k;
  k.kind_ = KernelKind::fabry_perot;
  k.p0rho0_ = p0_rho0(bond_length);
  k.eta_min_ = eta_min;
  const double wc = g.omega_c();
  k.omega_star_ = wc;
  const double w_max = 6.5 / eta_min;
  // Narrow intervals are resolved with ten nodes; wide ones need twenty for large x.
  const GaussRule& gl = gauss_legendre_rule(wc < 0.5 ? 10 : 20);
  const long n_int = static_cast<long>(std::ceil(w_max / wc));
  k.omega_.reserve(static_cast<std::size_t>(n_int) * gl.x.size());
  k.weight_.reserve(static_cast<std::size_t>(n_int) * gl.x.size());
  const double s = std::sin(kPi * g.probe_height / g.mirror_distance);
  const double c = std::cos(kPi * g.probe_height / g.mirror_distance);
  // Running sums A = sum sin^2(n pi z/d), B = sum n^2 sin^2(n pi z/d) via the angle recurrence.
  double A = 0.0, B = 0.0;
  double sn = 0.0, cn = 1.0;
  for (long n = 0; n < n_int; ++n) {
    if (n > 0) {
      const double sn1 = sn * c + cn * s;
      const double cn1 = cn * c - sn * s;
      sn = sn1;
      cn = cn1;
      if (n % 64 == 0) {  // re-anchor the recurrence
        sn = std::sin(kPi * n * g.probe_height / g.mirror_distance);
        cn = std::cos(kPi * n * g.probe_height / g.mirror_distance);
      }
      A += sn * sn;
      B += static_cast<double>(n) * static_cast<double>(n) * sn * sn;
    }
    const double lo = n * wc;
    const double hi = std::min((n + 1) * wc, w_max);
    if (!(hi > lo)) break;
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      const double w = mid + half * gl.x[i];
      const double drho = 1.5 * wc * (A * w + B * wc * wc / w) - w * w;
      k.omega_.push_back(w);
      k.weight_.push_back(half * gl.w[i] * k.p0rho0_ * drho / w);
    }
  }
  return k;
}

DeltaPdos DeltaPdos::surface(const SurfaceCavityGeometry& g, double bond_length, SurfaceModes modes,
                             const EnergyGrid& bulk_grid, int threads) {
  DeltaPdos k;
  k.kind_ = KernelKind::surface;
  k.p0rho0_ = p0_rho0(bond_length);
  k.omega_star_ = surface_limit_frequency(g.substrate);
  if (modes != SurfaceModes::bulk) {
    const QuadratureNodes n = surface_kernel_nodes(g);
    k.omega_ = n.omega;
    k.weight_.resize(n.weight.size());
    for (std::size_t i = 0; i < n.weight.size(); ++i) k.weight_[i] = k.p0rho0_ * n.weight[i];
  }
  if (modes != SurfaceModes::surface) {
    if (bulk_grid.size() < 2) throw DomainError("surface kernel: bulk modes need an energy grid");
    const auto& w = bulk_grid.points();
    std::vector<double> d(w.size());
    parallel_for(w.size(), threads, [&](std::size_t i) {
      const MediumResponse med = medium_response(g.substrate, w[i]);
      d[i] = bulk_pdos(med, w[i], g.probe_height, g.slab_height) - w[i] * w[i];
    });
    DeltaPdos b = tabulated(bulk_grid, d, bond_length);
    k.omega_.insert(k.omega_.end(), b.omega_.begin(), b.omega_.end());
    k.weight_.insert(k.weight_.end(), b.weight_.begin(), b.weight_.end());
  }
  return k;
}

DeltaPdos DeltaPdos::tabulated(const EnergyGrid& grid, const std::vector<double>& delta_rho,
                               double bond_length) {
  if (grid.size() != delta_rho.size()) throw DomainError("tabulated kernel: size mismatch");
  if (grid.size() < 2) throw DomainError("tabulated kernel: need at least two points");
  DeltaPdos k;
  k.kind_ = KernelKind::tabulated;
  k.p0rho0_ = p0_rho0(bond_length);
  const auto& w = grid.points();
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0)) throw DomainError("tabulated kernel: grid must be positive");
    const double left = i > 0 ? w[i] - w[i - 1] : 0.0;
    const double right = i + 1 < w.size() ? w[i + 1] - w[i] : 0.0;
    k.omega_.push_back(w[i]);
    k.weight_.push_back(0.5 * (left + right) * k.p0rho0_ * delta_rho[i] / w[i]);
  }
  k.set_mean_frequency();
  return k;
}

DeltaPdos DeltaPdos::operator+(const DeltaPdos& o) const {
  DeltaPdos k = *this;
  k.kind_ = KernelKind::composite;
  k.omega_.insert(k.omega_.end(), o.omega_.begin(), o.omega_.end());
  k.weight_.insert(k.weight_.end(), o.weight_.begin(), o.weight_.end());
  k.eta_min_ = std::max(eta_min_, o.eta_min_);
  if (k.p0rho0_ == 0.0) k.p0rho0_ = o.p0rho0_;
  if (k.omega_star_ == 0.0) k.omega_star_ = o.omega_star_;
  return k;
}

double DeltaPdos::integrate(const std::function<double(double)>& F, double eta) const {
  CompensatedSum s;
  for (std::size_t i = 0; i < omega_.size(); ++i)
    s.add(weight_[i] * regulator(omega_[i], eta) * F(omega_[i]));
  return s.value();
}

void DeltaPdos::set_mean_frequency() {
  double sw = 0.0, swo = 0.0;
  for (std::size_t i = 0; i < omega_.size(); ++i) {
    sw += std::abs(weight_[i]);
    swo += std::abs(weight_[i]) * omega_[i];
  }
  omega_star_ = sw > 0.0 ? swo / sw : 0.0;
}

}  // namespace cavityj
