#include "cavityj/units.hpp"

#include <cmath>

#include "cavityj/errors.hpp"

namespace cavityj {

double p0_rho0(double bond_length) {
  if (bond_length < 0.0 || !std::isfinite(bond_length))
    throw DomainError("p0_rho0: bond length must be non-negative");
  const double r = bond_length / kHbarC;
  return (2.0 / (3.0 * kPi)) * kAlpha * r * r;
}

double fundamental_fp_energy(double mirror_distance) {
  if (!(mirror_distance > 0.0))
    throw DomainError("fundamental_fp_energy: mirror distance must be positive");
  if (std::isinf(mirror_distance)) return 0.0;
  return kPi * kHbarC / mirror_distance;
}

EnergyGrid::EnergyGrid(std::vector<double> points, Spacing spacing)
    : points_(std::move(points)), spacing_(spacing) {
  for (std::size_t i = 1; i < points_.size(); ++i)
    if (!(points_[i] > points_[i - 1]))
      throw DomainError("EnergyGrid: points must be strictly increasing");
  if (spacing_ == Spacing::logarithmic)
    for (double p : points_)
      if (!(p > 0.0)) throw DomainError("EnergyGrid: logarithmic grid needs positive points");
}

EnergyGrid EnergyGrid::linear(double lo, double hi, int n) {
  if (n < 1) throw DomainError("EnergyGrid: need at least one point");
  if (n > 1 && !(hi > lo)) throw DomainError("EnergyGrid: need hi > lo");
  std::vector<double> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    p[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return EnergyGrid(std::move(p), Spacing::linear);
}

EnergyGrid EnergyGrid::logarithmic(double lo, double hi, int n) {
  if (n < 1) throw DomainError("EnergyGrid: need at least one point");
  if (!(lo > 0.0) || (n > 1 && !(hi > lo)))
    throw DomainError("EnergyGrid: need 0 < lo < hi");
  std::vector<double> p(static_cast<std::size_t>(n));
  const double l0 = std::log(lo), l1 = std::log(hi);
  for (int i = 0; i < n; ++i)
    p[static_cast<std::size_t>(i)] = n == 1 ? lo : std::exp(l0 + (l1 - l0) * i / (n - 1));
  if (n > 1) { p.front() = lo; p.back() = hi; }
  return EnergyGrid(std::move(p), Spacing::logarithmic);
}

}  // namespace cavityj
