#include "cavityj/spinwave.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cavityj/errors.hpp"
#include "cavityj/numerics.hpp"

namespace cavityj {

SpinWaveModel::SpinWaveModel(double J_, double K_, double S_, double a_)
    : J(J_), K(K_), S(S_), lattice_constant(a_) {
  if (!(J > 0.0) || !std::isfinite(J)) throw DomainError("SpinWaveModel: need J > 0");
  if (!std::isfinite(K)) throw DomainError("SpinWaveModel: K must be finite");
  if (!(S > 0.0)) throw DomainError("SpinWaveModel: need S > 0");
  if (!(lattice_constant > 0.0)) throw DomainError("SpinWaveModel: need lattice_constant > 0");
  const int n = 64;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const KPoint k{2.0 * kPi * i / n, 2.0 * kPi * j / n};
      const MagnonHamiltonian h = magnon_hamiltonian(*this, k);
      if (h.h0 * h.h0 - h.hx * h.hx < -1e-12 * h.h0 * h.h0 || !(h.h0 > 0.0))
        throw DomainError("SpinWaveModel: Neel state unstable (h0^2 < hx^2)");
    }
  }
}

MagnonHamiltonian magnon_hamiltonian(const SpinWaveModel& m, KPoint k) {
  const double cb = std::cos(k.kx + k.ky) + std::cos(k.kx - k.ky);
  const double ca = std::cos(k.kx) + std::cos(k.ky);
  return {4.0 * m.J * m.S - 4.0 * m.K * m.S + 2.0 * m.K * m.S * cb, 2.0 * m.J * m.S * ca};
}

namespace {

double mixing_ratio(const MagnonHamiltonian& h) {
  const double r = h.hx / h.h0;
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace

BogoliubovFactors bogoliubov(const SpinWaveModel& m, KPoint k) {
  const MagnonHamiltonian h = magnon_hamiltonian(m, k);
  const double r = mixing_ratio(h);
  if (std::abs(r) >= 1.0)
    throw NumericalError("bogoliubov: mixing angle diverges at a Goldstone point");
  const double theta = -std::atanh(r);
  const double c = std::cosh(0.5 * theta), s = std::sinh(0.5 * theta);
  return {c, s, s, c, theta, magnon_dispersion(m, k)};
}

double magnon_dispersion(const SpinWaveModel& m, KPoint k) {
  const MagnonHamiltonian h = magnon_hamiltonian(m, k);
  const double d = (h.h0 - h.hx) * (h.h0 + h.hx);
  if (d < -1e-12 * h.h0 * h.h0) throw NumericalError("magnon_dispersion: negative discriminant");
  return std::sqrt(std::max(d, 0.0));
}

double diagonalization_residual(const SpinWaveModel& m, KPoint k) {
  const MagnonHamiltonian h = magnon_hamiltonian(m, k);
  const BogoliubovFactors u = bogoliubov(m, k);
  // (U^T H U)_12 with H = [[h0, hx], [hx, h0]].
  const double off = u.U11 * (h.h0 * u.U12 + h.hx * u.U22) + u.U21 * (h.hx * u.U12 + h.h0 * u.U22);
  return u.energy > 0.0 ? std::abs(off) / u.energy : std::abs(off);
}

Broadening parse_broadening(const std::string& s) {
  if (s == "lorentzian") return Broadening::lorentzian;
  if (s == "gaussian") return Broadening::gaussian;
  throw ConfigError("broadening must be lorentzian or gaussian (got '" + s + "')");
}

double line_shape(Broadening b, double x, double width) {
  if (b == Broadening::lorentzian) return width / (kPi * (x * x + width * width));
  const double u = x / width;
  return std::exp(-0.5 * u * u) / (width * std::sqrt(2.0 * kPi));
}

double spectrum_peak(const Spectrum& s) {
  const auto& w = s.omega_grid.points();
  if (w.size() < 3 || s.intensity.size() != w.size())
    throw DomainError("spectrum_peak: need at least three points");
  std::size_t i = 0;
  for (std::size_t j = 1; j < w.size(); ++j)
    if (s.intensity[j] > s.intensity[i]) i = j;
  if (i == 0 || i + 1 == w.size()) return w[i];
  const double x0 = w[i - 1], x1 = w[i], x2 = w[i + 1];
  const double y0 = s.intensity[i - 1], y1 = s.intensity[i], y2 = s.intensity[i + 1];
  const double d1 = (y1 - y0) / (x1 - x0), d2 = (y2 - y1) / (x2 - x1);
  const double curv = (d2 - d1) / (x2 - x0);
  if (!(curv < 0.0)) return x1;
  return 0.5 * (x0 + x1) - d1 / (2.0 * curv);
}

double structure_factor_weight(const SpinWaveModel& m, KPoint q, SpinComponent c) {
  const MagnonHamiltonian h = magnon_hamiltonian(m, q);
  const double r = mixing_ratio(h);
  if (r <= -1.0) throw NumericalError("structure_factor_weight: divergent weight at the ordering vector");
  if (r >= 1.0) return 0.0;
  const BogoliubovFactors u = bogoliubov(m, q);
  if (c == SpinComponent::plus_minus)
    return 2.0 * m.S * (u.U12 * u.U11 + u.U11 * u.U11 + u.U12 * u.U21 + u.U11 * u.U21);
  return 2.0 * m.S * (u.U12 * u.U22 + u.U22 * u.U22 + u.U12 * u.U21 + u.U22 * u.U21);
}

Spectrum structure_factor_transverse(const SpinWaveModel& m, KPoint q, const EnergyGrid& grid,
                                     double linewidth, Broadening b, SpinComponent c) {
  if (!(linewidth > 0.0)) throw DomainError("structure_factor_transverse: need linewidth > 0");
  const double wgt = structure_factor_weight(m, q, c);
  const double e = magnon_dispersion(m, q);
  Spectrum s{grid, std::vector<double>(grid.size()), linewidth};
  for (std::size_t i = 0; i < grid.size(); ++i) s.intensity[i] = wgt * line_shape(b, grid[i] - e, linewidth);
  return s;
}

double raman_vertex(const SpinWaveModel& m, std::array<double, 2> ei, std::array<double, 2> eo,
                    KPoint k) {
  static const std::array<std::array<double, 2>, 2> avec{{{1.0, 0.0}, {0.0, 1.0}}};
  static const std::array<std::array<double, 2>, 2> bvec{{{1.0, 1.0}, {1.0, -1.0}}};
  double f0 = 0.0, fx = 0.0;
  for (const auto& b : bvec) {
    const double p = (ei[0] * b[0] + ei[1] * b[1]) * (eo[0] * b[0] + eo[1] * b[1]);
    f0 += p * std::cos(k.kx * b[0] + k.ky * b[1]);
  }
  for (const auto& a : avec) {
    const double p = (ei[0] * a[0] + ei[1] * a[1]) * (eo[0] * a[0] + eo[1] * a[1]);
    fx += p * std::cos(k.kx * a[0] + k.ky * a[1]);
  }
  f0 *= 2.0 * m.K * m.S;
  fx *= 2.0 * m.J * m.S;
  const BogoliubovFactors u = bogoliubov(m, k);
  return std::sinh(u.theta) * f0 + std::cosh(u.theta) * fx;
}

Spectrum raman_spectrum(const SpinWaveModel& m, std::array<double, 2> ei,
                        std::array<double, 2> eo, const EnergyGrid& grid, double linewidth,
                        const RamanOptions& opt) {
  if (!(linewidth > 0.0)) throw DomainError("raman_spectrum: need linewidth > 0");
  if (opt.grid_n < 2) throw DomainError("raman_spectrum: need grid_n >= 2");
  for (const auto& e : {ei, eo})
    if (std::abs(std::hypot(e[0], e[1]) - 1.0) > 1e-9)
      throw DomainError("raman_spectrum: polarizations must be unit vectors");
  const int N = opt.grid_n;
  const std::size_t nw = grid.size();
  const auto& w = grid.points();
  std::vector<std::vector<double>> rows(N);
  parallel_for(static_cast<std::size_t>(N), opt.threads, [&](std::size_t i) {
    std::vector<double> acc(nw, 0.0);
    const double kx = (2.0 * static_cast<double>(i) - N + 1) * kPi / N;
    for (int j = 0; j < N; ++j) {
      const KPoint k{kx, (2.0 * j - N + 1) * kPi / N};
      const MagnonHamiltonian h = magnon_hamiltonian(m, k);
      if (std::abs(mixing_ratio(h)) >= 1.0) continue;
      const double r = raman_vertex(m, ei, eo, k);
      const double r2 = r * r;
      if (r2 == 0.0) continue;
      const double e2 = 2.0 * magnon_dispersion(m, k);
      for (std::size_t p = 0; p < nw; ++p) acc[p] += r2 * line_shape(opt.broadening, w[p] - e2, linewidth);
    }
    rows[i] = std::move(acc);
  });
  Spectrum s{grid, std::vector<double>(nw, 0.0), linewidth};
  const double norm = 1.0 / (static_cast<double>(N) * N);
  for (int i = 0; i < N; ++i)
    for (std::size_t p = 0; p < nw; ++p) s.intensity[p] += rows[i][p];
  for (double& v : s.intensity) v *= norm;
  return s;
}

KPoint high_symmetry_point(const std::string& label) {
  if (label == "G") return {0.0, 0.0};
  if (label == "M") return {kPi, 0.0};
  if (label == "X") return {0.5 * kPi, 0.5 * kPi};
  if (label == "Y") return {0.0, kPi};
  throw ConfigError("unknown high-symmetry label '" + label + "' (use G, M, X, Y)");
}

std::vector<PathPoint> sample_path(const std::string& path, int n, bool midpoints) {
  if (n < 1) throw ConfigError("path: need at least one point per segment");
  std::vector<std::string> labels;
  std::stringstream ss(path);
  for (std::string tok; std::getline(ss, tok, ',');) {
    tok.erase(0, tok.find_first_not_of(' '));
    tok.erase(tok.find_last_not_of(' ') + 1);
    labels.push_back(tok);
  }
  if (labels.size() < 2) throw ConfigError("path needs at least two labels, e.g. G,M,X,G");
  std::vector<PathPoint> out;
  double dist = 0.0;
  for (std::size_t s = 0; s + 1 < labels.size(); ++s) {
    const KPoint a = high_symmetry_point(labels[s]), b = high_symmetry_point(labels[s + 1]);
    const double len = std::hypot(b.kx - a.kx, b.ky - a.ky);
    const int first = midpoints ? 0 : (s == 0 ? 0 : 1);
    const int last = midpoints ? n - 1 : n;
    for (int j = first; j <= last; ++j) {
      const double f = midpoints ? (j + 0.5) / n : static_cast<double>(j) / n;
      std::string lab;
      if (!midpoints && j == 0) lab = labels[s];
      if (!midpoints && j == n) lab = labels[s + 1];
      out.push_back({{a.kx + f * (b.kx - a.kx), a.ky + f * (b.ky - a.ky)}, dist + f * len, lab});
    }
    dist += len;
  }
  return out;
}

}  // namespace cavityj
