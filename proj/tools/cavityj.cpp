// cavityj: command line front-end for cavity-modified exchange, PDOS and magnon spectra.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cavityj/dielectric.hpp"
#include "cavityj/errors.hpp"
#include "cavityj/exchange.hpp"
#include "cavityj/fp_cavity.hpp"
#include "cavityj/kernel.hpp"
#include "cavityj/numerics.hpp"
#include "cavityj/spinwave.hpp"
#include "cavityj/surface_cavity.hpp"
#include "cavityj/units.hpp"
#include "cli_support.hpp"

#ifndef CAVITYJ_PRESET_DIR
#define CAVITYJ_PRESET_DIR ""
#endif

namespace cj = cavityj;
using cj::cli::CsvTable;
using nlohmann::json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Common {
  std::string out;
  std::string config;
  int threads = 0;
};

struct Sweep {
  double start = 0.0, stop = 0.0;
  int count = 0;
  std::string spacing = "log";

  bool active() const { return count > 0; }
  std::vector<double> points() const {
    if (count < 1) throw cj::ConfigError("sweep count must be >= 1");
    if (count == 1) return {start};
    if (!(start < stop)) throw cj::ConfigError("sweep needs start < stop");
    if (spacing == "log") return cj::EnergyGrid::logarithmic(start, stop, count).points();
    if (spacing == "lin") return cj::EnergyGrid::linear(start, stop, count).points();
    throw cj::ConfigError("sweep spacing must be lin or log");
  }
};

struct GridSpec {
  double lo = 0.0, hi = 0.0;
  int n = 1000;
  std::string spacing = "lin";

  cj::EnergyGrid make(double default_lo, double default_hi) const {
    if (n < 1) throw cj::ConfigError("grid needs n >= 1");
    const double h = hi > 0.0 ? hi : default_hi;
    double l = lo > 0.0 ? lo : default_lo;
    if (l <= 0.0) l = h / n;
    if (n == 1) return cj::EnergyGrid({l}, cj::Spacing::linear);
    if (!(l < h)) throw cj::ConfigError("grid needs omega-min < omega-max");
    if (spacing == "lin") return cj::EnergyGrid::linear(l, h, n);
    if (spacing == "log") return cj::EnergyGrid::logarithmic(l, h, n);
    throw cj::ConfigError("grid spacing must be lin or log");
  }
};

void add_common(CLI::App* c, Common& o) {
  c->add_option("--out", o.out, "Output CSV path (stdout when omitted; manifest needs a path)");
  c->add_option("--config", o.config, "JSON config; explicit flags take precedence");
  c->add_option("--threads", o.threads, "Worker threads (default: CAVITYJ_THREADS or all cores)");
}

void add_sweep(CLI::App* c, Sweep& s, const std::string& what) {
  c->add_option("--sweep-start", s.start, "Sweep start (" + what + ")");
  c->add_option("--sweep-stop", s.stop, "Sweep stop (" + what + ")");
  c->add_option("--sweep-count", s.count, "Sweep points (0: single point)");
  c->add_option("--sweep-spacing", s.spacing, "lin | log")->check(CLI::IsMember({"lin", "log"}));
}

void add_grid(CLI::App* c, GridSpec& g) {
  c->add_option("--omega-min-ev", g.lo, "Lowest energy (0: automatic)");
  c->add_option("--omega-max-ev", g.hi, "Highest energy (0: automatic)");
  c->add_option("--n", g.n, "Number of energy points");
  c->add_option("--spacing", g.spacing, "lin | log")->check(CLI::IsMember({"lin", "log"}));
}

cj::DielectricModel load_substrate(const std::string& name) {
  if (name.empty()) throw cj::ConfigError("--substrate is required for surface cavities");
  namespace fs = std::filesystem;
  if (fs::exists(name)) return cj::load_dielectric_preset(name);
  std::vector<std::string> dirs;
  if (const char* env = std::getenv("CAVITYJ_PRESET_DIR")) dirs.emplace_back(env);
  dirs.emplace_back(CAVITYJ_PRESET_DIR);
  for (const auto& d : dirs) {
    if (d.empty()) continue;
    for (const std::string& cand : {name, name + ".json"}) {
      const fs::path p = fs::path(d) / cand;
      if (fs::exists(p)) return cj::load_dielectric_preset(p.string());
    }
  }
  throw cj::ConfigError("substrate preset '" + name + "' not found");
}

int resolve_threads(int t) { return t > 0 ? t : cj::default_thread_count(); }

double eta_from_inverse(double inv) { return inv > 0.0 ? 1.0 / inv : 0.0; }

json resolved_config(const CLI::App* sub) {
  json cfg = json::object();
  for (const CLI::Option* o : sub->get_options()) {
    if (o->get_lnames().empty()) continue;
    const std::string name = o->get_lnames().front();
    if (name == "help") continue;
    if (o->count() > 0) {
      const auto& r = o->results();
      if (o->get_expected_max() > 1 || r.size() > 1) cfg[name] = r;
      else if (o->get_type_size() == 0) cfg[name] = true;
      else cfg[name] = r.empty() ? "" : r.front();
    } else if (o->get_type_size() == 0) {
      cfg[name] = false;
    } else {
      cfg[name] = o->get_default_str();
    }
  }
  return cfg;
}

struct Outcome {
  CsvTable csv;
  json points = json::array();
  json extra = json::object();
  bool partial_failure = false;
};

std::string join_args(const std::vector<std::string>& a) {
  std::string s;
  for (std::size_t i = 1; i < a.size(); ++i) s += (i > 1 ? " " : "") + a[i];
  return s;
}

void header(CsvTable& t, const std::vector<std::string>& args) {
  t.comment(std::string("cavityj ") + CAVITYJ_VERSION);
  t.comment("command: " + join_args(args));
}

// ---- pdos ---------------------------------------------------------------------------

struct PdosOpts {
  std::string cavity = "fp";
  double d_um = 1.0;
  std::string z = "mid";
  double z_nm = 0.0;
  std::string substrate;
  std::string modes = "surface";
  double l_perp_m = cj::SurfaceCavityGeometry::kDefaultSlabHeightM;
  bool convergence_check = false;
  GridSpec grid;
};

double fp_height(double d_nm, const std::string& z, double z_nm) {
  if (z_nm > 0.0) return z_nm;
  if (z == "mid") return 0.5 * d_nm;
  throw cj::ConfigError("--z accepts 'mid'; use --z-nm for an explicit height");
}

void warn_slab(const cj::SurfaceCavityGeometry& g, double omega_max) {
  if (g.slab_height_warning())
    std::cerr << "warning: L_perp below 1 m; bulk sums may not be converged\n";
  const double roots = 4.0 * cj::wavevector(omega_max) * g.slab_height / cj::kPi;
  if (roots > 1e7)
    std::cerr << "warning: about " << roots << " interface roots per energy at L_perp = "
              << g.slab_height * 1e-9 << " m; consider --l-perp-m\n";
}

Outcome run_pdos(const PdosOpts& o, const Common& c, const std::vector<std::string>& args) {
  Outcome r;
  header(r.csv, args);
  const int threads = resolve_threads(c.threads);
  if (o.grid.n < 1) throw cj::ConfigError("--n must be >= 1");
  if (o.cavity == "fp") {
    const double d = cj::um_to_nm(o.d_um);
    const cj::FabryPerotGeometry g(d, fp_height(d, o.z, o.z_nm));
    const cj::EnergyGrid grid = o.grid.make(0.0, 10.0);
    r.csv.comment("fabry-perot d_nm=" + cj::cli::format_number(d) +
                  " z_nm=" + cj::cli::format_number(g.probe_height) +
                  " omega_c_eV=" + cj::cli::format_number(g.omega_c()));
    r.csv.columns({"omega_eV", "pdos", "pdos_free", "delta_pdos", "pdos_perp"});
    for (double w : grid.points()) {
      const double p = cj::fp_pdos_parallel(g, w);
      r.csv.row({w, p, w * w, p - w * w, cj::fp_pdos_perp(g, w)});
    }
    r.extra["omega_c_eV"] = g.omega_c();
    r.extra["outside_model_validity"] = g.outside_model_validity();
    return r;
  }
  if (o.cavity != "surface") throw cj::ConfigError("--cavity must be fp or surface");
  if (!(o.z_nm > 0.0)) throw cj::ConfigError("surface cavity needs --z-nm > 0");
  const cj::DielectricModel m = load_substrate(o.substrate);
  const cj::SurfaceModes modes = cj::parse_surface_modes(o.modes);
  const cj::SurfaceCavityGeometry g(m, o.z_nm, cj::m_to_nm(o.l_perp_m));
  const cj::EnergyGrid grid = o.grid.make(0.0, 1.2 * m.omega_LO());
  const bool bulk = modes != cj::SurfaceModes::surface;
  if (bulk) warn_slab(g, grid.points().back());
  const std::size_t n = grid.size();
  std::vector<double> ps(n), pb(n), conv(n, 0.0);
  cj::parallel_for(n, threads, [&](std::size_t i) {
    const double w = grid[i];
    ps[i] = modes != cj::SurfaceModes::bulk ? cj::surface_pdos(g, w) : 0.0;
    if (!bulk) {
      pb[i] = w * w;
    } else if (o.convergence_check) {
      const cj::BulkConvergence bc = cj::bulk_pdos_convergence(g, w);
      pb[i] = bc.pdos;
      conv[i] = bc.relative_change;
    } else {
      pb[i] = cj::bulk_pdos(g, w);
    }
  });
  r.csv.comment("surface substrate=" + o.substrate + " z_nm=" + cj::cli::format_number(o.z_nm) +
                " modes=" + o.modes +
                " omega_inf_eV=" + cj::cli::format_number(cj::surface_limit_frequency(m)));
  if (!bulk) r.csv.comment("pdos_bulk is the free-space value (bulk modes not computed)");
  std::vector<std::string> cols{"omega_eV", "pdos", "pdos_free", "delta_pdos", "pdos_surface",
                                "pdos_bulk"};
  if (o.convergence_check) cols.push_back("bulk_rel_change_doubled_L");
  r.csv.columns(cols);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = grid[i];
    const double total = ps[i] + pb[i];
    std::vector<CsvTable::Cell> row{w, total, w * w, total - w * w, ps[i], pb[i]};
    if (o.convergence_check) row.push_back(conv[i]);
    r.csv.row(row);
  }
  r.extra["omega_inf_eV"] = cj::surface_limit_frequency(m);
  return r;
}

// ---- exchange -----------------------------------------------------------------------

struct ExchangeOpts {
  std::string cavity = "fp";
  double t_ev = 0.5, u0_ev = 5.0, a_nm = 0.6;
  double d_um = 1.0;
  std::string z = "mid";
  double z_nm = 0.0;
  std::string substrate;
  std::string modes = "surface";
  double l_perp_m = cj::SurfaceCavityGeometry::kDefaultSlabHeightM;
  double bulk_omega_max_ev = 0.0;
  int bulk_n = 400;
  double eta_inv_ev = -1.0;
  std::string screening;
  bool bare_u_in_m = false;
  bool eta_report = false;
  double omega_ev = 1.0, g2 = 0.0;
  Sweep sweep;
};

struct PointResult {
  cj::ExchangeResult ex;
  double delta_pert = 0.0;
  double eta_sens = 0.0;
  std::string flag = "ok";
  bool failed = false;
};

Outcome run_exchange(const ExchangeOpts& o, const Common& c, const std::vector<std::string>& args) {
  Outcome r;
  header(r.csv, args);
  const cj::HubbardBond bond(o.t_ev, o.u0_ev, o.a_nm);
  const int threads = resolve_threads(c.threads);
  std::string param;
  double single = 0.0;
  std::optional<cj::DielectricModel> sub;
  if (o.cavity == "fp") {
    param = "d_um";
    single = o.d_um;
  } else if (o.cavity == "surface") {
    param = "z_nm";
    single = o.z_nm;
    sub = load_substrate(o.substrate);
    cj::parse_surface_modes(o.modes);
  } else if (o.cavity == "delta") {
    param = "g2";
    single = o.g2;
  } else {
    throw cj::ConfigError("--cavity must be fp, surface or delta");
  }
  const double eta = o.eta_inv_ev >= 0.0 ? eta_from_inverse(o.eta_inv_ev)
                                         : (o.cavity == "fp" ? 1.0 / 20.0 : 0.0);
  std::string scr = o.screening.empty() ? (o.cavity == "surface" ? "image" : "none") : o.screening;
  if (scr != "none" && scr != "image" && scr != "dipole")
    throw cj::ConfigError("--screening must be none, image or dipole");
  if (scr != "none" && o.cavity != "surface")
    throw cj::ConfigError("--screening requires --cavity surface");
  const std::vector<double> xs = o.sweep.active() ? o.sweep.points() : std::vector<double>{single};
  for (double x : xs)
    if (!(x > 0.0) && o.cavity != "delta") throw cj::ConfigError(param + " must be > 0");
  cj::ExchangeOptions eo;
  eo.bare_U_in_M = o.bare_u_in_m;

  auto build_kernel = [&](double x, double eta_build) -> cj::DeltaPdos {
    if (o.cavity == "fp") {
      const double d = cj::um_to_nm(x);
      return cj::DeltaPdos::fabry_perot(cj::FabryPerotGeometry(d, fp_height(d, o.z, o.z_nm)), o.a_nm,
                                        eta_build);
    }
    if (o.cavity == "delta") {
      return cj::DeltaPdos::delta_comb(cj::ModeSet({{o.omega_ev, x, 0.0}}), cj::p0_rho0(o.a_nm));
    }
    const cj::SurfaceCavityGeometry g(*sub, x, cj::m_to_nm(o.l_perp_m));
    const cj::SurfaceModes md = cj::parse_surface_modes(o.modes);
    cj::EnergyGrid bg;
    if (md != cj::SurfaceModes::surface) {
      const double hi = o.bulk_omega_max_ev > 0.0 ? o.bulk_omega_max_ev : 2.0 * sub->omega_LO();
      bg = cj::EnergyGrid::linear(hi / o.bulk_n, hi, o.bulk_n);
    }
    return cj::DeltaPdos::surface(g, o.a_nm, md, bg, 1);
  };

  std::vector<PointResult> res(xs.size());
  if (o.cavity == "surface" && o.modes != "surface") {
    const cj::SurfaceCavityGeometry g(*sub, xs.front(), cj::m_to_nm(o.l_perp_m));
    warn_slab(g, o.bulk_omega_max_ev > 0.0 ? o.bulk_omega_max_ev : 2.0 * sub->omega_LO());
  }
  cj::parallel_for(xs.size(), threads, [&](std::size_t i) {
    PointResult& p = res[i];
    try {
      const cj::DeltaPdos k = build_kernel(xs[i], eta > 0.0 ? eta : 1.0);
      cj::ScreeningResult s;
      if (scr == "image") s = cj::delta_u_image_charge(bond, *sub, xs[i]);
      if (scr == "dipole") s = cj::delta_u_dipole_mode_sum(bond, *sub, xs[i]);
      p.ex = cj::exchange_resummed(bond, k, s, eta, eo);
      const double tg = p.ex.theta * p.ex.g_eff_sq;
      p.delta_pert = -tg / (1.0 + tg);
      if (o.eta_report && eta > 0.0) {
        const cj::DeltaPdos k2 = build_kernel(xs[i], 0.5 * eta);
        const double alt = cj::exchange_resummed(bond, k2, s, 0.5 * eta, eo).delta_dynamical;
        p.eta_sens = p.ex.delta_dynamical != 0.0
                         ? std::abs(alt - p.ex.delta_dynamical) / std::abs(p.ex.delta_dynamical)
                         : 0.0;
      }
      if (o.cavity == "fp") {
        const double d = cj::um_to_nm(xs[i]);
        if (cj::FabryPerotGeometry(d, fp_height(d, o.z, o.z_nm)).outside_model_validity())
          p.flag = "outside_model_validity";
      }
      if (!p.ex.warnings.empty() && p.flag == "ok") p.flag = "warning";
    } catch (const std::exception& e) {
      p.failed = true;
      p.flag = std::string("error: ") + e.what();
    }
  });

  r.csv.comment("cavity=" + o.cavity + " t_eV=" + cj::cli::format_number(o.t_ev) +
                " U0_eV=" + cj::cli::format_number(o.u0_ev) + " a_nm=" + cj::cli::format_number(o.a_nm) +
                " eta_eV_inv=" + cj::cli::format_number(eta) + " screening=" + scr +
                (o.cavity == "surface" ? " modes=" + o.modes : std::string()));
  std::vector<std::string> cols{param,         "J_over_J0_total", "J_over_J0_dynamical",
                                "J_over_J0_screening", "delta_U_eV", "g_eff_sq",
                                "theta",         "validity_flag",   "delta_total",
                                "delta_dynamical", "delta_screening", "delta_perturbative"};
  if (o.eta_report) cols.push_back("eta_sensitivity");
  r.csv.columns(cols);
  const double nan = std::nan("");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const PointResult& p = res[i];
    std::string flag = p.flag;
    for (char& ch : flag)
      if (ch == ',' || ch == '\n') ch = ';';
    std::vector<CsvTable::Cell> row;
    if (p.failed) {
      row = {xs[i], nan, nan, nan, nan, nan, nan, flag, nan, nan, nan, nan};
      if (o.eta_report) row.push_back(nan);
      r.partial_failure = true;
    } else {
      const auto& e = p.ex;
      row = {xs[i], e.J_over_J0, e.contribution_dynamical, e.contribution_screening, e.delta_U,
             e.g_eff_sq, e.theta, flag, e.delta_total, e.delta_dynamical, e.delta_screening,
             p.delta_pert};
      if (o.eta_report) row.push_back(p.eta_sens);
    }
    r.csv.row(row);
    json pt{{"index", i}, {param, xs[i]}, {"flag", p.flag}};
    if (!p.ex.warnings.empty()) pt["warnings"] = p.ex.warnings;
    r.points.push_back(pt);
  }
  return r;
}

// ---- single-mode --------------------------------------------------------------------

struct SingleModeOpts {
  std::string cavity = "surface";
  double t_ev = 0.5, u0_ev = 5.0, a_nm = 0.6;
  double d_um = 1.0;
  std::string z = "mid";
  double z_nm = 0.0;
  std::string substrate;
  double eta_inv_ev = -1.0;
  double omega_star_ev = 0.0;
  int n_min = 0, n_max = 4;
};

Outcome run_single_mode(const SingleModeOpts& o, const Common&, const std::vector<std::string>& args) {
  Outcome r;
  header(r.csv, args);
  if (o.n_min < -1 || o.n_max < o.n_min) throw cj::ConfigError("need -1 <= n-min <= n-max");
  const cj::HubbardBond bond(o.t_ev, o.u0_ev, o.a_nm);
  double eta = 0.0;
  cj::DeltaPdos k = cj::DeltaPdos::zero();
  if (o.cavity == "fp") {
    eta = o.eta_inv_ev >= 0.0 ? eta_from_inverse(o.eta_inv_ev) : 1.0 / 20.0;
    const double d = cj::um_to_nm(o.d_um);
    k = cj::DeltaPdos::fabry_perot(cj::FabryPerotGeometry(d, fp_height(d, o.z, o.z_nm)), o.a_nm,
                                   eta > 0.0 ? eta : 1.0);
  } else if (o.cavity == "surface") {
    eta = o.eta_inv_ev >= 0.0 ? eta_from_inverse(o.eta_inv_ev) : 0.0;
    if (!(o.z_nm > 0.0)) throw cj::ConfigError("surface cavity needs --z-nm > 0");
    const cj::SurfaceCavityGeometry g(load_substrate(o.substrate), o.z_nm);
    k = cj::DeltaPdos::surface(g, o.a_nm, cj::SurfaceModes::surface);
  } else {
    throw cj::ConfigError("--cavity must be fp or surface");
  }
  const double ws = o.omega_star_ev > 0.0 ? o.omega_star_ev : k.characteristic_frequency();
  const double theta = ws / bond.U0;
  const double full = cj::dynamical_integral(k, bond.U0, eta);
  const double k0 = cj::single_mode_weight(k, 0, ws, eta);
  r.csv.comment("cavity=" + o.cavity + " omega_star_eV=" + cj::cli::format_number(ws) +
                " theta=" + cj::cli::format_number(theta) + " eta_eV_inv=" + cj::cli::format_number(eta));
  r.csv.columns({"n", "K_n", "K_n_over_K0", "g2_bar", "delta_single_mode", "delta_full",
                 "single_mode_rel_error"});
  for (int n = o.n_min; n <= o.n_max; ++n) {
    const double kn = cj::single_mode_weight(k, n, ws, eta);
    const double g2 = k.p0rho0() * ws * ws * kn;
    const double dsm = cj::exchange_single_mode_closed_form(g2, theta) - 1.0;
    r.csv.row({static_cast<long long>(n), kn, kn / k0, g2, dsm, full,
               full != 0.0 ? dsm / full - 1.0 : 0.0});
  }
  return r;
}

// ---- variational --------------------------------------------------------------------

struct VariationalOpts {
  double t_ev = 0.5, u0_ev = 5.0;
  std::vector<std::string> modes;
  Sweep sweep;
};

cj::Mode parse_mode(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  for (std::string tok; std::getline(ss, tok, ':');) {
    try {
      std::size_t pos = 0;
      v.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw cj::ConfigError("--mode expects omega_eV:g2[:g2_L], got '" + s + "'");
    }
  }
  if (v.size() < 2 || v.size() > 3) throw cj::ConfigError("--mode expects omega_eV:g2[:g2_L]");
  return {v[0], v[1], v.size() == 3 ? v[2] : 0.0};
}

Outcome run_variational(const VariationalOpts& o, const Common&, const std::vector<std::string>& args) {
  Outcome r;
  header(r.csv, args);
  const cj::HubbardBond bond(o.t_ev, o.u0_ev, 0.0);
  std::vector<cj::Mode> base;
  for (const auto& s : o.modes) base.push_back(parse_mode(s));
  cj::ModeSet check(base);
  const std::vector<double> scales = o.sweep.active() ? o.sweep.points() : std::vector<double>{1.0};
  r.csv.columns({"g2_scale", "s_opt", "J_over_J0", "J_bound_s1", "derivative_residual",
                 "delta_U_eV", "sum_g2", "sum_omega_g2_eV"});
  for (double sc : scales) {
    if (!(sc >= 0.0)) throw cj::ConfigError("g2 scale must be >= 0");
    std::vector<cj::Mode> ms = base;
    for (auto& m : ms) {
      m.g2 *= sc;
      m.g2_longitudinal *= sc;
    }
    const cj::ModeSet set(ms);
    const cj::VariationalResult v = cj::variational_exchange(bond, set);
    r.csv.row({sc, v.s_opt, v.J_over_J0, v.J_bound_s1, v.derivative_residual, v.delta_U,
               set.sum_g2(), set.sum_omega_g2()});
  }
  return r;
}

// ---- magnons ------------------------------------------------------------------------

struct MagnonOpts {
  double j_mev = 100.0, k_mev = 0.0, spin = 0.5;
  std::vector<double> dj_percent{0.0};
  GridSpec grid;
  double linewidth_mev = 2.0;
  int grid_n = 256;
  std::string broadening = "lorentzian";
  bool no_normalize = false;
  std::string path = "G,M,X,G";
  int points_per_segment = 40;
  std::string component = "pm";
};

Outcome run_raman(const MagnonOpts& o, const Common& c, const std::vector<std::string>& args) {
  Outcome r;
  header(r.csv, args);
  const double J = 1e-3 * o.j_mev, K = 1e-3 * o.k_mev, lw = 1e-3 * o.linewidth_mev;
  // The pair-creation vertex grows like 1/omega near the Goldstone point; the default
  // window starts at the single-magnon band top so the zone-edge peak dominates.
  const cj::EnergyGrid grid = o.grid.make(4.0 * J * o.spin, 10.0 * J * o.spin);
  cj::RamanOptions ro;
  ro.grid_n = o.grid_n;
  ro.broadening = cj::parse_broadening(o.broadening);
  ro.threads = resolve_threads(c.threads);
  struct Run {
    double dj;
    cj::Spectrum xx, xy;
  };
  std::vector<Run> runs;
  for (double dj : o.dj_percent) {
    const cj::SpinWaveModel m(J * (1.0 + 0.01 * dj), K, o.spin);
    runs.push_back({dj, cj::raman_spectrum(m, {1.0, 0.0}, {1.0, 0.0}, grid, lw, ro),
                    cj::raman_spectrum(m, {1.0, 0.0}, {0.0, 1.0}, grid, lw, ro)});
  }
  double norm = 1.0;
  if (!o.no_normalize) {
    double mx = 0.0;
    for (double v : runs.front().xx.intensity) mx = std::max(mx, v);
    if (mx > 0.0) norm = 1.0 / mx;
  }
  r.csv.comment("J_meV=" + cj::cli::format_number(o.j_mev) + " K_meV=" + cj::cli::format_number(o.k_mev) +
                " S=" + cj::cli::format_number(o.spin) + " linewidth_meV=" +
                cj::cli::format_number(o.linewidth_mev) + " grid_n=" + std::to_string(o.grid_n) +
                " broadening=" + o.broadening);
  json peaks = json::array();
  for (const Run& run : runs) {
    const double pk = cj::spectrum_peak(run.xx);
    r.csv.comment("peak_xx dJ_percent=" + cj::cli::format_number(run.dj) +
                  " omega_eV=" + cj::cli::format_number(pk));
    peaks.push_back({{"dJ_percent", run.dj}, {"peak_xx_eV", pk}});
  }
  r.csv.columns({"dJ_percent", "omega_eV", "I_xx", "I_xy"});
  for (const Run& run : runs)
    for (std::size_t i = 0; i < grid.size(); ++i)
      r.csv.row({run.dj, grid[i], norm * run.xx.intensity[i], norm * run.xy.intensity[i]});
  r.extra["peaks"] = peaks;
  return r;
}

Outcome run_sqw(const MagnonOpts& o, const Common&, const std::vector<std::string>& args) {
  Outcome r;
  header(r.csv, args);
  const double J = 1e-3 * o.j_mev, K = 1e-3 * o.k_mev, lw = 1e-3 * o.linewidth_mev;
  const cj::SpinWaveModel m(J, K, o.spin);
  const cj::EnergyGrid grid = o.grid.make(1e-6, 6.0 * J * o.spin);
  const cj::Broadening b = cj::parse_broadening(o.broadening);
  if (o.component != "pm" && o.component != "mp") throw cj::ConfigError("--component must be pm or mp");
  const auto comp = o.component == "pm" ? cj::SpinComponent::plus_minus : cj::SpinComponent::minus_plus;
  const auto path = cj::sample_path(o.path, o.points_per_segment, true);
  r.csv.comment("path=" + o.path + " (segment midpoints) J_meV=" + cj::cli::format_number(o.j_mev) +
                " K_meV=" + cj::cli::format_number(o.k_mev) + " component=" + o.component);
  r.csv.columns({"q_index", "distance", "kx", "ky", "omega_eV", "intensity"});
  for (std::size_t q = 0; q < path.size(); ++q) {
    const cj::Spectrum s = cj::structure_factor_transverse(m, path[q].k, grid, lw, b, comp);
    for (std::size_t i = 0; i < grid.size(); ++i)
      r.csv.row({static_cast<long long>(q), path[q].distance, path[q].k.kx, path[q].k.ky, grid[i],
                 s.intensity[i]});
  }
  return r;
}

Outcome run_dispersion(const MagnonOpts& o, const Common&, const std::vector<std::string>& args) {
  Outcome r;
  header(r.csv, args);
  const cj::SpinWaveModel m(1e-3 * o.j_mev, 1e-3 * o.k_mev, o.spin);
  const auto path = cj::sample_path(o.path, o.points_per_segment, false);
  r.csv.comment("path=" + o.path + " J_meV=" + cj::cli::format_number(o.j_mev) +
                " K_meV=" + cj::cli::format_number(o.k_mev));
  r.csv.columns({"q_index", "distance", "kx", "ky", "label", "energy_eV"});
  for (std::size_t q = 0; q < path.size(); ++q)
    r.csv.row({static_cast<long long>(q), path[q].distance, path[q].k.kx, path[q].k.ky, path[q].label,
               cj::magnon_dispersion(m, path[q].k)});
  return r;
}

void add_bond(CLI::App* c, double& t, double& u0, double* a) {
  c->add_option("--t-ev", t, "Hopping t (eV)");
  c->add_option("--u0-ev", u0, "Bare Hubbard U0 (eV)");
  if (a) c->add_option("--a-nm", *a, "Bond length (nm)");
}

void add_magnon(CLI::App* c, MagnonOpts& o) {
  c->add_option("--j-mev", o.j_mev, "Nearest-neighbour exchange J (meV)");
  c->add_option("--k-mev", o.k_mev, "Next-nearest-neighbour exchange K (meV)");
  c->add_option("--spin", o.spin, "Spin S");
}

void write_manifest(const std::string& out, const std::string& command, const std::vector<std::string>& args,
                    const json& config, double wall, const Outcome* r, const std::string& status,
                    const std::string& error) {
  json m;
  m["tool"] = "cavityj";
  m["version"] = CAVITYJ_VERSION;
  m["command"] = command;
  m["argv"] = std::vector<std::string>(args.begin() + 1, args.end());
  m["config"] = config;
  m["wall_time_s"] = wall;
  m["status"] = status;
  if (!error.empty()) m["error"] = error;
  m["points"] = r ? r->points : json::array();
  if (r && !r->extra.empty()) m["results"] = r->extra;
  json outputs = json::array();
  if (std::filesystem::exists(out)) {
    std::ifstream in(out, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    outputs.push_back({{"path", out}, {"sha256", cavityj::cli::sha256_hex(ss.str())}});
  }
  m["outputs"] = outputs;
  cavityj::cli::write_file(out + ".manifest.json", m.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> raw(argv, argv + argc);
  std::vector<std::string> args;
  try {
    args = cj::cli::merge_config_args(raw);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  CLI::App app{"Cavity-modified magnetic exchange, photonic densities of states and magnon spectra"};
  app.set_version_flag("--version", std::string(CAVITYJ_VERSION));
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  Common common;
  PdosOpts po;
  ExchangeOpts eo;
  SingleModeOpts so;
  VariationalOpts vo;
  MagnonOpts mo;

  auto* pdos = app.add_subcommand("pdos", "Photonic density of states on an energy grid");
  add_common(pdos, common);
  pdos->add_option("--cavity", po.cavity, "fp | surface")->check(CLI::IsMember({"fp", "surface"}));
  pdos->add_option("--d-um", po.d_um, "Mirror distance (um)");
  pdos->add_option("--z", po.z, "Probe height: mid");
  pdos->add_option("--z-nm", po.z_nm, "Probe height (nm)");
  pdos->add_option("--substrate", po.substrate, "Substrate preset (path or name)");
  pdos->add_option("--modes", po.modes, "surface | bulk | both");
  pdos->add_option("--l-perp-m", po.l_perp_m, "Slab height for bulk modes (m)");
  pdos->add_flag("--convergence-check", po.convergence_check, "Report bulk change when L_perp doubles");
  add_grid(pdos, po.grid);

  auto* exch = app.add_subcommand("exchange", "Resummed exchange J/J0 over a parameter sweep");
  add_common(exch, common);
  exch->add_option("--cavity", eo.cavity, "fp | surface | delta");
  add_bond(exch, eo.t_ev, eo.u0_ev, &eo.a_nm);
  exch->add_option("--d-um", eo.d_um, "Mirror distance (um)");
  exch->add_option("--z", eo.z, "FP probe height: mid");
  exch->add_option("--z-nm", eo.z_nm, "Probe height (nm)");
  exch->add_option("--substrate", eo.substrate, "Substrate preset (path or name)");
  exch->add_option("--modes", eo.modes, "surface | bulk | both");
  exch->add_option("--l-perp-m", eo.l_perp_m, "Slab height for bulk modes (m)");
  exch->add_option("--bulk-omega-max-ev", eo.bulk_omega_max_ev, "Bulk table upper energy (0: 2 omega_LO)");
  exch->add_option("--bulk-n", eo.bulk_n, "Bulk table points");
  exch->add_option("--eta-inv-ev", eo.eta_inv_ev, "Regulator 1/eta in eV (0: none; default 20 for fp)");
  exch->add_option("--screening", eo.screening, "none | image | dipole");
  exch->add_flag("--bare-u-in-m", eo.bare_u_in_m, "Use U0 instead of U0 + Delta U inside M(x)");
  exch->add_flag("--eta-report", eo.eta_report, "Add the change of the dynamical part when eta halves");
  exch->add_option("--omega-ev", eo.omega_ev, "Mode energy for --cavity delta");
  exch->add_option("--g2", eo.g2, "Mode coupling g^2 for --cavity delta");
  add_sweep(exch, eo.sweep, "d_um, z_nm or g2");

  auto* sm = app.add_subcommand("single-mode", "Single-mode weights K(n) and closed-form exchange");
  add_common(sm, common);
  sm->add_option("--cavity", so.cavity, "fp | surface");
  add_bond(sm, so.t_ev, so.u0_ev, &so.a_nm);
  sm->add_option("--d-um", so.d_um, "Mirror distance (um)");
  sm->add_option("--z", so.z, "FP probe height: mid");
  sm->add_option("--z-nm", so.z_nm, "Probe height (nm)");
  sm->add_option("--substrate", so.substrate, "Substrate preset (path or name)");
  sm->add_option("--eta-inv-ev", so.eta_inv_ev, "Regulator 1/eta in eV");
  sm->add_option("--omega-star-ev", so.omega_star_ev, "Reference frequency (0: characteristic)");
  sm->add_option("--n-min", so.n_min, "Lowest moment order (>= -1)");
  sm->add_option("--n-max", so.n_max, "Highest moment order");

  auto* var = app.add_subcommand("variational", "Variational exchange bound");
  add_common(var, common);
  add_bond(var, vo.t_ev, vo.u0_ev, nullptr);
  var->add_option("--mode", vo.modes, "omega_eV:g2[:g2_L], repeatable");
  add_sweep(var, vo.sweep, "scale factor applied to all g2");

  auto* raman = app.add_subcommand("raman", "Two-magnon Raman spectra I_xx and I_xy");
  add_common(raman, common);
  add_magnon(raman, mo);
  raman->add_option("--dj-percent", mo.dj_percent, "Exchange shifts in percent, repeatable");
  raman->add_option("--linewidth-mev", mo.linewidth_mev, "Line width (meV)");
  raman->add_option("--grid-n", mo.grid_n, "Brillouin-zone grid N (N x N)");
  raman->add_option("--broadening", mo.broadening, "lorentzian | gaussian");
  raman->add_flag("--no-normalize", mo.no_normalize, "Keep absolute units instead of unit reference peak");
  add_grid(raman, mo.grid);

  auto* sqw = app.add_subcommand("sqw", "Transverse dynamical structure factor along a path");
  add_common(sqw, common);
  add_magnon(sqw, mo);
  sqw->add_option("--path", mo.path, "High-symmetry path, e.g. G,M,X,G");
  sqw->add_option("--points-per-segment", mo.points_per_segment, "Momenta per segment");
  sqw->add_option("--linewidth-mev", mo.linewidth_mev, "Line width (meV)");
  sqw->add_option("--broadening", mo.broadening, "lorentzian | gaussian");
  sqw->add_option("--component", mo.component, "pm | mp");
  add_grid(sqw, mo.grid);

  auto* disp = app.add_subcommand("dispersion", "Magnon dispersion along a path");
  add_common(disp, common);
  add_magnon(disp, mo);
  disp->add_option("--path", mo.path, "High-symmetry path, e.g. G,M,X,G");
  disp->add_option("--points-per-segment", mo.points_per_segment, "Momenta per segment");

  for (CLI::App* s : app.get_subcommands({}))
    s->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  raman->get_option("--dj-percent")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  var->get_option("--mode")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    app.parse(std::move(rev));
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  const json config = resolved_config(sub);
  const auto t0 = std::chrono::steady_clock::now();
  auto wall = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

  int rc = 0;
  std::string status = "ok", error;
  std::optional<Outcome> out;
  try {
    if (command == "pdos") out = run_pdos(po, common, args);
    else if (command == "exchange") out = run_exchange(eo, common, args);
    else if (command == "single-mode") out = run_single_mode(so, common, args);
    else if (command == "variational") out = run_variational(vo, common, args);
    else if (command == "raman") out = run_raman(mo, common, args);
    else if (command == "sqw") out = run_sqw(mo, common, args);
    else out = run_dispersion(mo, common, args);
    if (out->csv.rows() == 0) throw cj::ConfigError("empty output grid");
    const std::string text = out->csv.str();
    if (common.out.empty()) std::cout << text;
    else cj::cli::write_file(common.out, text);
    if (out->partial_failure) {
      status = "partial_failure";
      rc = kExitNumerical;
      std::cerr << "error: some sweep points failed; see validity_flag\n";
    }
  } catch (const cj::ConfigError& e) {
    status = "config_error", error = e.what(), rc = kExitConfig;
  } catch (const cj::DomainError& e) {
    status = "config_error", error = e.what(), rc = kExitConfig;
  } catch (const CLI::Error& e) {
    status = "config_error", error = e.what(), rc = kExitConfig;
  } catch (const std::exception& e) {
    status = "numerical_error", error = e.what(), rc = kExitNumerical;
  }
  if (!error.empty()) std::cerr << "error: " << error << "\n";
  if (!common.out.empty()) {
    try {
      write_manifest(common.out, command, args, config, wall(), out ? &*out : nullptr, status, error);
    } catch (const std::exception& e) {
      std::cerr << "error: manifest: " << e.what() << "\n";
      if (rc == 0) rc = kExitNumerical;
    }
  }
  return rc;
}
