#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cavityj/dielectric.hpp"
#include "cavityj/errors.hpp"
#include "cavityj/exchange.hpp"
#include "cavityj/fp_cavity.hpp"
#include "cavityj/kernel.hpp"
#include "cavityj/spinwave.hpp"
#include "cavityj/surface_cavity.hpp"
#include "cavityj/units.hpp"

namespace py = pybind11;
using namespace cavityj;

namespace {

EnergyGrid make_grid(const std::vector<double>& points) {
  return EnergyGrid(points, Spacing::linear);
}

}  // namespace

PYBIND11_MODULE(_cavityj, m) {
  m.doc() = "Cavity-modified magnetic exchange";
  m.attr("__version__") = CAVITYJ_VERSION;

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.attr("HBAR_C_EV_NM") = kHbarC;
  m.def("p0_rho0", &p0_rho0, py::arg("bond_length_nm"));
  m.def("fundamental_fp_energy", &fundamental_fp_energy, py::arg("mirror_distance_nm"));
  m.def("thz_to_ev", &thz_to_ev);

  py::class_<DielectricModel>(m, "DielectricModel")
      .def_static("drude", &DielectricModel::drude, py::arg("plasma_eV"))
      .def_static("lorentzian", &DielectricModel::lorentzian, py::arg("eps_inf"), py::arg("omega_TO"),
                  py::arg("omega_LO"))
      .def_property_readonly("eps_inf", &DielectricModel::eps_inf)
      .def_property_readonly("omega_TO", &DielectricModel::omega_TO)
      .def_property_readonly("omega_LO", &DielectricModel::omega_LO);
  m.def("load_dielectric_preset", &load_dielectric_preset, py::arg("path"));
  m.def("epsilon", &epsilon, py::arg("model"), py::arg("omega"));
  m.def("image_charge_factor", &image_charge_factor, py::arg("model"));

  py::class_<FabryPerotGeometry>(m, "FabryPerotGeometry")
      .def(py::init<double, double>(), py::arg("d_nm"), py::arg("z_nm"))
      .def_static("midplane", &FabryPerotGeometry::midplane, py::arg("d_nm"))
      .def_readonly("mirror_distance", &FabryPerotGeometry::mirror_distance)
      .def_readonly("probe_height", &FabryPerotGeometry::probe_height)
      .def_property_readonly("omega_c", &FabryPerotGeometry::omega_c)
      .def("outside_model_validity", &FabryPerotGeometry::outside_model_validity);
  m.def("fp_pdos_parallel", &fp_pdos_parallel, py::arg("geometry"), py::arg("omega"));
  m.def("fp_pdos_perp", &fp_pdos_perp, py::arg("geometry"), py::arg("omega"));
  m.def("fp_delta_pdos", &fp_delta_pdos, py::arg("geometry"), py::arg("omega"));

  py::class_<SurfaceCavityGeometry>(m, "SurfaceCavityGeometry")
      .def(py::init<DielectricModel, double, double>(), py::arg("substrate"), py::arg("z_nm"),
           py::arg("l_perp_nm") = 1e10)
      .def_readonly("probe_height", &SurfaceCavityGeometry::probe_height)
      .def_readonly("slab_height", &SurfaceCavityGeometry::slab_height);
  m.def("surface_limit_frequency", &surface_limit_frequency, py::arg("model"));
  m.def("surface_dispersion", &surface_dispersion, py::arg("model"), py::arg("q"));
  m.def("surface_pdos", &surface_pdos, py::arg("geometry"), py::arg("omega"));
  m.def("bulk_pdos", py::overload_cast<const SurfaceCavityGeometry&, double>(&bulk_pdos),
        py::arg("geometry"), py::arg("omega"));

  py::class_<Mode>(m, "Mode")
      .def(py::init([](double omega, double g2, double g2_l) { return Mode{omega, g2, g2_l}; }),
           py::arg("omega"), py::arg("g2"), py::arg("g2_longitudinal") = 0.0)
      .def_readonly("omega", &Mode::omega)
      .def_readonly("g2", &Mode::g2)
      .def_readonly("g2_longitudinal", &Mode::g2_longitudinal);
  py::class_<ModeSet>(m, "ModeSet")
      .def(py::init<std::vector<Mode>>(), py::arg("modes"))
      .def("__len__", &ModeSet::size);

  py::enum_<SurfaceModes>(m, "SurfaceModes")
      .value("surface", SurfaceModes::surface)
      .value("bulk", SurfaceModes::bulk)
      .value("both", SurfaceModes::both);

  py::class_<DeltaPdos>(m, "DeltaPdos")
      .def_static("zero", &DeltaPdos::zero)
      .def_static("delta_comb", &DeltaPdos::delta_comb, py::arg("modes"), py::arg("p0rho0") = 0.0)
      .def_static("single_delta", &DeltaPdos::single_delta, py::arg("omega_star"), py::arg("weight"),
                  py::arg("p0rho0"))
      .def_static("fabry_perot", &DeltaPdos::fabry_perot, py::arg("geometry"), py::arg("bond_length_nm"),
                  py::arg("eta_min"))
      .def_static(
          "surface",
          [](const SurfaceCavityGeometry& g, double a, SurfaceModes modes, const std::vector<double>& grid,
             int threads) {
            return DeltaPdos::surface(g, a, modes, grid.empty() ? EnergyGrid() : make_grid(grid), threads);
          },
          py::arg("geometry"), py::arg("bond_length_nm"), py::arg("modes") = SurfaceModes::surface,
          py::arg("bulk_grid") = std::vector<double>{}, py::arg("threads") = 1)
      .def("__len__", &DeltaPdos::size)
      .def_property_readonly("omega", &DeltaPdos::omega)
      .def_property_readonly("weight", &DeltaPdos::weight)
      .def_property_readonly("characteristic_frequency", &DeltaPdos::characteristic_frequency)
      .def_property_readonly("p0rho0", &DeltaPdos::p0rho0);

  py::class_<HubbardBond>(m, "HubbardBond")
      .def(py::init<double, double, double>(), py::arg("t"), py::arg("U0"), py::arg("a_nm"))
      .def_readonly("t", &HubbardBond::t)
      .def_readonly("U0", &HubbardBond::U0)
      .def_readonly("a", &HubbardBond::a)
      .def("J0", &HubbardBond::J0)
      .def("warnings", &HubbardBond::warnings);

  py::enum_<ScreeningMethod>(m, "ScreeningMethod")
      .value("none", ScreeningMethod::none)
      .value("image_charge", ScreeningMethod::image_charge)
      .value("dipole_mode_sum", ScreeningMethod::dipole_mode_sum);
  py::class_<ScreeningResult>(m, "ScreeningResult")
      .def(py::init<>())
      .def_readwrite("delta_U", &ScreeningResult::delta_U)
      .def_readwrite("method", &ScreeningResult::method);
  m.def("delta_u_image_charge", &delta_u_image_charge, py::arg("bond"), py::arg("substrate"), py::arg("z_nm"));
  m.def("delta_u_dipole_mode_sum", &delta_u_dipole_mode_sum, py::arg("bond"), py::arg("substrate"),
        py::arg("z_nm"));

  py::class_<ExchangeResult>(m, "ExchangeResult")
      .def_readonly("J_over_J0", &ExchangeResult::J_over_J0)
      .def_readonly("contribution_dynamical", &ExchangeResult::contribution_dynamical)
      .def_readonly("contribution_screening", &ExchangeResult::contribution_screening)
      .def_readonly("delta_U", &ExchangeResult::delta_U)
      .def_readonly("theta", &ExchangeResult::theta)
      .def_readonly("g_eff_sq", &ExchangeResult::g_eff_sq)
      .def_readonly("delta_total", &ExchangeResult::delta_total)
      .def_readonly("delta_dynamical", &ExchangeResult::delta_dynamical)
      .def_readonly("delta_screening", &ExchangeResult::delta_screening)
      .def_readonly("warnings", &ExchangeResult::warnings);
  m.def(
      "exchange_resummed",
      [](const HubbardBond& b, const DeltaPdos& k, const ScreeningResult& s, double eta, bool bare_u, double tol) {
        ExchangeOptions o;
        o.bare_U_in_M = bare_u;
        o.tol_rel = tol;
        return exchange_resummed(b, k, s, eta, o);
      },
      py::arg("bond"), py::arg("kernel"), py::arg("screening") = ScreeningResult{}, py::arg("eta") = 0.0,
      py::arg("bare_U_in_M") = false, py::arg("tol_rel") = 1e-10);
  m.def("exchange_multinomial_oracle", &exchange_multinomial_oracle, py::arg("bond"), py::arg("modes"),
        py::arg("k_max") = -1);
  m.def("exchange_perturbative", py::overload_cast<double, double>(&exchange_perturbative), py::arg("g2"),
        py::arg("theta"));
  m.def("single_mode_weight", &single_mode_weight, py::arg("kernel"), py::arg("n"), py::arg("omega_star"),
        py::arg("eta") = 0.0);
  m.def("exchange_single_mode", &exchange_single_mode_closed_form, py::arg("g2"), py::arg("theta"));
  m.def("exchange_model_regularized", &exchange_model_regularized, py::arg("bond"), py::arg("kernel"),
        py::arg("eta"), py::arg("U"));

  py::class_<VariationalResult>(m, "VariationalResult")
      .def_readonly("J_over_J0", &VariationalResult::J_over_J0)
      .def_readonly("s_opt", &VariationalResult::s_opt)
      .def_readonly("J_bound_s1", &VariationalResult::J_bound_s1)
      .def_readonly("derivative_residual", &VariationalResult::derivative_residual)
      .def_readonly("delta_U", &VariationalResult::delta_U);
  m.def("variational_exchange", &variational_exchange, py::arg("bond"), py::arg("modes"));

  py::class_<SpinWaveModel>(m, "SpinWaveModel")
      .def(py::init<double, double, double, double>(), py::arg("J"), py::arg("K") = 0.0, py::arg("S") = 0.5,
           py::arg("lattice_constant") = 1.0)
      .def_readonly("J", &SpinWaveModel::J)
      .def_readonly("K", &SpinWaveModel::K)
      .def_readonly("S", &SpinWaveModel::S);
  m.def(
      "magnon_dispersion", [](const SpinWaveModel& s, double kx, double ky) { return magnon_dispersion(s, {kx, ky}); },
      py::arg("model"), py::arg("kx"), py::arg("ky"));
  m.def(
      "raman_spectrum",
      [](const SpinWaveModel& s, std::array<double, 2> ei, std::array<double, 2> eo,
         const std::vector<double>& omega, double linewidth, int grid_n, const std::string& broadening,
         int threads) {
        RamanOptions o;
        o.grid_n = grid_n;
        o.broadening = parse_broadening(broadening);
        o.threads = threads;
        return raman_spectrum(s, ei, eo, make_grid(omega), linewidth, o).intensity;
      },
      py::arg("model"), py::arg("e_in"), py::arg("e_out"), py::arg("omega"), py::arg("linewidth"),
      py::arg("grid_n") = 256, py::arg("broadening") = "lorentzian", py::arg("threads") = 1);
  m.def(
      "spectrum_peak",
      [](const std::vector<double>& omega, const std::vector<double>& intensity) {
        return spectrum_peak(Spectrum{make_grid(omega), intensity, 0.0});
      },
      py::arg("omega"), py::arg("intensity"));
}
