#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracwave/config.hpp"
#include "fracwave/driver.hpp"
#include "fracwave/oracle1d.hpp"
#include "fracwave/verify1d.hpp"
#include "fracwave/vtu.hpp"

namespace py = pybind11;
using namespace fracwave;

PYBIND11_MODULE(_fracwave, m) {
  m.doc() = "Wave-driven dynamic brittle fracture: DG elastic waves staggered with a "
            "phase-field crack solver";

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("geometry_kind", &RunConfig::geometry_kind)
      .def_readwrite("level", &RunConfig::level)
      .def_readwrite("x1_min", &RunConfig::x1_min)
      .def_readwrite("x1_max", &RunConfig::x1_max)
      .def_readwrite("x2_min", &RunConfig::x2_min)
      .def_readwrite("x2_max", &RunConfig::x2_max)
      .def_readwrite("degree", &RunConfig::degree)
      .def_readwrite("lambda_", &RunConfig::lambda)
      .def_readwrite("mu", &RunConfig::mu)
      .def_readwrite("rho", &RunConfig::rho)
      .def_readwrite("phase_field_enabled", &RunConfig::phase_field_enabled)
      .def_readwrite("sigma_c", &RunConfig::sigma_c)
      .def_readwrite("l_c", &RunConfig::l_c)
      .def_readwrite("tau_r", &RunConfig::tau_r)
      .def_readwrite("m_geom", &RunConfig::m_geom)
      .def_readwrite("s_min", &RunConfig::s_min)
      .def_readwrite("reg_factor", &RunConfig::reg_factor)
      .def_readwrite("plane_strain_nu", &RunConfig::plane_strain_nu)
      .def_readwrite("cg_rtol", &RunConfig::cg_rtol)
      .def_readwrite("cg_max_iterations", &RunConfig::cg_max_iterations)
      .def_readwrite("dt_el", &RunConfig::dt_el)
      .def_readwrite("dt_pf", &RunConfig::dt_pf)
      .def_readwrite("t_end", &RunConfig::t_end)
      .def_readwrite("amplitude_left", &RunConfig::amplitude_left)
      .def_readwrite("amplitude_right", &RunConfig::amplitude_right)
      .def_readwrite("width_left", &RunConfig::width_left)
      .def_readwrite("width_right", &RunConfig::width_right)
      .def_readwrite("shift_left", &RunConfig::shift_left)
      .def_readwrite("shift_right", &RunConfig::shift_right)
      .def_readwrite("t_init", &RunConfig::t_init)
      .def_readwrite("gmres_rtol", &RunConfig::gmres_rtol)
      .def_readwrite("gmres_restart", &RunConfig::gmres_restart)
      .def_readwrite("gmres_max_iterations", &RunConfig::gmres_max_iterations)
      .def_readwrite("boundary_left", &RunConfig::boundary_left)
      .def_readwrite("boundary_right", &RunConfig::boundary_right)
      .def_readwrite("boundary_bottom", &RunConfig::boundary_bottom)
      .def_readwrite("boundary_top", &RunConfig::boundary_top)
      .def_readwrite("output_directory", &RunConfig::output_directory)
      .def_readwrite("output_interval", &RunConfig::output_interval)
      .def("validate", &RunConfig::validate);

  m.def("preset_names", &preset_names);
  m.def("preset_config", &preset_config, py::arg("name"));
  m.def("parse_config", &parse_config, py::arg("text"), py::arg("base") = RunConfig());
  m.def("load_config", &load_config, py::arg("path"), py::arg("base") = RunConfig());
  m.def("serialize_config", &serialize_config, py::arg("config"));
  m.def("apply_override", &apply_override, py::arg("config"), py::arg("key"), py::arg("value"));
  m.def("config_keys", &config_keys);

  py::class_<StepInfo>(m, "StepInfo")
      .def_readonly("step", &StepInfo::step)
      .def_readonly("t", &StepInfo::t)
      .def_readonly("dt", &StepInfo::dt)
      .def_readonly("dissipative", &StepInfo::dissipative)
      .def_readonly("phase_changed", &StepInfo::phase_changed)
      .def_readonly("energy", &StepInfo::energy)
      .def_readonly("energy_change", &StepInfo::energy_change)
      .def_readonly("gmres_iterations", &StepInfo::gmres_iterations)
      .def_readonly("cg_iterations", &StepInfo::cg_iterations)
      .def_readonly("cracked_nodes", &StepInfo::cracked_nodes);

  py::class_<PhaseState>(m, "PhaseState")
      .def_readonly("s", &PhaseState::s)
      .def_readonly("s_inf", &PhaseState::s_inf)
      .def_readonly("elastic_nodes", &PhaseState::elastic_nodes)
      .def_readonly("time", &PhaseState::time)
      .def_property_readonly("num_elastic", &PhaseState::num_elastic)
      .def_property_readonly("num_cracked", &PhaseState::num_cracked);

  py::class_<VtuField>(m, "Field")
      .def_readonly("name", &VtuField::name)
      .def_readonly("values", &VtuField::values);

  py::class_<Simulation>(m, "Simulation")
      .def(py::init<const RunConfig&>(), py::arg("config"))
      .def("step", &Simulation::step)
      .def("run", [](Simulation& sim) { sim.run(); })
      .def("run",
           [](Simulation& sim, const std::function<void(const StepInfo&)>& on_step) {
             sim.run([&](const Simulation&, const StepInfo& info) { on_step(info); });
           },
           py::arg("on_step"))
      .def_property_readonly("state", [](const Simulation& sim) { return sim.state(); })
      .def("set_state", &Simulation::set_state, py::arg("y"))
      .def_property_readonly("displacement",
                             [](const Simulation& sim) { return sim.displacement(); })
      .def_property_readonly("time", &Simulation::time)
      .def_property_readonly("step_count", &Simulation::step_count)
      .def_property_readonly("next_dt", &Simulation::next_dt)
      .def_property_readonly("energy", &Simulation::energy)
      .def_property_readonly("dissipation", &Simulation::dissipation)
      .def_property_readonly("material_rebuilds", &Simulation::material_rebuilds)
      .def_property_readonly("phase",
                             [](const Simulation& sim) { return sim.phase(); })
      .def_property_readonly("num_cells",
                             [](const Simulation& sim) { return sim.mesh().num_cells(); })
      .def_property_readonly("num_vertices",
                             [](const Simulation& sim) { return sim.mesh().num_vertices(); })
      .def_property_readonly("dofs", [](const Simulation& sim) { return sim.space().dim(); })
      .def("vertex",
           [](const Simulation& sim, int v) { return sim.mesh().vertex(v); },
           py::arg("v"))
      .def("point_fields", &Simulation::point_fields)
      .def("cell_fields", &Simulation::cell_fields);

  py::class_<PilotResult>(m, "PilotResult")
      .def_readonly("peak_principal_stress", &PilotResult::peak_principal_stress)
      .def_readonly("peak_time", &PilotResult::peak_time)
      .def_readonly("scale", &PilotResult::scale)
      .def_readonly("amplitude_left", &PilotResult::amplitude_left)
      .def_readonly("amplitude_right", &PilotResult::amplitude_right);
  m.def("run_pilot", &run_pilot, py::arg("config"), py::arg("target_peak") = 0.0);

  py::class_<ConvergenceRow>(m, "ConvergenceRow")
      .def_readonly("level", &ConvergenceRow::level)
      .def_readonly("h", &ConvergenceRow::h)
      .def_readonly("dt", &ConvergenceRow::dt)
      .def_readonly("steps", &ConvergenceRow::steps)
      .def_readonly("error_l2", &ConvergenceRow::error_l2)
      .def_readonly("free_end_max", &ConvergenceRow::free_end_max);
  py::class_<ConvergenceStudy>(m, "ConvergenceStudy")
      .def_readonly("rows", &ConvergenceStudy::rows)
      .def_readonly("observed_orders", &ConvergenceStudy::observed_orders)
      .def_readonly("pulse_peak", &ConvergenceStudy::pulse_peak);
  m.def("convergence_study", &convergence_study, py::arg("base"), py::arg("levels"));

  py::class_<SpallResult>(m, "SpallResult")
      .def_readonly("found", &SpallResult::found)
      .def_readonly("position", &SpallResult::position)
      .def_readonly("distance_from_end", &SpallResult::distance_from_end)
      .def_readonly("time", &SpallResult::time);
  py::class_<SpallComparison>(m, "SpallComparison")
      .def_readonly("oracle", &SpallComparison::oracle)
      .def_readonly("simulated_found", &SpallComparison::simulated_found)
      .def_readonly("simulated_position", &SpallComparison::simulated_position)
      .def_readonly("simulated_distance_from_end", &SpallComparison::simulated_distance_from_end)
      .def_readonly("simulated_time", &SpallComparison::simulated_time)
      .def_readonly("position_error", &SpallComparison::position_error);
  m.def("spall_comparison", &spall_comparison, py::arg("config"));

  py::class_<SpeedEstimate>(m, "SpeedEstimate")
      .def_readonly("speed", &SpeedEstimate::speed)
      .def_readonly("lag", &SpeedEstimate::lag)
      .def_readonly("station_a", &SpeedEstimate::station_a)
      .def_readonly("station_b", &SpeedEstimate::station_b)
      .def_readonly("arrival_a", &SpeedEstimate::arrival_a)
      .def_readonly("arrival_b", &SpeedEstimate::arrival_b);
  m.def("estimate_front_speed", &estimate_front_speed, py::arg("config"), py::arg("station_a"),
        py::arg("station_b"), py::arg("threshold") = 0.02, py::arg("window") = 0.03);
}
