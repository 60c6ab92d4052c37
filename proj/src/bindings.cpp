#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "qkdenum/design.hpp"
#include "qkdenum/enumeration.hpp"
#include "qkdenum/monte_carlo.hpp"
#include "qkdenum/photon_stats.hpp"
#include "qkdenum/report.hpp"
#include "qkdenum/scenario_io.hpp"
#include "qkdenum/version.hpp"

namespace py = pybind11;
using namespace qkdenum;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Event-by-event impairment model of a BB84 decoy-pulse QKD link "
            "under a photon-number-splitting attack";
  m.attr("__version__") = kVersion;

  py::class_<SourceParams>(m, "SourceParams")
      .def(py::init<>())
      .def_readwrite("lambda_s", &SourceParams::lambda_s)
      .def_readwrite("lambda_d", &SourceParams::lambda_d)
      .def_readwrite("m_s", &SourceParams::m_s)
      .def_readwrite("m_d", &SourceParams::m_d)
      .def_readwrite("m_v", &SourceParams::m_v);

  py::class_<LinkGeometry>(m, "LinkGeometry")
      .def(py::init<>())
      .def_readwrite("alpha", &LinkGeometry::alpha)
      .def_readwrite("l_total", &LinkGeometry::l_total)
      .def_readwrite("eve_fraction", &LinkGeometry::eve_fraction)
      .def_property_readonly("l_ae", &LinkGeometry::l_ae)
      .def_property_readonly("l_eb", &LinkGeometry::l_eb);

  py::class_<ReceiverParams>(m, "ReceiverParams")
      .def(py::init<>())
      .def_readwrite("p_pl", &ReceiverParams::p_pl)
      .def_readwrite("eta_pd", &ReceiverParams::eta_pd)
      .def_readwrite("alpha_sift", &ReceiverParams::alpha_sift)
      .def_readwrite("alpha_err", &ReceiverParams::alpha_err);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("source", &Scenario::source)
      .def_readwrite("link", &Scenario::link)
      .def_readwrite("receiver", &Scenario::receiver)
      .def_readwrite("truncation_order", &Scenario::truncation_order)
      .def("total_slots", &Scenario::total_slots)
      .def("__repr__", [](const Scenario& s) {
        return "<Scenario " + scenario_digest(s) + ">";
      });

  m.def("baseline_scenario", &baseline_scenario);
  m.def("validate", [](const Scenario& s) {
    std::vector<std::string> messages;
    for (const auto& issue : validate(s)) messages.push_back(issue.message());
    return messages;
  });
  m.def("load_scenario", [](const std::filesystem::path& p) { return load_scenario(p); });
  m.def("scenario_to_json", [](const Scenario& s) { return to_json(s).dump(2); });
  m.def("scenario_from_json", [](const std::string& text) {
    return scenario_from_json(nlohmann::json::parse(text));
  });
  m.def("scenario_digest", &scenario_digest);

  m.def("poisson_pmf", &poisson_pmf, py::arg("mean"), py::arg("count"));
  py::class_<EmissionProfile>(m, "EmissionProfile")
      .def_readonly("mean", &EmissionProfile::mean)
      .def_readonly("probs", &EmissionProfile::probs)
      .def_readonly("tail", &EmissionProfile::tail);
  m.def("emission_profile", &emission_profile, py::arg("mean"), py::arg("truncation_order"));
  py::class_<FiberSegment>(m, "FiberSegment")
      .def_readonly("alpha", &FiberSegment::alpha)
      .def_readonly("length", &FiberSegment::length)
      .def_readonly("loss_db", &FiberSegment::loss_db)
      .def_readonly("rho", &FiberSegment::rho)
      .def_readonly("p_fl", &FiberSegment::p_fl);
  m.def("fiber_segment", &fiber_segment, py::arg("alpha"), py::arg("length"));
  m.def("arrival_mean", &arrival_mean, py::arg("lambda_"), py::arg("rho"));
  m.def("solve_photon_loss_prob", &solve_photon_loss_prob, py::arg("lambda_"),
        py::arg("received_mean"));

  py::class_<SurvivalProbs>(m, "SurvivalProbs")
      .def_readonly("psi_ae", &SurvivalProbs::psi_ae)
      .def_readonly("psi_eb", &SurvivalProbs::psi_eb)
      .def_readonly("p_fl_ae", &SurvivalProbs::p_fl_ae)
      .def_readonly("p_fl_eb", &SurvivalProbs::p_fl_eb);
  m.def("survival_probs", &survival_probs);

  py::class_<EveClassProbs>(m, "EveClassProbs")
      .def_readonly("p", &EveClassProbs::p)
      .def("at", &EveClassProbs::at, py::arg("photons"));
  m.def("reception_probs_at_eve", &reception_probs_at_eve, py::arg("mean"), py::arg("psi_ae"),
        py::arg("truncation_order"));

  py::class_<EveReception>(m, "EveReception")
      .def_readonly("signal", &EveReception::signal)
      .def_readonly("decoy", &EveReception::decoy)
      .def_readonly("n_es_2", &EveReception::n_es_2)
      .def_readonly("n_ed_2", &EveReception::n_ed_2)
      .def_readonly("n_e_2", &EveReception::n_e_2);

  py::class_<PulseClassCounts>(m, "PulseClassCounts")
      .def_readonly("by_class", &PulseClassCounts::by_class)
      .def_readonly("total", &PulseClassCounts::total)
      .def("at", &PulseClassCounts::at, py::arg("cls"));
  m.def("bob_optical_counts", &bob_optical_counts, py::arg("slots"), py::arg("eve"),
        py::arg("psi_eb"));
  m.def("bob_photodetected_counts", &bob_photodetected_counts, py::arg("slots"), py::arg("eve"),
        py::arg("psi_eb"), py::arg("eta_pd"));
  m.def("post_process", &post_process, py::arg("photodetected_bits"), py::arg("alpha_err"),
        py::arg("alpha_sift"));

  py::class_<BobStreamTally>(m, "BobStreamTally")
      .def_readonly("optical", &BobStreamTally::optical)
      .def_readonly("photodetected", &BobStreamTally::photodetected);
  py::class_<BobTally>(m, "BobTally")
      .def_readonly("signal", &BobTally::signal)
      .def_readonly("decoy", &BobTally::decoy);

  py::class_<Metrics>(m, "Metrics")
      .def_readonly("n_err_sift", &Metrics::n_err_sift)
      .def_readonly("r_k", &Metrics::r_k)
      .def_readonly("y_bs", &Metrics::y_bs)
      .def_readonly("y_bd", &Metrics::y_bd)
      .def_readonly("rho_y_sd", &Metrics::rho_y_sd)
      .def_readonly("rho_e_sd", &Metrics::rho_e_sd);
  py::class_<ScenarioEnumeration>(m, "ScenarioEnumeration")
      .def_readonly("survival", &ScenarioEnumeration::survival)
      .def_readonly("eve", &ScenarioEnumeration::eve)
      .def_readonly("bob", &ScenarioEnumeration::bob)
      .def_readonly("n_err_sift", &ScenarioEnumeration::n_err_sift)
      .def_readonly("metrics", &ScenarioEnumeration::metrics)
      .def_readonly("digest", &ScenarioEnumeration::digest);
  m.def("enumerate_scenario", &enumerate_scenario);
  m.def("metrics", &metrics);

  py::enum_<TruncationMode>(m, "TruncationMode")
      .value("match_analytic", TruncationMode::match_analytic)
      .value("physical", TruncationMode::physical);
  py::class_<McOptions>(m, "McOptions")
      .def(py::init<>())
      .def_readwrite("seed", &McOptions::seed)
      .def_readwrite("replications", &McOptions::replications)
      .def_readwrite("truncation_mode", &McOptions::truncation_mode)
      .def_readwrite("slots_scale", &McOptions::slots_scale)
      .def_readwrite("threads", &McOptions::threads);
  py::class_<StreamCounters>(m, "StreamCounters")
      .def_readonly("eve_two_photon", &StreamCounters::eve_two_photon)
      .def_readonly("optical_by_class", &StreamCounters::optical_by_class)
      .def_readonly("optical_overflow", &StreamCounters::optical_overflow)
      .def_readonly("optical_total", &StreamCounters::optical_total)
      .def_readonly("photodetected_by_class", &StreamCounters::photodetected_by_class)
      .def_readonly("photodetected_overflow", &StreamCounters::photodetected_overflow)
      .def_readonly("photodetected_total", &StreamCounters::photodetected_total);
  py::class_<McTally>(m, "McTally")
      .def_readonly("replication", &McTally::replication)
      .def_readonly("signal", &McTally::signal)
      .def_readonly("decoy", &McTally::decoy)
      .def_readonly("sifted_signal_bits", &McTally::sifted_signal_bits)
      .def_readonly("r_k", &McTally::r_k)
      .def_readonly("y_bs", &McTally::y_bs)
      .def_readonly("y_bd", &McTally::y_bd)
      .def_readonly("rho_y_sd", &McTally::rho_y_sd)
      .def_readonly("rho_e_sd", &McTally::rho_e_sd)
      .def_readonly("digest", &McTally::digest)
      .def_readonly("slots_scale", &McTally::slots_scale);
  m.def("simulate_one", &simulate_one, py::arg("scenario"), py::arg("options"),
        py::arg("replication"), py::call_guard<py::gil_scoped_release>());
  m.def("simulate", &simulate, py::arg("scenario"), py::arg("options"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<CounterCheck>(m, "CounterCheck")
      .def_readonly("name", &CounterCheck::name)
      .def_readonly("expected", &CounterCheck::expected)
      .def_readonly("observed", &CounterCheck::observed)
      .def_readonly("z", &CounterCheck::z)
      .def_readonly("upper_bound", &CounterCheck::upper_bound)
      .def_readonly("pass_", &CounterCheck::pass);
  py::class_<AgreementReport>(m, "AgreementReport")
      .def_readonly("replication", &AgreementReport::replication)
      .def_readonly("checks", &AgreementReport::checks)
      .def_readonly("all_pass", &AgreementReport::all_pass);
  m.def("compare", &compare, py::arg("analytic"), py::arg("tally"));

  py::enum_<SweepAxis>(m, "SweepAxis")
      .value("lambda_d", SweepAxis::lambda_d)
      .value("l_total", SweepAxis::l_total);
  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("axis_value", &SweepRow::axis_value)
      .def_readonly("scenario", &SweepRow::scenario)
      .def_readonly("metrics", &SweepRow::metrics);
  m.def("sweep", [](const Scenario& base, SweepAxis axis, const std::vector<double>& values) {
    SweepSpec spec{base, axis, values};
    return sweep(spec);
  }, py::arg("base"), py::arg("axis"), py::arg("values"));

  py::class_<DesignConstraints>(m, "DesignConstraints")
      .def(py::init<>())
      .def(py::init([](double min_yield, double max_eve) {
             return DesignConstraints{min_yield, max_eve};
           }),
           py::arg("min_yield_ratio"), py::arg("max_eve_ratio"))
      .def_readwrite("min_yield_ratio", &DesignConstraints::min_yield_ratio)
      .def_readwrite("max_eve_ratio", &DesignConstraints::max_eve_ratio);
  py::class_<GridPointEval>(m, "GridPointEval")
      .def_readonly("lambda_d", &GridPointEval::lambda_d)
      .def_readonly("metrics", &GridPointEval::metrics)
      .def_readonly("yield_ok", &GridPointEval::yield_ok)
      .def_readonly("eve_ok", &GridPointEval::eve_ok)
      .def_readonly("feasible", &GridPointEval::feasible);
  py::class_<SelectionReport>(m, "SelectionReport")
      .def_readonly("table", &SelectionReport::table)
      .def_readonly("recommended", &SelectionReport::recommended)
      .def_readonly("most_clutter_feasible", &SelectionReport::most_clutter_feasible)
      .def_readonly("feasible", &SelectionReport::feasible)
      .def_readonly("infeasibility_reason", &SelectionReport::infeasibility_reason);
  m.def("select_decoy_mean", &select_decoy_mean, py::arg("base"), py::arg("constraints"),
        py::arg("grid"));
  m.def("default_decoy_grid", &default_decoy_grid);
}
