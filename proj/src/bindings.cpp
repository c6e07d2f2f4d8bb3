#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "starqcr/channel.hpp"
#include "starqcr/errors.hpp"
#include "starqcr/network.hpp"
#include "starqcr/qcr.hpp"
#include "starqcr/report.hpp"
#include "starqcr/rng.hpp"
#include "starqcr/scenario.hpp"
#include "starqcr/tomography.hpp"

namespace py = pybind11;
using namespace starqcr;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Capacity-region estimation and loss tomography for star-topology "
              "entanglement switching";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<InferenceError>(m, "InferenceError", PyExc_RuntimeError);

    py::class_<RandomStream>(m, "RandomStream")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def_static("derive", &RandomStream::derive, py::arg("seed"), py::arg("index"))
        .def_static("for_trial", &RandomStream::for_trial, py::arg("master_seed"),
                    py::arg("trial_index"))
        .def("next_u64", &RandomStream::next_u64)
        .def("next_unit", &RandomStream::next_unit)
        .def("bernoulli", &RandomStream::bernoulli, py::arg("p"));

    py::class_<ChannelNoise>(m, "ChannelNoise")
        .def(py::init<>())
        .def(py::init<double, double>(), py::arg("survival"), py::arg("flip_fidelity"))
        .def_static("from_error_rates", &ChannelNoise::from_error_rates, py::arg("loss"),
                    py::arg("flip"))
        .def_property_readonly("survival", &ChannelNoise::survival)
        .def_property_readonly("flip_fidelity", &ChannelNoise::flip_fidelity)
        .def_property_readonly("loss", &ChannelNoise::loss)
        .def_property_readonly("flip", &ChannelNoise::flip)
        .def_property_readonly("noiseless", &ChannelNoise::noiseless)
        .def(py::self == py::self)
        .def("__repr__", [](const ChannelNoise& noise) {
            return "ChannelNoise(survival=" + format_number(noise.survival()) +
                   ", flip_fidelity=" + format_number(noise.flip_fidelity()) + ")";
        });

    py::enum_<TransmissionOutcome>(m, "TransmissionOutcome")
        .value("Lost", TransmissionOutcome::Lost)
        .value("DeliveredClean", TransmissionOutcome::DeliveredClean)
        .value("DeliveredFlipped", TransmissionOutcome::DeliveredFlipped);

    py::class_<TransmissionDistribution>(m, "TransmissionDistribution")
        .def_readonly("p_lost", &TransmissionDistribution::p_lost)
        .def_readonly("p_flip", &TransmissionDistribution::p_flip)
        .def_readonly("p_ok", &TransmissionDistribution::p_ok);

    py::class_<LinkEntanglement>(m, "LinkEntanglement")
        .def_static("lost", &LinkEntanglement::lost)
        .def_static("delivered", &LinkEntanglement::delivered, py::arg("flipped"))
        .def_readonly("present", &LinkEntanglement::present)
        .def_readonly("x_error", &LinkEntanglement::x_error);

    py::class_<EndToEndPair>(m, "EndToEndPair")
        .def_readonly("present", &EndToEndPair::present)
        .def_readonly("x_error", &EndToEndPair::x_error);

    py::enum_<ParityResult>(m, "ParityResult")
        .value("Fulfilled", ParityResult::Fulfilled)
        .value("FailedParity", ParityResult::FailedParity)
        .value("FailedAbsent", ParityResult::FailedAbsent);

    m.def("transmission_distribution", &transmission_distribution, py::arg("noise"));
    m.def("sample_transmission", &sample_transmission, py::arg("noise"), py::arg("rng"));
    m.def("establish_link", &establish_link, py::arg("noise"), py::arg("rng"));
    m.def("entanglement_swap", &entanglement_swap, py::arg("a"), py::arg("b"));
    m.def("parity_check", &parity_check, py::arg("pair"));

    py::class_<StarNetwork>(m, "StarNetwork")
        .def(py::init<int, NodeId, std::vector<ChannelNoise>>(), py::arg("node_count"),
             py::arg("root"), py::arg("channels"))
        .def_static("noiseless", &StarNetwork::noiseless, py::arg("node_count") = 3,
                    py::arg("root") = 1)
        .def_static("uniform", &StarNetwork::uniform, py::arg("node_count"), py::arg("root"),
                    py::arg("noise"))
        .def_property_readonly("node_count", &StarNetwork::node_count)
        .def_property_readonly("root", &StarNetwork::root)
        .def("contains", &StarNetwork::contains, py::arg("node"))
        .def("channel", &StarNetwork::channel, py::arg("node"))
        .def("leaves", &StarNetwork::leaves)
        .def("rerooted", &StarNetwork::rerooted, py::arg("new_root"))
        .def("__repr__", &StarNetwork::describe);

    py::class_<SlotRequest>(m, "SlotRequest")
        .def(py::init([](NodeId primary, std::optional<NodeId> backup) {
                 return SlotRequest{primary, backup};
             }),
             py::arg("primary_leaf"), py::arg("backup_leaf") = std::nullopt)
        .def_readonly("primary_leaf", &SlotRequest::primary_leaf)
        .def_readonly("backup_leaf", &SlotRequest::backup_leaf);

    py::enum_<SlotOutcome>(m, "SlotOutcome")
        .value("FulfilledPrimary", SlotOutcome::FulfilledPrimary)
        .value("FulfilledBackup", SlotOutcome::FulfilledBackup)
        .value("FailedRootLoss", SlotOutcome::FailedRootLoss)
        .value("FailedLeafLoss", SlotOutcome::FailedLeafLoss)
        .value("FailedParity", SlotOutcome::FailedParity);

    py::class_<TrialTally>(m, "TrialTally")
        .def(py::init<>())
        .def_property_readonly("trials", &TrialTally::trials)
        .def("count", &TrialTally::count, py::arg("outcome"))
        .def("rate", &TrialTally::rate, py::arg("outcome"));

    m.def("run_slot", &run_slot, py::arg("network"), py::arg("request"), py::arg("rng"));
    m.def("run_trials", &run_trials, py::arg("network"), py::arg("request"), py::arg("trials"),
          py::arg("master_seed"), py::arg("workers") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("sweep_mixed", &sweep_mixed, py::arg("network"), py::arg("pair"),
          py::arg("fractions"), py::arg("trials"), py::arg("master_seed"),
          py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());

    py::class_<BoundarySample>(m, "BoundarySample")
        .def_readonly("fraction", &BoundarySample::fraction)
        .def_readonly("x", &BoundarySample::x)
        .def_readonly("y", &BoundarySample::y)
        .def_readonly("se_x", &BoundarySample::se_x)
        .def_readonly("se_y", &BoundarySample::se_y);

    py::class_<Point2>(m, "Point2")
        .def_readonly("x", &Point2::x)
        .def_readonly("y", &Point2::y)
        .def("__repr__", [](const Point2& p) {
            return "Point2(" + format_number(p.x) + ", " + format_number(p.y) + ")";
        });

    py::class_<QcrPoint>(m, "QcrPoint")
        .def_readonly("x", &QcrPoint::x)
        .def_readonly("y", &QcrPoint::y)
        .def_readonly("se_x", &QcrPoint::se_x)
        .def_readonly("se_y", &QcrPoint::se_y)
        .def("__repr__", [](const QcrPoint& p) {
            return "QcrPoint(x=" + format_number(p.x) + ", y=" + format_number(p.y) +
                   ", se_x=" + format_number(p.se_x) + ", se_y=" + format_number(p.se_y) + ")";
        });

    py::class_<CapacityRegion>(m, "CapacityRegion")
        .def_readonly("root", &CapacityRegion::root)
        .def_readonly("leaf_j", &CapacityRegion::leaf_j)
        .def_readonly("leaf_k", &CapacityRegion::leaf_k)
        .def_readonly("a", &CapacityRegion::a)
        .def_readonly("b", &CapacityRegion::b)
        .def_readonly("c", &CapacityRegion::c)
        .def_readonly("d", &CapacityRegion::d)
        .def_readonly("boundary", &CapacityRegion::boundary);

    m.def("standard_error", &standard_error, py::arg("p_hat"), py::arg("n"));
    m.def("estimate_reference_points", &estimate_reference_points, py::arg("network"),
          py::arg("root"), py::arg("pair"), py::arg("trials"), py::arg("master_seed"),
          py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
    m.def("region_polyline", &region_polyline, py::arg("region"));

    py::class_<AnalyticPoints>(m, "AnalyticPoints")
        .def_readonly("a", &AnalyticPoints::a)
        .def_readonly("b", &AnalyticPoints::b)
        .def_readonly("c", &AnalyticPoints::c)
        .def_readonly("d", &AnalyticPoints::d);

    py::class_<SlotDistribution>(m, "SlotDistribution")
        .def_readonly("fulfilled_primary", &SlotDistribution::fulfilled_primary)
        .def_readonly("fulfilled_backup", &SlotDistribution::fulfilled_backup)
        .def_readonly("failed_root_loss", &SlotDistribution::failed_root_loss)
        .def_readonly("failed_leaf_loss", &SlotDistribution::failed_leaf_loss)
        .def_readonly("failed_parity", &SlotDistribution::failed_parity)
        .def("probability", &SlotDistribution::probability, py::arg("outcome"))
        .def("total", &SlotDistribution::total);

    m.def("closed_form_points", &closed_form_points, py::arg("root_noise"),
          py::arg("leaf_j_noise"), py::arg("leaf_k_noise"));
    m.def("enumerate_exact", &enumerate_exact, py::arg("network"), py::arg("request"));
    m.def("enumerated_points", &enumerated_points, py::arg("network"), py::arg("root"),
          py::arg("pair"));

    py::class_<LossEstimate>(m, "LossEstimate")
        .def_readonly("channel", &LossEstimate::channel)
        .def_readonly("loss", &LossEstimate::loss)
        .def_readonly("raw_loss", &LossEstimate::raw_loss)
        .def_readonly("se", &LossEstimate::se)
        .def_readonly("source_root", &LossEstimate::source_root);

    py::class_<LeafLossPair>(m, "LeafLossPair")
        .def_readonly("leaf_j", &LeafLossPair::leaf_j)
        .def_readonly("leaf_k", &LeafLossPair::leaf_k);

    m.def("infer_leaf_losses",
          py::overload_cast<const CapacityRegion&>(&infer_leaf_losses), py::arg("region"));
    m.def("infer_leaf_losses",
          py::overload_cast<const AnalyticPoints&>(&infer_leaf_losses), py::arg("points"));

    py::class_<ChannelTomography>(m, "ChannelTomography")
        .def_readonly("channel", &ChannelTomography::channel)
        .def_readonly("estimates", &ChannelTomography::estimates)
        .def_readonly("combined", &ChannelTomography::combined)
        .def_readonly("failures", &ChannelTomography::failures)
        .def("ok", &ChannelTomography::ok);

    py::class_<TomographyReport>(m, "TomographyReport")
        .def_readonly("channels", &TomographyReport::channels)
        .def_readonly("trials", &TomographyReport::trials)
        .def_readonly("master_seed", &TomographyReport::master_seed)
        .def("channel", &TomographyReport::channel, py::arg("id"),
             py::return_value_policy::reference_internal)
        .def("any_success", &TomographyReport::any_success)
        .def("all_success", &TomographyReport::all_success);

    m.def("tomography_schedule", &tomography_schedule, py::arg("node_count"));
    m.def("full_tomography", &full_tomography, py::arg("network"), py::arg("trials"),
          py::arg("master_seed"), py::arg("workers") = 1,
          py::call_guard<py::gil_scoped_release>());

    py::class_<ChannelErrorRates>(m, "ChannelErrorRates")
        .def(py::init([](double loss, double flip) {
                 return ChannelErrorRates{loss, flip};
             }),
             py::arg("loss") = 0.0, py::arg("flip") = 0.0)
        .def_readwrite("loss", &ChannelErrorRates::loss)
        .def_readwrite("flip", &ChannelErrorRates::flip);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("scenario_id", &ScenarioConfig::scenario_id)
        .def_readwrite("node_count", &ScenarioConfig::node_count)
        .def_readwrite("root", &ScenarioConfig::root)
        .def_readwrite("channels", &ScenarioConfig::channels)
        .def_readwrite("trials", &ScenarioConfig::trials)
        .def_readwrite("master_seed", &ScenarioConfig::master_seed)
        .def_readwrite("pair", &ScenarioConfig::pair)
        .def_readwrite("sweep_fractions", &ScenarioConfig::sweep_fractions)
        .def_readwrite("output_dir", &ScenarioConfig::output_dir)
        .def("build_network", &ScenarioConfig::build_network)
        .def("effective_pair", &ScenarioConfig::effective_pair)
        .def("effective_fractions", &ScenarioConfig::effective_fractions);

    m.def("parse_scenario",
          [](const std::string& text) { return parse_scenario(text); }, py::arg("text"));
    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("serialize_scenario", &serialize_scenario, py::arg("config"));
    m.def("render_region_svg", &render_region_svg, py::arg("region"));
}
