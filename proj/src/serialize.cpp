// Copyright 2026 The Qesa Authors
// SPDX-License-Identifier: Apache-2.0

#include "qesa/serialize.hpp"

#include <fstream>
#include <sstream>

namespace qesa {

namespace {

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

}  // namespace

Json fock_to_json(const FockState& state) {
    Json terms = Json::array();
    for (const auto& [cfg, amp] : state.terms()) {
        Json occ = Json::array();
        for (const ModeOcc& s : cfg.slots())
            occ.push_back(Json::array({s.spatial, s.timebin, s.count}));
        terms.push_back(Json{{"occ", std::move(occ)},
                             {"re", amp.real()},
                             {"im", amp.imag()}});
    }
    return Json{{"dim", state.dim()},
                {"spatial_count", state.spatial_count()},
                {"terms", std::move(terms)}};
}

FockState fock_from_json(const Json& j) {
    FockState state(j.at("dim").get<int>(), j.at("spatial_count").get<int>(),
                    MixedSectors::Yes);
    for (const Json& term : j.at("terms")) {
        OccupationConfig cfg;
        for (const Json& occ : term.at("occ"))
            cfg.add(occ.at(0).get<int>(), occ.at(1).get<int>(), occ.at(2).get<int>());
        state.add_term(cfg, Complex{term.at("re").get<double>(),
                                    term.at("im").get<double>()});
    }
    return state;
}

namespace {

std::string element_kind_name(NetElement::Kind kind) {
    switch (kind) {
        case NetElement::Kind::BeamSplitter: return "beam_splitter";
        case NetElement::Kind::PhaseShifter: return "phase_shifter";
        case NetElement::Kind::Crossing: return "crossing";
    }
    return "?";
}

NetElement::Kind element_kind_from_name(const std::string& name) {
    if (name == "beam_splitter") return NetElement::Kind::BeamSplitter;
    if (name == "phase_shifter") return NetElement::Kind::PhaseShifter;
    if (name == "crossing") return NetElement::Kind::Crossing;
    throw std::invalid_argument("unknown netlist element kind: " + name);
}

}  // namespace

Json netlist_to_json(const BSNetlist& netlist) {
    Json elements = Json::array();
    for (const NetElement& e : netlist.elements) {
        Json modes = Json::array({e.mode_a});
        if (e.kind != NetElement::Kind::PhaseShifter) modes.push_back(e.mode_b);
        elements.push_back(Json{{"kind", element_kind_name(e.kind)},
                                {"modes", std::move(modes)},
                                {"theta", e.theta},
                                {"phi", e.phi}});
    }
    return Json{{"dim", netlist.dim},
                {"convention", netlist.convention},
                {"elements", std::move(elements)},
                {"reconstruction_error", netlist.reconstruction_error}};
}

BSNetlist netlist_from_json(const Json& j) {
    BSNetlist net;
    net.dim = j.at("dim").get<int>();
    net.convention = j.at("convention").get<std::string>();
    net.reconstruction_error = j.at("reconstruction_error").get<double>();
    for (const Json& je : j.at("elements")) {
        NetElement e;
        e.kind = element_kind_from_name(je.at("kind").get<std::string>());
        e.mode_a = je.at("modes").at(0).get<int>();
        if (e.kind != NetElement::Kind::PhaseShifter)
            e.mode_b = je.at("modes").at(1).get<int>();
        e.theta = je.at("theta").get<double>();
        e.phi = je.at("phi").get<double>();
        net.elements.push_back(e);
    }
    return net;
}

Json pattern_to_json(const DetectionPattern& p) {
    return Json(p.detectors);
}

Json protocol_result_to_json(const ProtocolResult& result, const std::string& family,
                             bool include_states) {
    Json j{{"d", result.d},
           {"family", family},
           {"total_success_probability", result.total_success},
           {"pattern_count", result.pattern_count},
           {"fidelity_min", result.fidelity_min},
           {"fidelity_max", result.fidelity_max},
           {"mode", result.mode == EnumerationMode::FullEnumeration
                        ? "full_enumeration"
                        : "single_pattern_times_symmetry"}};
    if (!result.per_pattern.empty()) {
        Json table = Json::array();
        for (const PatternOutcome& o : result.per_pattern)
            table.push_back(Json{{"pattern", pattern_to_json(o.pattern)},
                                 {"probability", o.probability},
                                 {"fidelity", o.fidelity}});
        j["per_pattern"] = std::move(table);
    }
    if (include_states) {
        j["sample_projected"] = fock_to_json(result.sample_projected);
        j["sample_corrected"] = fock_to_json(result.sample_corrected);
    }
    return j;
}

Json swap_result_to_json(const SwapResult& result, const std::string& family,
                         bool include_states) {
    Json j{{"d", result.d},
           {"family", family},
           {"total_success_probability", result.total_success},
           {"expected", result.expected},
           {"pattern_count", result.pattern_count},
           {"fidelity_min", result.fidelity_min},
           {"fidelity_max", result.fidelity_max}};
    if (!result.per_pattern.empty()) {
        Json table = Json::array();
        for (const PatternOutcome& o : result.per_pattern)
            table.push_back(Json{{"pattern", pattern_to_json(o.pattern)},
                                 {"probability", o.probability},
                                 {"fidelity", o.fidelity}});
        j["per_pattern"] = std::move(table);
    }
    if (include_states) j["output_state"] = fock_to_json(result.output_state);
    return j;
}

Json teleport_result_to_json(const TeleportResult& result, const std::string& family,
                             bool include_states) {
    Json input = Json::array();
    for (int i = 0; i < result.input.dim(); ++i)
        input.push_back(Json::array(
            {result.input.coeffs(i).real(), result.input.coeffs(i).imag()}));
    Json j{{"d", result.d},
           {"family", family},
           {"input", std::move(input)},
           {"total_success_probability", result.total_success},
           {"expected", result.expected},
           {"pattern_count", result.pattern_count},
           {"corrected_fidelity", result.corrected_fidelity}};
    if (include_states) j["output_state"] = fock_to_json(result.output_state);
    return j;
}

Json sweep_to_json(const std::vector<SweepRow>& rows) {
    Json out = Json::array();
    for (const SweepRow& r : rows)
        out.push_back(Json{{"d", r.d},
                           {"p_success", r.p_success},
                           {"expected", r.expected},
                           {"abs_error", r.abs_error},
                           {"wall_time", r.wall_time}});
    return out;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "d,p_success,expected,abs_error,wall_time\n";
    for (const SweepRow& r : rows)
        out << r.d << ',' << format_double(r.p_success) << ','
            << format_double(r.expected) << ',' << format_double(r.abs_error) << ','
            << format_double(r.wall_time) << '\n';
    return out.str();
}

std::string sweep_plot_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "d,p,expected\n";
    for (const SweepRow& r : rows)
        out << r.d << ',' << format_double(r.p_success) << ','
            << format_double(r.expected) << '\n';
    return out.str();
}

std::string schedule_to_json_lines(const EmitterSchedule& schedule) {
    std::ostringstream out;
    for (const ScheduleRecord& rec : schedule.records) {
        Json j{{"step", rec.step},
               {"control_branch",
                rec.control_branch < 0 ? Json(nullptr) : Json(rec.control_branch)},
               {"spin_op", rec.spin_op},
               {"raw_bin", rec.raw_bin < 0 ? Json(nullptr) : Json(rec.raw_bin)},
               {"spatial_mode",
                rec.spatial_mode < 0 ? Json(nullptr) : Json(rec.spatial_mode)},
               {"delay_applied",
                rec.delay_applied < 0 ? Json(nullptr) : Json(rec.delay_applied)}};
        if (rec.spin_op == "rename") j["renamed_bin"] = rec.renamed_bin;
        if (!rec.route.empty()) j["route"] = rec.route;
        out << j.dump() << '\n';
    }
    return out.str();
}

Json verify_report_to_json(const VerifyReport& report) {
    return Json{{"pass", report.pass},
                {"violations", report.violations},
                {"switch_count", report.switch_count},
                {"control_qubits", report.control_qubits},
                {"branches", report.branches},
                {"photons_per_branch", report.photons_per_branch}};
}

std::string pattern_to_string(const DetectionPattern& p) {
    std::ostringstream out;
    for (std::size_t i = 0; i < p.detectors.size(); ++i) {
        if (i) out << ',';
        out << p.detectors[i];
    }
    return out.str();
}

DetectionPattern pattern_from_string(const std::string& text, int d) {
    DetectionPattern p;
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        p.detectors.push_back(std::stoi(tok));
    }
    p.validate(d);
    return p;
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << contents;
}

}  // namespace qesa
