// Copyright 2026 The Qesa Authors
// SPDX-License-Identifier: Apache-2.0
//
// JSON/CSV serialization of states, netlists, schedules and results.
// Term order follows the canonical configuration order, so identical inputs
// produce byte-identical files.

#pragma once

#include <string>

#include "json.hpp"
#include "qesa/applications.hpp"
#include "qesa/emitter.hpp"
#include "qesa/esa.hpp"
#include "qesa/interferometer.hpp"

namespace qesa {

using Json = nlohmann::json;

// FockState schema: {dim, spatial_count, terms: [{occ: [[s,t,n]...], re, im}]}
Json fock_to_json(const FockState& state);
FockState fock_from_json(const Json& j);

Json netlist_to_json(const BSNetlist& netlist);
BSNetlist netlist_from_json(const Json& j);

Json pattern_to_json(const DetectionPattern& p);

Json protocol_result_to_json(const ProtocolResult& result, const std::string& family,
                             bool include_states = false);
Json swap_result_to_json(const SwapResult& result, const std::string& family,
                         bool include_states = false);
Json teleport_result_to_json(const TeleportResult& result, const std::string& family,
                             bool include_states = false);

Json sweep_to_json(const std::vector<SweepRow>& rows);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);
/// Plot-data companion: columns d, p, 2/d^2.
std::string sweep_plot_csv(const std::vector<SweepRow>& rows);

/// Schedule log as JSON lines, one record per line.
std::string schedule_to_json_lines(const EmitterSchedule& schedule);

Json verify_report_to_json(const VerifyReport& report);

/// Canonical text form of a pattern ("0,1,3").
std::string pattern_to_string(const DetectionPattern& p);
DetectionPattern pattern_from_string(const std::string& text, int d);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace qesa
