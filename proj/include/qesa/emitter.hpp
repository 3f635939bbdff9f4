// Copyright 2026 The Qesa Authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic generation of the analyzer's auxiliary state from a single
// quantum emitter.
//
// The emitter has two ground levels: a dark state |0>_s that cannot be
// excited and a bright state |1>_s with a closed optical transition, so an
// excitation pulse emits one photon exactly in the bright branches. A control
// register of ceil(log2(d/2)) qubits is prepared in an equal superposition of
// d/2 basis states; multi-qubit controlled flips bring the emitter to the
// bright state for one control branch at a time, two consecutive excitations
// emit a photon pair, and a flip back returns the emitter to the dark state.
// A binary tree of 2^ceil(log2(d-2)) - 1 optical switches routes each photon
// to its spatial mode, fixed per-mode delay lines align the pairs emitted in
// different rounds, and a final X-basis measurement of the register decouples
// the photons, leaving the pair-rotation auxiliary state up to per-branch
// signs determined by the outcome.
//
// Timing is bookkept in integer time-bin units; emission clocks restart per
// pair round and the post-delay relabeling that re-zeroes each round's bins
// is logged as an explicit audit step, since it is bookkeeping rather than
// physics.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qesa/esa.hpp"
#include "qesa/fock.hpp"

namespace qesa {

/// Per-spatial-mode delay in time-bin units. Mode x_{2m} and x_{2m+1} share
/// the delay d - 4 - 2m, longest on x_0/x_1, zero on the last pair.
struct DelayConfig {
    std::vector<int> delay_per_mode;  // indexed by auxiliary mode number k

    static DelayConfig standard(int d);
};

/// One audit row of the generation schedule.
struct ScheduleRecord {
    int step = 0;
    int control_branch = -1;  // -1 for register-wide operations
    std::string spin_op;      // init | flip_on | excite | flip_off | rename | measure
    int raw_bin = -1;         // emission clock within the round, -1 if n/a
    int spatial_mode = -1;    // auxiliary mode index k, -1 if n/a
    int delay_applied = -1;   // -1 if n/a
    int renamed_bin = -1;     // post-delay bin after relabeling, -1 if n/a
    std::string route;        // switch-tree path bits for emissions
};

struct EmitterSchedule {
    int d = 0;
    DelayConfig delays;
    std::vector<ScheduleRecord> records;
    /// Final (mode, time-bin) list per control branch after delays/renames.
    std::vector<std::vector<ModeIndex>> branch_photons;

    int switch_count() const;
    int control_qubits() const;
    int branch_count() const { return d / 2; }
    int photons_per_branch() const { return d - 2; }
};

/// Emitter + register state for step-by-step inspection: equal-modulus
/// branches, per-branch spin level and emission list.
struct EmitterState {
    struct Branch {
        Complex amplitude;  // modulus 1/sqrt(d/2) throughout
        bool bright = false;
        std::vector<ModeIndex> photons;  // (auxiliary mode k, time-bin)
    };
    int d = 0;
    std::vector<Branch> branches;

    FockState to_fock(int spatial_count) const;
};

/// Builds the generation schedule (pure bookkeeping; no measurement).
EmitterSchedule build_schedule(int d, std::optional<DelayConfig> delays = {});

/// X-basis measurement outcome selector: one bit per control qubit, 0 = "+".
/// Branch j picks up the sign (-1)^(outcome . bits(j)).
struct MeasurementOutcome {
    std::vector<int> bits;

    static MeasurementOutcome all_plus(int d);
    static MeasurementOutcome all_minus(int d);
    static MeasurementOutcome random(int d, std::uint64_t seed);
    std::vector<Complex> branch_signs(int d) const;
};

struct GenerateResult {
    FockState state;        // on spatial modes 2..d-1, spatial_count d
    AuxSpec spec;           // pair-rotation design with the measured signs
    EmitterSchedule schedule;
    MeasurementOutcome outcome;
};

/// The four-photon special case, simulated literally as the six-step
/// sequence: excite/route to x_0, excite/route to x_1, ground-state flip,
/// excite/route to x_0, excite/route to x_1, X-measurement. Returns
/// (|01> +- |23>)/sqrt(2) with the sign of the outcome.
GenerateResult generate_d4(const MeasurementOutcome& outcome =
                               MeasurementOutcome{{0}});
/// Intermediate states after each of the five pre-measurement steps.
std::vector<EmitterState> generate_d4_trace();

/// General even-d generation through the control register, switch tree and
/// delay lines. The output equals the pair-rotation auxiliary state exactly,
/// up to the per-branch outcome signs recorded in the result.
GenerateResult generate(int d, const MeasurementOutcome& outcome);
GenerateResult generate(int d);  // all-plus outcome

struct VerifyReport {
    bool pass = false;
    std::vector<std::string> violations;
    int switch_count = 0;
    int control_qubits = 0;
    int branches = 0;
    int photons_per_branch = 0;
};

/// Re-checks the schedule: per-branch post-delay time-bins are collision-free
/// and reproduce the pair-rotation design, the emitter stays dark outside its
/// own flip-excite windows, and the switch/register sizes match the layout
/// formulas. An overriding DelayConfig lets tests inject faults.
VerifyReport verify_schedule(int d, std::optional<DelayConfig> delays = {});

}  // namespace qesa
