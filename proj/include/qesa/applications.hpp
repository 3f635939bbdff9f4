// Copyright 2026 The Qesa Authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end protocols built on the analyzer: high-dimensional entanglement
// swapping and teleportation, plus dimension sweeps of the success
// probability against its 2/d^2 law.
//
// Register layout on top of the analyzer's (a=0, b=1, x_k=k+2) convention:
// swapping keeps the remote qudits at A = d and B = d + 1; teleportation
// keeps the receiving qudit at b1 = d.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qesa/esa.hpp"

namespace qesa {

constexpr int swap_mode_alice(int d) { return d; }
constexpr int swap_mode_bob(int d) { return d + 1; }
constexpr int teleport_mode_target(int d) { return d; }

struct RunOptions {
    EnumerationMode mode = EnumerationMode::FullEnumeration;
    bool record_per_pattern = false;
    int threads = 0;
    int symmetry_samples = 100;
    std::uint64_t seed = 0;
    double prune_eps = kPruneEps;
};

struct SwapResult {
    int d = 0;
    double total_success = 0.0;
    double expected = 0.0;  // 2/d^2
    std::uint64_t pattern_count = 0;
    double fidelity_min = 0.0;
    double fidelity_max = 0.0;
    /// Corrected projection for the all-zero pattern, unnormalized; its
    /// squared norm is the per-pattern probability. Supported on (A, B).
    FockState output_state;
    std::vector<PatternOutcome> per_pattern;
};

/// Maximally entangled swap input on (A, a) x (B, b), analyzed on (a, b).
FockState swap_input(int d, double prune_eps = kPruneEps);

SwapResult entanglement_swap(int d, const AuxSpec& aux,
                             const RunOptions& options = {});
SwapResult entanglement_swap(int d, AuxFamily family = AuxFamily::RotatedPairs,
                             const RunOptions& options = {});

struct TeleportResult {
    int d = 0;
    QuditVector input;
    double total_success = 0.0;
    double expected = 0.0;
    std::uint64_t pattern_count = 0;
    /// Fidelity of the fully corrected output with the input qudit, minimized
    /// over all evaluated patterns.
    double corrected_fidelity = 0.0;
    FockState output_state;  // all-zero pattern, after both corrections
};

/// Teleports `input` (photon a) through the analyzer using a maximally
/// entangled (b0, b1) resource. After the pattern-phase correction, the
/// branch-exchange permutation (y_j <-> z_j) restores the input on b1.
TeleportResult teleport(int d, const QuditVector& input, const AuxSpec& aux,
                        const RunOptions& options = {});
TeleportResult teleport(int d, const QuditVector& input,
                        AuxFamily family = AuxFamily::RotatedPairs,
                        const RunOptions& options = {});

enum class Protocol { Swap, Teleport };

struct SweepRow {
    int d = 0;
    double p_success = 0.0;
    double expected = 0.0;
    double abs_error = 0.0;
    double wall_time = 0.0;  // seconds
};

struct SweepOptions : RunOptions {
    /// Dimensions above this are refused; the error carries the d^d cost.
    int max_dim = 8;
    /// Full enumeration is used while d^d stays at or below this, symmetry
    /// mode beyond, unless the base mode was forced by the caller.
    std::uint64_t full_enumeration_limit = 100000;
    bool force_mode = false;
};

std::vector<SweepRow> sweep(const std::vector<int>& dims, Protocol protocol,
                            const SweepOptions& options = {});

QuditVector random_qudit(int d, std::uint64_t seed);

}  // namespace qesa
