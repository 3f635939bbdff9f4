// Copyright 2026 The Qesa Authors
// SPDX-License-Identifier: Apache-2.0
//
// The entangled-state analyzer: auxiliary-state design and construction,
// detection-pattern projections, the pattern-dependent phase correction, and
// post-selected enumeration over all detection patterns.
//
// Spatial layout (fixed so analyzer and interferometer agree): the two input
// photons occupy spatial modes a = 0 and b = 1, the d-2 auxiliary photons
// occupy modes x_k = k + 2, and the analyzer's Fourier transform acts on
// modes 0..d-1 in that order. Spectator registers (remote qudits, the
// teleportation target) live at indices >= d and never enter the analyzer.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qesa/fock.hpp"
#include "qesa/interferometer.hpp"

namespace qesa {

constexpr int kModeA = 0;
constexpr int kModeB = 1;
constexpr int aux_mode(int k) { return k + 2; }

/// Auxiliary-state families. RotatedPairs is the cyclic two-photon-pair
/// design (consecutive time-bin pairs rotated through the branches); Shifted
/// excludes pairs {y, (y + shift) mod d}, steering which entangled state the
/// analyzer projects onto; Explicit takes a caller-provided design.
enum class AuxFamily { RotatedPairs, Shifted, Explicit };

/// Combinatorial design of the (d-2)-photon auxiliary state.
///
/// Each of the d/2 branches places one photon per auxiliary spatial mode,
/// time-bins a_row[k] on mode x_k, and leaves out the pair (y, z). Validity:
/// (a_row..., y, z) is a permutation of all d time-bins in every branch, and
/// the excluded pairs are elementwise disjoint across branches, so together
/// they cover every time-bin exactly once.
struct AuxSpec {
    struct Branch {
        std::vector<int> a_row;
        int y = 0;
        int z = 0;
        Complex phase = 1.0;  // unit modulus; +-1 for emitter-generated states
    };

    int d = 0;
    std::vector<Branch> branches;

    /// Throws ConstraintViolation naming the violated clause.
    void validate() const;

    static AuxSpec rotated_pairs(int d);
    /// Throws when no valid exclusion set exists for this shift (the orbit of
    /// +shift on Z_d must have even length).
    static AuxSpec shifted(int d, int shift);
};

/// Convenience construction of the auxiliary state for a family.
AuxSpec make_aux_spec(int d, AuxFamily family, int shift = 1);

/// Materializes the normalized auxiliary state on modes x_0..x_{d-3}
/// (spatial indices 2..d-1, spatial_count d). d = 2 has no auxiliary photons
/// and yields the vacuum.
FockState build_aux(const AuxSpec& spec);
FockState build_aux(int d, AuxFamily family, int shift = 1);

/// D[i] = detector index that fired in time-bin i. Repetition allowed: any
/// combination of output ports is a success as long as the time-bins differ.
struct DetectionPattern {
    std::vector<int> detectors;

    int dim() const { return static_cast<int>(detectors.size()); }
    void validate(int d) const;
    static DetectionPattern all_zero(int d);
    /// Lexicographic pattern enumeration: index treated base-d, D[0] most
    /// significant.
    static DetectionPattern from_index(int d, std::uint64_t index);
};

/// The full detection projection as a sum over photon permutations with
/// pattern-dependent phases, represented by the ket whose dagger is the
/// projection functional. Terms that would put two photons into one spatial
/// mode are omitted; they annihilate every valid analyzer input.
struct ProjectionBra {
    FockState bra;  // ket representative on spatial modes 0..d-1
    DetectionPattern pattern;
    Complex global_factor = 1.0;  // overall 1/d^{d/2} prefactor, recorded
};

/// Expands the permutation sum directly: term <t_0 t_1 ... t_{d-1}| over
/// spatial order (a, b, x_0, ...) carries phase omega^{sum_s t_s D_s} and
/// prefactor d^{-d/2}. This is the generic, d!-term evaluation path; it backs
/// the closed-form projection below as an independent oracle.
ProjectionBra projection_bra(int d, const DetectionPattern& pattern);

/// Closed-form two-photon projection on (a, b) after contracting the
/// auxiliary state: d terms, one (z_j, y_j) and one (y_j, z_j) per branch,
/// each of modulus 1/(sqrt(d^d) * sqrt(d/2)), with phases
/// omega^{f_j + z_j D_0 + y_j D_1} (resp. y <-> z) where
/// f_j = sum_k a_row[k] * D[k+2]. Returned as the ket representative.
FockState project_ab(const AuxSpec& spec, const DetectionPattern& pattern);

/// Same with all detection phases removed (the state every successful
/// pattern is steered to by the correction below). Branch phases kept.
FockState canonical_projection(const AuxSpec& spec);

/// Diagonal unitary on the second analyzed photon's qudit space undoing the
/// pattern-dependent phases of project_ab: entry omega^{-f_j - z_j D_0 -
/// y_j D_1} at y_j and omega^{-f_j - y_j D_0 - z_j D_1} at z_j. Well defined
/// because the exclusion pairs tile the time-bin set.
ModeUnitary correction_unitary(const AuxSpec& spec, const DetectionPattern& pattern);

enum class EnumerationMode { FullEnumeration, SinglePatternTimesSymmetry };

struct PatternOutcome {
    DetectionPattern pattern;
    double probability = 0.0;
    double fidelity = 0.0;
};

struct ProtocolResult {
    int d = 0;
    double total_success = 0.0;
    std::uint64_t pattern_count = 0;  // patterns contributing to the total
    std::uint64_t evaluated_patterns = 0;
    double fidelity_min = 0.0;
    double fidelity_max = 0.0;
    EnumerationMode mode = EnumerationMode::FullEnumeration;
    std::vector<PatternOutcome> per_pattern;  // filled when requested
    FockState sample_projected;  // pattern (0,...,0)
    FockState sample_corrected;
    FockState canonical_target;  // unnormalized reference projection
};

struct EsaRunOptions {
    EnumerationMode mode = EnumerationMode::FullEnumeration;
    int bob_spatial = -1;  // spectator mode that receives the correction
    bool record_per_pattern = false;
    int threads = 0;  // 0 = hardware concurrency
    int symmetry_samples = 100;
    std::uint64_t seed = 0;
    double symmetry_rel_tol = kNormTol;
    /// Extra pattern-independent unitary applied to bob_spatial after the
    /// phase correction (teleportation's branch-exchange permutation).
    std::optional<Eigen::MatrixXcd> post_correction;
    /// Fidelity reference; defaults to the canonical projection of the input.
    std::optional<FockState> target_override;
};

/// Runs the analyzer on `input` (exactly one photon in each of modes a and b;
/// any spectators elsewhere) for every detection pattern, or for one pattern
/// times d^d with randomized uniformity cross-checks. Per pattern: project,
/// apply the phase correction on `bob_spatial`, record probability and
/// fidelity against the canonical projection of the same input.
ProtocolResult enumerate_success(const FockState& input, const AuxSpec& aux,
                                 const EsaRunOptions& options);

}  // namespace qesa
