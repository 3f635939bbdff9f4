// Copyright 2026 The Qesa Authors
// SPDX-License-Identifier: Apache-2.0
//
// Spatial-mode unitaries: the discrete Fourier transform over spatial modes,
// synthesis into two-mode beam splitters / phase shifters, and application of
// either form to multimode photonic states.

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qesa/fock.hpp"

namespace qesa {

/// Entrywise tolerance for unitarity and netlist reconstruction.
inline constexpr double kUnitaryTol = 1e-10;

/// Dense spatial-mode unitary plus the root-of-unity convention it was built
/// with. The convention is fixed library-wide to omega = exp(+2*pi*i/d); a
/// flipped sign would only conjugate detection-pattern phases but would break
/// golden files, so it is recorded and asserted rather than configurable.
struct ModeUnitary {
    Eigen::MatrixXcd matrix;
    std::string convention = "omega=+2pi/d";

    int dim() const { return static_cast<int>(matrix.rows()); }
    double unitarity_deviation() const;
};

/// QFT over spatial modes: entries omega^{jk}/sqrt(d). Row/column 0 is the
/// uniform vector. Any d >= 2 is accepted here; protocol-level even-d
/// restrictions live with the protocol.
ModeUnitary qft_matrix(int d);

/// One element of a linear-optics netlist.
///
/// BeamSplitter(modes (i,j), theta, phi) acts on (i,j) as
///     [ e^{i phi} sin(theta)   cos(theta) ]
///     [ e^{i phi} cos(theta)  -sin(theta) ],
/// the triangular-mesh two-mode block; theta = pi/4, phi = 0 is a 50:50
/// splitter. PhaseShifter(mode i, phi) multiplies mode i by e^{i phi}.
/// Crossing(i, j) is a passive waveguide swap used for mode reordering; it is
/// wiring, not an optical element, and is counted separately.
struct NetElement {
    enum class Kind { BeamSplitter, PhaseShifter, Crossing };
    Kind kind = Kind::BeamSplitter;
    int mode_a = 0;
    int mode_b = -1;  // unused for PhaseShifter
    double theta = 0.0;
    double phi = 0.0;
};

struct BSNetlist {
    int dim = 0;
    std::string convention = "triangular-mesh";
    std::vector<NetElement> elements;  // application order, first element first
    Complex global_phase = 1.0;
    double reconstruction_error = 0.0;

    std::size_t beam_splitter_count() const;
    std::size_t phase_shifter_count() const;
    std::size_t crossing_count() const;
};

/// Dense matrix of a single element embedded in dim x dim identity.
Eigen::MatrixXcd element_matrix(const NetElement& e, int dim);

/// Composes the netlist back into a matrix (global phase included).
Eigen::MatrixXcd reconstruct(const BSNetlist& netlist);

/// Decomposes a unitary into a netlist whose composition reproduces it to
/// kUnitaryTol. Fourier matrices of power-of-two dimension get the radix-2
/// butterfly layout (d/2 * log2(d) splitters, e.g. four 50:50 splitters and
/// one pi/2 shifter at d = 4); everything else goes through a triangular
/// Givens sweep. Throws on non-unitary input, reporting the deviation.
BSNetlist decompose(const ModeUnitary& u);

/// Applies a spatial-mode unitary to a state: every photon in spatial mode
/// modes[k] is scattered over the listed modes with amplitudes u(.,k), time
/// bins untouched. Multi-photon occupations expand multinomially with bosonic
/// normalization.
FockState apply_spatial(const ModeUnitary& u, const FockState& state,
                        const std::vector<int>& modes);

/// Same transformation evaluated element by element through a netlist; an
/// independent evaluation path used to cross-check apply_spatial.
FockState apply_netlist(const BSNetlist& netlist, const FockState& state,
                        const std::vector<int>& modes);

/// Haar-random unitary (QR of a Gaussian matrix with phase-fixed R diagonal).
ModeUnitary random_unitary(int d, std::uint64_t seed);

}  // namespace qesa
