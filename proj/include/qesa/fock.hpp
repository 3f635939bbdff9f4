// Copyright 2026 The Qesa Authors
// SPDX-License-Identifier: Apache-2.0
//
// Sparse algebra of multimode photonic states.
//
// A mode is a (spatial mode, time bin) pair; a basis state is an occupation
// configuration mapping modes to photon counts. States are sparse complex
// superpositions of such configurations. Everything here is a value type and
// every operation is a pure function, so states can be shared read-only
// across threads.
//
// Mode-index packing is spatial-major throughout the library: configurations
// are kept sorted by (spatial, timebin), and any code that flattens a mode
// pair into a single index uses spatial * dim + timebin.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "qesa/errors.hpp"

namespace qesa {

using Complex = std::complex<double>;

/// Default absolute threshold below which amplitudes are dropped.
inline constexpr double kPruneEps = 1e-12;
/// |norm^2 - 1| tolerance for a state to count as normalized.
inline constexpr double kNormTol = 1e-9;
/// Relative tolerance / absolute floor for amplitude comparisons.
inline constexpr double kAmpRelTol = 1e-9;
inline constexpr double kAmpAbsFloor = 1e-12;

/// omega^k for omega = exp(+2*pi*i/d), with the exponent reduced mod d so
/// repeated phase products stay exact to machine precision.
Complex omega_pow(int d, long long k);

struct ModeIndex {
    int spatial = 0;
    int timebin = 0;
    auto operator<=>(const ModeIndex&) const = default;
};

struct ModeOcc {
    int spatial = 0;
    int timebin = 0;
    int count = 0;
    auto operator<=>(const ModeOcc&) const = default;
};

/// Canonical sparse occupation label: sorted by (spatial, timebin), zero
/// counts never stored.
class OccupationConfig {
  public:
    OccupationConfig() = default;

    static OccupationConfig single(int spatial, int timebin) {
        OccupationConfig c;
        c.add(spatial, timebin, 1);
        return c;
    }
    static OccupationConfig of(std::initializer_list<ModeIndex> photons) {
        OccupationConfig c;
        for (const auto& m : photons) c.add(m.spatial, m.timebin, 1);
        return c;
    }

    void add(int spatial, int timebin, int n = 1);

    int total_photons() const;
    int count_at(int spatial, int timebin) const;
    int photons_in_spatial(int spatial) const;
    bool empty() const { return slots_.size() == 0; }
    const std::vector<ModeOcc>& slots() const { return slots_; }

    std::set<int> occupied_spatial() const;
    int max_spatial() const;
    int max_timebin() const;

    /// Split into the part supported on `modes` and the remainder.
    std::pair<OccupationConfig, OccupationConfig> split_spatial(
        const std::set<int>& modes) const;
    /// Union of two configurations with disjoint or overlapping support;
    /// counts add.
    OccupationConfig merged_with(const OccupationConfig& other) const;

    auto operator<=>(const OccupationConfig&) const = default;

  private:
    std::vector<ModeOcc> slots_;
};

/// Whether a state is allowed to superpose different total photon numbers.
/// Emitter intermediates need vacuum branches next to occupied ones; protocol
/// states do not and the stricter default catches mode-labeling bugs.
enum class MixedSectors { No, Yes };

class FockState {
  public:
    /// Zero state on an empty register; useful as a result placeholder.
    FockState() : FockState(1, 0) {}
    FockState(int dim, int spatial_count, MixedSectors mixed = MixedSectors::No);

    static FockState vacuum(int dim, int spatial_count) {
        FockState s(dim, spatial_count);
        s.add_term(OccupationConfig{}, 1.0);
        return s;
    }
    static FockState single_config(int dim, int spatial_count,
                                   const OccupationConfig& config,
                                   Complex amp = 1.0) {
        FockState s(dim, spatial_count);
        s.add_term(config, amp);
        return s;
    }

    int dim() const { return dim_; }
    int spatial_count() const { return spatial_count_; }
    bool mixed_sectors_allowed() const { return mixed_ == MixedSectors::Yes; }

    double prune_epsilon() const { return prune_eps_; }
    void set_prune_epsilon(double eps) { prune_eps_ = eps; }

    /// Adds amp to the coefficient of `config`. Validates mode ranges and,
    /// unless mixed sectors were requested, a homogeneous photon number.
    void add_term(const OccupationConfig& config, Complex amp);

    const std::map<OccupationConfig, Complex>& terms() const { return amps_; }
    std::size_t term_count() const { return amps_.size(); }
    Complex amplitude(const OccupationConfig& config) const;

    double norm_sq() const;
    bool is_normalized(double tol = kNormTol) const;
    FockState& normalize();
    FockState& scale(Complex factor);
    void prune();

    /// Total photon number if all terms agree, nullopt for a mixed state.
    std::optional<int> photon_number() const;
    std::set<int> occupied_spatial() const;

  private:
    int dim_;
    int spatial_count_;
    MixedSectors mixed_;
    double prune_eps_ = kPruneEps;
    std::map<OccupationConfig, Complex> amps_;
};

/// Tensor product. The operands must occupy disjoint spatial-mode sets (the
/// caller chooses the global labeling); overlap signals a mode-labeling bug.
FockState tensor(const FockState& a, const FockState& b);

/// <bra|ket> = sum conj(bra amp) * ket amp. Conjugate-linear in the bra.
Complex inner_product(const FockState& bra, const FockState& ket);

/// Partially applies `bra` (supported on the spatial subset `modes`) to
/// `ket`, returning the unnormalized remainder state on the complement.
FockState partial_project(const FockState& bra, const FockState& ket,
                          const std::vector<int>& modes);

/// Number of singular values of the bipartite coefficient matrix exceeding
/// rel_tol * (largest singular value), for the bipartition (left_modes |
/// rest). Requires a normalized state and a nontrivial bipartition.
int schmidt_rank(const FockState& state, const std::vector<int>& left_modes,
                 double rel_tol = kNormTol);

/// |<a|b>|^2 / (<a|a><b|b>); 0 if either norm vanishes.
double fidelity(const FockState& a, const FockState& b);

/// Applies a d x d unitary to the time-bin index of every photon in one
/// spatial mode (full multinomial expansion; other modes untouched).
FockState apply_timebin_unitary(const FockState& state, int spatial_mode,
                                const Eigen::MatrixXcd& u);

FockState operator+(const FockState& a, const FockState& b);
FockState operator*(Complex factor, const FockState& s);

/// Single-photon qudit: d complex coefficients over the time-bin basis.
struct QuditVector {
    Eigen::VectorXcd coeffs;

    int dim() const { return static_cast<int>(coeffs.size()); }
    double norm_sq() const { return coeffs.squaredNorm(); }
    bool is_normalized(double tol = kNormTol) const {
        return std::abs(norm_sq() - 1.0) <= tol;
    }
};

/// Embeds a qudit as a single photon in `spatial_mode` of a larger register.
FockState qudit_to_state(const QuditVector& q, int spatial_mode, int dim,
                         int spatial_count);

}  // namespace qesa
