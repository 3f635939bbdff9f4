// Copyright 2026 The Qesa Authors
// SPDX-License-Identifier: Apache-2.0

#include "qesa/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qesa {

Complex omega_pow(int d, long long k) {
    long long r = k % d;
    if (r < 0) r += d;
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) /
                               static_cast<double>(d));
}

// ---------------------------------------------------------------------------
// OccupationConfig

void OccupationConfig::add(int spatial, int timebin, int n) {
    if (n == 0) return;
    ModeOcc key{spatial, timebin, 0};
    auto it = std::lower_bound(
        slots_.begin(), slots_.end(), key, [](const ModeOcc& a, const ModeOcc& b) {
            return std::pair(a.spatial, a.timebin) < std::pair(b.spatial, b.timebin);
        });
    if (it != slots_.end() && it->spatial == spatial && it->timebin == timebin) {
        it->count += n;
        if (it->count < 0)
            throw std::invalid_argument("OccupationConfig: negative photon count");
        if (it->count == 0) slots_.erase(it);
    } else {
        if (n < 0)
            throw std::invalid_argument("OccupationConfig: negative photon count");
        slots_.insert(it, ModeOcc{spatial, timebin, n});
    }
}

int OccupationConfig::total_photons() const {
    int n = 0;
    for (const auto& s : slots_) n += s.count;
    return n;
}

int OccupationConfig::count_at(int spatial, int timebin) const {
    for (const auto& s : slots_)
        if (s.spatial == spatial && s.timebin == timebin) return s.count;
    return 0;
}

int OccupationConfig::photons_in_spatial(int spatial) const {
    int n = 0;
    for (const auto& s : slots_)
        if (s.spatial == spatial) n += s.count;
    return n;
}

std::set<int> OccupationConfig::occupied_spatial() const {
    std::set<int> out;
    for (const auto& s : slots_) out.insert(s.spatial);
    return out;
}

int OccupationConfig::max_spatial() const {
    int m = -1;
    for (const auto& s : slots_) m = std::max(m, s.spatial);
    return m;
}

int OccupationConfig::max_timebin() const {
    int m = -1;
    for (const auto& s : slots_) m = std::max(m, s.timebin);
    return m;
}

std::pair<OccupationConfig, OccupationConfig> OccupationConfig::split_spatial(
    const std::set<int>& modes) const {
    OccupationConfig inside, outside;
    for (const auto& s : slots_) {
        if (modes.count(s.spatial))
            inside.slots_.push_back(s);
        else
            outside.slots_.push_back(s);
    }
    return {inside, outside};
}

OccupationConfig OccupationConfig::merged_with(const OccupationConfig& other) const {
    OccupationConfig out = *this;
    for (const auto& s : other.slots_) out.add(s.spatial, s.timebin, s.count);
    return out;
}

// ---------------------------------------------------------------------------
// FockState

FockState::FockState(int dim, int spatial_count, MixedSectors mixed)
    : dim_(dim), spatial_count_(spatial_count), mixed_(mixed) {
    if (dim < 1) throw DimensionError("FockState: dim must be >= 1");
    if (spatial_count < 0)
        throw DimensionError("FockState: spatial_count must be >= 0");
}

void FockState::add_term(const OccupationConfig& config, Complex amp) {
    for (const auto& s : config.slots()) {
        if (s.spatial < 0 || s.spatial >= spatial_count_)
            throw DimensionError("FockState: spatial index out of range");
        if (s.timebin < 0 || s.timebin >= dim_)
            throw DimensionError("FockState: time-bin index out of range");
    }
    if (mixed_ == MixedSectors::No && !amps_.empty()) {
        int have = amps_.begin()->first.total_photons();
        if (config.total_photons() != have)
            throw DimensionError(
                "FockState: photon-number sectors mixed without the mixed flag");
    }
    auto [it, inserted] = amps_.try_emplace(config, amp);
    if (!inserted) it->second += amp;
}

Complex FockState::amplitude(const OccupationConfig& config) const {
    auto it = amps_.find(config);
    return it == amps_.end() ? Complex{0.0, 0.0} : it->second;
}

double FockState::norm_sq() const {
    double n = 0.0;
    for (const auto& [cfg, amp] : amps_) n += std::norm(amp);
    return n;
}

bool FockState::is_normalized(double tol) const {
    return std::abs(norm_sq() - 1.0) <= tol;
}

FockState& FockState::normalize() {
    double n = std::sqrt(norm_sq());
    if (n <= 0.0)
        throw std::invalid_argument("FockState: cannot normalize the zero state");
    return scale(1.0 / n);
}

FockState& FockState::scale(Complex factor) {
    for (auto& [cfg, amp] : amps_) amp *= factor;
    prune();
    return *this;
}

void FockState::prune() {
    if (prune_eps_ <= 0.0) return;
    for (auto it = amps_.begin(); it != amps_.end();) {
        if (std::abs(it->second) < prune_eps_)
            it = amps_.erase(it);
        else
            ++it;
    }
}

std::optional<int> FockState::photon_number() const {
    std::optional<int> n;
    for (const auto& [cfg, amp] : amps_) {
        int t = cfg.total_photons();
        if (!n)
            n = t;
        else if (*n != t)
            return std::nullopt;
    }
    return n;
}

std::set<int> FockState::occupied_spatial() const {
    std::set<int> out;
    for (const auto& [cfg, amp] : amps_)
        for (const auto& s : cfg.slots()) out.insert(s.spatial);
    return out;
}

// ---------------------------------------------------------------------------
// Free operations

FockState tensor(const FockState& a, const FockState& b) {
    if (a.dim() != b.dim())
        throw DimensionError("tensor: operands have different qudit dimensions");
    std::set<int> sa = a.occupied_spatial();
    for (int m : b.occupied_spatial())
        if (sa.count(m))
            throw DimensionError(
                "tensor: operands overlap on spatial mode " + std::to_string(m) +
                " (mode-labeling bug)");
    MixedSectors mixed = (a.mixed_sectors_allowed() || b.mixed_sectors_allowed())
                             ? MixedSectors::Yes
                             : MixedSectors::No;
    FockState out(a.dim(), std::max(a.spatial_count(), b.spatial_count()), mixed);
    out.set_prune_epsilon(std::min(a.prune_epsilon(), b.prune_epsilon()));
    for (const auto& [ca, va] : a.terms())
        for (const auto& [cb, vb] : b.terms())
            out.add_term(ca.merged_with(cb), va * vb);
    out.prune();
    return out;
}

Complex inner_product(const FockState& bra, const FockState& ket) {
    if (bra.dim() != ket.dim() || bra.spatial_count() != ket.spatial_count())
        throw DimensionError("inner_product: dimension or mode-count mismatch");
    const auto& small = bra.term_count() <= ket.term_count() ? bra : ket;
    const auto& large = bra.term_count() <= ket.term_count() ? ket : bra;
    bool small_is_bra = &small == &bra;
    Complex acc{0.0, 0.0};
    for (const auto& [cfg, amp] : small.terms()) {
        Complex other = large.amplitude(cfg);
        if (other == Complex{0.0, 0.0}) continue;
        acc += small_is_bra ? std::conj(amp) * other : std::conj(other) * amp;
    }
    return acc;
}

FockState partial_project(const FockState& bra, const FockState& ket,
                          const std::vector<int>& modes) {
    if (bra.dim() != ket.dim())
        throw DimensionError("partial_project: qudit dimension mismatch");
    std::set<int> mode_set(modes.begin(), modes.end());
    for (int m : bra.occupied_spatial())
        if (!mode_set.count(m))
            throw DimensionError("partial_project: bra occupies spatial mode " +
                                 std::to_string(m) + " outside the projected set");
    FockState out(ket.dim(), ket.spatial_count(),
                  ket.mixed_sectors_allowed() ? MixedSectors::Yes : MixedSectors::No);
    out.set_prune_epsilon(ket.prune_epsilon());
    for (const auto& [cfg, amp] : ket.terms()) {
        auto [inside, outside] = cfg.split_spatial(mode_set);
        Complex b = bra.amplitude(inside);
        if (b == Complex{0.0, 0.0}) continue;
        out.add_term(outside, std::conj(b) * amp);
    }
    out.prune();
    return out;
}

int schmidt_rank(const FockState& state, const std::vector<int>& left_modes,
                 double rel_tol) {
    if (!state.is_normalized())
        throw std::invalid_argument("schmidt_rank: state must be normalized");
    std::set<int> left(left_modes.begin(), left_modes.end());
    std::set<int> occupied = state.occupied_spatial();
    bool left_hit = false, right_hit = false;
    for (int m : occupied) (left.count(m) ? left_hit : right_hit) = true;
    if (!left_hit || !right_hit)
        throw std::invalid_argument("schmidt_rank: bipartition is trivial");

    std::map<OccupationConfig, int> lidx, ridx;
    std::vector<std::tuple<int, int, Complex>> entries;
    for (const auto& [cfg, amp] : state.terms()) {
        auto [l, r] = cfg.split_spatial(left);
        int li = lidx.try_emplace(l, static_cast<int>(lidx.size())).first->second;
        int ri = ridx.try_emplace(r, static_cast<int>(ridx.size())).first->second;
        entries.emplace_back(li, ri, amp);
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<long>(lidx.size()),
                                                static_cast<long>(ridx.size()));
    for (const auto& [li, ri, amp] : entries) m(li, ri) = amp;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    double cutoff = rel_tol * sv(0);
    int rank = 0;
    for (long i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return rank;
}

double fidelity(const FockState& a, const FockState& b) {
    double na = a.norm_sq(), nb = b.norm_sq();
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return std::norm(inner_product(a, b)) / (na * nb);
}

namespace {

double sqrt_factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return std::sqrt(f);
}

}  // namespace

FockState apply_timebin_unitary(const FockState& state, int spatial_mode,
                                const Eigen::MatrixXcd& u) {
    if (u.rows() != state.dim() || u.cols() != state.dim())
        throw DimensionError("apply_timebin_unitary: matrix size != dim");
    if (spatial_mode < 0 || spatial_mode >= state.spatial_count())
        throw DimensionError("apply_timebin_unitary: spatial mode out of range");
    const int d = state.dim();
    FockState out(d, state.spatial_count(),
                  state.mixed_sectors_allowed() ? MixedSectors::Yes : MixedSectors::No);
    out.set_prune_epsilon(state.prune_epsilon());
    for (const auto& [cfg, amp] : state.terms()) {
        auto [active, passive] = cfg.split_spatial({spatial_mode});
        if (active.empty()) {
            out.add_term(cfg, amp);
            continue;
        }
        // Expand photon by photon; repeated multiplication carries the
        // multinomial coefficients, the sqrt(n!) factors convert between
        // occupation normalization and raw creation-operator monomials.
        Complex base = amp;
        for (const auto& s : active.slots()) base /= sqrt_factorial(s.count);
        std::map<OccupationConfig, Complex> partial{{OccupationConfig{}, base}};
        for (const auto& s : active.slots()) {
            for (int rep = 0; rep < s.count; ++rep) {
                std::map<OccupationConfig, Complex> next;
                for (const auto& [mono, coeff] : partial) {
                    for (int t = 0; t < d; ++t) {
                        Complex c = coeff * u(t, s.timebin);
                        if (c == Complex{0.0, 0.0}) continue;
                        OccupationConfig m2 = mono;
                        m2.add(spatial_mode, t, 1);
                        auto [it, ins] = next.try_emplace(m2, c);
                        if (!ins) it->second += c;
                    }
                }
                partial = std::move(next);
            }
        }
        for (const auto& [mono, coeff] : partial) {
            Complex c = coeff;
            for (const auto& s : mono.slots()) c *= sqrt_factorial(s.count);
            out.add_term(passive.merged_with(mono), c);
        }
    }
    out.prune();
    return out;
}

FockState operator+(const FockState& a, const FockState& b) {
    if (a.dim() != b.dim() || a.spatial_count() != b.spatial_count())
        throw DimensionError("operator+: dimension or mode-count mismatch");
    MixedSectors mixed = MixedSectors::Yes;
    if (!a.mixed_sectors_allowed() && !b.mixed_sectors_allowed()) {
        auto na = a.photon_number(), nb = b.photon_number();
        if (na && nb && *na == *nb) mixed = MixedSectors::No;
    }
    FockState out(a.dim(), a.spatial_count(), mixed);
    out.set_prune_epsilon(std::min(a.prune_epsilon(), b.prune_epsilon()));
    for (const auto& [cfg, amp] : a.terms()) out.add_term(cfg, amp);
    for (const auto& [cfg, amp] : b.terms()) out.add_term(cfg, amp);
    out.prune();
    return out;
}

FockState operator*(Complex factor, const FockState& s) {
    FockState out = s;
    out.scale(factor);
    return out;
}

FockState qudit_to_state(const QuditVector& q, int spatial_mode, int dim,
                         int spatial_count) {
    if (q.dim() != dim)
        throw DimensionError("qudit_to_state: coefficient count != dim");
    FockState out(dim, spatial_count);
    for (int t = 0; t < dim; ++t) {
        if (q.coeffs(t) == Complex{0.0, 0.0}) continue;
        out.add_term(OccupationConfig::single(spatial_mode, t), q.coeffs(t));
    }
    out.prune();
    return out;
}

}  // namespace qesa
