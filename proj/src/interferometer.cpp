// Copyright 2026 The Qesa Authors
// SPDX-License-Identifier: Apache-2.0

#include "qesa/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace qesa {

double ModeUnitary::unitarity_deviation() const {
    Eigen::MatrixXcd should_be_id = matrix.adjoint() * matrix;
    should_be_id -= Eigen::MatrixXcd::Identity(matrix.rows(), matrix.cols());
    return should_be_id.cwiseAbs().maxCoeff();
}

ModeUnitary qft_matrix(int d) {
    if (d < 2) throw UnsupportedDimension("qft_matrix: d must be >= 2");
    ModeUnitary u;
    u.matrix.resize(d, d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
            u.matrix(j, k) = scale * omega_pow(d, static_cast<long long>(j) * k);
    return u;
}

// ---------------------------------------------------------------------------
// Netlists

std::size_t BSNetlist::beam_splitter_count() const {
    return static_cast<std::size_t>(std::count_if(
        elements.begin(), elements.end(),
        [](const NetElement& e) { return e.kind == NetElement::Kind::BeamSplitter; }));
}

std::size_t BSNetlist::phase_shifter_count() const {
    return static_cast<std::size_t>(std::count_if(
        elements.begin(), elements.end(),
        [](const NetElement& e) { return e.kind == NetElement::Kind::PhaseShifter; }));
}

std::size_t BSNetlist::crossing_count() const {
    return static_cast<std::size_t>(std::count_if(
        elements.begin(), elements.end(),
        [](const NetElement& e) { return e.kind == NetElement::Kind::Crossing; }));
}

Eigen::MatrixXcd element_matrix(const NetElement& e, int dim) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
    switch (e.kind) {
        case NetElement::Kind::BeamSplitter: {
            const double s = std::sin(e.theta), c = std::cos(e.theta);
            const Complex ph = std::polar(1.0, e.phi);
            m(e.mode_a, e.mode_a) = ph * s;
            m(e.mode_a, e.mode_b) = c;
            m(e.mode_b, e.mode_a) = ph * c;
            m(e.mode_b, e.mode_b) = -s;
            break;
        }
        case NetElement::Kind::PhaseShifter:
            m(e.mode_a, e.mode_a) = std::polar(1.0, e.phi);
            break;
        case NetElement::Kind::Crossing:
            m(e.mode_a, e.mode_a) = 0.0;
            m(e.mode_b, e.mode_b) = 0.0;
            m(e.mode_a, e.mode_b) = 1.0;
            m(e.mode_b, e.mode_a) = 1.0;
            break;
    }
    return m;
}

Eigen::MatrixXcd reconstruct(const BSNetlist& netlist) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(netlist.dim, netlist.dim);
    for (const NetElement& e : netlist.elements)
        m = element_matrix(e, netlist.dim) * m;
    return netlist.global_phase * m;
}

namespace {

constexpr double kAngleEps = 1e-12;

bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

/// Emits the crossings that rearrange the contents of `pos` into even
/// positions first, odd positions second, then recurses the radix-2 split.
void fft_netlist_recurse(std::vector<int> pos, std::vector<NetElement>& out) {
    const int n = static_cast<int>(pos.size());
    if (n <= 1) return;
    const int m = n / 2;

    std::vector<int> target(n), current(n);
    for (int k = 0; k < m; ++k) {
        target[k] = 2 * k;
        target[m + k] = 2 * k + 1;
    }
    for (int i = 0; i < n; ++i) current[i] = i;
    for (int s = 0; s < n; ++s) {
        int j = s;
        while (current[j] != target[s]) ++j;
        for (; j > s; --j) {
            out.push_back(NetElement{NetElement::Kind::Crossing, pos[j - 1], pos[j],
                                     0.0, 0.0});
            std::swap(current[j - 1], current[j]);
        }
    }

    std::vector<int> even(pos.begin(), pos.begin() + m);
    std::vector<int> odd(pos.begin() + m, pos.end());
    fft_netlist_recurse(even, out);
    fft_netlist_recurse(odd, out);

    for (int k = 1; k < m; ++k)
        out.push_back(NetElement{NetElement::Kind::PhaseShifter, pos[m + k], -1, 0.0,
                                 2.0 * std::numbers::pi * k / n});
    for (int k = 0; k < m; ++k)
        out.push_back(NetElement{NetElement::Kind::BeamSplitter, pos[k], pos[m + k],
                                 std::numbers::pi / 4.0, 0.0});
}

BSNetlist decompose_fourier(const ModeUnitary& u) {
    BSNetlist net;
    net.dim = u.dim();
    std::vector<int> pos(u.dim());
    for (int i = 0; i < u.dim(); ++i) pos[i] = i;
    fft_netlist_recurse(pos, net.elements);
    return net;
}

BSNetlist decompose_triangular(const ModeUnitary& u) {
    const int d = u.dim();
    Eigen::MatrixXcd work = u.matrix;

    struct Rotation {
        int row_a, row_b;
        double theta, phi;
    };
    std::vector<Rotation> rotations;

    // Givens sweep from the left: null the below-diagonal entries column by
    // column, bottom up, with two-mode blocks from the netlist family. The
    // remainder is diagonal (unitary upper triangular), absorbed as phases.
    for (int col = 0; col < d - 1; ++col) {
        for (int row = d - 1; row > col; --row) {
            Complex x = work(row - 1, col), y = work(row, col);
            if (std::abs(y) < kAngleEps) continue;
            double theta, phi;
            if (std::abs(x) < kAngleEps) {
                theta = 0.0;
                phi = 0.0;
            } else {
                phi = std::arg(y) - std::arg(x);
                theta = std::atan2(std::abs(x), std::abs(y));
            }
            const double s = std::sin(theta), c = std::cos(theta);
            const Complex ph = std::polar(1.0, phi);
            Eigen::RowVectorXcd ra = work.row(row - 1), rb = work.row(row);
            work.row(row - 1) = ph * s * ra + c * rb;
            work.row(row) = ph * c * ra - s * rb;
            rotations.push_back(Rotation{row - 1, row, theta, phi});
        }
    }

    BSNetlist net;
    net.dim = d;
    // Residual diagonal phases enter first, then the inverted rotations in
    // reverse order: g^dagger = phase(-phi on row_a) after the phi-free block.
    for (int i = 0; i < d; ++i) {
        double phase = std::arg(work(i, i));
        if (std::abs(phase) > kAngleEps)
            net.elements.push_back(
                NetElement{NetElement::Kind::PhaseShifter, i, -1, 0.0, phase});
    }
    for (auto it = rotations.rbegin(); it != rotations.rend(); ++it) {
        net.elements.push_back(NetElement{NetElement::Kind::BeamSplitter, it->row_a,
                                          it->row_b, it->theta, 0.0});
        if (std::abs(it->phi) > kAngleEps)
            net.elements.push_back(
                NetElement{NetElement::Kind::PhaseShifter, it->row_a, -1, 0.0,
                           -it->phi});
    }
    return net;
}

}  // namespace

BSNetlist decompose(const ModeUnitary& u) {
    const double dev = u.unitarity_deviation();
    if (dev > kUnitaryTol)
        throw std::invalid_argument(
            "decompose: input is not unitary (max deviation " +
            std::to_string(dev) + ")");

    BSNetlist net;
    if (is_power_of_two(u.dim()) &&
        (u.matrix - qft_matrix(u.dim()).matrix).cwiseAbs().maxCoeff() < kUnitaryTol) {
        net = decompose_fourier(u);
    } else {
        net = decompose_triangular(u);
    }
    net.reconstruction_error = (reconstruct(net) - u.matrix).cwiseAbs().maxCoeff();
    if (net.reconstruction_error > kUnitaryTol)
        throw std::logic_error("decompose: reconstruction error " +
                               std::to_string(net.reconstruction_error));
    return net;
}

// ---------------------------------------------------------------------------
// State application

namespace {

double sqrt_factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return std::sqrt(f);
}

}  // namespace

FockState apply_spatial(const ModeUnitary& u, const FockState& state,
                        const std::vector<int>& modes) {
    const int n = u.dim();
    if (static_cast<int>(modes.size()) != n)
        throw DimensionError("apply_spatial: modes list size != matrix dimension");
    std::map<int, int> column_of;
    for (int k = 0; k < n; ++k) {
        if (modes[k] < 0 || modes[k] >= state.spatial_count())
            throw DimensionError("apply_spatial: spatial mode out of range");
        if (!column_of.try_emplace(modes[k], k).second)
            throw DimensionError("apply_spatial: duplicate spatial mode in list");
    }

    std::set<int> active_modes(modes.begin(), modes.end());
    FockState out(state.dim(), state.spatial_count(),
                  state.mixed_sectors_allowed() ? MixedSectors::Yes : MixedSectors::No);
    out.set_prune_epsilon(state.prune_epsilon());

    for (const auto& [cfg, amp] : state.terms()) {
        auto [active, passive] = cfg.split_spatial(active_modes);
        if (active.empty()) {
            out.add_term(cfg, amp);
            continue;
        }
        Complex base = amp;
        for (const auto& s : active.slots()) base /= sqrt_factorial(s.count);
        std::map<OccupationConfig, Complex> partial{{OccupationConfig{}, base}};
        for (const auto& s : active.slots()) {
            const int col = column_of.at(s.spatial);
            for (int rep = 0; rep < s.count; ++rep) {
                std::map<OccupationConfig, Complex> next;
                for (const auto& [mono, coeff] : partial) {
                    for (int row = 0; row < n; ++row) {
                        Complex c = coeff * u.matrix(row, col);
                        if (c == Complex{0.0, 0.0}) continue;
                        OccupationConfig m2 = mono;
                        m2.add(modes[row], s.timebin, 1);
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

namespace {

FockState apply_phase_shift(const FockState& state, int mode, double phi) {
    FockState out(state.dim(), state.spatial_count(),
                  state.mixed_sectors_allowed() ? MixedSectors::Yes : MixedSectors::No);
    out.set_prune_epsilon(state.prune_epsilon());
    for (const auto& [cfg, amp] : state.terms()) {
        int photons = cfg.photons_in_spatial(mode);
        out.add_term(cfg, amp * std::polar(1.0, phi * photons));
    }
    return out;
}

FockState apply_crossing(const FockState& state, int mode_a, int mode_b) {
    FockState out(state.dim(), state.spatial_count(),
                  state.mixed_sectors_allowed() ? MixedSectors::Yes : MixedSectors::No);
    out.set_prune_epsilon(state.prune_epsilon());
    for (const auto& [cfg, amp] : state.terms()) {
        OccupationConfig relabeled;
        for (const auto& s : cfg.slots()) {
            int sp = s.spatial == mode_a ? mode_b
                     : s.spatial == mode_b ? mode_a
                                           : s.spatial;
            relabeled.add(sp, s.timebin, s.count);
        }
        out.add_term(relabeled, amp);
    }
    return out;
}

}  // namespace

FockState apply_netlist(const BSNetlist& netlist, const FockState& state,
                        const std::vector<int>& modes) {
    if (static_cast<int>(modes.size()) != netlist.dim)
        throw DimensionError("apply_netlist: modes list size != netlist dimension");
    FockState cur = state;
    for (const NetElement& e : netlist.elements) {
        switch (e.kind) {
            case NetElement::Kind::BeamSplitter: {
                ModeUnitary block;
                block.matrix.resize(2, 2);
                const double s = std::sin(e.theta), c = std::cos(e.theta);
                const Complex ph = std::polar(1.0, e.phi);
                block.matrix << ph * s, c, ph * c, -s;
                cur = apply_spatial(block, cur, {modes[e.mode_a], modes[e.mode_b]});
                break;
            }
            case NetElement::Kind::PhaseShifter:
                cur = apply_phase_shift(cur, modes[e.mode_a], e.phi);
                break;
            case NetElement::Kind::Crossing:
                cur = apply_crossing(cur, modes[e.mode_a], modes[e.mode_b]);
                break;
        }
    }
    if (netlist.global_phase != Complex{1.0, 0.0}) cur.scale(netlist.global_phase);
    return cur;
}

ModeUnitary random_unitary(int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = Complex{gauss(rng), gauss(rng)};
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        Complex rii = r(i, i);
        q.col(i) *= rii / std::abs(rii);
    }
    return ModeUnitary{std::move(q)};
}

}  // namespace qesa
