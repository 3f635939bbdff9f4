// Copyright 2026 The Qesa Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "qesa/fock.hpp"
#include "test_util.hpp"

using namespace qesa;
using qesa::test::close;
using qesa::test::states_close;

namespace {

// (|01> + |23>)/sqrt(2) on two spatial modes (0, 1) of a d=4 register.
FockState two_pair_state(int s0 = 0, int s1 = 1, int spatial_count = 2) {
    FockState s(4, spatial_count);
    const double amp = 1.0 / std::sqrt(2.0);
    s.add_term(OccupationConfig::of({{s0, 0}, {s1, 1}}), amp);
    s.add_term(OccupationConfig::of({{s0, 2}, {s1, 3}}), amp);
    return s;
}

}  // namespace

TEST_CASE("occupation configs canonicalize and split") {
    OccupationConfig c;
    c.add(3, 1, 1);
    c.add(0, 2, 1);
    c.add(3, 1, 1);  // accumulates
    CHECK(c.total_photons() == 3);
    CHECK(c.count_at(3, 1) == 2);
    CHECK(c.slots().front().spatial == 0);  // sorted spatial-major

    auto [in, out] = c.split_spatial({3});
    CHECK(in.total_photons() == 2);
    CHECK(out.total_photons() == 1);
    CHECK(in.merged_with(out) == c);

    c.add(3, 1, -2);  // removal back to zero erases the slot
    CHECK(c.count_at(3, 1) == 0);
    CHECK_THROWS_AS(c.add(0, 2, -5), std::invalid_argument);
}

TEST_CASE("fock state construction guards") {
    FockState s(4, 2);
    CHECK_THROWS_AS(s.add_term(OccupationConfig::single(2, 0), 1.0), DimensionError);
    CHECK_THROWS_AS(s.add_term(OccupationConfig::single(0, 4), 1.0), DimensionError);
    s.add_term(OccupationConfig::single(0, 0), 1.0);
    // photon-number sectors are fenced unless explicitly allowed
    CHECK_THROWS_AS(s.add_term(OccupationConfig{}, 1.0), DimensionError);
    FockState mixed(4, 2, MixedSectors::Yes);
    mixed.add_term(OccupationConfig::single(0, 0), 0.5);
    mixed.add_term(OccupationConfig{}, 0.5);
    CHECK(!mixed.photon_number().has_value());
}

TEST_CASE("tensor: vacuum identity") {
    FockState a(4, 2);
    a.add_term(OccupationConfig::single(0, 0), 1.0);
    FockState result = tensor(a, FockState::vacuum(4, 2));
    CHECK(states_close(result, a));
}

TEST_CASE("tensor: bilinearity on two 2-term states") {
    FockState a(4, 4);
    a.add_term(OccupationConfig::single(0, 0), 0.6);
    a.add_term(OccupationConfig::single(0, 1), 0.8);
    FockState b(4, 4);
    b.add_term(OccupationConfig::single(1, 2), Complex{0.0, 1.0} / std::sqrt(2.0));
    b.add_term(OccupationConfig::single(1, 3), 1.0 / std::sqrt(2.0));
    FockState t = tensor(a, b);
    CHECK(t.term_count() == 4);
    CHECK(close(t.amplitude(OccupationConfig::of({{0, 0}, {1, 2}})),
                Complex{0.0, 0.6 / std::sqrt(2.0)}));
    CHECK(close(t.norm_sq(), 1.0));
}

TEST_CASE("tensor: overlapping spatial support is a labeling bug") {
    FockState a(4, 2);
    a.add_term(OccupationConfig::single(0, 0), 1.0);
    CHECK_THROWS_AS(tensor(a, a), DimensionError);
}

TEST_CASE("tensor: four-photon analyzer input has 32 terms") {
    // Maximally entangled pairs on (A,a) and (B,b) times the two-branch
    // auxiliary state: 16 * 2 configurations.
    const int d = 4;
    FockState pairs(d, 8);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            OccupationConfig cfg;
            cfg.add(0, i, 1);
            cfg.add(4, i, 1);
            cfg.add(1, k, 1);
            cfg.add(5, k, 1);
            pairs.add_term(cfg, 0.25);
        }
    FockState aux = two_pair_state(2, 3, 8);
    FockState input = tensor(pairs, aux);
    CHECK(input.term_count() == 32);
    CHECK(close(input.norm_sq(), 1.0));
}

TEST_CASE("inner product basics") {
    FockState pair = two_pair_state();
    CHECK(close(inner_product(pair, pair), Complex{1.0, 0.0}));

    FockState bra(4, 2);
    bra.add_term(OccupationConfig::of({{0, 0}, {1, 1}}), 1.0);
    CHECK(close(inner_product(bra, pair), Complex{1.0 / std::sqrt(2.0), 0.0}));

    FockState ortho(4, 2);
    ortho.add_term(OccupationConfig::of({{0, 1}, {1, 0}}), 1.0);
    CHECK(inner_product(ortho, pair) == Complex{0.0, 0.0});

    FockState other_dim(6, 2);
    other_dim.add_term(OccupationConfig::single(0, 0), 1.0);
    CHECK_THROWS_AS(inner_product(other_dim, pair), DimensionError);
    FockState other_s(4, 3);
    other_s.add_term(OccupationConfig::single(0, 0), 1.0);
    CHECK_THROWS_AS(inner_product(other_s, pair), DimensionError);
}

TEST_CASE("inner product is conjugate linear in the bra") {
    FockState a(4, 1);
    a.add_term(OccupationConfig::single(0, 0), Complex{0.0, 1.0});
    FockState b(4, 1);
    b.add_term(OccupationConfig::single(0, 0), 1.0);
    CHECK(close(inner_product(a, b), Complex{0.0, -1.0}));
}

TEST_CASE("inner product with itself is real and non-negative") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        FockState s = qesa::test::random_state(4, 3, 2, 6, rng());
        Complex self = inner_product(s, s);
        CHECK(std::abs(self.imag()) <= kAmpAbsFloor);
        CHECK(self.real() >= 0.0);
    }
}

TEST_CASE("partial projection: orthogonal bra annihilates") {
    FockState pair = two_pair_state();
    FockState bra(4, 2);
    bra.add_term(OccupationConfig::single(0, 1), 1.0);
    FockState res = partial_project(bra, pair, {0});
    CHECK(res.term_count() == 0);
}

TEST_CASE("partial projection reduces to the inner product on full support") {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 10; ++rep) {
        FockState ket = qesa::test::random_state(4, 3, 2, 5, rng());
        FockState bra = qesa::test::random_state(4, 3, 2, 4, rng());
        FockState res = partial_project(bra, ket, {0, 1, 2});
        Complex direct = inner_product(bra, ket);
        CHECK(close(res.amplitude(OccupationConfig{}), direct));
        CHECK(res.term_count() <= 1);
    }
}

TEST_CASE("partial projection rejects bras outside the projected modes") {
    FockState pair = two_pair_state();
    FockState bra(4, 2);
    bra.add_term(OccupationConfig::single(1, 0), 1.0);
    CHECK_THROWS_AS(partial_project(bra, pair, {0}), DimensionError);
}

TEST_CASE("partial projection peels one side of an entangled pair") {
    FockState pair = two_pair_state();
    FockState bra(4, 2);
    bra.add_term(OccupationConfig::single(0, 2), 1.0);
    FockState res = partial_project(bra, pair, {0});
    CHECK(res.term_count() == 1);
    CHECK(close(res.amplitude(OccupationConfig::single(1, 3)),
                Complex{1.0 / std::sqrt(2.0), 0.0}));
}

TEST_CASE("schmidt rank: entangled pair and product state") {
    FockState pair = two_pair_state();
    CHECK(schmidt_rank(pair, {0}) == 2);

    FockState product(4, 2);
    product.add_term(OccupationConfig::of({{0, 0}, {1, 1}}), 1.0);
    CHECK(schmidt_rank(product, {0}) == 1);

    CHECK_THROWS_AS(schmidt_rank(pair, {5}), std::invalid_argument);
    CHECK_THROWS_AS(schmidt_rank(pair, {0, 1}), std::invalid_argument);
}

TEST_CASE("schmidt rank: four-branch pair-rotation state has rank 4") {
    // d = 8 design built by hand: branch j holds consecutive pairs rotated by
    // j pair slots; the x_0 occupations are pairwise distinct, so the
    // coefficient matrix for ({x_0} | rest) is diagonal-like with 4 entries.
    const int d = 8;
    FockState aux(d, d - 2);
    const double amp = 1.0 / 2.0;
    const int rows[4][6] = {{0, 1, 2, 3, 4, 5},
                            {6, 7, 0, 1, 2, 3},
                            {4, 5, 6, 7, 0, 1},
                            {2, 3, 4, 5, 6, 7}};
    for (const auto& row : rows) {
        OccupationConfig cfg;
        for (int k = 0; k < 6; ++k) cfg.add(k, row[k], 1);
        aux.add_term(cfg, amp);
    }
    CHECK(schmidt_rank(aux, {0}) == 4);
}

TEST_CASE("schmidt rank is invariant under local diagonal phase unitaries") {
    std::mt19937_64 rng(37);
    FockState pair = two_pair_state();
    for (int rep = 0; rep < 10; ++rep) {
        Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(4, 4);
        for (int t = 0; t < 4; ++t)
            diag(t, t) = std::polar(1.0, static_cast<double>(rng() % 6283) / 1000.0);
        FockState rotated = apply_timebin_unitary(pair, rep % 2, diag);
        CHECK(schmidt_rank(rotated, {0}) == 2);
    }
}

TEST_CASE("timebin unitary: permutation, phases, norm conservation") {
    FockState pair = two_pair_state();
    Eigen::MatrixXcd cycle = Eigen::MatrixXcd::Zero(4, 4);
    for (int t = 0; t < 4; ++t) cycle((t + 1) % 4, t) = 1.0;
    FockState shifted = apply_timebin_unitary(pair, 0, cycle);
    CHECK(close(shifted.amplitude(OccupationConfig::of({{0, 1}, {1, 1}})),
                Complex{1.0 / std::sqrt(2.0), 0.0}));
    CHECK(close(shifted.norm_sq(), 1.0));

    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 10; ++rep) {
        FockState s = qesa::test::random_state(4, 3, 3, 8, rng());
        Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(4, 4);
        for (int t = 0; t < 4; ++t)
            diag(t, t) = std::polar(1.0, static_cast<double>(rng() % 6283) / 1000.0);
        CHECK(close(apply_timebin_unitary(s, 1, diag).norm_sq(), 1.0));
    }
}

TEST_CASE("pruning drops tiny amplitudes and can be disabled") {
    FockState s(4, 1);
    s.add_term(OccupationConfig::single(0, 0), 1.0);
    s.add_term(OccupationConfig::single(0, 1), 1e-13);
    s.prune();
    CHECK(s.term_count() == 1);

    FockState keep(4, 1);
    keep.set_prune_epsilon(0.0);
    keep.add_term(OccupationConfig::single(0, 0), 1.0);
    keep.add_term(OccupationConfig::single(0, 1), 1e-13);
    keep.prune();
    CHECK(keep.term_count() == 2);
}

TEST_CASE("normalization flagging") {
    FockState s = two_pair_state();
    CHECK(s.is_normalized());
    s.scale(2.0);
    CHECK(!s.is_normalized());
    s.normalize();
    CHECK(s.is_normalized());
}

TEST_CASE("qudit embedding") {
    QuditVector q;
    q.coeffs.resize(4);
    q.coeffs << 0.5, 0.5, 0.5, 0.5;
    CHECK(q.is_normalized());
    FockState s = qudit_to_state(q, 2, 4, 3);
    CHECK(s.term_count() == 4);
    CHECK(close(s.amplitude(OccupationConfig::single(2, 3)), Complex{0.5, 0.0}));
}
