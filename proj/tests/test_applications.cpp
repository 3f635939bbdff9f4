// Copyright 2026 The Qesa Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "qesa/applications.hpp"
#include "test_util.hpp"

using namespace qesa;
using qesa::test::close;
using qesa::test::states_close;

TEST_CASE("entanglement swap at d=4: total 1/8 and the canonical output") {
    RunOptions opt;
    opt.threads = 2;
    SwapResult result = entanglement_swap(4, AuxFamily::RotatedPairs, opt);
    CHECK(close(result.total_success, 0.125, 1e-12, 1e-30));
    CHECK(result.pattern_count == 256);
    CHECK(result.fidelity_min >= 1.0 - 1e-9);

    // all-zero-pattern corrected output: uniform pair-exchange state with the
    // pipeline's recorded normalization (squared norm = 2^-11)
    const double amp = 1.0 / (64.0 * std::sqrt(2.0));
    for (auto [i, k] : {std::pair{0, 1}, {1, 0}, {2, 3}, {3, 2}})
        CHECK(close(result.output_state.amplitude(OccupationConfig::of(
                        {{swap_mode_alice(4), i}, {swap_mode_bob(4), k}})),
                    Complex{amp, 0.0}));
    CHECK(close(result.output_state.norm_sq(), std::pow(2.0, -11.0), 1e-12, 1e-30));
}

TEST_CASE("entanglement swap at d=2 succeeds half the time") {
    SwapResult result = entanglement_swap(2);
    CHECK(close(result.total_success, 0.5, 1e-12, 1e-30));
    CHECK(result.fidelity_min >= 1.0 - 1e-9);
}

TEST_CASE("entanglement swap at d=6: total 1/18 by full enumeration") {
    RunOptions opt;
    opt.threads = 0;  // use all cores, deterministic merge regardless
    SwapResult result = entanglement_swap(6, AuxFamily::RotatedPairs, opt);
    CHECK(close(result.total_success, 1.0 / 18.0, 1e-9, 1e-30));
    CHECK(result.pattern_count == 46656);
    CHECK(result.fidelity_min >= 1.0 - 1e-9);
}

TEST_CASE("teleportation of a basis state at d=4") {
    QuditVector q;
    q.coeffs = Eigen::VectorXcd::Zero(4);
    q.coeffs(3) = 1.0;
    TeleportResult result = teleport(4, q, AuxFamily::RotatedPairs);
    CHECK(close(result.total_success, 0.125, 1e-9, 1e-30));
    CHECK(result.corrected_fidelity >= 1.0 - 1e-9);
}

TEST_CASE("teleportation of the uniform superposition at d=4") {
    QuditVector q;
    q.coeffs = Eigen::VectorXcd::Constant(4, Complex{0.5, 0.0});
    TeleportResult result = teleport(4, q, AuxFamily::RotatedPairs);
    CHECK(result.corrected_fidelity >= 1.0 - 1e-9);
    // output carries the input qudit on the receiving mode
    FockState ref = qudit_to_state(q, teleport_mode_target(4), 4, 5);
    CHECK(fidelity(result.output_state, ref) >= 1.0 - 1e-9);
}

TEST_CASE("teleportation of a random qudit at d=6 via full enumeration") {
    QuditVector q = random_qudit(6, 424242);
    TeleportResult result = teleport(6, q, AuxFamily::RotatedPairs);
    CHECK(close(result.total_success, 1.0 / 18.0, 1e-9, 1e-30));
    CHECK(result.corrected_fidelity >= 1.0 - 1e-9);
}

TEST_CASE("teleportation rejects non-normalized inputs") {
    QuditVector q;
    q.coeffs = Eigen::VectorXcd::Constant(4, Complex{1.0, 0.0});
    CHECK_THROWS_AS(teleport(4, q, AuxFamily::RotatedPairs), std::invalid_argument);
}

TEST_CASE("swap and teleportation succeed at the same rate") {
    for (int d : {2, 4}) {
        double p_swap = entanglement_swap(d).total_success;
        double p_tel =
            teleport(d, random_qudit(d, 99 + d), AuxFamily::RotatedPairs)
                .total_success;
        CHECK(close(p_swap, p_tel, 1e-12, 1e-30));
    }
}

TEST_CASE("teleportation fidelity is input independent (100 random inputs, d=4)") {
    std::mt19937_64 rng(321);
    double min_fid = 1.0;
    for (int rep = 0; rep < 100; ++rep) {
        QuditVector q = random_qudit(4, rng());
        TeleportResult result = teleport(4, q, AuxFamily::RotatedPairs);
        min_fid = std::min(min_fid, result.corrected_fidelity);
        CHECK(close(result.total_success, 0.125, 1e-9, 1e-30));
    }
    CHECK(min_fid >= 1.0 - 1e-9);
}

TEST_CASE("uncorrected swap output differs from the target by diagonal phases "
          "on bob") {
    std::mt19937_64 rng(654);
    const int d = 4;
    AuxSpec spec = AuxSpec::rotated_pairs(d);
    FockState input = swap_input(d);
    FockState target =
        partial_project(canonical_projection(spec), input, {kModeA, kModeB});
    for (int rep = 0; rep < 20; ++rep) {
        DetectionPattern pat{{static_cast<int>(rng() % 4), static_cast<int>(rng() % 4),
                              static_cast<int>(rng() % 4),
                              static_cast<int>(rng() % 4)}};
        FockState uncorrected =
            partial_project(project_ab(spec, pat), input, {kModeA, kModeB});
        // solve for the diagonal: D[bob_bin] = uncorrected / target per term
        std::vector<Complex> diag(d, Complex{0.0, 0.0});
        for (const auto& [cfg, amp] : target.terms()) {
            int bob_bin = -1;
            for (const auto& s : cfg.slots())
                if (s.spatial == swap_mode_bob(d)) bob_bin = s.timebin;
            REQUIRE(bob_bin >= 0);
            Complex ratio = uncorrected.amplitude(cfg) / amp;
            if (diag[bob_bin] != Complex{0.0, 0.0})
                CHECK(close(diag[bob_bin], ratio, 1e-9, 1e-12));
            diag[bob_bin] = ratio;
        }
        for (int t = 0; t < d; ++t) CHECK(close(std::abs(diag[t]), 1.0, 1e-9, 1e-12));
    }
}

TEST_CASE("sweep over {2,4,6} reproduces the quadratic law") {
    std::vector<SweepRow> rows = sweep({2, 4, 6}, Protocol::Swap);
    REQUIRE(rows.size() == 3);
    const double expected[] = {0.5, 0.125, 1.0 / 18.0};
    for (int i = 0; i < 3; ++i) {
        CHECK(rows[i].d == 2 * (i + 1));
        CHECK(close(rows[i].p_success, expected[i], 1e-9, 1e-30));
        CHECK(rows[i].abs_error <= 1e-9);
    }
}

TEST_CASE("sweep: empty input, oversized dimension, symmetry fallback") {
    CHECK(sweep({}, Protocol::Swap).empty());

    try {
        sweep({10}, Protocol::Swap);
        FAIL("expected UnsupportedDimension");
    } catch (const UnsupportedDimension& e) {
        CHECK(std::string(e.what()).find("10000000000") != std::string::npos);
    }

    // d=8 exceeds the full-enumeration limit and falls back to symmetry mode
    std::vector<SweepRow> rows = sweep({8}, Protocol::Swap);
    REQUIRE(rows.size() == 1);
    CHECK(close(rows[0].p_success, 0.03125, 1e-9, 1e-30));
}

TEST_CASE("pruning at 1e-12 does not move the d=4 totals beyond 1e-9") {
    RunOptions pruned;
    pruned.prune_eps = kPruneEps;
    RunOptions unpruned;
    unpruned.prune_eps = 0.0;
    double with = entanglement_swap(4, AuxFamily::RotatedPairs, pruned).total_success;
    double without =
        entanglement_swap(4, AuxFamily::RotatedPairs, unpruned).total_success;
    CHECK(std::abs(with - without) < 1e-9);
}

TEST_CASE("shifted family swaps and teleports at the same rates") {
    SwapResult result = entanglement_swap(4, AuxSpec::shifted(4, 2));
    CHECK(close(result.total_success, 0.125, 1e-12, 1e-30));
    CHECK(result.fidelity_min >= 1.0 - 1e-9);

    TeleportResult tel = teleport(4, random_qudit(4, 17), AuxSpec::shifted(4, 3));
    CHECK(close(tel.total_success, 0.125, 1e-9, 1e-30));
    CHECK(tel.corrected_fidelity >= 1.0 - 1e-9);
}
