// Copyright 2026 The Qesa Authors
// SPDX-License-Identifier: Apache-2.0

#include "qesa/emitter.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qesa {

namespace {

int ceil_log2(int n) {
    int bits = 0;
    while ((1 << bits) < n) ++bits;
    return bits;
}

std::string route_bits(int leaf, int depth) {
    std::string out;
    for (int b = depth - 1; b >= 0; --b) out.push_back((leaf >> b) & 1 ? '1' : '0');
    return out;
}

}  // namespace

DelayConfig DelayConfig::standard(int d) {
    DelayConfig cfg;
    cfg.delay_per_mode.resize(d - 2, 0);
    for (int m = 0; m < (d - 2) / 2; ++m) {
        cfg.delay_per_mode[2 * m] = d - 4 - 2 * m;
        cfg.delay_per_mode[2 * m + 1] = d - 4 - 2 * m;
    }
    return cfg;
}

int EmitterSchedule::switch_count() const {
    return (1 << ceil_log2(d - 2)) - 1;
}

int EmitterSchedule::control_qubits() const { return ceil_log2(d / 2); }

FockState EmitterState::to_fock(int spatial_count) const {
    FockState out(d, spatial_count, MixedSectors::Yes);
    for (const Branch& br : branches) {
        OccupationConfig cfg;
        for (const ModeIndex& p : br.photons) cfg.add(aux_mode(p.spatial), p.timebin, 1);
        out.add_term(cfg, br.amplitude);
    }
    return out;
}

MeasurementOutcome MeasurementOutcome::all_plus(int d) {
    return MeasurementOutcome{std::vector<int>(static_cast<std::size_t>(ceil_log2(d / 2)), 0)};
}

MeasurementOutcome MeasurementOutcome::all_minus(int d) {
    return MeasurementOutcome{std::vector<int>(static_cast<std::size_t>(ceil_log2(d / 2)), 1)};
}

MeasurementOutcome MeasurementOutcome::random(int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    MeasurementOutcome o;
    o.bits.resize(static_cast<std::size_t>(ceil_log2(d / 2)));
    for (auto& b : o.bits) b = static_cast<int>(rng() & 1u);
    return o;
}

std::vector<Complex> MeasurementOutcome::branch_signs(int d) const {
    const int h = d / 2;
    const int m = ceil_log2(h);
    if (static_cast<int>(bits.size()) != m)
        throw DimensionError("MeasurementOutcome: expected one bit per control qubit");
    std::vector<Complex> signs(h, 1.0);
    for (int j = 0; j < h; ++j) {
        int parity = 0;
        for (int q = 0; q < m; ++q) parity ^= ((j >> q) & 1) & bits[q];
        if (parity) signs[j] = -1.0;
    }
    return signs;
}

// ---------------------------------------------------------------------------
// Schedule construction

EmitterSchedule build_schedule(int d, std::optional<DelayConfig> delays) {
    if (d < 4 || d % 2 != 0)
        throw UnsupportedDimension("build_schedule: d must be even and >= 4");
    const int h = d / 2;
    EmitterSchedule sched;
    sched.d = d;
    sched.delays = delays ? *delays : DelayConfig::standard(d);
    if (static_cast<int>(sched.delays.delay_per_mode.size()) != d - 2)
        throw DimensionError("build_schedule: delay config must cover d-2 modes");
    for (int delay : sched.delays.delay_per_mode)
        if (delay < 0)
            throw ConstraintViolation("build_schedule: delays must be non-negative");
    sched.branch_photons.resize(h);

    const int tree_depth = ceil_log2(d - 2);
    int step = 0;
    sched.records.push_back(
        {step++, -1, "init", -1, -1, -1, -1, ""});

    // Pair round p emits the time-bin pair (2p, 2p+1) of the final state into
    // every branch that contains it. Branch j holds that pair at slot
    // m = (p + j) mod (d/2); the branch missing it maps to the nonexistent
    // slot d/2 - 1. Emission order is by slot (longest delay first); the
    // emission clock restarts each round, raw pair at slot m being
    // (2p + 2m, 2p + 2m + 1).
    for (int round = 0; round < h; ++round) {
        for (int slot = 0; slot < h - 1; ++slot) {
            int branch = ((slot - round) % h + h) % h;
            int mode_a = 2 * slot;
            int mode_b = 2 * slot + 1;
            int raw_a = 2 * round + 2 * slot;
            int raw_b = raw_a + 1;
            int delay_a = sched.delays.delay_per_mode[mode_a];
            int delay_b = sched.delays.delay_per_mode[mode_b];

            sched.records.push_back(
                {step++, branch, "flip_on", -1, -1, -1, -1, ""});
            sched.records.push_back({step++, branch, "excite", raw_a, mode_a,
                                     delay_a, -1, route_bits(mode_a, tree_depth)});
            sched.records.push_back({step++, branch, "excite", raw_b, mode_b,
                                     delay_b, -1, route_bits(mode_b, tree_depth)});
            sched.records.push_back(
                {step++, branch, "flip_off", -1, -1, -1, -1, ""});

            sched.branch_photons[branch].push_back({mode_a, raw_a + delay_a});
            sched.branch_photons[branch].push_back({mode_b, raw_b + delay_b});
        }
        // Relabeling pass: this round's aligned bins (2*round + d - 4, +1)
        // become (2*round, 2*round + 1).
        const int rename_shift = d - 4;
        if (rename_shift > 0) {
            for (int branch = 0; branch < h; ++branch) {
                auto& photons = sched.branch_photons[branch];
                // Only this round's photons still sit above the renamed range.
                for (std::size_t i = photons.size(); i-- > 0;) {
                    if (photons[i].timebin >= 2 * round + rename_shift &&
                        photons[i].timebin <= 2 * round + rename_shift + 1) {
                        int old_bin = photons[i].timebin;
                        photons[i].timebin -= rename_shift;
                        sched.records.push_back({step++, branch, "rename", old_bin,
                                                 photons[i].spatial, -1,
                                                 photons[i].timebin, ""});
                    }
                }
            }
        }
    }
    sched.records.push_back({step++, -1, "measure", -1, -1, -1, -1, ""});
    return sched;
}

// ---------------------------------------------------------------------------
// Generation

namespace {

GenerateResult assemble_result(EmitterSchedule sched,
                               const MeasurementOutcome& outcome) {
    const int d = sched.d;
    const int h = d / 2;
    std::vector<Complex> signs = outcome.branch_signs(d);

    AuxSpec spec = AuxSpec::rotated_pairs(d);
    for (int j = 0; j < h; ++j) spec.branches[j].phase = signs[j];
    spec.validate();

    FockState state(d, d);
    const double amp = 1.0 / std::sqrt(static_cast<double>(h));
    for (int j = 0; j < h; ++j) {
        OccupationConfig cfg;
        for (const ModeIndex& p : sched.branch_photons[j])
            cfg.add(aux_mode(p.spatial), p.timebin, 1);
        state.add_term(cfg, amp * signs[j]);
    }

    GenerateResult result;
    result.state = std::move(state);
    result.spec = std::move(spec);
    result.schedule = std::move(sched);
    result.outcome = outcome;
    return result;
}

}  // namespace

GenerateResult generate(int d, const MeasurementOutcome& outcome) {
    EmitterSchedule sched = build_schedule(d);
    VerifyReport report = verify_schedule(d);
    if (!report.pass)
        throw std::logic_error("generate: schedule failed verification: " +
                               (report.violations.empty() ? std::string("unknown")
                                                          : report.violations.front()));
    return assemble_result(std::move(sched), outcome);
}

GenerateResult generate(int d) { return generate(d, MeasurementOutcome::all_plus(d)); }

std::vector<EmitterState> generate_d4_trace() {
    // Two branches: the emitter spin itself is the control. Bright branch
    // emits first; the ground-state flip then activates the other branch.
    const double amp = 1.0 / std::sqrt(2.0);
    EmitterState s;
    s.d = 4;
    s.branches = {{amp, false, {}}, {amp, true, {}}};
    std::vector<EmitterState> trace;

    auto excite = [&](int mode, int bin) {
        for (auto& br : s.branches)
            if (br.bright) br.photons.push_back({mode, bin});
    };

    excite(0, 0);  // photon in time-bin 0 routed to x_0
    trace.push_back(s);
    excite(1, 1);  // time-bin 1 to x_1
    trace.push_back(s);
    for (auto& br : s.branches) br.bright = !br.bright;  // ground-state flip
    trace.push_back(s);
    excite(0, 2);
    trace.push_back(s);
    excite(1, 3);
    trace.push_back(s);
    return trace;
}

GenerateResult generate_d4(const MeasurementOutcome& outcome) {
    EmitterState final_state = generate_d4_trace().back();
    if (static_cast<int>(outcome.bits.size()) != 1)
        throw DimensionError("generate_d4: outcome has one bit (single spin qubit)");

    // X-measurement sign lands on the branch that was flipped into the bright
    // manifold second, i.e. the (2,3) pair. Recorded as a pair-rotation
    // design: branch 0 = |01>, branch 1 = |23>.
    EmitterSchedule sched = build_schedule(4);
    MeasurementOutcome mapped{{outcome.bits[0]}};
    GenerateResult result = assemble_result(std::move(sched), mapped);

    // Cross-check the literal six-step trace against the schedule route.
    FockState traced(4, 4);
    const double amp = 1.0 / std::sqrt(2.0);
    std::vector<Complex> signs = mapped.branch_signs(4);
    // Branch holding (0,1) came from the initially bright spin; (2,3) from
    // the flipped branch, which carries the outcome sign.
    for (const auto& br : final_state.branches) {
        OccupationConfig cfg;
        for (const ModeIndex& p : br.photons) cfg.add(aux_mode(p.spatial), p.timebin, 1);
        bool is_23 = !br.photons.empty() && br.photons.front().timebin >= 2;
        traced.add_term(cfg, amp * (is_23 ? signs[1] : signs[0]));
    }
    if (fidelity(traced, result.state) < 1.0 - kNormTol)
        throw std::logic_error("generate_d4: trace and schedule disagree");
    return result;
}

// ---------------------------------------------------------------------------
// Verification

VerifyReport verify_schedule(int d, std::optional<DelayConfig> delays) {
    VerifyReport report;
    EmitterSchedule sched;
    try {
        sched = build_schedule(d, std::move(delays));
    } catch (const std::exception& e) {
        report.violations.push_back(std::string("schedule construction failed: ") +
                                    e.what());
        return report;
    }
    const int h = d / 2;
    report.switch_count = sched.switch_count();
    report.control_qubits = sched.control_qubits();
    report.branches = h;
    report.photons_per_branch = d - 2;

    AuxSpec target = AuxSpec::rotated_pairs(d);
    for (int j = 0; j < h; ++j) {
        const auto& photons = sched.branch_photons[j];
        if (static_cast<int>(photons.size()) != d - 2) {
            report.violations.push_back("branch " + std::to_string(j) +
                                        ": expected " + std::to_string(d - 2) +
                                        " photons, got " +
                                        std::to_string(photons.size()));
            continue;
        }
        std::vector<int> bin_of_mode(d - 2, -1);
        std::vector<bool> bin_seen(2 * d, false);
        for (const ModeIndex& p : photons) {
            if (p.timebin < 0 || p.timebin >= d) {
                report.violations.push_back(
                    "branch " + std::to_string(j) + ": photon in mode x_" +
                    std::to_string(p.spatial) + " landed in out-of-range time-bin " +
                    std::to_string(p.timebin));
                continue;
            }
            if (bin_seen[p.timebin])
                report.violations.push_back(
                    "branch " + std::to_string(j) + ": time-bin collision at bin " +
                    std::to_string(p.timebin) + " (mode x_" +
                    std::to_string(p.spatial) + ")");
            bin_seen[p.timebin] = true;
            bin_of_mode[p.spatial] = p.timebin;
        }
        for (int k = 0; k < d - 2; ++k) {
            if (bin_of_mode[k] != target.branches[j].a_row[k])
                report.violations.push_back(
                    "branch " + std::to_string(j) + ": mode x_" + std::to_string(k) +
                    " holds bin " + std::to_string(bin_of_mode[k]) + ", expected " +
                    std::to_string(target.branches[j].a_row[k]));
        }
    }

    // Emitter bright-window discipline: per control branch, operations come
    // in flip_on / excite / excite / flip_off groups and no excitation occurs
    // outside an open window.
    std::vector<int> open_window(h, 0);
    std::vector<int> excites_in_window(h, 0);
    for (const ScheduleRecord& rec : sched.records) {
        if (rec.control_branch < 0) continue;
        if (rec.spin_op == "flip_on") {
            if (open_window[rec.control_branch]++ != 0)
                report.violations.push_back("branch " +
                                            std::to_string(rec.control_branch) +
                                            ": nested bright window at step " +
                                            std::to_string(rec.step));
            excites_in_window[rec.control_branch] = 0;
        } else if (rec.spin_op == "excite") {
            if (open_window[rec.control_branch] != 1)
                report.violations.push_back("branch " +
                                            std::to_string(rec.control_branch) +
                                            ": excitation outside bright window at "
                                            "step " +
                                            std::to_string(rec.step));
            ++excites_in_window[rec.control_branch];
        } else if (rec.spin_op == "flip_off") {
            if (open_window[rec.control_branch]-- != 1)
                report.violations.push_back("branch " +
                                            std::to_string(rec.control_branch) +
                                            ": unmatched flip_off at step " +
                                            std::to_string(rec.step));
            if (excites_in_window[rec.control_branch] != 2)
                report.violations.push_back(
                    "branch " + std::to_string(rec.control_branch) +
                    ": bright window emitted " +
                    std::to_string(excites_in_window[rec.control_branch]) +
                    " photons instead of 2");
        }
    }
    for (int j = 0; j < h; ++j)
        if (open_window[j] != 0)
            report.violations.push_back("branch " + std::to_string(j) +
                                        ": bright window left open");

    report.pass = report.violations.empty();
    return report;
}

}  // namespace qesa
