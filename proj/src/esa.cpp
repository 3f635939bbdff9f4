// Copyright 2026 The Qesa Authors
// SPDX-License-Identifier: Apache-2.0

#include "qesa/esa.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

namespace qesa {

// ---------------------------------------------------------------------------
// Auxiliary-state design

void AuxSpec::validate() const {
    if (d < 2 || d % 2 != 0)
        throw UnsupportedDimension(
            "AuxSpec: dimension must be even and >= 2 (odd dimensions are not "
            "supported by the analyzer)");
    if (static_cast<int>(branches.size()) != d / 2)
        throw ConstraintViolation("AuxSpec: branch count must equal d/2");
    for (int j = 0; j < d / 2; ++j) {
        const Branch& br = branches[j];
        if (static_cast<int>(br.a_row.size()) != d - 2)
            throw ConstraintViolation("AuxSpec branch " + std::to_string(j) +
                                      ": a_row must list d-2 time-bins");
        std::vector<bool> seen(d, false);
        auto mark = [&](int t, const char* what) {
            if (t < 0 || t >= d)
                throw ConstraintViolation("AuxSpec branch " + std::to_string(j) +
                                          ": " + what + " out of range");
            if (seen[t])
                throw ConstraintViolation(
                    "AuxSpec branch " + std::to_string(j) +
                    ": (a_row, y, z) is not a permutation of the time-bins "
                    "(duplicate " +
                    std::to_string(t) + ")");
            seen[t] = true;
        };
        for (int t : br.a_row) mark(t, "a_row entry");
        mark(br.y, "y");
        mark(br.z, "z");
        if (std::abs(std::abs(br.phase) - 1.0) > kNormTol)
            throw ConstraintViolation("AuxSpec branch " + std::to_string(j) +
                                      ": branch phase must have unit modulus");
    }
    for (int i = 0; i < d / 2; ++i)
        for (int j = 0; j < d / 2; ++j) {
            if (i == j) continue;
            if (branches[i].y == branches[j].y)
                throw ConstraintViolation("AuxSpec: excluded y values collide between "
                                          "branches " +
                                          std::to_string(i) + " and " +
                                          std::to_string(j));
            if (branches[i].z == branches[j].z)
                throw ConstraintViolation("AuxSpec: excluded z values collide between "
                                          "branches " +
                                          std::to_string(i) + " and " +
                                          std::to_string(j));
            if (branches[i].y == branches[j].z)
                throw ConstraintViolation(
                    "AuxSpec: excluded pair elements overlap (y of branch " +
                    std::to_string(i) + " equals z of branch " + std::to_string(j) +
                    ")");
        }
    // Disjointness of d/2 pairs over d time-bins forces exact coverage; the
    // checks above make any gap impossible, asserted here for clarity.
    std::vector<bool> covered(d, false);
    for (const Branch& br : branches) covered[br.y] = covered[br.z] = true;
    if (!std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }))
        throw ConstraintViolation(
            "AuxSpec: excluded pairs do not cover every time-bin");
}

AuxSpec AuxSpec::rotated_pairs(int d) {
    if (d < 2 || d % 2 != 0)
        throw UnsupportedDimension(
            "rotated_pairs: dimension must be even and >= 2");
    const int h = d / 2;
    AuxSpec spec;
    spec.d = d;
    spec.branches.resize(h);
    for (int j = 0; j < h; ++j) {
        Branch& br = spec.branches[j];
        // Pair slot m holds the consecutive pair (2q, 2q+1) with q = (m - j)
        // mod d/2; the pair left out is (d-2-2j, d-1-2j).
        for (int m = 0; m < h - 1; ++m) {
            int q = ((m - j) % h + h) % h;
            br.a_row.push_back(2 * q);
            br.a_row.push_back(2 * q + 1);
        }
        br.y = d - 2 - 2 * j;
        br.z = br.y + 1;
    }
    spec.validate();
    return spec;
}

AuxSpec AuxSpec::shifted(int d, int shift) {
    if (d < 2 || d % 2 != 0)
        throw UnsupportedDimension("shifted: dimension must be even and >= 2");
    if (shift < 1 || shift >= d)
        throw ConstraintViolation("shifted: shift must lie in [1, d-1]");
    // Need a set S of d/2 time-bins with S + shift = complement(S). Walk the
    // orbits of +shift on Z_d, alternately assigning elements; odd-length
    // orbits make that impossible.
    const int orbit_len = d / std::gcd(d, shift);
    if (orbit_len % 2 != 0)
        throw ConstraintViolation(
            "shifted: no valid exclusion set exists for shift " +
            std::to_string(shift) + " (orbit of +shift on the time-bins has odd "
            "length " +
            std::to_string(orbit_len) + ")");
    std::vector<int> assignment(d, -1);  // 0 -> y side, 1 -> z side
    for (int start = 0; start < d; ++start) {
        if (assignment[start] != -1) continue;
        int t = start, side = 0;
        do {
            assignment[t] = side;
            side ^= 1;
            t = (t + shift) % d;
        } while (t != start);
    }
    std::vector<int> ys;
    for (int t = 0; t < d; ++t)
        if (assignment[t] == 0) ys.push_back(t);

    AuxSpec spec;
    spec.d = d;
    for (int y : ys) {
        AuxSpec::Branch br;
        br.y = y;
        br.z = (y + shift) % d;
        for (int t = 0; t < d; ++t)
            if (t != br.y && t != br.z) br.a_row.push_back(t);
        spec.branches.push_back(std::move(br));
    }
    spec.validate();
    return spec;
}

AuxSpec make_aux_spec(int d, AuxFamily family, int shift) {
    switch (family) {
        case AuxFamily::RotatedPairs:
            return AuxSpec::rotated_pairs(d);
        case AuxFamily::Shifted:
            return AuxSpec::shifted(d, shift);
        case AuxFamily::Explicit:
            throw std::invalid_argument(
                "make_aux_spec: explicit family requires a caller-built AuxSpec");
    }
    throw std::invalid_argument("make_aux_spec: unknown family");
}

FockState build_aux(const AuxSpec& spec) {
    spec.validate();
    const int d = spec.d;
    FockState state(d, d);
    const double amp = 1.0 / std::sqrt(static_cast<double>(d) / 2.0);
    for (const AuxSpec::Branch& br : spec.branches) {
        OccupationConfig cfg;
        for (int k = 0; k < d - 2; ++k) cfg.add(aux_mode(k), br.a_row[k], 1);
        state.add_term(cfg, amp * br.phase);
    }
    return state;
}

FockState build_aux(int d, AuxFamily family, int shift) {
    return build_aux(make_aux_spec(d, family, shift));
}

// ---------------------------------------------------------------------------
// Detection patterns and projections

void DetectionPattern::validate(int d) const {
    if (dim() != d)
        throw DimensionError("DetectionPattern: expected one detector per time-bin");
    for (int det : detectors)
        if (det < 0 || det >= d)
            throw DimensionError("DetectionPattern: detector index out of range");
}

DetectionPattern DetectionPattern::all_zero(int d) {
    return DetectionPattern{std::vector<int>(d, 0)};
}

DetectionPattern DetectionPattern::from_index(int d, std::uint64_t index) {
    DetectionPattern p{std::vector<int>(d, 0)};
    for (int i = d - 1; i >= 0; --i) {
        p.detectors[i] = static_cast<int>(index % d);
        index /= d;
    }
    return p;
}

ProjectionBra projection_bra(int d, const DetectionPattern& pattern) {
    if (d < 2) throw UnsupportedDimension("projection_bra: d must be >= 2");
    pattern.validate(d);
    const double prefactor = 1.0 / std::pow(static_cast<double>(d), d / 2.0);

    ProjectionBra out{FockState(d, d), pattern, Complex{prefactor, 0.0}};
    std::vector<int> bins(d);
    std::iota(bins.begin(), bins.end(), 0);
    // Sum over assignments of distinct time-bins to the d spatial modes.
    // Stored as the ket representative, hence the conjugated phase.
    do {
        long long exponent = 0;
        for (int s = 0; s < d; ++s)
            exponent += static_cast<long long>(bins[s]) * pattern.detectors[s];
        OccupationConfig cfg;
        for (int s = 0; s < d; ++s) cfg.add(s, bins[s], 1);
        out.bra.add_term(cfg, prefactor * std::conj(omega_pow(d, exponent)));
    } while (std::next_permutation(bins.begin(), bins.end()));
    return out;
}

namespace {

double pair_projection_modulus(int d) {
    return 1.0 / std::sqrt(std::pow(static_cast<double>(d), d) *
                           (static_cast<double>(d) / 2.0));
}

long long branch_phase_exponent(const AuxSpec::Branch& br,
                                const DetectionPattern& pattern) {
    long long f = 0;
    for (std::size_t k = 0; k < br.a_row.size(); ++k)
        f += static_cast<long long>(br.a_row[k]) * pattern.detectors[k + 2];
    return f;
}

}  // namespace

FockState project_ab(const AuxSpec& spec, const DetectionPattern& pattern) {
    pattern.validate(spec.d);
    const int d = spec.d;
    const double c = pair_projection_modulus(d);
    FockState out(d, d);
    for (const AuxSpec::Branch& br : spec.branches) {
        const long long f = branch_phase_exponent(br, pattern);
        const Complex weight = c * std::conj(br.phase);
        OccupationConfig zy;
        zy.add(kModeA, br.z, 1);
        zy.add(kModeB, br.y, 1);
        out.add_term(zy, weight * std::conj(omega_pow(
                             d, f + static_cast<long long>(br.z) * pattern.detectors[0] +
                                    static_cast<long long>(br.y) * pattern.detectors[1])));
        OccupationConfig yz;
        yz.add(kModeA, br.y, 1);
        yz.add(kModeB, br.z, 1);
        out.add_term(yz, weight * std::conj(omega_pow(
                             d, f + static_cast<long long>(br.y) * pattern.detectors[0] +
                                    static_cast<long long>(br.z) * pattern.detectors[1])));
    }
    return out;
}

FockState canonical_projection(const AuxSpec& spec) {
    spec.validate();
    const int d = spec.d;
    const double c = pair_projection_modulus(d);
    FockState out(d, d);
    for (const AuxSpec::Branch& br : spec.branches) {
        const Complex weight = c * std::conj(br.phase);
        OccupationConfig zy;
        zy.add(kModeA, br.z, 1);
        zy.add(kModeB, br.y, 1);
        out.add_term(zy, weight);
        OccupationConfig yz;
        yz.add(kModeA, br.y, 1);
        yz.add(kModeB, br.z, 1);
        out.add_term(yz, weight);
    }
    return out;
}

ModeUnitary correction_unitary(const AuxSpec& spec,
                               const DetectionPattern& pattern) {
    pattern.validate(spec.d);
    const int d = spec.d;
    ModeUnitary u;
    u.matrix = Eigen::MatrixXcd::Zero(d, d);
    for (const AuxSpec::Branch& br : spec.branches) {
        const long long f = branch_phase_exponent(br, pattern);
        u.matrix(br.y, br.y) = omega_pow(
            d, -(f + static_cast<long long>(br.z) * pattern.detectors[0] +
                 static_cast<long long>(br.y) * pattern.detectors[1]));
        u.matrix(br.z, br.z) = omega_pow(
            d, -(f + static_cast<long long>(br.y) * pattern.detectors[0] +
                 static_cast<long long>(br.z) * pattern.detectors[1]));
    }
    return u;
}

// ---------------------------------------------------------------------------
// Pattern enumeration

namespace {

void validate_analyzer_input(const FockState& input, int d) {
    if (input.dim() != d)
        throw DimensionError("enumerate_success: input dimension mismatch");
    if (input.terms().empty())
        throw std::invalid_argument("enumerate_success: empty input state");
    for (const auto& [cfg, amp] : input.terms()) {
        if (cfg.photons_in_spatial(kModeA) != 1 ||
            cfg.photons_in_spatial(kModeB) != 1)
            throw std::invalid_argument(
                "enumerate_success: input must hold exactly one photon in each "
                "analyzed mode");
        for (int k = 0; k < d - 2; ++k)
            if (cfg.photons_in_spatial(aux_mode(k)) != 0)
                throw std::invalid_argument(
                    "enumerate_success: auxiliary modes must be empty in the "
                    "input (they are contracted analytically)");
    }
}

struct PatternEval {
    double probability = 0.0;
    double fidelity = 0.0;
};

PatternEval evaluate_pattern(const FockState& input, const AuxSpec& aux,
                             const DetectionPattern& pattern,
                             const EsaRunOptions& options,
                             const FockState& target, double target_norm_sq,
                             FockState* projected_out = nullptr,
                             FockState* corrected_out = nullptr) {
    FockState bra = project_ab(aux, pattern);
    FockState projected = partial_project(bra, input, {kModeA, kModeB});
    PatternEval ev;
    ev.probability = projected.norm_sq();
    ModeUnitary corr = correction_unitary(aux, pattern);
    FockState corrected =
        apply_timebin_unitary(projected, options.bob_spatial, corr.matrix);
    if (options.post_correction)
        corrected = apply_timebin_unitary(corrected, options.bob_spatial,
                                          *options.post_correction);
    if (ev.probability > 0.0 && target_norm_sq > 0.0) {
        ev.fidelity = std::norm(inner_product(corrected, target)) /
                      (ev.probability * target_norm_sq);
    }
    if (projected_out) *projected_out = std::move(projected);
    if (corrected_out) *corrected_out = std::move(corrected);
    return ev;
}

}  // namespace

ProtocolResult enumerate_success(const FockState& input, const AuxSpec& aux,
                                 const EsaRunOptions& options) {
    aux.validate();
    const int d = aux.d;
    validate_analyzer_input(input, d);
    if (options.bob_spatial < 0 || options.bob_spatial >= input.spatial_count())
        throw DimensionError("enumerate_success: bob_spatial out of range");

    ProtocolResult result;
    result.d = d;
    result.mode = options.mode;
    if (options.target_override) {
        result.canonical_target = *options.target_override;
    } else {
        FockState target =
            partial_project(canonical_projection(aux), input, {kModeA, kModeB});
        if (options.post_correction)
            target = apply_timebin_unitary(target, options.bob_spatial,
                                           *options.post_correction);
        result.canonical_target = std::move(target);
    }
    const double target_norm_sq = result.canonical_target.norm_sq();

    std::uint64_t total_patterns = 1;
    for (int i = 0; i < d; ++i) total_patterns *= static_cast<std::uint64_t>(d);
    result.pattern_count = total_patterns;

    const DetectionPattern zero = DetectionPattern::all_zero(d);
    PatternEval zero_eval =
        evaluate_pattern(input, aux, zero, options,
                         result.canonical_target, target_norm_sq,
                         &result.sample_projected, &result.sample_corrected);

    if (options.mode == EnumerationMode::SinglePatternTimesSymmetry) {
        std::mt19937_64 rng(options.seed);
        std::vector<SymmetryCheckError::Mismatch> mismatches;
        result.fidelity_min = result.fidelity_max = zero_eval.fidelity;
        for (int i = 0; i < options.symmetry_samples; ++i) {
            DetectionPattern p{std::vector<int>(d)};
            for (int t = 0; t < d; ++t)
                p.detectors[t] = static_cast<int>(rng() % static_cast<std::uint64_t>(d));
            PatternEval ev = evaluate_pattern(input, aux, p, options,
                                              result.canonical_target, target_norm_sq);
            double rel = std::abs(ev.probability - zero_eval.probability) /
                         std::max(zero_eval.probability, 1e-300);
            if (rel > options.symmetry_rel_tol)
                mismatches.push_back({p.detectors, ev.probability, zero_eval.probability});
            result.fidelity_min = std::min(result.fidelity_min, ev.fidelity);
            result.fidelity_max = std::max(result.fidelity_max, ev.fidelity);
            if (options.record_per_pattern)
                result.per_pattern.push_back({p, ev.probability, ev.fidelity});
        }
        if (!mismatches.empty())
            throw SymmetryCheckError(
                "enumerate_success: pattern probabilities are not uniform (" +
                    std::to_string(mismatches.size()) +
                    " of the sampled patterns deviate; the input is likely not "
                    "maximally entangled) - use full enumeration",
                std::move(mismatches));
        result.evaluated_patterns =
            static_cast<std::uint64_t>(options.symmetry_samples) + 1;
        result.total_success =
            zero_eval.probability * static_cast<double>(total_patterns);
        return result;
    }

    // Full enumeration, data-parallel over fixed-size chunks merged in index
    // order so results do not depend on the worker count.
    const std::uint64_t chunk_size = 4096;
    const std::uint64_t n_chunks = (total_patterns + chunk_size - 1) / chunk_size;
    struct ChunkAcc {
        double sum = 0.0;
        double fid_min = std::numeric_limits<double>::infinity();
        double fid_max = -std::numeric_limits<double>::infinity();
        std::vector<PatternOutcome> outcomes;
    };
    std::vector<ChunkAcc> chunks(n_chunks);
    std::atomic<std::uint64_t> next_chunk{0};

    auto worker = [&]() {
        for (;;) {
            std::uint64_t ci = next_chunk.fetch_add(1);
            if (ci >= n_chunks) return;
            ChunkAcc& acc = chunks[ci];
            const std::uint64_t begin = ci * chunk_size;
            const std::uint64_t end = std::min(begin + chunk_size, total_patterns);
            for (std::uint64_t idx = begin; idx < end; ++idx) {
                DetectionPattern p = DetectionPattern::from_index(d, idx);
                PatternEval ev = evaluate_pattern(input, aux, p, options,
                                                  result.canonical_target,
                                                  target_norm_sq);
                acc.sum += ev.probability;
                acc.fid_min = std::min(acc.fid_min, ev.fidelity);
                acc.fid_max = std::max(acc.fid_max, ev.fidelity);
                if (options.record_per_pattern)
                    acc.outcomes.push_back({p, ev.probability, ev.fidelity});
            }
        }
    };

    int n_threads = options.threads > 0
                        ? options.threads
                        : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(n_chunks)));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    result.total_success = 0.0;
    result.fidelity_min = std::numeric_limits<double>::infinity();
    result.fidelity_max = -std::numeric_limits<double>::infinity();
    for (ChunkAcc& acc : chunks) {
        result.total_success += acc.sum;
        result.fidelity_min = std::min(result.fidelity_min, acc.fid_min);
        result.fidelity_max = std::max(result.fidelity_max, acc.fid_max);
        if (options.record_per_pattern)
            result.per_pattern.insert(result.per_pattern.end(),
                                      std::make_move_iterator(acc.outcomes.begin()),
                                      std::make_move_iterator(acc.outcomes.end()));
    }
    result.evaluated_patterns = total_patterns;
    return result;
}

}  // namespace qesa
