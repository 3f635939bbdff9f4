// Copyright 2026 The Qesa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "qesa/fock.hpp"

namespace qesa::test {

/// Relative comparison with an absolute floor, matching the library's
/// amplitude-equality convention.
inline bool close(double a, double b, double rel = kAmpRelTol,
                  double abs_floor = kAmpAbsFloor) {
    double diff = std::abs(a - b);
    return diff <= abs_floor || diff <= rel * std::max(std::abs(a), std::abs(b));
}

inline bool close(Complex a, Complex b, double rel = kAmpRelTol,
                  double abs_floor = kAmpAbsFloor) {
    double diff = std::abs(a - b);
    return diff <= abs_floor || diff <= rel * std::max(std::abs(a), std::abs(b));
}

/// Termwise state comparison over the union of supports.
inline bool states_close(const FockState& a, const FockState& b,
                         double rel = kAmpRelTol, double abs_floor = kAmpAbsFloor) {
    if (a.dim() != b.dim()) return false;
    for (const auto& [cfg, amp] : a.terms())
        if (!close(amp, b.amplitude(cfg), rel, abs_floor)) return false;
    for (const auto& [cfg, amp] : b.terms())
        if (!close(amp, a.amplitude(cfg), rel, abs_floor)) return false;
    return true;
}

/// Random state with `photons` photons in distinct modes per term.
inline FockState random_state(int dim, int spatial_count, int photons, int terms,
                              std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    FockState s(dim, spatial_count);
    int added = 0;
    while (added < terms) {
        OccupationConfig cfg;
        for (int p = 0; p < photons; ++p)
            cfg.add(static_cast<int>(rng() % spatial_count),
                    static_cast<int>(rng() % dim), 1);
        if (cfg.total_photons() != photons) continue;
        double re = static_cast<double>(rng() % 2000) / 1000.0 - 1.0;
        double im = static_cast<double>(rng() % 2000) / 1000.0 - 1.0;
        if (re == 0.0 && im == 0.0) re = 0.5;
        s.add_term(cfg, Complex{re, im});
        ++added;
    }
    s.normalize();
    return s;
}

}  // namespace qesa::test
