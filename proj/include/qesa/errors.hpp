// Copyright 2026 The Qesa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qesa {

/// Mismatched qudit dimension or spatial-mode count between operands.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An auxiliary-state design violates one of its combinatorial constraints.
/// The message names the violated clause.
struct ConstraintViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Requested dimension is not supported by the protocol (odd d, d < 2, ...).
struct UnsupportedDimension : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Raised when single-pattern-times-symmetry mode detects pattern
/// probabilities that are not uniform. Carries the offending patterns so
/// callers can fall back to a per-pattern table.
struct SymmetryCheckError : std::runtime_error {
    struct Mismatch {
        std::vector<int> pattern;
        double probability = 0.0;
        double reference = 0.0;
    };
    SymmetryCheckError(const std::string& msg, std::vector<Mismatch> table)
        : std::runtime_error(msg), mismatches(std::move(table)) {}
    std::vector<Mismatch> mismatches;
};

}  // namespace qesa
