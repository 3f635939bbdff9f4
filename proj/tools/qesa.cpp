// Copyright 2026 The Qesa Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: reproducible analyzer experiments with
// machine-readable output.
//
// Exit codes: 0 success, 1 unexpected failure, 2 usage/configuration error,
// 3 physics mismatch (a --check assertion or uniformity cross-check failed),
// so CI can tell "wrong physics" from "broken build".

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qesa/applications.hpp"
#include "qesa/emitter.hpp"
#include "qesa/serialize.hpp"

namespace {

using namespace qesa;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUsage = 2;
constexpr int kExitMismatch = 3;

struct CommonOpts {
    int dim = 4;
    std::vector<int> dims;
    std::string family = "rotated_pairs";
    std::string mode = "auto";
    std::string pattern;
    std::string outcome = "plus";
    std::string out_path;
    std::string format = "json";
    std::uint64_t seed = 0;
    int threads = 0;
    double tol = 1e-9;
    bool force = false;
    bool check = false;
};

int max_dim_guard() {
    if (const char* env = std::getenv("QESA_MAX_DIM")) {
        int v = std::atoi(env);
        if (v >= 2) return v;
    }
    return 8;
}

/// Full-enumeration cost guard: d^d patterns beyond 2e7 need --force.
constexpr double kPatternGuard = 2e7;

void check_dim(const CommonOpts& opts, int d) {
    if (d < 2 || d % 2 != 0)
        throw CLI::ValidationError("--dim", "protocol dimensions must be even and >= 2");
    int max_dim = max_dim_guard();
    if (d > max_dim)
        throw CLI::ValidationError(
            "--dim", "d = " + std::to_string(d) + " exceeds the maximum " +
                         std::to_string(max_dim) +
                         " (set QESA_MAX_DIM to override)");
    double patterns = std::pow(static_cast<double>(d), d);
    if (opts.mode == "full" && patterns > kPatternGuard && !opts.force)
        throw CLI::ValidationError(
            "--mode", "full enumeration of " + std::to_string(patterns) +
                          " patterns refused; pass --force or use --mode symmetry");
}

AuxSpec parse_family(const std::string& family, int d) {
    if (family == "rotated_pairs" || family == "rotated")
        return AuxSpec::rotated_pairs(d);
    const std::string prefix = "shifted";
    if (family.rfind(prefix, 0) == 0) {
        int shift = 1;
        auto colon = family.find(':');
        if (colon != std::string::npos) shift = std::stoi(family.substr(colon + 1));
        return AuxSpec::shifted(d, shift);
    }
    throw CLI::ValidationError("--family", "unknown family '" + family +
                                               "' (rotated_pairs | shifted[:i])");
}

RunOptions run_options(const CommonOpts& opts, int d) {
    RunOptions run;
    double patterns = std::pow(static_cast<double>(d), d);
    if (opts.mode == "full")
        run.mode = EnumerationMode::FullEnumeration;
    else if (opts.mode == "symmetry")
        run.mode = EnumerationMode::SinglePatternTimesSymmetry;
    else if (opts.mode == "auto")
        run.mode = patterns <= 1e5 ? EnumerationMode::FullEnumeration
                                   : EnumerationMode::SinglePatternTimesSymmetry;
    else
        throw CLI::ValidationError("--mode", "expected auto | full | symmetry");
    run.threads = opts.threads;
    run.seed = opts.seed;
    return run;
}

void emit(const CommonOpts& opts, const Json& j) {
    std::string text = j.dump(2) + "\n";
    if (opts.out_path.empty())
        std::cout << text;
    else
        write_text_file(opts.out_path, text);
}

void require_json_format(const CommonOpts& opts) {
    if (opts.format != "json")
        throw CLI::ValidationError("--format",
                                   "this subcommand only emits json");
}

int check_failed(const std::string& what, double got, double want) {
    std::cerr << "check failed: " << what << " (got " << got << ", want " << want
              << ")\n";
    return kExitMismatch;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_dim = true) {
    if (with_dim)
        cmd->add_option("--dim", opts.dim, "Qudit dimension (even)")
            ->capture_default_str();
    cmd->add_option("--family", opts.family,
                    "Auxiliary family: rotated_pairs | shifted[:i]")
        ->capture_default_str();
    cmd->add_option("--mode", opts.mode, "auto | full | symmetry")
        ->capture_default_str();
    cmd->add_option("--out", opts.out_path, "Output file (default: stdout)");
    cmd->add_option("--format", opts.format, "json | csv")->capture_default_str();
    cmd->add_option("--seed", opts.seed, "Random seed")->capture_default_str();
    cmd->add_option("--threads", opts.threads,
                    "Worker cap (0 = hardware concurrency)")
        ->capture_default_str();
    cmd->add_option("--tol", opts.tol, "Check tolerance")
        ->check(CLI::Range(1e-15, 1e-6))
        ->capture_default_str();
    cmd->add_flag("--force", opts.force, "Override the enumeration cost guard");
    cmd->add_flag("--check", opts.check,
                  "Assert the run's invariants; exit 3 on mismatch");
}

// ---------------------------------------------------------------------------

int cmd_swap(const CommonOpts& opts) {
    check_dim(opts, opts.dim);
    require_json_format(opts);
    AuxSpec aux = parse_family(opts.family, opts.dim);
    SwapResult result = entanglement_swap(opts.dim, aux, run_options(opts, opts.dim));
    emit(opts, swap_result_to_json(result, opts.family, true));
    if (opts.check) {
        if (std::abs(result.total_success - result.expected) > opts.tol)
            return check_failed("total success probability", result.total_success,
                                result.expected);
        if (result.fidelity_min < 1.0 - opts.tol)
            return check_failed("corrected fidelity", result.fidelity_min, 1.0);
    }
    return kExitOk;
}

int cmd_teleport(const CommonOpts& opts) {
    check_dim(opts, opts.dim);
    require_json_format(opts);
    AuxSpec aux = parse_family(opts.family, opts.dim);
    QuditVector input = random_qudit(opts.dim, opts.seed);
    TeleportResult result =
        teleport(opts.dim, input, aux, run_options(opts, opts.dim));
    emit(opts, teleport_result_to_json(result, opts.family, true));
    if (opts.check) {
        if (std::abs(result.total_success - result.expected) > opts.tol)
            return check_failed("total success probability", result.total_success,
                                result.expected);
        if (result.corrected_fidelity < 1.0 - opts.tol)
            return check_failed("corrected fidelity", result.corrected_fidelity, 1.0);
    }
    return kExitOk;
}

int cmd_esa(const CommonOpts& opts) {
    check_dim(opts, opts.dim);
    require_json_format(opts);
    const int d = opts.dim;
    AuxSpec aux = parse_family(opts.family, d);
    DetectionPattern pattern = opts.pattern.empty()
                                   ? DetectionPattern::all_zero(d)
                                   : pattern_from_string(opts.pattern, d);
    FockState input = swap_input(d);
    FockState projected =
        partial_project(project_ab(aux, pattern), input, {kModeA, kModeB});
    ModeUnitary corr = correction_unitary(aux, pattern);
    FockState corrected =
        apply_timebin_unitary(projected, swap_mode_bob(d), corr.matrix);
    FockState target =
        partial_project(canonical_projection(aux), input, {kModeA, kModeB});
    double probability = projected.norm_sq();
    double fid = fidelity(corrected, target);

    Json j{{"d", d},
           {"family", opts.family},
           {"pattern", pattern_to_json(pattern)},
           {"probability", probability},
           {"fidelity_after_correction", fid},
           {"projected_state", fock_to_json(projected)},
           {"corrected_state", fock_to_json(corrected)}};
    emit(opts, j);
    if (opts.check) {
        double expected = 2.0 / (std::pow(static_cast<double>(d), d) * d * d);
        if (std::abs(probability - expected) > opts.tol * expected)
            return check_failed("pattern probability", probability, expected);
        if (fid < 1.0 - opts.tol) return check_failed("corrected fidelity", fid, 1.0);
    }
    return kExitOk;
}

int cmd_aux_build(const CommonOpts& opts) {
    check_dim(opts, opts.dim);
    require_json_format(opts);
    AuxSpec aux = parse_family(opts.family, opts.dim);
    FockState state = build_aux(aux);
    Json j{{"d", opts.dim},
           {"family", opts.family},
           {"state", fock_to_json(state)}};
    if (opts.dim >= 4)
        j["schmidt_rank"] = schmidt_rank(state, {aux_mode(0)});
    emit(opts, j);
    if (opts.check && opts.dim >= 4) {
        int rank = j["schmidt_rank"].get<int>();
        if (rank != opts.dim / 2)
            return check_failed("schmidt rank", rank, opts.dim / 2.0);
    }
    return kExitOk;
}

int cmd_aux_gen(const CommonOpts& opts) {
    check_dim(opts, opts.dim);
    require_json_format(opts);
    if (opts.dim < 4)
        throw CLI::ValidationError("--dim", "emitter generation needs d >= 4");
    MeasurementOutcome outcome;
    if (opts.outcome == "plus")
        outcome = MeasurementOutcome::all_plus(opts.dim);
    else if (opts.outcome == "minus")
        outcome = MeasurementOutcome::all_minus(opts.dim);
    else if (opts.outcome == "random")
        outcome = MeasurementOutcome::random(opts.dim, opts.seed);
    else
        throw CLI::ValidationError("--outcome", "expected plus | minus | random");

    GenerateResult gen = generate(opts.dim, outcome);
    VerifyReport report = verify_schedule(opts.dim);
    Json j{{"d", opts.dim},
           {"outcome_bits", outcome.bits},
           {"state", fock_to_json(gen.state)},
           {"verify", verify_report_to_json(report)}};
    emit(opts, j);
    if (!opts.out_path.empty())
        write_text_file(opts.out_path + ".schedule.jsonl",
                        schedule_to_json_lines(gen.schedule));
    if (opts.check) {
        if (!report.pass) {
            std::cerr << "check failed: schedule verification\n";
            return kExitMismatch;
        }
        double fid = fidelity(gen.state, build_aux(gen.spec));
        if (fid < 1.0 - opts.tol)
            return check_failed("fidelity with the ideal construction", fid, 1.0);
    }
    return kExitOk;
}

int cmd_decompose(const CommonOpts& opts) {
    require_json_format(opts);
    if (opts.dim < 2)
        throw CLI::ValidationError("--dim", "decomposition needs d >= 2");
    BSNetlist net = decompose(qft_matrix(opts.dim));
    emit(opts, netlist_to_json(net));
    if (opts.check) {
        if (net.reconstruction_error > kUnitaryTol)
            return check_failed("reconstruction error", net.reconstruction_error,
                                kUnitaryTol);
        if (opts.dim == 4 && net.beam_splitter_count() != 4)
            return check_failed("beam splitter count",
                                static_cast<double>(net.beam_splitter_count()), 4);
    }
    return kExitOk;
}

int cmd_sweep(const CommonOpts& opts, const std::string& protocol) {
    if (opts.dims.empty())
        throw CLI::ValidationError("--dims", "list the dimensions to sweep");
    SweepOptions sweep_opt;
    sweep_opt.threads = opts.threads;
    sweep_opt.seed = opts.seed;
    sweep_opt.max_dim = max_dim_guard();
    if (opts.mode == "full") {
        sweep_opt.mode = EnumerationMode::FullEnumeration;
        sweep_opt.force_mode = true;
        for (int d : opts.dims) check_dim(opts, d);
    } else if (opts.mode == "symmetry") {
        sweep_opt.mode = EnumerationMode::SinglePatternTimesSymmetry;
        sweep_opt.force_mode = true;
    }
    std::vector<SweepRow> rows =
        sweep(opts.dims, protocol == "teleport" ? Protocol::Teleport : Protocol::Swap,
              sweep_opt);

    if (opts.format == "csv") {
        std::string text = sweep_to_csv(rows);
        if (opts.out_path.empty())
            std::cout << text;
        else
            write_text_file(opts.out_path, text);
    } else {
        emit(opts, sweep_to_json(rows));
    }
    if (!opts.out_path.empty()) {
        std::string stem = opts.out_path;
        auto dot = stem.rfind('.');
        if (dot != std::string::npos) stem = stem.substr(0, dot);
        write_text_file(stem + "-plot.csv", sweep_plot_csv(rows));
    }
    if (opts.check) {
        for (const SweepRow& r : rows)
            if (r.abs_error > opts.tol)
                return check_failed("p(" + std::to_string(r.d) + ")", r.p_success,
                                    r.expected);
    }
    return kExitOk;
}

int cmd_selftest(const CommonOpts& opts) {
    int failures = 0;
    auto report = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
        if (!ok) ++failures;
    };

    for (int d = 2; d <= 8; ++d)
        report("fourier unitarity d=" + std::to_string(d),
               qft_matrix(d).unitarity_deviation() < 1e-12);

    for (int d = 2; d <= 5; ++d) {
        ModeUnitary u = random_unitary(d, opts.seed + d);
        BSNetlist net = decompose(u);
        report("mesh round trip d=" + std::to_string(d),
               (reconstruct(net) - u.matrix).cwiseAbs().maxCoeff() < kUnitaryTol);
    }
    report("fourier mesh d=4 uses 4 splitters",
           decompose(qft_matrix(4)).beam_splitter_count() == 4);

    for (int d : {4, 6}) {
        AuxSpec aux = AuxSpec::rotated_pairs(d);
        bool ok = true;
        try {
            aux.validate();
            ok = schmidt_rank(build_aux(aux), {aux_mode(0)}) == d / 2;
        } catch (const std::exception&) {
            ok = false;
        }
        report("auxiliary design d=" + std::to_string(d), ok);
    }

    {
        SwapResult r = entanglement_swap(4);
        report("swap d=4 totals 1/8",
               std::abs(r.total_success - 0.125) <= opts.tol &&
                   r.fidelity_min >= 1.0 - opts.tol);
    }
    {
        TeleportResult r =
            teleport(4, random_qudit(4, opts.seed), AuxFamily::RotatedPairs);
        report("teleport d=4 fidelity 1 at 1/8",
               std::abs(r.total_success - 0.125) <= opts.tol &&
                   r.corrected_fidelity >= 1.0 - opts.tol);
    }
    for (int d : {4, 6}) {
        GenerateResult gen = generate(d);
        report("emitter matches ideal d=" + std::to_string(d),
               fidelity(gen.state, build_aux(d, AuxFamily::RotatedPairs)) >=
                   1.0 - opts.tol);
    }
    report("schedule verification d=8", verify_schedule(8).pass);

    if (failures) {
        std::cout << failures << " selftest failure(s)\n";
        return kExitMismatch;
    }
    std::cout << "all selftests passed\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear-optics high-dimensional entangled-state analyzer simulator"};
    app.require_subcommand(1);
    app.fallthrough();  // lets --config appear after the subcommand name
    app.set_config("--config", "", "INI config file (flags take precedence)");

    CommonOpts opts;
    CLI::App* swap_cmd = app.add_subcommand("swap", "Entanglement swapping");
    add_common(swap_cmd, opts);
    CLI::App* tel_cmd = app.add_subcommand("teleport", "Qudit teleportation");
    add_common(tel_cmd, opts);
    CLI::App* esa_cmd =
        app.add_subcommand("esa", "Single detection-pattern analysis");
    add_common(esa_cmd, opts);
    esa_cmd->add_option("--pattern", opts.pattern,
                        "Comma-separated detector per time-bin (default all 0)");
    CLI::App* auxb_cmd =
        app.add_subcommand("aux-build", "Ideal auxiliary-state construction");
    add_common(auxb_cmd, opts);
    CLI::App* auxg_cmd =
        app.add_subcommand("aux-gen", "Emitter-based auxiliary-state generation");
    add_common(auxg_cmd, opts);
    auxg_cmd->add_option("--outcome", opts.outcome, "plus | minus | random")
        ->capture_default_str();
    CLI::App* dec_cmd =
        app.add_subcommand("decompose", "Fourier mesh synthesis for --dim");
    add_common(dec_cmd, opts);
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "Success probability across dimensions");
    add_common(sweep_cmd, opts, false);
    sweep_cmd->add_option("--dims", opts.dims, "Dimensions to sweep")->delimiter(',');
    std::string sweep_protocol = "swap";
    sweep_cmd->add_option("--protocol", sweep_protocol, "swap | teleport")
        ->capture_default_str();
    CLI::App* self_cmd = app.add_subcommand("selftest", "Module invariant checks");
    add_common(self_cmd, opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (swap_cmd->parsed()) return cmd_swap(opts);
        if (tel_cmd->parsed()) return cmd_teleport(opts);
        if (esa_cmd->parsed()) return cmd_esa(opts);
        if (auxb_cmd->parsed()) return cmd_aux_build(opts);
        if (auxg_cmd->parsed()) return cmd_aux_gen(opts);
        if (dec_cmd->parsed()) return cmd_decompose(opts);
        if (sweep_cmd->parsed()) return cmd_sweep(opts, sweep_protocol);
        if (self_cmd->parsed()) return cmd_selftest(opts);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SymmetryCheckError& e) {
        std::cerr << "error: " << e.what() << "\n";
        for (const auto& m : e.mismatches) {
            std::cerr << "  pattern";
            for (int det : m.pattern) std::cerr << ' ' << det;
            std::cerr << ": p = " << m.probability << " vs " << m.reference << "\n";
        }
        return kExitMismatch;
    } catch (const UnsupportedDimension& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConstraintViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitUsage;
}
