// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hyplab/experiments.hpp"
#include "hyplab/report_io.hpp"

namespace hyplab::cli {

enum class Command { Experiment, All, Calibrate, Help };

struct CliInvocation {
    Command command = Command::Help;
    experiments::ExperimentConfig config;
    std::string out;  // file (experiment), directory (all), calibration file
    report::Format format = report::Format::Json;
    std::string help_text;
};

/// Exit code for usage errors.
inline constexpr int kUsageExit = 2;
/// Exit code for runtime failures (IO, degenerate calibration).
inline constexpr int kRuntimeExit = 3;

/// Top-level usage text.
std::string usage_text();

/*!
 * Parse command-line arguments (program name excluded). Errors throw
 * hyplab::Error with ErrorCode::Usage and a one-line message naming the
 * offending token. `HYPLAB_SEED`, when set, overrides `--seed`.
 */
CliInvocation parse_invocation(const std::vector<std::string>& args);

/// Run a parsed invocation. Reports go to files or `out`; one progress
/// line per finished experiment goes to `err`. Returns the exit code
/// (0 iff every report passed).
int execute(const CliInvocation& invocation, std::ostream& out, std::ostream& err);

/// parse + execute with usage errors mapped to exit code 2.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hyplab::cli
