// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyplab/experiments.hpp"

namespace hyplab::report {

enum class Format { Json, Csv };

std::optional<Format> parse_format(std::string_view name);
std::string_view format_name(Format f);

/// Canonical flags that reproduce `config` through the command line.
/// Worker count is an execution detail and is left out.
std::vector<std::string> config_to_args(const experiments::ExperimentConfig& config);

/*!
 * Serialize a report as one JSON object with keys, in order:
 * config, summary, ks_results, checks, series, calibration, companion,
 * discarded, pass, histograms. Floats use 17 significant digits and
 * non-finite values become null; wall time is not included, so equal
 * reports give equal bytes.
 */
std::string to_json(const experiments::ExperimentReport& report);

/*!
 * Write `report` to `path`. JSON writes one file. CSV treats `path` (minus
 * a trailing `.csv`) as a prefix and writes `<prefix>_<statistic>.csv` per
 * statistic array, `<prefix>_hist_<name>.csv` per histogram and
 * `<prefix>_checks.csv`. Returns the files written; Io errors name the path.
 */
std::vector<std::string> write_report(const experiments::ExperimentReport& report, const std::string& path,
                                      Format format);

/// 0 iff the report passed.
inline int exit_code(const experiments::ExperimentReport& report) { return report.pass ? 0 : 1; }

}  // namespace hyplab::report
