// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyplab/reference.hpp"
#include "hyplab/rng.hpp"
#include "hyplab/stats.hpp"

namespace hyplab::experiments {

enum class Kind {
    NormalCoords,
    SupNorm,
    MinCoord,
    InnerProduct,
    LeastSingular,
    UpperTail,
    Eigenvector,
    DistanceConcentration,
    HansonWright,
    BerryEsseen,
    NegSecondMoment,
    SphereBaseline,
};

/// Command-line spelling (`normal-coords`, `least-singular`, ...).
std::string_view kind_name(Kind kind);
std::optional<Kind> parse_kind(std::string_view name);
const std::vector<Kind>& all_kinds();

/// Fixed unit vector for the inner-product experiment.
enum class FixedVector { E1, Flat, Random };
std::string_view fixed_vector_name(FixedVector v);
std::optional<FixedVector> parse_fixed_vector(std::string_view name);

/// Calibrated envelope values for one (kind, n), keyed by threshold name.
struct Thresholds {
    std::map<std::string, double> values;

    double at(const std::string& key) const;
    bool operator==(const Thresholds&) const = default;
};

//---------------------------------------------------------------------------//
// Stream layout under one master seed
//---------------------------------------------------------------------------//

/// Trial t of the configured ensemble uses stream t.
inline constexpr std::uint64_t kTrialStreamBase = 0;
/// Trial t of the gaussian comparison ensemble uses stream 2^40 + t.
inline constexpr std::uint64_t kCompanionStreamBase = std::uint64_t{1} << 40;
/// Objects frozen across trials (fixed vector u, Hanson-Wright matrix).
inline constexpr std::uint64_t kFixedObjectStreamBase = std::uint64_t{1} << 62;

/// Seed used for in-process gaussian calibration of a run with `seed`.
std::uint64_t calibration_seed(std::uint64_t seed);

struct ExperimentConfig {
    Kind kind = Kind::SupNorm;
    std::size_t n = 128;
    std::size_t trials = 1000;
    rng::DistSpec dist = rng::DistSpec::bernoulli(Field::Real);
    std::uint64_t master_seed = 42;
    /// Worker count; never affects results, so it is not echoed in reports.
    std::size_t threads = 1;

    std::size_t codim = 0;                   // distance-conc m; 0 = max(1, n/10)
    FixedVector fixed_vector = FixedVector::Flat;
    double eigen_tol = 1e-10;
    std::size_t eigen_max_iter = 1000;
    std::size_t tuple_size = 4;              // normal-coords d
    std::vector<double> t_grid = {1, 2, 3, 4, 5, 6, 8};
    std::size_t cols = 0;                    // neg-second-moment; 0 = ceil(1.5 n)
    std::optional<reference::CdfKind> reference;  // override the main KS target
    std::optional<double> ks_threshold;           // override the main KS threshold

    std::string calibration_file;            // read (kind, n) thresholds from here
    std::optional<Thresholds> calibration;   // injected thresholds win over the file
    std::string dump_dir;                    // trial-0 CSV dumps when non-empty

    /// Throws InvalidConfig naming the offending field.
    void validate() const;

    std::size_t effective_codim() const;
    std::size_t effective_cols() const;
    bool operator==(const ExperimentConfig&) const = default;
};

struct CheckResult {
    std::string name;
    double value = 0.0;
    std::string relation;  // "<=", ">=", "<"
    double threshold = 0.0;
    bool pass = false;
};

struct SummaryStats {
    std::size_t count = 0;
    double mean = 0.0, stddev = 0.0, min = 0.0, max = 0.0;
    double q01 = 0.0, q10 = 0.0, q50 = 0.0, q90 = 0.0, q99 = 0.0;
};

SummaryStats summarize(const std::vector<double>& x);

struct ExperimentReport {
    ExperimentConfig config;

    std::vector<std::uint64_t> kept_trials;
    std::map<std::string, std::vector<double>> statistics;  // length = kept trials
    std::map<std::string, SummaryStats> summary;

    /// Gaussian comparison ensemble (universality checks), when run.
    std::map<std::string, std::vector<double>> companion_statistics;
    std::size_t companion_discarded = 0;

    std::vector<CheckResult> ks_results;
    std::vector<CheckResult> checks;
    std::map<std::string, std::vector<double>> series;
    std::map<std::string, stats::Histogram> histograms;

    std::size_t discarded = 0;
    std::map<std::string, std::size_t> discard_reasons;
    bool degenerate = false;  // discard fraction above 10%

    std::string calibration_source;  // "", "file", "injected", "in-process"
    Thresholds calibration;

    bool pass = false;
    double wall_time_s = 0.0;  // not serialized

    /// Named check lookup across ks_results and checks.
    const CheckResult* find_check(std::string_view name) const;
};

/// Run `config.trials` independent trials (trial t draws from stream t)
/// on `config.threads` workers and evaluate every check for the kind.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Kinds with calibrated envelopes: sup-norm, min-coord, eigenvector,
/// neg-second-moment.
bool supports_calibration(Kind kind);

/// Run `kind` on the gaussian law of `field` and derive its envelope
/// (observed extreme x 1.25, or / 1.25 for lower envelopes).
Thresholds calibrate(Kind kind, Field field, std::size_t n, std::size_t trials, std::uint64_t seed,
                     std::size_t threads = 1, std::size_t eigen_max_iter = 1000, double eigen_tol = 1e-10);

//---------------------------------------------------------------------------//
// Calibration files: {"<kind>:<n>": {"field", "trials", "seed", "thresholds"}}
//---------------------------------------------------------------------------//

struct CalibrationEntry {
    Kind kind;
    std::size_t n;
    Field field;
    std::size_t trials;
    std::uint64_t seed;
    Thresholds thresholds;
};

std::optional<CalibrationEntry> load_calibration(const std::string& path, Kind kind, std::size_t n);
/// Insert or replace the (kind, n) entry, keeping the others.
void store_calibration(const std::string& path, const CalibrationEntry& entry);

}  // namespace hyplab::experiments
