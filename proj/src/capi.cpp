// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyplab/hyplab.h"

#include <cstring>
#include <iostream>
#include <new>
#include <string>

#include <json.hpp>

#include "hyplab/errors.hpp"
#include "hyplab/experiments.hpp"
#include "hyplab/hyperplane.hpp"
#include "hyplab/invocation.hpp"
#include "hyplab/linalg.hpp"
#include "hyplab/reference.hpp"
#include "hyplab/report_io.hpp"
#include "hyplab/stats.hpp"

struct hyplab_config {
    hyplab::experiments::ExperimentConfig config;
};

struct hyplab_report {
    hyplab::experiments::ExperimentReport report;
};

struct hyplab_invocation {
    hyplab::cli::CliInvocation invocation;
};

namespace {

using hyplab::ErrorCode;

thread_local std::string g_last_error;

hyplab_status to_status(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return HYPLAB_E_INVALID_ARGUMENT;
    case ErrorCode::InvalidConfig: return HYPLAB_E_INVALID_CONFIG;
    case ErrorCode::RankDeficient: return HYPLAB_E_RANK_DEFICIENT;
    case ErrorCode::SingularMatrix: return HYPLAB_E_SINGULAR_MATRIX;
    case ErrorCode::NonConverged: return HYPLAB_E_NON_CONVERGED;
    case ErrorCode::MissingStream: return HYPLAB_E_MISSING_STREAM;
    case ErrorCode::DegenerateEnsemble: return HYPLAB_E_DEGENERATE_ENSEMBLE;
    case ErrorCode::Io: return HYPLAB_E_IO;
    case ErrorCode::Usage: return HYPLAB_E_USAGE;
    }
    return HYPLAB_E_INTERNAL;
}

/// Run `f`, translating exceptions into status codes.
template <class F>
hyplab_status guarded(F&& f)
{
    g_last_error.clear();
    try {
        f();
        return HYPLAB_OK;
    } catch (const hyplab::Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
    } catch (const std::exception& e) {
        g_last_error = e.what();
    } catch (...) {
        g_last_error = "unknown error";
    }
    return HYPLAB_E_INTERNAL;
}

void require(bool ok, const char* what)
{
    if (!ok)
        hyplab::fail(ErrorCode::InvalidArgument, what);
}

std::string_view to_view(const char* s)
{
    return s ? std::string_view(s) : std::string_view{};
}

hyplab::Field parse_field(const char* s)
{
    auto f = to_view(s);
    if (f == "real")
        return hyplab::Field::Real;
    if (f == "complex")
        return hyplab::Field::Complex;
    hyplab::fail(ErrorCode::InvalidArgument, "field must be \"real\" or \"complex\"");
}

hyplab::experiments::Kind parse_kind(const char* s)
{
    auto k = hyplab::experiments::parse_kind(to_view(s));
    if (!k)
        hyplab::fail(ErrorCode::InvalidArgument, "unknown experiment kind '" + std::string(to_view(s)) + "'");
    return *k;
}

hyplab_check to_check(const hyplab::experiments::CheckResult& c, bool is_ks)
{
    return {c.name.c_str(), c.value, c.relation.c_str(), c.threshold, c.pass ? 1 : 0, is_ks ? 1 : 0};
}

char* dup_string(const std::string& s)
{
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p)
        throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

std::vector<std::string> collect_args(int argc, const char* const* argv)
{
    require(argc >= 0 && (argc == 0 || argv), "argv must not be null");
    std::vector<std::string> args;
    for (int i = 0; i < argc; ++i) {
        require(argv[i] != nullptr, "argv entries must not be null");
        args.emplace_back(argv[i]);
    }
    return args;
}

}  // namespace

extern "C" {

const char* hyplab_version(void)
{
    return "0.1.0";
}

const char* hyplab_status_name(hyplab_status status)
{
    switch (status) {
    case HYPLAB_OK: return "Ok";
    case HYPLAB_E_INVALID_ARGUMENT: return "InvalidArgument";
    case HYPLAB_E_INVALID_CONFIG: return "InvalidConfig";
    case HYPLAB_E_RANK_DEFICIENT: return "RankDeficient";
    case HYPLAB_E_SINGULAR_MATRIX: return "SingularMatrix";
    case HYPLAB_E_NON_CONVERGED: return "NonConverged";
    case HYPLAB_E_MISSING_STREAM: return "MissingStream";
    case HYPLAB_E_DEGENERATE_ENSEMBLE: return "DegenerateEnsemble";
    case HYPLAB_E_IO: return "Io";
    case HYPLAB_E_USAGE: return "Usage";
    case HYPLAB_E_INTERNAL: return "Internal";
    }
    return "Unknown";
}

const char* hyplab_last_error(void)
{
    return g_last_error.c_str();
}

//---------------------------------------------------------------------------//
// Configuration
//---------------------------------------------------------------------------//

hyplab_status hyplab_config_create(const char* kind, hyplab_config** out)
{
    return guarded([&] {
        require(out != nullptr, "out must not be null");
        *out = nullptr;
        auto cfg = std::make_unique<hyplab_config>();
        cfg->config.kind = parse_kind(kind);
        *out = cfg.release();
    });
}

void hyplab_config_destroy(hyplab_config* config)
{
    delete config;
}

#define HYPLAB_CONFIG_SETTER(NAME, TYPE, BODY)                   \
    hyplab_status NAME(hyplab_config* config, TYPE value)        \
    {                                                            \
        return guarded([&] {                                     \
            require(config != nullptr, "config must not be null"); \
            auto& c = config->config;                            \
            BODY;                                                \
        });                                                      \
    }

HYPLAB_CONFIG_SETTER(hyplab_config_set_n, size_t, c.n = value)
HYPLAB_CONFIG_SETTER(hyplab_config_set_trials, size_t, c.trials = value)
HYPLAB_CONFIG_SETTER(hyplab_config_set_seed, uint64_t, c.master_seed = value)
HYPLAB_CONFIG_SETTER(hyplab_config_set_threads, size_t, c.threads = value)
HYPLAB_CONFIG_SETTER(hyplab_config_set_codim, size_t, c.codim = value)
HYPLAB_CONFIG_SETTER(hyplab_config_set_tuple_size, size_t, c.tuple_size = value)
HYPLAB_CONFIG_SETTER(hyplab_config_set_cols, size_t, c.cols = value)
HYPLAB_CONFIG_SETTER(hyplab_config_set_ks_threshold, double, c.ks_threshold = value)
HYPLAB_CONFIG_SETTER(hyplab_config_set_fixed_vector, const char*, {
    auto v = hyplab::experiments::parse_fixed_vector(to_view(value));
    require(v.has_value(), "fixed vector must be e1, flat or random");
    c.fixed_vector = *v;
})
HYPLAB_CONFIG_SETTER(hyplab_config_set_reference, const char*,
                     c.reference = hyplab::reference::ReferenceCdf::parse(to_view(value)).kind())
HYPLAB_CONFIG_SETTER(hyplab_config_set_calibration_file, const char*, c.calibration_file = std::string(to_view(value)))
HYPLAB_CONFIG_SETTER(hyplab_config_set_dump_dir, const char*, c.dump_dir = std::string(to_view(value)))

#undef HYPLAB_CONFIG_SETTER

hyplab_status hyplab_config_set_dist(hyplab_config* config, const char* token, const char* field)
{
    return guarded([&] {
        require(config != nullptr && token != nullptr, "config and token must not be null");
        hyplab::Field f = field ? parse_field(field) : hyplab::Field::Real;
        config->config.dist = hyplab::rng::DistSpec::parse(token, f);
    });
}

hyplab_status hyplab_config_set_eigen(hyplab_config* config, double tol, size_t max_iter)
{
    return guarded([&] {
        require(config != nullptr, "config must not be null");
        config->config.eigen_tol = tol;
        config->config.eigen_max_iter = max_iter;
    });
}

hyplab_status hyplab_config_set_t_grid(hyplab_config* config, const double* t, size_t count)
{
    return guarded([&] {
        require(config != nullptr && (t != nullptr || count == 0), "config and t must not be null");
        config->config.t_grid.assign(t, t + count);
    });
}

hyplab_status hyplab_config_set_threshold(hyplab_config* config, const char* name, double value)
{
    return guarded([&] {
        require(config != nullptr && name != nullptr, "config and name must not be null");
        auto& cal = config->config.calibration;
        if (!cal)
            cal.emplace();
        cal->values[name] = value;
    });
}

hyplab_status hyplab_config_validate(const hyplab_config* config)
{
    return guarded([&] {
        require(config != nullptr, "config must not be null");
        config->config.validate();
    });
}

//---------------------------------------------------------------------------//
// Running and reports
//---------------------------------------------------------------------------//

hyplab_status hyplab_run(const hyplab_config* config, hyplab_report** out)
{
    return guarded([&] {
        require(config != nullptr && out != nullptr, "config and out must not be null");
        *out = nullptr;
        auto r = std::make_unique<hyplab_report>();
        r->report = hyplab::experiments::run_experiment(config->config);
        *out = r.release();
    });
}

void hyplab_report_destroy(hyplab_report* report)
{
    delete report;
}

int hyplab_report_pass(const hyplab_report* report)
{
    return report && report->report.pass ? 1 : 0;
}

size_t hyplab_report_discarded(const hyplab_report* report)
{
    return report ? report->report.discarded : 0;
}

double hyplab_report_wall_time(const hyplab_report* report)
{
    return report ? report->report.wall_time_s : 0.0;
}

hyplab_status hyplab_report_statistic(const hyplab_report* report, const char* name, const double** values,
                                      size_t* count)
{
    return guarded([&] {
        require(report && name && values && count, "arguments must not be null");
        auto it = report->report.statistics.find(name);
        if (it == report->report.statistics.end())
            hyplab::fail(ErrorCode::InvalidArgument, "report has no statistic '" + std::string(name) + "'");
        *values = it->second.data();
        *count = it->second.size();
    });
}

size_t hyplab_report_check_count(const hyplab_report* report)
{
    return report ? report->report.ks_results.size() + report->report.checks.size() : 0;
}

hyplab_status hyplab_report_check(const hyplab_report* report, size_t index, hyplab_check* out)
{
    return guarded([&] {
        require(report && out, "arguments must not be null");
        const auto& r = report->report;
        require(index < r.ks_results.size() + r.checks.size(), "check index out of range");
        if (index < r.ks_results.size())
            *out = to_check(r.ks_results[index], true);
        else
            *out = to_check(r.checks[index - r.ks_results.size()], false);
    });
}

hyplab_status hyplab_report_find_check(const hyplab_report* report, const char* name, hyplab_check* out)
{
    return guarded([&] {
        require(report && name && out, "arguments must not be null");
        const auto& r = report->report;
        for (const auto& c : r.ks_results)
            if (c.name == name) {
                *out = to_check(c, true);
                return;
            }
        for (const auto& c : r.checks)
            if (c.name == name) {
                *out = to_check(c, false);
                return;
            }
        hyplab::fail(ErrorCode::InvalidArgument, "report has no check '" + std::string(name) + "'");
    });
}

hyplab_status hyplab_report_write(const hyplab_report* report, const char* path, const char* format)
{
    return guarded([&] {
        require(report && path && format, "arguments must not be null");
        auto f = hyplab::report::parse_format(format);
        require(f.has_value(), "format must be json or csv");
        hyplab::report::write_report(report->report, path, *f);
    });
}

hyplab_status hyplab_report_to_json(const hyplab_report* report, char** out)
{
    return guarded([&] {
        require(report && out, "arguments must not be null");
        *out = dup_string(hyplab::report::to_json(report->report));
    });
}

void hyplab_string_free(char* s)
{
    std::free(s);
}

hyplab_status hyplab_calibrate(const char* kind, const char* field, size_t n, size_t trials, uint64_t seed,
                               size_t threads, const char* path, char** thresholds_out)
{
    return guarded([&] {
        auto k = parse_kind(kind);
        auto f = field ? parse_field(field) : hyplab::Field::Real;
        auto th = hyplab::experiments::calibrate(k, f, n, trials, seed, threads == 0 ? 1 : threads);
        if (path)
            hyplab::experiments::store_calibration(path, {k, n, f, trials, seed, th});
        if (thresholds_out) {
            nlohmann::ordered_json j = nlohmann::ordered_json::object();
            for (const auto& [name, v] : th.values)
                j[name] = v;
            *thresholds_out = dup_string(j.dump());
        }
    });
}

//---------------------------------------------------------------------------//
// Command line
//---------------------------------------------------------------------------//

hyplab_status hyplab_invocation_parse(int argc, const char* const* argv, hyplab_invocation** out)
{
    return guarded([&] {
        require(out != nullptr, "out must not be null");
        *out = nullptr;
        auto inv = std::make_unique<hyplab_invocation>();
        inv->invocation = hyplab::cli::parse_invocation(collect_args(argc, argv));
        *out = inv.release();
    });
}

void hyplab_invocation_destroy(hyplab_invocation* invocation)
{
    delete invocation;
}

int hyplab_invocation_execute(const hyplab_invocation* invocation)
{
    if (!invocation) {
        g_last_error = "invocation must not be null";
        return hyplab::cli::kUsageExit;
    }
    try {
        return hyplab::cli::execute(invocation->invocation, std::cout, std::cerr);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        std::cerr << "error: " << e.what() << '\n';
        return hyplab::cli::kRuntimeExit;
    }
}

int hyplab_main(int argc, const char* const* argv)
{
    std::vector<std::string> args;
    hyplab_status st = guarded([&] { args = collect_args(argc, argv); });
    if (st != HYPLAB_OK) {
        std::cerr << "error: " << g_last_error << '\n';
        return hyplab::cli::kUsageExit;
    }
    return hyplab::cli::run_main(args, std::cout, std::cerr);
}

//---------------------------------------------------------------------------//
// Numeric helpers
//---------------------------------------------------------------------------//

hyplab_status hyplab_null_vector(size_t rows, size_t cols, const double* a, double* x_out)
{
    return guarded([&] {
        require(a && x_out && rows >= 1 && cols >= 1, "invalid arguments");
        hyplab::Matrix<double> m(rows, cols);
        std::copy(a, a + rows * cols, m.data().begin());
        auto x = hyplab::linalg::null_vector(m);
        std::copy(x.entries.begin(), x.entries.end(), x_out);
    });
}

hyplab_status hyplab_singular_values(size_t rows, size_t cols, const double* a, double* sv_out)
{
    return guarded([&] {
        require(a && sv_out && rows >= 1 && cols >= 1, "invalid arguments");
        hyplab::Matrix<double> m(rows, cols);
        std::copy(a, a + rows * cols, m.data().begin());
        auto sv = hyplab::linalg::singular_values(m);
        std::copy(sv.begin(), sv.end(), sv_out);
    });
}

hyplab_status hyplab_edelman_cdf(double x, const char* field, double* out)
{
    return guarded([&] {
        require(out != nullptr, "out must not be null");
        *out = hyplab::reference::edelman_cdf(x, parse_field(field));
    });
}

hyplab_status hyplab_ks_one_sample(const double* x, size_t count, const char* reference, double* out)
{
    return guarded([&] {
        require(x && out && count >= 1, "invalid arguments");
        auto ref = hyplab::reference::ReferenceCdf::parse(to_view(reference));
        hyplab::stats::EmpiricalDistribution ed(std::vector<double>(x, x + count));
        *out = hyplab::stats::ks_one_sample(ed, [&](double t) { return ref(t); });
    });
}

}  // extern "C"
