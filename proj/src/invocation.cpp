// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyplab/invocation.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "hyplab/errors.hpp"

namespace hyplab::cli {

using experiments::ExperimentConfig;
using experiments::Kind;

namespace {

[[noreturn]] void usage_error(const std::string& msg)
{
    fail(ErrorCode::Usage, msg);
}

std::uint64_t parse_u64(const std::string& flag, const std::string& text)
{
    std::uint64_t v = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || text.empty())
        usage_error(flag + ": expected a non-negative integer, got '" + text + "'");
    return v;
}

std::int64_t parse_i64(const std::string& flag, const std::string& text)
{
    std::int64_t v = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || text.empty())
        usage_error(flag + ": expected an integer, got '" + text + "'");
    return v;
}

std::size_t parse_ranged(const std::string& flag, const std::string& text, std::int64_t lo, std::int64_t hi)
{
    std::int64_t v = parse_i64(flag, text);
    if (v < lo || v > hi)
        usage_error(flag + ": must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "] (got " + text +
                    ")");
    return static_cast<std::size_t>(v);
}

double parse_double(const std::string& flag, const std::string& text)
{
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || text.empty())
        usage_error(flag + ": expected a number, got '" + text + "'");
    return v;
}

std::size_t default_threads()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

/// String-valued flags; conversion and range checks happen after CLI11
/// so every message names the flag the same way.
struct RawFlags {
    std::string n, trials, dist, field, seed, threads, out, format;
    std::string calibration, dump_dir, reference, ks_threshold;
    std::string codim, u, eigen_tol, eigen_max_iter, d, t_grid, cols, kind;
    std::map<std::string, CLI::Option*> given;

    bool has(const std::string& flag) const
    {
        auto it = given.find(flag);
        return it != given.end() && it->second->count() > 0;
    }
};

void add_flag(CLI::App* app, RawFlags& raw, const std::string& flag, std::string& target, const std::string& help)
{
    // Each subcommand owns its own Option objects; remember the last one
    // registered under a flag name only for the active subcommand lookup.
    CLI::Option* opt = app->add_option(flag, target, help);
    opt->allow_extra_args(false);
    raw.given[app->get_name() + flag] = opt;
}

void add_common(CLI::App* app, RawFlags& raw, bool calibrate)
{
    add_flag(app, raw, "--n", raw.n, "matrix dimension, 8..2000 (default 128)");
    add_flag(app, raw, "--trials", raw.trials, "number of trials (default 1000)");
    add_flag(app, raw, "--field", raw.field, "real | complex (default real)");
    add_flag(app, raw, "--seed", raw.seed, "master seed (default 42; HYPLAB_SEED overrides)");
    add_flag(app, raw, "--threads", raw.threads, "worker threads (default: logical cores)");
    add_flag(app, raw, "--out", raw.out,
             calibrate ? "calibration file (default calibration.json)"
                       : "output file, CSV prefix, or directory for `all`");
    if (calibrate) {
        add_flag(app, raw, "--kind", raw.kind, "sup-norm | min-coord | eigenvector | neg-second-moment");
        add_flag(app, raw, "--eigen-tol", raw.eigen_tol, "eigenpair residual target");
        add_flag(app, raw, "--eigen-max-iter", raw.eigen_max_iter, "eigenpair iteration cap");
        return;
    }
    add_flag(app, raw, "--dist", raw.dist, "gaussian | bernoulli | custom:<file.json>, optional :real/:complex");
    add_flag(app, raw, "--format", raw.format, "json | csv (default json)");
    add_flag(app, raw, "--calibration", raw.calibration, "calibration file with (kind, n) thresholds");
    add_flag(app, raw, "--dump-dir", raw.dump_dir, "write trial-0 matrices and vectors as CSV here");
    add_flag(app, raw, "--reference", raw.reference, "std-normal | edelman-real | edelman-complex");
    add_flag(app, raw, "--ks-threshold", raw.ks_threshold, "override the main KS threshold");
}

void add_kind_specific(CLI::App* app, RawFlags& raw, Kind kind)
{
    switch (kind) {
    case Kind::DistanceConcentration:
        add_flag(app, raw, "--codim", raw.codim, "co-dimension m, 1..n/2 (default max(1, n/10))");
        break;
    case Kind::InnerProduct:
        add_flag(app, raw, "--u", raw.u, "fixed vector: e1 | flat | random (default flat)");
        break;
    case Kind::Eigenvector:
        add_flag(app, raw, "--eigen-tol", raw.eigen_tol, "residual target relative to ||M||_F (default 1e-10)");
        add_flag(app, raw, "--eigen-max-iter", raw.eigen_max_iter, "iteration cap (default 1000)");
        break;
    case Kind::NormalCoords:
        add_flag(app, raw, "--d", raw.d, "tuple size (default 4)");
        break;
    case Kind::UpperTail:
        add_flag(app, raw, "--t-grid", raw.t_grid, "comma-separated thresholds (default 1,2,3,4,5,6,8)");
        break;
    case Kind::NegSecondMoment:
        add_flag(app, raw, "--cols", raw.cols, "columns, >= n (default ceil(1.5 n))");
        break;
    default:
        break;
    }
}

struct Parser {
    CLI::App app{"Random hyperplane normals, least singular values and eigenvectors of iid matrices.", "hyplab"};
    RawFlags raw;
    std::map<std::string, CLI::App*> subs;

    Parser()
    {
        app.require_subcommand(0, 1);
        app.set_help_all_flag("--help-all", "show help for every subcommand");
        for (Kind k : experiments::all_kinds()) {
            std::string name(experiments::kind_name(k));
            CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
            add_common(sub, raw, false);
            add_kind_specific(sub, raw, k);
            subs[name] = sub;
        }
        CLI::App* all = app.add_subcommand("all", "run every experiment; --out names a directory");
        add_common(all, raw, false);
        subs["all"] = all;
        CLI::App* cal = app.add_subcommand("calibrate", "derive gaussian thresholds for one (kind, n)");
        add_common(cal, raw, true);
        subs["calibrate"] = cal;
    }
};

std::string first_line(const std::string& s)
{
    return s.substr(0, s.find('\n'));
}

Field parse_field_flag(const std::string& text)
{
    if (text == "real")
        return Field::Real;
    if (text == "complex")
        return Field::Complex;
    usage_error("--field: expected real or complex, got '" + text + "'");
}

std::vector<double> parse_grid(const std::string& text)
{
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        grid.push_back(parse_double("--t-grid", item));
    if (grid.empty())
        usage_error("--t-grid: expected a comma-separated list, got '" + text + "'");
    return grid;
}

}  // namespace

std::string usage_text()
{
    Parser p;
    return p.app.help();
}

CliInvocation parse_invocation(const std::vector<std::string>& args)
{
    Parser p;
    CliInvocation inv;
    if (args.empty())
        usage_error("missing subcommand; try --help");
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        p.app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        inv.command = Command::Help;
        const CLI::App* sub = nullptr;
        for (const auto& [name, s] : p.subs)
            if (s->parsed())
                sub = s;
        inv.help_text = sub ? sub->help() : p.app.help();
        return inv;
    } catch (const CLI::CallForAllHelp&) {
        inv.command = Command::Help;
        inv.help_text = p.app.help("", CLI::AppFormatMode::All);
        return inv;
    } catch (const CLI::ParseError& e) {
        usage_error(first_line(e.what()));
    }

    std::string sub_name;
    for (const auto& [name, s] : p.subs)
        if (s->parsed())
            sub_name = name;
    if (sub_name.empty())
        usage_error("missing subcommand; try --help");

    const RawFlags& raw = p.raw;
    auto has = [&](const std::string& flag) { return raw.has(sub_name + flag); };

    ExperimentConfig& c = inv.config;
    c.threads = default_threads();
    Field field = Field::Real;
    if (has("--field"))
        field = parse_field_flag(raw.field);
    if (has("--n"))
        c.n = parse_ranged("--n", raw.n, 8, 2000);
    if (has("--trials"))
        c.trials = parse_ranged("--trials", raw.trials, 1, 100000000);
    if (has("--seed"))
        c.master_seed = parse_u64("--seed", raw.seed);
    if (const char* env = std::getenv("HYPLAB_SEED"); env && *env)
        c.master_seed = parse_u64("HYPLAB_SEED", env);
    if (has("--threads"))
        c.threads = parse_ranged("--threads", raw.threads, 1, 1024);
    if (has("--out"))
        inv.out = raw.out;

    if (sub_name == "calibrate") {
        inv.command = Command::Calibrate;
        if (!has("--kind"))
            usage_error("calibrate: --kind is required");
        auto kind = experiments::parse_kind(raw.kind);
        if (!kind)
            usage_error("--kind: unknown experiment '" + raw.kind + "'");
        if (!experiments::supports_calibration(*kind))
            usage_error("--kind: '" + raw.kind + "' has no calibration");
        c.kind = *kind;
        c.dist = rng::DistSpec::gaussian(field);
        if (has("--eigen-tol"))
            c.eigen_tol = parse_double("--eigen-tol", raw.eigen_tol);
        if (has("--eigen-max-iter"))
            c.eigen_max_iter = parse_ranged("--eigen-max-iter", raw.eigen_max_iter, 1, 1000000);
        if (inv.out.empty())
            inv.out = "calibration.json";
    } else {
        inv.command = sub_name == "all" ? Command::All : Command::Experiment;
        if (inv.command == Command::Experiment)
            c.kind = *experiments::parse_kind(sub_name);

        std::string token = has("--dist") ? raw.dist : "bernoulli";
        bool explicit_field = token.find(':') != std::string::npos && token.rfind("custom:", 0) != 0;
        try {
            c.dist = rng::DistSpec::parse(token, field);
        } catch (const Error& e) {
            usage_error("--dist: " + std::string(e.what()));
        }
        if (explicit_field && has("--field") && c.dist.field() != field)
            usage_error("--field: conflicts with the field in --dist '" + token + "'");

        if (has("--format")) {
            auto f = report::parse_format(raw.format);
            if (!f)
                usage_error("--format: expected json or csv, got '" + raw.format + "'");
            inv.format = *f;
        }
        if (has("--calibration"))
            c.calibration_file = raw.calibration;
        if (has("--dump-dir"))
            c.dump_dir = raw.dump_dir;
        if (has("--reference")) {
            try {
                c.reference = reference::ReferenceCdf::parse(raw.reference).kind();
            } catch (const Error&) {
                usage_error("--reference: unknown reference '" + raw.reference + "'");
            }
        }
        if (has("--ks-threshold"))
            c.ks_threshold = parse_double("--ks-threshold", raw.ks_threshold);
        if (has("--codim"))
            c.codim = parse_ranged("--codim", raw.codim, 1, 1000);
        if (has("--u")) {
            auto u = experiments::parse_fixed_vector(raw.u);
            if (!u)
                usage_error("--u: expected e1, flat or random, got '" + raw.u + "'");
            c.fixed_vector = *u;
        }
        if (has("--eigen-tol"))
            c.eigen_tol = parse_double("--eigen-tol", raw.eigen_tol);
        if (has("--eigen-max-iter"))
            c.eigen_max_iter = parse_ranged("--eigen-max-iter", raw.eigen_max_iter, 1, 1000000);
        if (has("--d"))
            c.tuple_size = parse_ranged("--d", raw.d, 1, 64);
        if (has("--t-grid"))
            c.t_grid = parse_grid(raw.t_grid);
        if (has("--cols"))
            c.cols = parse_ranged("--cols", raw.cols, 1, 4000);
        if (inv.format == report::Format::Csv && inv.out.empty() && inv.command == Command::Experiment)
            usage_error("--format csv requires --out");
        if (inv.command == Command::All && inv.out.empty())
            inv.out = "hyplab-reports";
    }

    if (inv.command != Command::All) {
        try {
            c.validate();
        } catch (const Error& e) {
            usage_error(e.what());
        }
    }
    return inv;
}

namespace {

void progress_line(std::ostream& err, const experiments::ExperimentReport& r)
{
    std::ostringstream os;
    os << std::left << std::setw(18) << experiments::kind_name(r.config.kind) << (r.pass ? "pass" : "FAIL")
       << "  n=" << r.config.n << " trials=" << r.config.trials << " discarded=" << r.discarded << " time="
       << std::fixed << std::setprecision(2) << r.wall_time_s << "s";
    for (const auto* list : {&r.ks_results, &r.checks})
        for (const auto& c : *list)
            if (!c.pass)
                os << "  [" << c.name << "=" << std::setprecision(4) << c.value << " " << c.relation << " "
                   << c.threshold << "]";
    err << os.str() << '\n';
}

int run_one(const ExperimentConfig& config, const std::string& out_path, report::Format format, std::ostream& out,
            std::ostream& err)
{
    experiments::ExperimentReport r = experiments::run_experiment(config);
    if (out_path.empty())
        out << report::to_json(r);
    else
        report::write_report(r, out_path, format);
    progress_line(err, r);
    return report::exit_code(r);
}

}  // namespace

int execute(const CliInvocation& inv, std::ostream& out, std::ostream& err)
{
    switch (inv.command) {
    case Command::Help:
        out << inv.help_text;
        return 0;
    case Command::Experiment:
        return run_one(inv.config, inv.out, inv.format, out, err);
    case Command::All: {
        std::filesystem::create_directories(inv.out);
        int code = 0;
        for (Kind k : experiments::all_kinds()) {
            ExperimentConfig c = inv.config;
            c.kind = k;
            try {
                c.validate();
            } catch (const Error& e) {
                err << experiments::kind_name(k) << "  skipped: " << e.what() << '\n';
                code = 1;
                continue;
            }
            std::string path = inv.out + "/" + std::string(experiments::kind_name(k));
            if (inv.format == report::Format::Json)
                path += ".json";
            if (run_one(c, path, inv.format, out, err) != 0)
                code = 1;
        }
        return code;
    }
    case Command::Calibrate: {
        const ExperimentConfig& c = inv.config;
        experiments::Thresholds th = experiments::calibrate(c.kind, c.dist.field(), c.n, c.trials, c.master_seed,
                                                            c.threads, c.eigen_max_iter, c.eigen_tol);
        experiments::store_calibration(inv.out, {c.kind, c.n, c.dist.field(), c.trials, c.master_seed, th});
        std::ostringstream os;
        os << "calibrated " << experiments::kind_name(c.kind) << " n=" << c.n << " -> " << inv.out;
        for (const auto& [name, v] : th.values)
            os << "  " << name << "=" << std::setprecision(17) << v;
        err << os.str() << '\n';
        return 0;
    }
    }
    return kRuntimeExit;
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CliInvocation inv;
    try {
        inv = parse_invocation(args);
    } catch (const Error& e) {
        if (args.empty())
            err << usage_text();
        err << "error: " << e.what() << '\n';
        return kUsageExit;
    }
    try {
        return execute(inv, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeExit;
    }
}

}  // namespace hyplab::cli
