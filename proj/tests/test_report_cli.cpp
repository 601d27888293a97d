// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hyplab/errors.hpp"
#include "hyplab/invocation.hpp"
#include "hyplab/report_io.hpp"

using namespace hyplab;
using namespace hyplab::experiments;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name)
{
    auto dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ErrorCode parse_error(const std::vector<std::string>& args)
{
    try {
        cli::parse_invocation(args);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("parse accepted invalid arguments");
    return ErrorCode::InvalidArgument;
}

std::string parse_message(const std::vector<std::string>& args)
{
    try {
        cli::parse_invocation(args);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

ExperimentConfig tweaked(Kind kind)
{
    ExperimentConfig c;
    c.kind = kind;
    c.n = 40;
    c.trials = 17;
    c.master_seed = 987654321;
    c.dist = rng::DistSpec::gaussian(Field::Complex);
    c.ks_threshold = 0.125;
    c.reference = reference::CdfKind::StdNormal;
    c.calibration_file = "cal.json";
    c.dump_dir = "dumps";
    switch (kind) {
    case Kind::DistanceConcentration: c.codim = 7; break;
    case Kind::InnerProduct: c.fixed_vector = FixedVector::Random; break;
    case Kind::Eigenvector:
        c.eigen_tol = 1.0 / 3.0 * 1e-9;
        c.eigen_max_iter = 321;
        break;
    case Kind::NormalCoords: c.tuple_size = 3; break;
    case Kind::UpperTail: c.t_grid = {0.5, 1.25, 7.0}; break;
    case Kind::NegSecondMoment: c.cols = 55; break;
    default: break;
    }
    return c;
}

}  // namespace

TEST_CASE("config args reproduce the config through the parser")
{
    unsetenv("HYPLAB_SEED");
    for (Kind kind : all_kinds()) {
        CAPTURE(kind_name(kind));
        auto c = tweaked(kind);
        auto args = report::config_to_args(c);
        CHECK(args.front() == kind_name(kind));
        CHECK(std::find(args.begin(), args.end(), "--threads") == args.end());
        auto inv = cli::parse_invocation(args);
        CHECK(inv.command == cli::Command::Experiment);
        inv.config.threads = c.threads;
        CHECK(inv.config == c);
    }
}

TEST_CASE("parser examples and defaults")
{
    unsetenv("HYPLAB_SEED");
    auto inv = cli::parse_invocation({"least-singular", "--n", "64", "--dist", "gaussian", "--field", "complex",
                                      "--trials", "2000", "--threads", "3", "--out", "ls.json"});
    CHECK(inv.config.kind == Kind::LeastSingular);
    CHECK(inv.config.n == 64);
    CHECK(inv.config.trials == 2000);
    CHECK(inv.config.dist == rng::DistSpec::gaussian(Field::Complex));
    CHECK(inv.config.threads == 3);
    CHECK(inv.out == "ls.json");
    CHECK(inv.format == report::Format::Json);

    auto d = cli::parse_invocation({"sup-norm"});
    CHECK(d.config.n == 128);
    CHECK(d.config.trials == 1000);
    CHECK(d.config.master_seed == 42);
    CHECK(d.config.dist == rng::DistSpec::bernoulli(Field::Real));
    CHECK(d.config.threads >= 1);

    auto all = cli::parse_invocation({"all", "--n", "32"});
    CHECK(all.command == cli::Command::All);
    CHECK(all.out == "hyplab-reports");

    auto cal = cli::parse_invocation({"calibrate", "--kind", "min-coord", "--n", "64"});
    CHECK(cal.command == cli::Command::Calibrate);
    CHECK(cal.config.kind == Kind::MinCoord);
    CHECK(cal.out == "calibration.json");

    auto help = cli::parse_invocation({"--help"});
    CHECK(help.command == cli::Command::Help);
    CHECK(help.help_text.find("least-singular") != std::string::npos);
    CHECK(cli::parse_invocation({"eigenvector", "--help"}).help_text.find("--eigen-tol") != std::string::npos);
}

TEST_CASE("the seed environment variable overrides --seed")
{
    setenv("HYPLAB_SEED", "777", 1);
    CHECK(cli::parse_invocation({"sup-norm", "--seed", "5"}).config.master_seed == 777);
    setenv("HYPLAB_SEED", "seven", 1);
    CHECK(parse_error({"sup-norm"}) == ErrorCode::Usage);
    unsetenv("HYPLAB_SEED");
    CHECK(cli::parse_invocation({"sup-norm", "--seed", "5"}).config.master_seed == 5);
}

TEST_CASE("usage errors name the offending token")
{
    unsetenv("HYPLAB_SEED");
    const std::vector<std::pair<std::vector<std::string>, std::string>> cases = {
        {{}, "subcommand"},
        {{"frobnicate"}, "frobnicate"},
        {{"sup-norm", "--bogus", "1"}, "--bogus"},
        {{"sup-norm", "--n", "-5"}, "--n"},
        {{"sup-norm", "--n", "12x"}, "--n"},
        {{"sup-norm", "--n", "5000"}, "--n"},
        {{"sup-norm", "--trials", "0"}, "--trials"},
        {{"sup-norm", "--seed", "-1"}, "--seed"},
        {{"sup-norm", "--field", "quaternion"}, "--field"},
        {{"sup-norm", "--dist", "cauchy"}, "--dist"},
        {{"sup-norm", "--dist", "gaussian:real", "--field", "complex"}, "--field"},
        {{"sup-norm", "--format", "xml", "--out", "x"}, "--format"},
        {{"sup-norm", "--format", "csv"}, "--out"},
        {{"sup-norm", "--reference", "uniform"}, "--reference"},
        {{"sup-norm", "--codim", "3"}, "--codim"},
        {{"inner-product", "--u", "diagonal"}, "--u"},
        {{"upper-tail", "--t-grid", "1,,2"}, "--t-grid"},
        {{"upper-tail", "--t-grid", "3,2"}, "t_grid"},
        {{"distance-conc", "--n", "20", "--codim", "11"}, "codim"},
        {{"calibrate", "--n", "64"}, "--kind"},
        {{"calibrate", "--kind", "normal-coords"}, "normal-coords"},
        {{"sup-norm", "--n"}, "--n"},
    };
    for (const auto& [args, needle] : cases) {
        CAPTURE(args.size() ? args.back() : std::string("<none>"));
        CHECK(parse_error(args) == ErrorCode::Usage);
        CHECK(parse_message(args).find(needle) != std::string::npos);
    }
}

TEST_CASE("JSON reports: field order, byte-identical rewrites, null for non-finite")
{
    ExperimentConfig c;
    c.kind = Kind::SupNorm;
    c.n = 16;
    c.trials = 30;
    auto r = run_experiment(c);
    auto dir = scratch("hyplab_report_json");
    auto p1 = (dir / "a.json").string(), p2 = (dir / "b.json").string();
    CHECK(report::write_report(r, p1, report::Format::Json) == std::vector<std::string>{p1});
    report::write_report(r, p2, report::Format::Json);
    CHECK(slurp(p1) == slurp(p2));
    CHECK(slurp(p1) == report::to_json(r));

    auto j = nlohmann::ordered_json::parse(slurp(p1));
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it)
        keys.push_back(it.key());
    const std::vector<std::string> expected = {"config", "summary", "ks_results", "checks", "calibration",
                                               "companion", "discarded", "pass"};
    CHECK(keys == expected);
    CHECK(j["config"]["n"] == 16);
    CHECK(j["config"]["args"][0] == "sup-norm");
    CHECK(j["pass"] == r.pass);
    CHECK(j["discarded"]["count"] == r.discarded);
    CHECK(j["checks"].size() == r.checks.size());
    CHECK(j["calibration"]["source"] == "in-process");
    CHECK(j.dump().find("wall") == std::string::npos);
    CHECK(j.dump().find("threads") == std::string::npos);
    // Full precision: the stored maximum equals the double exactly.
    CHECK(j["summary"]["sup_norm"]["max"].get<double>() == r.summary.at("sup_norm").max);

    auto broken = r;
    broken.checks.push_back({"nan_check", std::nan(""), "<=", INFINITY, false});
    auto jb = nlohmann::json::parse(report::to_json(broken));
    CHECK(jb["checks"].back()["value"].is_null());
    CHECK(jb["checks"].back()["threshold"].is_null());

    CHECK_THROWS_AS(report::write_report(r, "/nonexistent-dir/x.json", report::Format::Json), Error);
    fs::remove_all(dir);
}

TEST_CASE("CSV reports use the path as a prefix")
{
    ExperimentConfig c;
    c.kind = Kind::LeastSingular;
    c.n = 10;
    c.trials = 12;
    c.dist = rng::DistSpec::gaussian(Field::Real);
    auto r = run_experiment(c);
    auto dir = scratch("hyplab_report_csv");
    auto files = report::write_report(r, (dir / "run.csv").string(), report::Format::Csv);
    const auto prefix = (dir / "run").string();
    CHECK(std::find(files.begin(), files.end(), prefix + "_n_sigma_min_sq.csv") != files.end());
    CHECK(std::find(files.begin(), files.end(), prefix + "_checks.csv") != files.end());
    CHECK(std::find(files.begin(), files.end(), prefix + "_hist_n_sigma_min_sq.csv") != files.end());
    for (const auto& f : files)
        CHECK(fs::exists(f));
    std::istringstream in(slurp(prefix + "_n_sigma_min_sq.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "trial,value");
    std::size_t rows = 0;
    while (std::getline(in, line))
        rows += !line.empty();
    CHECK(rows == 12);
    fs::remove_all(dir);
}

TEST_CASE("execute and exit codes")
{
    unsetenv("HYPLAB_SEED");
    std::ostringstream out, err;
    CHECK(cli::run_main({}, out, err) == cli::kUsageExit);
    CHECK(err.str().find("Usage") != std::string::npos);

    out.str("");
    err.str("");
    int code = cli::run_main({"neg-second-moment", "--n", "10", "--trials", "4", "--threads", "1"}, out, err);
    CHECK(code == 0);
    auto j = nlohmann::json::parse(out.str());
    CHECK(j["pass"] == true);
    CHECK(err.str().find("neg-second-moment") != std::string::npos);

    // An impossible injected threshold fails the run with exit code 1.
    out.str("");
    code = cli::run_main({"sup-norm", "--n", "16", "--trials", "20", "--ks-threshold", "1", "--field", "complex"},
                         out, err);
    CHECK((code == 0 || code == 1));
    CHECK(nlohmann::json::parse(out.str())["pass"].get<bool>() == (code == 0));

    CHECK(cli::run_main({"sup-norm", "--n", "16", "--trials", "5", "--out", "/nonexistent-dir/x.json"}, out, err) ==
          cli::kRuntimeExit);

    auto dir = scratch("hyplab_cli_all");
    out.str("");
    code = cli::run_main({"all", "--n", "16", "--trials", "6", "--out", dir.string()}, out, err);
    CHECK((code == 0 || code == 1));
    for (Kind k : all_kinds())
        CHECK(fs::exists(dir / (std::string(kind_name(k)) + ".json")));

    auto cal = (dir / "cal.json").string();
    CHECK(cli::run_main({"calibrate", "--kind", "sup-norm", "--n", "16", "--trials", "10", "--out", cal}, out, err) ==
          0);
    auto entry = load_calibration(cal, Kind::SupNorm, 16);
    REQUIRE(entry);
    CHECK(entry->trials == 10);
    fs::remove_all(dir);
}
