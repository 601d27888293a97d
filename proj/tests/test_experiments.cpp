// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "hyplab/errors.hpp"
#include "hyplab/experiments.hpp"
#include "hyplab/hyperplane.hpp"
#include "hyplab/linalg.hpp"
#include "hyplab/report_io.hpp"
#include "oracles.hpp"

using namespace hyplab;
using namespace hyplab::experiments;

namespace {

ExperimentConfig small(Kind kind, std::size_t n, std::size_t trials, const char* dist = "bernoulli:real")
{
    ExperimentConfig c;
    c.kind = kind;
    c.n = n;
    c.trials = trials;
    c.dist = rng::DistSpec::parse(dist);
    c.master_seed = 2024;
    if (kind == Kind::NormalCoords)
        c.tuple_size = 2;
    return c;
}

double type7(std::vector<double> x, double p)
{
    std::sort(x.begin(), x.end());
    const double h = (double(x.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, x.size() - 1);
    return x[lo] + (h - double(lo)) * (x[hi] - x[lo]);
}

std::string temp_path(const std::string& name)
{
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("every kind is deterministic across worker counts")
{
    for (Kind kind : all_kinds()) {
        CAPTURE(kind_name(kind));
        for (const char* dist : {"bernoulli:real", "gaussian:complex"}) {
            CAPTURE(dist);
            auto c = small(kind, 16, 24, dist);
            auto a = run_experiment(c);
            c.threads = 4;
            auto b = run_experiment(c);
            CHECK(report::to_json(a) == report::to_json(b));
        }
    }
}

TEST_CASE("report invariants: lengths, discards, pass conjunction")
{
    for (Kind kind : all_kinds()) {
        CAPTURE(kind_name(kind));
        auto r = run_experiment(small(kind, 8, 60));
        CHECK(r.kept_trials.size() + r.discarded == 60);
        CHECK(std::is_sorted(r.kept_trials.begin(), r.kept_trials.end()));
        for (const auto& [name, values] : r.statistics)
            CHECK(values.size() == r.kept_trials.size());
        std::size_t reasons = 0;
        for (const auto& [why, count] : r.discard_reasons)
            reasons += count;
        CHECK(reasons == r.discarded);
        bool all = !r.degenerate && r.kept_trials.size() >= 2;
        for (const auto* list : {&r.ks_results, &r.checks})
            for (const auto& c : *list) {
                bool holds = c.relation == "<=" ? c.value <= c.threshold
                             : c.relation == ">=" ? c.value >= c.threshold
                                                  : c.value < c.threshold;
                CHECK(c.pass == holds);
                all = all && c.pass;
            }
        CHECK(r.pass == all);
        CHECK(r.find_check("discard_fraction") != nullptr);
        CHECK(r.degenerate == (double(r.discarded) / 60.0 > 0.1));
    }
}

TEST_CASE("rank-deficient bernoulli hyperplanes are discarded, not fatal")
{
    // 7 x 8 sign matrices are singular with visible probability.
    auto r = run_experiment(small(Kind::SupNorm, 8, 400));
    CHECK(r.discarded > 0);
    CHECK(r.discard_reasons.count("RankDeficient") == 1);
    CHECK(r.statistics.at("sup_norm").size() == 400 - r.discarded);
}

TEST_CASE("trial t reads stream t")
{
    auto c = small(Kind::SupNorm, 20, 12, "gaussian:real");
    auto r = run_experiment(c);
    REQUIRE(r.discarded == 0);
    for (std::uint64_t t = 0; t < 12; ++t) {
        rng::RngStream s(c.master_seed, t);
        auto a = rng::sample_matrix<double>(s, 19, 20, c.dist);
        auto x = linalg::null_vector(a);
        CHECK(r.statistics.at("sup_norm")[t] == doctest::Approx(hyperplane::sup_norm_statistic(x)).epsilon(1e-12));
    }

    // Least singular value against an independent Jacobi eigen solve.
    auto ls = small(Kind::LeastSingular, 10, 5, "gaussian:real");
    auto lr = run_experiment(ls);
    for (std::uint64_t t = 0; t < 5; ++t) {
        rng::RngStream s(ls.master_seed, t);
        auto m = rng::sample_matrix<double>(s, 10, 10, ls.dist);
        oracle::Grid<double> gram(10, std::vector<double>(10, 0.0));
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j)
                for (int k = 0; k < 10; ++k)
                    gram[i][j] += m(k, i) * m(k, j);
        const double smin2 = oracle::jacobi_eigenvalues(gram).front();
        CHECK(lr.statistics.at("n_sigma_min_sq")[t] == doctest::Approx(10.0 * smin2).epsilon(1e-9));
    }
}

TEST_CASE("summaries follow the statistic arrays")
{
    auto r = run_experiment(small(Kind::MinCoord, 24, 50, "gaussian:real"));
    const auto& x = r.statistics.at("min_coord");
    const auto& s = r.summary.at("min_coord");
    CHECK(s.count == x.size());
    CHECK(s.max == *std::max_element(x.begin(), x.end()));
    CHECK(s.q10 == doctest::Approx(type7(x, 0.10)));
    CHECK(s.q50 == doctest::Approx(type7(x, 0.50)));
}

TEST_CASE("in-process calibration comes from the gaussian companion")
{
    auto c = small(Kind::SupNorm, 32, 80);
    auto r = run_experiment(c);
    CHECK(r.calibration_source == "in-process");
    const auto& g = r.companion_statistics.at("sup_norm");
    CHECK(r.calibration.at("sup_norm_upper") == doctest::Approx(1.25 * *std::max_element(g.begin(), g.end())));
    CHECK(r.calibration.at("sup_norm_lower") == doctest::Approx(type7(g, 0.10) / 1.25));
    // The companion uses its own streams: its first value is not trial 0.
    CHECK(g.front() != r.statistics.at("sup_norm").front());

    auto m = small(Kind::MinCoord, 32, 80);
    auto mr = run_experiment(m);
    const auto& mg = mr.companion_statistics.at("min_coord");
    CHECK(mr.calibration.at("min_coord_lower") == doctest::Approx(type7(mg, 0.05) / 1.25));

    auto nsm = run_experiment(small(Kind::NegSecondMoment, 10, 5));
    CHECK(nsm.calibration_source == "exact");
    CHECK(nsm.calibration.at("relative_gap_tol") == 1e-8);
}

TEST_CASE("threshold precedence: injected, then file, then in-process")
{
    const std::string path = temp_path("hyplab_calibration_test.json");
    std::filesystem::remove(path);
    Thresholds file_th{{{"sup_norm_upper", 9.0}, {"sup_norm_lower", 0.5}}};
    store_calibration(path, {Kind::SupNorm, 32, Field::Real, 100, 7, file_th});
    store_calibration(path, {Kind::MinCoord, 64, Field::Complex, 50, 8, Thresholds{{{"min_coord_lower", 0.01}}}});

    auto loaded = load_calibration(path, Kind::SupNorm, 32);
    REQUIRE(loaded);
    CHECK(loaded->thresholds == file_th);
    CHECK(loaded->trials == 100);
    CHECK(loaded->seed == 7);
    CHECK(load_calibration(path, Kind::MinCoord, 64)->field == Field::Complex);
    CHECK_FALSE(load_calibration(path, Kind::SupNorm, 33));
    // Replacing one entry keeps the other.
    store_calibration(path, {Kind::SupNorm, 32, Field::Real, 100, 7, Thresholds{{{"sup_norm_upper", 8.0}, {"sup_norm_lower", 0.4}}}});
    CHECK(load_calibration(path, Kind::SupNorm, 32)->thresholds.at("sup_norm_upper") == 8.0);
    CHECK(load_calibration(path, Kind::MinCoord, 64));

    auto c = small(Kind::SupNorm, 32, 30);
    c.calibration_file = path;
    auto from_file = run_experiment(c);
    CHECK(from_file.calibration_source == "file");
    CHECK(from_file.find_check("max_sup_norm")->threshold == 8.0);
    CHECK(from_file.companion_statistics.size() == 1);  // universality still compares

    c.calibration = Thresholds{{{"sup_norm_upper", 1.0}, {"sup_norm_lower", 0.1}}};
    auto injected = run_experiment(c);
    CHECK(injected.calibration_source == "injected");
    CHECK_FALSE(injected.find_check("max_sup_norm")->pass);

    // A field mismatch in the file falls back to in-process calibration.
    auto z = small(Kind::SupNorm, 32, 30, "bernoulli:complex");
    z.calibration_file = path;
    CHECK(run_experiment(z).calibration_source == "in-process");

    std::ofstream(path) << "{ not json";
    CHECK_THROWS_AS(load_calibration(path, Kind::SupNorm, 32), Error);
    std::filesystem::remove(path);
}

TEST_CASE("calibrate rejects kinds without envelopes")
{
    CHECK_THROWS_AS(calibrate(Kind::NormalCoords, Field::Real, 16, 10, 1), Error);
    auto th = calibrate(Kind::SupNorm, Field::Real, 16, 20, 1);
    CHECK(th.values.count("sup_norm_upper") == 1);
    CHECK(th.at("sup_norm_upper") > th.at("sup_norm_lower"));
    CHECK_THROWS_AS(th.at("nope"), Error);
}

TEST_CASE("invalid configurations name the field")
{
    auto expect_invalid = [](ExperimentConfig c, const char* needle) {
        try {
            c.validate();
            FAIL("accepted an invalid config: " << needle);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidConfig);
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    auto base = small(Kind::SupNorm, 32, 10);
    auto c = base;
    c.n = 7;
    expect_invalid(c, "n");
    c = base;
    c.trials = 0;
    expect_invalid(c, "trials");
    c = small(Kind::DistanceConcentration, 32, 10);
    c.codim = 17;
    expect_invalid(c, "codim");
    c = small(Kind::UpperTail, 32, 10);
    c.t_grid = {1, 3, 2};
    expect_invalid(c, "t_grid");
    c = small(Kind::NegSecondMoment, 32, 10);
    c.cols = 31;
    expect_invalid(c, "cols");
    c = small(Kind::Eigenvector, 32, 10);
    c.eigen_tol = 0.0;
    expect_invalid(c, "tol");
    c = small(Kind::NormalCoords, 32, 10);
    c.tuple_size = 5;
    expect_invalid(c, "d");
    c = base;
    c.ks_threshold = 1.5;
    expect_invalid(c, "ks threshold");
    c = small(Kind::InnerProduct, 32, 10);
    c.dist = rng::DistSpec::custom({-0.5, 2.0}, {0.8, 0.2}, Field::Real);
    expect_invalid(c, "symmetric");
    CHECK_THROWS_AS(run_experiment(c), Error);
}

TEST_CASE("kind and fixed-vector names round trip")
{
    for (Kind k : all_kinds())
        CHECK(parse_kind(kind_name(k)) == k);
    CHECK_FALSE(parse_kind("bogus"));
    for (auto v : {FixedVector::E1, FixedVector::Flat, FixedVector::Random})
        CHECK(parse_fixed_vector(fixed_vector_name(v)) == v);
    CHECK(all_kinds().size() == 12);
}

TEST_CASE("trial-0 dumps are written on request")
{
    const auto dir = std::filesystem::temp_directory_path() / "hyplab_dump_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    auto c = small(Kind::SupNorm, 12, 3, "gaussian:real");
    c.dump_dir = dir.string();
    run_experiment(c);
    std::size_t files = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        CHECK(e.path().filename().string().rfind("sup-norm_trial0_", 0) == 0);
        ++files;
    }
    CHECK(files >= 2);
    std::filesystem::remove_all(dir);
}
