// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
//
// Ensemble-level properties. Seeds are fixed, so outcomes are reproducible;
// thresholds sit at the 0.1% level of the relevant KS laws.
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <thread>

#include "hyplab/experiments.hpp"
#include "hyplab/reference.hpp"
#include "hyplab/stats.hpp"

using namespace hyplab;
using namespace hyplab::experiments;

namespace {

ExperimentConfig make(Kind kind, std::size_t n, std::size_t trials, const char* dist, std::uint64_t seed)
{
    ExperimentConfig c;
    c.kind = kind;
    c.n = n;
    c.trials = trials;
    c.dist = rng::DistSpec::parse(dist);
    c.master_seed = seed;
    c.threads = std::max(1u, std::thread::hardware_concurrency());
    return c;
}

// Two-sample KS critical value at level 0.001.
double ks2_critical(std::size_t a, std::size_t b)
{
    return 1.95 * std::sqrt(double(a + b) / (double(a) * double(b)));
}

}  // namespace

TEST_CASE("universality meter: bernoulli and gaussian sup-norm laws agree at n = 128")
{
    for (const char* dist : {"bernoulli:real", "bernoulli:complex"}) {
        CAPTURE(dist);
        auto r = run_experiment(make(Kind::SupNorm, 128, 2000, dist, 11));
        const auto* u = r.find_check("universality_sup_norm");
        REQUIRE(u != nullptr);
        CHECK(u->pass);
        stats::EmpiricalDistribution a(r.statistics.at("sup_norm")), b(r.companion_statistics.at("sup_norm"));
        CHECK(stats::ks_two_sample(a, b) <= ks2_critical(a.count(), b.count()));
    }
}

TEST_CASE("gaussian hyperplane normals match direct sphere samples")
{
    // For gaussian rows the normal is exactly uniform on the sphere, so its
    // scaled coordinate has the same law as a normalized gaussian vector's.
    for (std::uint64_t seed : {1, 2, 3}) {
        CAPTURE(seed);
        auto normal = run_experiment(make(Kind::NormalCoords, 16, 2000, "gaussian:real", seed));
        auto sphere = run_experiment(make(Kind::SphereBaseline, 16, 2000, "gaussian:real", seed + 100));
        stats::EmpiricalDistribution a(normal.statistics.at("coord_0"));
        std::vector<double> b = sphere.statistics.at("coord_0");
        stats::EmpiricalDistribution eb(b);
        CHECK(stats::ks_two_sample(a, eb) <= ks2_critical(a.count(), eb.count()));
    }
}

TEST_CASE("complex gaussian least singular values follow the exponential limit")
{
    for (std::uint64_t seed : {5, 6}) {
        CAPTURE(seed);
        auto r = run_experiment(make(Kind::LeastSingular, 48, 1500, "gaussian:complex", seed));
        stats::EmpiricalDistribution e(r.statistics.at("n_sigma_min_sq"));
        const double d = stats::ks_one_sample(e, [](double x) {
            return x <= 0.0 ? 0.0 : reference::edelman_cdf(x, Field::Complex);
        });
        CHECK(d <= 1.95 / std::sqrt(double(e.count())) + 0.02);  // + finite-n bias allowance
    }
}

TEST_CASE("eigenpair discards stay below one percent for n >= 32")
{
    for (std::size_t n : {32, 64}) {
        for (const char* dist : {"bernoulli:real", "bernoulli:complex", "gaussian:real"}) {
            CAPTURE(n);
            CAPTURE(dist);
            auto c = make(Kind::Eigenvector, n, 600, dist, 17);
            c.calibration = Thresholds{{{"eig_sup_upper", 100.0}}};
            auto r = run_experiment(c);
            CHECK(double(r.discarded) / 600.0 <= 0.01);
            const auto& res = r.statistics.at("residual");
            CHECK(*std::max_element(res.begin(), res.end()) <= 1e-8);
        }
    }
}

TEST_CASE("hyperplane discards stay below one percent for n >= 32")
{
    auto r = run_experiment(make(Kind::MinCoord, 32, 2000, "bernoulli:real", 23));
    CHECK(double(r.discarded) / 2000.0 <= 0.01);
}
