// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hyplab/reference.hpp"
#include "hyplab/stats.hpp"

using namespace hyplab::stats;

namespace {

// Brute force sup |F_n - F| over a fine grid plus both sides of every sample.
double ks_brute(std::vector<double> x, const std::function<double(double)>& cdf)
{
    std::sort(x.begin(), x.end());
    const double n = double(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::size_t le = 0, lt = 0;
        for (double y : x) {
            le += y <= x[i];
            lt += y < x[i];
        }
        d = std::max({d, std::abs(le / n - cdf(x[i])), std::abs(lt / n - cdf(x[i]))});
    }
    return d;
}

}  // namespace

TEST_CASE("one-sample KS hand examples")
{
    auto uniform = [](double t) { return std::clamp(t, 0.0, 1.0); };
    CHECK(ks_one_sample(EmpiricalDistribution({0.5}), uniform) == doctest::Approx(0.5));
    CHECK(ks_one_sample(EmpiricalDistribution({0.1, 0.4, 0.7}), uniform) == doctest::Approx(0.3));
    CHECK(ks_one_sample(EmpiricalDistribution({0.7, 0.1, 0.4}), uniform) == doctest::Approx(0.3));
}

TEST_CASE("one-sample KS matches brute force")
{
    std::mt19937_64 gen(31);
    std::normal_distribution<double> nd;
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<double> x(200);
        for (double& v : x)
            v = nd(gen) * 1.1;
        auto cdf = [](double t) { return hyplab::reference::std_normal_cdf(t); };
        CHECK(ks_one_sample(EmpiricalDistribution(x), cdf) == doctest::Approx(ks_brute(x, cdf)).epsilon(1e-14));
    }
}

TEST_CASE("two-sample KS")
{
    CHECK(ks_two_sample(EmpiricalDistribution({1, 2, 3}), EmpiricalDistribution({2.5, 4})) ==
          doctest::Approx(2.0 / 3.0));
    CHECK(ks_two_sample(EmpiricalDistribution({1, 2}), EmpiricalDistribution({1, 2})) == 0.0);
    // Ties across samples are stepped together.
    CHECK(ks_two_sample(EmpiricalDistribution({1, 1, 2}), EmpiricalDistribution({1, 2, 2})) ==
          doctest::Approx(1.0 / 3.0));
    CHECK(ks_two_sample(EmpiricalDistribution({0}), EmpiricalDistribution({5})) == 1.0);
}

TEST_CASE("empirical CDF and type-7 quantiles")
{
    EmpiricalDistribution e({4, 1, 3, 2});
    CHECK(e.cdf(0.5) == 0.0);
    CHECK(e.cdf(2.0) == 0.5);
    CHECK(e.cdf(10.0) == 1.0);
    // Type 7: h = (n - 1) p, linear between order statistics.
    CHECK(e.quantile(0.0) == 1.0);
    CHECK(e.quantile(0.25) == doctest::Approx(1.75));
    CHECK(e.quantile(0.5) == doctest::Approx(2.5));
    CHECK(e.quantile(0.9) == doctest::Approx(3.7));
    CHECK(e.quantile(1.0) == 4.0);
}

TEST_CASE("histogram counts and densities")
{
    std::vector<double> x{-1.0, 0.0, 0.1, 0.5, 0.99, 1.0, 2.0, std::nan("")};
    auto h = histogram(x, 4, 0.0, 1.0);
    REQUIRE(h.bin_edges.size() == 5);
    CHECK(h.bin_edges[2] == doctest::Approx(0.5));
    CHECK(h.counts == std::vector<std::size_t>{2, 0, 1, 1});
    CHECK(h.below == 1);
    CHECK(h.above == 3);
    CHECK(h.total == 8);
    CHECK(h.density[0] == doctest::Approx(2.0 / (8 * 0.25)));
    std::ostringstream os;
    write_histogram_csv(os, h);
    CHECK(os.str().find("out_of_range,1,3") != std::string::npos);
}

TEST_CASE("moments, variance, correlation, least squares")
{
    std::vector<double> x{1, 2, 3, 4};
    auto m = moments(x, 3);
    CHECK(m[0] == doctest::Approx(2.5));
    CHECK(m[1] == doctest::Approx(7.5));
    CHECK(m[2] == doctest::Approx(25.0));
    CHECK(mean(x) == 2.5);
    CHECK(variance(x) == doctest::Approx(5.0 / 3.0));
    std::vector<double> y{2, 4, 6, 8}, z{8, 6, 4, 2};
    CHECK(correlation(x, y) == doctest::Approx(1.0));
    CHECK(correlation(x, z) == doctest::Approx(-1.0));
    std::vector<double> line{1.5, 3.5, 5.5, 7.5};
    auto fit = linear_fit(x, line);
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.intercept == doctest::Approx(-0.5));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    std::vector<double> noisy{1.0, 3.0, 2.0, 4.0};
    auto f2 = linear_fit(x, noisy);
    // Closed form: slope = Sxy / Sxx = 4 / 5, r^2 = Sxy^2 / (Sxx Syy) = 16 / 25.
    CHECK(f2.slope == doctest::Approx(0.8));
    CHECK(f2.r_squared == doctest::Approx(0.64));
}

TEST_CASE("compensated summation")
{
    CompensatedSum s;
    s.add(1e16);
    s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 1.0);
    CompensatedSum t;
    for (int i = 0; i < 1000000; ++i)
        t.add(0.1);
    CHECK(t.value() == doctest::Approx(100000.0).epsilon(1e-15));
}
