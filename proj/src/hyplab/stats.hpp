// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>
#include <ostream>
#include <span>
#include <vector>

namespace hyplab::stats {

/// Kahan-Babuska (Neumaier) compensated sum.
class CompensatedSum {
  public:
    void add(double x);
    double value() const noexcept { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Sorted copy of a sample; immutable once built.
class EmpiricalDistribution {
  public:
    explicit EmpiricalDistribution(std::vector<double> samples);

    std::span<const double> sorted() const noexcept { return sorted_; }
    std::size_t count() const noexcept { return sorted_.size(); }
    /// Fraction of samples <= t.
    double cdf(double t) const;
    /// Linear-interpolation quantile (Hyndman-Fan type 7).
    double quantile(double p) const;

  private:
    std::vector<double> sorted_;
};

/// Exact one-sample Kolmogorov-Smirnov statistic
/// sup_i max(|F_n(x_i) - F(x_i)|, |F_n(x_i^-) - F(x_i)|).
double ks_one_sample(const EmpiricalDistribution& samples, const std::function<double(double)>& cdf);

/// Sup distance between two empirical CDFs (merge scan).
double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

struct Histogram {
    std::vector<double> bin_edges;  // bin_count + 1 ascending edges
    std::vector<std::size_t> counts;
    std::vector<double> density;    // counts / (total samples * width)
    std::size_t below = 0;          // samples < lo
    std::size_t above = 0;          // samples >= hi (or NaN)
    std::size_t total = 0;
};

/// Uniform bins over [lo, hi).
Histogram histogram(std::span<const double> samples, std::size_t bin_count, double lo, double hi);

/// `bin_left,bin_right,count,density` rows, then `out_of_range,<below>,<above>,`.
void write_histogram_csv(std::ostream& os, const Histogram& h);

/// Raw moments of orders 1..max_order with compensated accumulation.
std::vector<double> moments(std::span<const double> samples, int max_order);

double mean(std::span<const double> x);
/// Unbiased sample variance.
double variance(std::span<const double> x);
double correlation(std::span<const double> x, std::span<const double> y);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares y = intercept + slope x (needs >= 2 points).
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace hyplab::stats
