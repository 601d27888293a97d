// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyplab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hyplab/errors.hpp"
#include "hyplab/matrix.hpp"

namespace hyplab::stats {

void CompensatedSum::add(double x)
{
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
    else
        comp_ += (x - t) + sum_;
    sum_ = t;
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples) : sorted_(std::move(samples))
{
    if (sorted_.empty())
        fail(ErrorCode::InvalidArgument, "EmpiricalDistribution: needs at least one sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::cdf(double t) const
{
    auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::quantile(double p) const
{
    p = std::clamp(p, 0.0, 1.0);
    const double h = p * static_cast<double>(sorted_.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted_.size() - 1);
    return sorted_[lo] + (h - static_cast<double>(lo)) * (sorted_[hi] - sorted_[lo]);
}

double ks_one_sample(const EmpiricalDistribution& samples, const std::function<double(double)>& cdf)
{
    const auto x = samples.sorted();
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < x.size()) {
        // Step over a run of ties so F_n jumps once per distinct value.
        std::size_t j = i;
        while (j + 1 < x.size() && x[j + 1] == x[i])
            ++j;
        const double f = cdf(x[i]);
        const double before = static_cast<double>(i) / n;
        const double after = static_cast<double>(j + 1) / n;
        d = std::max({d, std::abs(after - f), std::abs(before - f)});
        i = j + 1;
    }
    return d;
}

double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b)
{
    const auto x = a.sorted();
    const auto y = b.sorted();
    const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double t = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == t)
            ++i;
        while (j < y.size() && y[j] == t)
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    // Once one sample is exhausted its ECDF is 1 and the other only rises.
    if (i < x.size())
        d = std::max(d, 1.0 - static_cast<double>(i) / na);
    if (j < y.size())
        d = std::max(d, 1.0 - static_cast<double>(j) / nb);
    return d;
}

Histogram histogram(std::span<const double> samples, std::size_t bin_count, double lo, double hi)
{
    if (bin_count < 1 || !(lo < hi))
        fail(ErrorCode::InvalidArgument, "histogram: requires bin_count >= 1 and lo < hi");
    Histogram h;
    const double width = (hi - lo) / static_cast<double>(bin_count);
    h.bin_edges.resize(bin_count + 1);
    for (std::size_t k = 0; k <= bin_count; ++k)
        h.bin_edges[k] = k == bin_count ? hi : lo + width * static_cast<double>(k);
    h.counts.assign(bin_count, 0);
    for (double x : samples) {
        if (x < lo) {
            ++h.below;
        } else if (!(x < hi)) {
            ++h.above;
        } else {
            auto k = static_cast<std::size_t>((x - lo) / width);
            k = std::min(k, bin_count - 1);
            // Rounding can land x one bin off its edge-defined home.
            while (k > 0 && x < h.bin_edges[k])
                --k;
            while (k + 1 < bin_count && x >= h.bin_edges[k + 1])
                ++k;
            ++h.counts[k];
        }
    }
    h.total = samples.size();
    h.density.resize(bin_count);
    for (std::size_t k = 0; k < bin_count; ++k) {
        const double w = h.bin_edges[k + 1] - h.bin_edges[k];
        h.density[k] = h.total ? static_cast<double>(h.counts[k]) / (static_cast<double>(h.total) * w) : 0.0;
    }
    return h;
}

void write_histogram_csv(std::ostream& os, const Histogram& h)
{
    os << "bin_left,bin_right,count,density\n";
    for (std::size_t k = 0; k < h.counts.size(); ++k)
        os << format_scalar(h.bin_edges[k]) << ',' << format_scalar(h.bin_edges[k + 1]) << ',' << h.counts[k]
           << ',' << format_scalar(h.density[k]) << '\n';
    os << "out_of_range," << h.below << ',' << h.above << ",\n";
}

std::vector<double> moments(std::span<const double> samples, int max_order)
{
    if (max_order < 1)
        fail(ErrorCode::InvalidArgument, "moments: max_order must be >= 1");
    if (samples.empty())
        fail(ErrorCode::InvalidArgument, "moments: empty sample");
    std::vector<CompensatedSum> acc(static_cast<std::size_t>(max_order));
    for (double x : samples) {
        double p = 1.0;
        for (auto& a : acc) {
            p *= x;
            a.add(p);
        }
    }
    std::vector<double> out;
    out.reserve(acc.size());
    for (const auto& a : acc)
        out.push_back(a.value() / static_cast<double>(samples.size()));
    return out;
}

double mean(std::span<const double> x)
{
    CompensatedSum s;
    for (double v : x)
        s.add(v);
    return s.value() / static_cast<double>(x.size());
}

double variance(std::span<const double> x)
{
    if (x.size() < 2)
        return 0.0;
    const double m = mean(x);
    CompensatedSum s;
    for (double v : x)
        s.add((v - m) * (v - m));
    return s.value() / static_cast<double>(x.size() - 1);
}

double correlation(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2)
        fail(ErrorCode::InvalidArgument, "correlation: need two equal-length samples of size >= 2");
    const double mx = mean(x), my = mean(y);
    CompensatedSum sxy, sxx, syy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy.add((x[i] - mx) * (y[i] - my));
        sxx.add((x[i] - mx) * (x[i] - mx));
        syy.add((y[i] - my) * (y[i] - my));
    }
    return sxy.value() / std::sqrt(sxx.value() * syy.value());
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2)
        fail(ErrorCode::InvalidArgument, "linear_fit: need at least two points");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

}  // namespace hyplab::stats
