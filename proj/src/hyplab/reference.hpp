// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "hyplab/scalar.hpp"

namespace hyplab::reference {

/// Phi(t) = erfc(-t / sqrt 2) / 2 using the C library erfc, which is
/// accurate to a few ulp over the whole real line.
double std_normal_cdf(double t);

/*!
 * Limit law of x = n * sigma_min^2 for square gaussian matrices.
 *
 * Complex: 1 - e^{-x}. Real: 1 - e^{-x/2 - sqrt x}, whose derivative is
 * (1 + sqrt x)/(2 sqrt x) e^{-x/2 - sqrt x}. Negative x is rejected.
 */
double edelman_cdf(double x, Field field);

/// sqrt(8 (C+1)^3 log n / n): sup-norm bound for a uniform sphere point,
/// holding with probability at least 1 - n^{-C}.
double gaussian_sup_bound(std::size_t n, double c_exponent);

struct MinBound {
    double threshold;   // (c/a) n^{-3/2}
    double prob_lower;  // exp(-2c) - exp(-(a^2 - sqrt(2a^2 - 1)) n / 2)
};

/// Lower bound on the smallest coordinate of a uniform sphere point.
/// Requires n >= 2, 0 <= c < 1, a > 1.
MinBound gaussian_min_bound(std::size_t n, double c, double a);

enum class CdfKind { StdNormal, EdelmanReal, EdelmanComplex };

/// Named reference CDF, addressable from the command line.
class ReferenceCdf {
  public:
    explicit ReferenceCdf(CdfKind kind) : kind_(kind) {}
    /// `std-normal`, `edelman-real`, `edelman-complex`.
    static ReferenceCdf parse(std::string_view name);
    static ReferenceCdf edelman(Field field);

    double operator()(double t) const;
    CdfKind kind() const noexcept { return kind_; }
    std::string name() const;

  private:
    CdfKind kind_;
};

}  // namespace hyplab::reference
