// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyplab/reference.hpp"

#include <cmath>
#include <numbers>

#include "hyplab/errors.hpp"

namespace hyplab::reference {

double std_normal_cdf(double t)
{
    return 0.5 * std::erfc(-t / std::numbers::sqrt2);
}

double edelman_cdf(double x, Field field)
{
    if (!(x >= 0.0))
        fail(ErrorCode::InvalidArgument, "edelman_cdf: argument must be >= 0");
    if (field == Field::Complex)
        return -std::expm1(-x);
    return -std::expm1(-0.5 * x - std::sqrt(x));
}

double gaussian_sup_bound(std::size_t n, double c_exponent)
{
    if (n < 2 || !(c_exponent > 0.0))
        fail(ErrorCode::InvalidArgument, "gaussian_sup_bound: requires n >= 2 and C > 0");
    const double dn = static_cast<double>(n);
    const double c1 = c_exponent + 1.0;
    return std::sqrt(8.0 * c1 * c1 * c1 * std::log(dn) / dn);
}

MinBound gaussian_min_bound(std::size_t n, double c, double a)
{
    if (n < 2)
        fail(ErrorCode::InvalidArgument, "gaussian_min_bound: requires n >= 2");
    if (!(c >= 0.0 && c < 1.0))
        fail(ErrorCode::InvalidArgument, "gaussian_min_bound: requires 0 <= c < 1");
    if (!(a > 1.0))
        fail(ErrorCode::InvalidArgument, "gaussian_min_bound: requires a > 1");
    const double dn = static_cast<double>(n);
    const double rate = 0.5 * (a * a - std::sqrt(2.0 * a * a - 1.0));
    return {(c / a) / std::pow(dn, 1.5), std::exp(-2.0 * c) - std::exp(-rate * dn)};
}

ReferenceCdf ReferenceCdf::parse(std::string_view name)
{
    if (name == "std-normal")
        return ReferenceCdf(CdfKind::StdNormal);
    if (name == "edelman-real")
        return ReferenceCdf(CdfKind::EdelmanReal);
    if (name == "edelman-complex")
        return ReferenceCdf(CdfKind::EdelmanComplex);
    fail(ErrorCode::InvalidArgument, "unknown reference CDF '" + std::string(name) + "'");
}

ReferenceCdf ReferenceCdf::edelman(Field field)
{
    return ReferenceCdf(field == Field::Complex ? CdfKind::EdelmanComplex : CdfKind::EdelmanReal);
}

double ReferenceCdf::operator()(double t) const
{
    switch (kind_) {
    case CdfKind::StdNormal:
        return std_normal_cdf(t);
    case CdfKind::EdelmanReal:
        return t <= 0.0 ? 0.0 : edelman_cdf(t, Field::Real);
    case CdfKind::EdelmanComplex:
        return t <= 0.0 ? 0.0 : edelman_cdf(t, Field::Complex);
    }
    return 0.0;
}

std::string ReferenceCdf::name() const
{
    switch (kind_) {
    case CdfKind::StdNormal: return "std-normal";
    case CdfKind::EdelmanReal: return "edelman-real";
    case CdfKind::EdelmanComplex: return "edelman-complex";
    }
    return {};
}

}  // namespace hyplab::reference
