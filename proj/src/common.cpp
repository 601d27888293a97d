// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#include <cstdio>

#include "hyplab/errors.hpp"
#include "hyplab/matrix.hpp"
#include "hyplab/scalar.hpp"

namespace hyplab {

std::string_view field_name(Field f)
{
    return f == Field::Complex ? "complex" : "real";
}

std::string_view error_code_name(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NonConverged: return "NonConverged";
    case ErrorCode::MissingStream: return "MissingStream";
    case ErrorCode::DegenerateEnsemble: return "DegenerateEnsemble";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Usage: return "Usage";
    }
    return "Unknown";
}

std::string format_scalar(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_scalar(const cplx& z)
{
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

}  // namespace hyplab
