// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyplab {

enum class ErrorCode {
    InvalidArgument,
    InvalidConfig,
    RankDeficient,
    SingularMatrix,
    NonConverged,
    MissingStream,
    DegenerateEnsemble,
    Io,
    Usage,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library carries a machine-readable code; the
/// C API maps it one-to-one onto its status enum.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what)
{
    throw Error(code, what);
}

}  // namespace hyplab
