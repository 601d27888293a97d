// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hyplab/scalar.hpp"

namespace hyplab {

/// How the free unit-modulus factor of a vector was fixed.
enum class PhaseMode {
    Raw,        // whatever the producing factorization left
    Haar,       // multiplied by a uniform random sign / phase
    Canonical,  // largest-magnitude entry real positive, lowest index wins ties
};

template <class T>
struct UnitVector {
    std::vector<T> entries;
    PhaseMode phase_mode = PhaseMode::Raw;

    std::size_t n() const noexcept { return entries.size(); }
    std::span<const T> span() const noexcept { return entries; }
    const T& operator[](std::size_t i) const { return entries[i]; }
};

}  // namespace hyplab
