// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "hyplab/linalg.hpp"
#include "hyplab/matrix.hpp"
#include "hyplab/rng.hpp"
#include "hyplab/unit_vector.hpp"

namespace hyplab::hyperplane {

/// Largest-magnitude entry made real positive; ties (to 1e-12 relative)
/// go to the lowest index.
template <class T>
UnitVector<T> canonicalize(UnitVector<T> x);

/// Multiply by a uniform random sign (real) or phase (complex); one word.
template <class T>
UnitVector<T> apply_haar_phase(UnitVector<T> x, rng::RngStream& stream);

/// Unit normal of the hyperplane spanned by the rows of an (n-1) x n
/// matrix. Haar mode needs a stream (MissingStream otherwise).
template <class T>
UnitVector<T> normal_vector(const Matrix<T>& a, PhaseMode mode, rng::RngStream* stream,
                            double rank_tol = linalg::kDefaultRankTol);

/// ||x||_inf * sqrt(n / log n); requires n >= 3.
template <class T>
double sup_norm_statistic(const UnitVector<T>& x);

/// min_i |x_i| * n^{3/2}.
template <class T>
double min_coord_statistic(const UnitVector<T>& x);

/// sqrt(n) * x* u.
template <class T>
T inner_product_statistic(const UnitVector<T>& x, const UnitVector<T>& u);

}  // namespace hyplab::hyperplane
