// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

#include "hyplab/matrix.hpp"
#include "hyplab/rng.hpp"
#include "hyplab/unit_vector.hpp"

namespace hyplab::linalg {

struct Eigenpair {
    cplx eigenvalue;
    UnitVector<cplx> eigenvector;
    double residual = 0.0;  // ||M v - lambda v||_2
    std::size_t iterations = 0;
};

struct EigenOptions {
    double tol = 1e-10;           // residual target, relative to ||M||_F
    std::size_t max_iter = 1000;  // total inverse-iteration steps
};

/*!
 * Eigenpair of smallest eigenvalue modulus by inverse iteration.
 *
 * M is factored once and a two-vector block is iterated against M^{-1}
 * from a random complex start drawn from `stream` (2n complex gaussians).
 * The smaller Ritz pair of the block is then polished by shift-and-invert
 * with the shift refreshed from the Rayleigh quotient. Working in a
 * two-dimensional block keeps the convergence rate governed by the third
 * smallest modulus, so nearly tied smallest moduli are still resolved.
 *
 * Errors: NonConverged after max_iter steps, or when the two smallest
 * moduli agree to 1e-6 relative (a conjugate pair of a real matrix is not
 * a tie; the member with nonnegative imaginary part is returned). A
 * numerically singular M yields lambda = 0 with v along the null direction.
 */
Eigenpair smallest_modulus_eigenpair(const Matrix<cplx>& m, const EigenOptions& options, rng::RngStream& stream);
Eigenpair smallest_modulus_eigenpair(const Matrix<double>& m, const EigenOptions& options, rng::RngStream& stream);

}  // namespace hyplab::linalg
