// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hyplab/matrix.hpp"
#include "hyplab/unit_vector.hpp"

namespace hyplab::linalg {

inline constexpr double kDefaultRankTol = 1e-12;
/// Pivots below this fraction of ||M||_F count as zero.
inline constexpr double kSingularPivotTol = 1e-14;

//---------------------------------------------------------------------------//
/*!
 * Householder QR of a tall matrix (rows >= cols), kept in factored form.
 *
 * Reflectors are stored column-major with an implicit unit leading entry
 * (LAPACK xGEQRF layout). The diagonal of R is made real and nonnegative by
 * moving the sign into the matching column of Q.
 */
template <class T>
class HouseholderQr {
  public:
    explicit HouseholderQr(const Matrix<T>& m);
    /// Factor A* without materializing it; column j of A* is conj(row j of A).
    static HouseholderQr of_adjoint(const Matrix<T>& a);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    /// Real nonnegative |R_kk|.
    double r_diag(std::size_t k) const { return std::abs(beta_[k]); }
    double min_r_diag() const;

    Matrix<T> r() const;
    Matrix<T> thin_q() const;
    Matrix<T> full_q() const;

    /// x <- Q x for the full square Q (x has length rows()).
    void apply_q(std::span<T> x) const;
    /// x <- Q* x.
    void apply_q_adjoint(std::span<T> x) const;
    /// Projection of x onto the orthogonal complement of the column span.
    std::vector<T> complement_projection(std::span<const T> x) const;

  private:
    HouseholderQr() = default;
    void factor();
    void apply_reflector(std::size_t k, std::span<T> x, bool adjoint) const;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> work_;   // column-major, rows_ x cols_
    std::vector<T> tau_;
    std::vector<double> beta_;  // signed R diagonal before the sign fix
    double input_norm_ = 0.0;
};

enum class QrMode { Thin, Full };

template <class T>
struct QrResult {
    Matrix<T> q;
    Matrix<T> r;
};

/// M = Q R with Q orthonormal columns (thin: rows x cols; full: rows x rows)
/// and R upper triangular with real nonnegative diagonal (full: rows x cols).
template <class T>
QrResult<T> qr_decompose(const Matrix<T>& m, QrMode mode = QrMode::Thin);

/// Unit vector orthogonal to every row of an (n-1) x n matrix: last column
/// of the full Q from the QR of A*. Throws RankDeficient when some |R_kk| is
/// below rank_tol * ||A||_F.
template <class T>
UnitVector<T> null_vector(const Matrix<T>& a, double rank_tol = kDefaultRankTol);

//---------------------------------------------------------------------------//
// SVD
//---------------------------------------------------------------------------//

template <class T>
struct SvdResult {
    std::vector<double> singular_values;  // descending, length min(rows, cols)
    Matrix<T> u;                          // rows x k, orthonormal columns
    Matrix<T> v;                          // cols x k, orthonormal columns
};

enum class SvdVectors { None, Thin };

/// Golub-Kahan bidiagonalization followed by implicit-shift QR sweeps on the
/// real bidiagonal. Throws NonConverged after 100 * max(rows, cols) sweeps.
template <class T>
SvdResult<T> svd(const Matrix<T>& m, SvdVectors vectors = SvdVectors::Thin);

template <class T>
std::vector<double> singular_values(const Matrix<T>& m);

//---------------------------------------------------------------------------//
// LU
//---------------------------------------------------------------------------//

enum class PivotPolicy {
    Throw,    // SingularMatrix on a tiny pivot
    Perturb,  // replace tiny pivots by kSingularPivotTol * ||M||_F
};

/// Partial-pivoting LU of M - shift*I.
template <class T>
class LuFactorization {
  public:
    explicit LuFactorization(const Matrix<T>& m, T shift = T{}, PivotPolicy policy = PivotPolicy::Throw);

    std::size_t size() const noexcept { return n_; }
    bool perturbed() const noexcept { return perturbed_; }

    void solve_in_place(std::span<T> b) const;
    std::vector<T> solve(std::span<const T> b) const;

  private:
    std::size_t n_ = 0;
    std::vector<T> lu_;  // row-major
    std::vector<std::size_t> perm_;
    bool perturbed_ = false;
};

template <class T>
std::vector<T> solve(const Matrix<T>& m, std::span<const T> b);

//---------------------------------------------------------------------------//
// Projections and the negative second moment identity
//---------------------------------------------------------------------------//

/// u - B (B* u) for a basis with orthonormal columns (checked to 1e-10).
template <class T>
std::vector<T> project_complement(const Matrix<T>& basis, std::span<const T> u);

/// Distance from each row to the span of the remaining rows.
template <class T>
std::vector<double> row_distances(const Matrix<T>& m, double rank_tol = kDefaultRankTol);

struct NegSecondMoment {
    double lhs = 0.0;  // sum of sigma_j^-2
    double rhs = 0.0;  // sum of d_j^-2
    double relative_gap() const { return std::abs(lhs - rhs) / lhs; }
};

template <class T>
NegSecondMoment neg_second_moment_check(const Matrix<T>& m, double rank_tol = kDefaultRankTol);

}  // namespace hyplab::linalg
