// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyplab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "hyplab/errors.hpp"

namespace hyplab::linalg {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

/*!
 * Generate an elementary reflector H = I - tau v v* with H* x = beta e1,
 * beta real (LAPACK xLARFG). On exit x[0] is untouched and x[1:] holds v[1:].
 */
template <class T>
void make_reflector(std::span<T> x, T& tau, double& beta)
{
    const T alpha = x[0];
    double tail = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        tail += abs2(x[i]);
    if (tail == 0.0 && im(alpha) == 0.0) {
        tau = T{};
        beta = re(alpha);
        return;
    }
    const double norm = std::sqrt(abs2(alpha) + tail);
    beta = re(alpha) >= 0.0 ? -norm : norm;
    tau = (T(beta) - alpha) / beta;
    const T scale = T(1) / (alpha - T(beta));
    for (std::size_t i = 1; i < x.size(); ++i)
        x[i] *= scale;
}

/// y <- y - coef * v (v* y), v[0] == 1 implicit.
template <class T>
inline void reflect(std::span<const T> v, T coef, std::span<T> y)
{
    T w = y[0];
    for (std::size_t i = 1; i < v.size(); ++i)
        w += conj_s(v[i]) * y[i];
    w *= coef;
    y[0] -= w;
    for (std::size_t i = 1; i < v.size(); ++i)
        y[i] -= w * v[i];
}

void check_finite_input(bool finite, const char* op)
{
    if (!finite)
        fail(ErrorCode::InvalidArgument, std::string(op) + ": non-finite entries");
}

}  // namespace

//---------------------------------------------------------------------------//
// HouseholderQr
//---------------------------------------------------------------------------//

template <class T>
HouseholderQr<T>::HouseholderQr(const Matrix<T>& m) : rows_(m.rows()), cols_(m.cols())
{
    check_finite_input(m.all_finite(), "qr");
    if (rows_ < cols_)
        fail(ErrorCode::InvalidArgument, "qr: requires rows >= cols");
    work_.resize(rows_ * cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            work_[j * rows_ + i] = m(i, j);
    input_norm_ = m.frobenius_norm();
    factor();
}

template <class T>
HouseholderQr<T> HouseholderQr<T>::of_adjoint(const Matrix<T>& a)
{
    check_finite_input(a.all_finite(), "qr");
    if (a.cols() < a.rows())
        fail(ErrorCode::InvalidArgument, "qr of adjoint: requires rows <= cols");
    HouseholderQr qr;
    qr.rows_ = a.cols();
    qr.cols_ = a.rows();
    qr.work_.resize(qr.rows_ * qr.cols_);
    for (std::size_t j = 0; j < qr.cols_; ++j) {
        auto src = a.row(j);
        for (std::size_t i = 0; i < qr.rows_; ++i)
            qr.work_[j * qr.rows_ + i] = conj_s(src[i]);
    }
    qr.input_norm_ = a.frobenius_norm();
    qr.factor();
    return qr;
}

template <class T>
void HouseholderQr<T>::factor()
{
    tau_.assign(cols_, T{});
    beta_.assign(cols_, 0.0);
    for (std::size_t k = 0; k < cols_; ++k) {
        std::span<T> col(work_.data() + k * rows_ + k, rows_ - k);
        make_reflector(col, tau_[k], beta_[k]);
        const T coef = conj_s(tau_[k]);
        if (coef != T{}) {
            for (std::size_t j = k + 1; j < cols_; ++j)
                reflect<T>(col, coef, std::span<T>(work_.data() + j * rows_ + k, rows_ - k));
        }
        col[0] = T(beta_[k]);
    }
}

template <class T>
double HouseholderQr<T>::min_r_diag() const
{
    double m = std::numeric_limits<double>::infinity();
    for (double b : beta_)
        m = std::min(m, std::abs(b));
    return m;
}

template <class T>
void HouseholderQr<T>::apply_reflector(std::size_t k, std::span<T> x, bool adjoint) const
{
    const T coef = adjoint ? conj_s(tau_[k]) : tau_[k];
    if (coef == T{})
        return;
    // The stored column holds beta at position k; the reflector's leading
    // entry is an implicit 1, which reflect() assumes.
    std::span<const T> v(work_.data() + k * rows_ + k, rows_ - k);
    reflect<T>(v, coef, x.subspan(k));
}

template <class T>
void HouseholderQr<T>::apply_q(std::span<T> x) const
{
    for (std::size_t k = cols_; k-- > 0;)
        apply_reflector(k, x, false);
}

template <class T>
void HouseholderQr<T>::apply_q_adjoint(std::span<T> x) const
{
    for (std::size_t k = 0; k < cols_; ++k)
        apply_reflector(k, x, true);
}

template <class T>
std::vector<T> HouseholderQr<T>::complement_projection(std::span<const T> x) const
{
    std::vector<T> y(x.begin(), x.end());
    apply_q_adjoint(y);
    std::fill(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(cols_), T{});
    apply_q(y);
    return y;
}

template <class T>
Matrix<T> HouseholderQr<T>::r() const
{
    Matrix<T> r(cols_, cols_);
    for (std::size_t i = 0; i < cols_; ++i) {
        const double s = beta_[i] < 0.0 ? -1.0 : 1.0;
        r(i, i) = T(std::abs(beta_[i]));
        for (std::size_t j = i + 1; j < cols_; ++j)
            r(i, j) = s * work_[j * rows_ + i];
    }
    return r;
}

template <class T>
Matrix<T> HouseholderQr<T>::thin_q() const
{
    Matrix<T> q(rows_, cols_);
    std::vector<T> e(rows_);
    for (std::size_t j = 0; j < cols_; ++j) {
        std::fill(e.begin(), e.end(), T{});
        e[j] = T(beta_[j] < 0.0 ? -1.0 : 1.0);
        apply_q(e);
        for (std::size_t i = 0; i < rows_; ++i)
            q(i, j) = e[i];
    }
    return q;
}

template <class T>
Matrix<T> HouseholderQr<T>::full_q() const
{
    Matrix<T> q(rows_, rows_);
    std::vector<T> e(rows_);
    for (std::size_t j = 0; j < rows_; ++j) {
        std::fill(e.begin(), e.end(), T{});
        e[j] = T(j < cols_ && beta_[j] < 0.0 ? -1.0 : 1.0);
        apply_q(e);
        for (std::size_t i = 0; i < rows_; ++i)
            q(i, j) = e[i];
    }
    return q;
}

template <class T>
QrResult<T> qr_decompose(const Matrix<T>& m, QrMode mode)
{
    HouseholderQr<T> qr(m);
    if (mode == QrMode::Thin)
        return {qr.thin_q(), qr.r()};
    // Full Q pairs with R padded by zero rows to rows x cols.
    const Matrix<T> thin_r = qr.r();
    Matrix<T> r(m.rows(), m.cols());
    for (std::size_t i = 0; i < thin_r.rows(); ++i)
        for (std::size_t j = 0; j < thin_r.cols(); ++j)
            r(i, j) = thin_r(i, j);
    return {qr.full_q(), r};
}

template <class T>
UnitVector<T> null_vector(const Matrix<T>& a, double rank_tol)
{
    if (a.rows() + 1 != a.cols())
        fail(ErrorCode::InvalidArgument, "null_vector: expects an (n-1) x n matrix");
    auto qr = HouseholderQr<T>::of_adjoint(a);
    const double threshold = rank_tol * a.frobenius_norm();
    for (std::size_t k = 0; k < qr.cols(); ++k) {
        if (!(qr.r_diag(k) >= threshold) || qr.r_diag(k) == 0.0)
            fail(ErrorCode::RankDeficient, "null_vector: rows are linearly dependent (|R_" + std::to_string(k)
                                               + "| below rank tolerance)");
    }
    std::vector<T> x(a.cols(), T{});
    x.back() = T(1);
    qr.apply_q(x);
    return {std::move(x), PhaseMode::Raw};
}

//---------------------------------------------------------------------------//
// SVD
//---------------------------------------------------------------------------//

namespace {

/// Column-major dense block used for the accumulated singular vectors.
template <class T>
struct ColMajor {
    std::size_t rows = 0, cols = 0;
    std::vector<T> a;

    ColMajor(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, T{}) {}
    T* col(std::size_t j) { return a.data() + j * rows; }
    T& operator()(std::size_t i, std::size_t j) { return a[j * rows + i]; }

    /// col_j <- c col_j + s col_k ; col_k <- -s col_j + c col_k
    void rotate(std::size_t j, std::size_t k, double c, double s)
    {
        T* x = col(j);
        T* y = col(k);
        for (std::size_t i = 0; i < rows; ++i) {
            const T xi = x[i], yi = y[i];
            x[i] = c * xi + s * yi;
            y[i] = -s * xi + c * yi;
        }
    }

    Matrix<T> to_matrix() const
    {
        Matrix<T> m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                m(i, j) = a[j * rows + i];
        return m;
    }
};

/*!
 * Implicit-shift QR on the real upper bidiagonal (d, e), Golub-Van Loan
 * style with the zero-diagonal deflation of Demmel-Kahan. Rotations are
 * applied to the columns of u (left) and v (right) when present.
 */
template <class T>
void bidiagonal_qr(std::vector<double>& d, std::vector<double>& e, ColMajor<T>* u, ColMajor<T>* v,
                   std::size_t sweep_cap)
{
    const std::size_t n = d.size();
    if (n < 2)
        return;
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        scale = std::max(scale, std::abs(d[i]));
    for (double x : e)
        scale = std::max(scale, std::abs(x));
    const double zero_tol = kEps * scale;

    std::size_t sweeps = 0;
    std::size_t hi = n - 1;
    while (hi > 0) {
        for (std::size_t i = 0; i < hi; ++i) {
            if (std::abs(e[i]) <= kEps * (std::abs(d[i]) + std::abs(d[i + 1])))
                e[i] = 0.0;
        }
        if (e[hi - 1] == 0.0) {
            --hi;
            continue;
        }
        std::size_t lo = hi - 1;
        while (lo > 0 && e[lo - 1] != 0.0)
            --lo;

        // A zero on the diagonal splits the block after chasing its
        // superdiagonal entry out with Givens rotations.
        bool chased = false;
        for (std::size_t i = lo; i <= hi; ++i) {
            if (std::abs(d[i]) > zero_tol)
                continue;
            d[i] = 0.0;
            if (i < hi) {
                double f = e[i];
                e[i] = 0.0;
                for (std::size_t j = i + 1; j <= hi; ++j) {
                    const double r = std::hypot(d[j], f);
                    const double c = d[j] / r, s = f / r;
                    d[j] = r;
                    if (u)
                        u->rotate(j, i, c, s);
                    if (j < hi) {
                        f = -s * e[j];
                        e[j] = c * e[j];
                    }
                }
            } else {
                double f = e[hi - 1];
                e[hi - 1] = 0.0;
                for (std::size_t j = hi; j-- > lo;) {
                    const double r = std::hypot(d[j], f);
                    const double c = d[j] / r, s = f / r;
                    d[j] = r;
                    if (v)
                        v->rotate(j, hi, c, s);
                    if (j > lo) {
                        f = -s * e[j - 1];
                        e[j - 1] = c * e[j - 1];
                    }
                }
            }
            chased = true;
            break;
        }
        if (chased)
            continue;

        if (++sweeps > sweep_cap)
            fail(ErrorCode::NonConverged, "svd: implicit-shift QR exceeded the sweep cap");

        // Wilkinson shift from the trailing 2x2 of B^T B.
        const double dm = d[hi - 1], dn = d[hi];
        const double em = hi - 1 > lo ? e[hi - 2] : 0.0;
        const double en = e[hi - 1];
        const double t11 = dm * dm + em * em;
        const double t12 = dm * en;
        const double t22 = dn * dn + en * en;
        const double delta = 0.5 * (t11 - t22);
        const double denom = delta + std::copysign(std::hypot(delta, t12), delta);
        const double mu = denom == 0.0 ? t22 : t22 - t12 * t12 / denom;

        double y = d[lo] * d[lo] - mu;
        double z = d[lo] * e[lo];
        for (std::size_t k = lo; k < hi; ++k) {
            double r = std::hypot(y, z);
            double c = r == 0.0 ? 1.0 : y / r, s = r == 0.0 ? 0.0 : z / r;
            if (k > lo)
                e[k - 1] = r;
            const double dk = d[k], ek = e[k];
            d[k] = c * dk + s * ek;
            e[k] = -s * dk + c * ek;
            const double bulge_low = s * d[k + 1];
            d[k + 1] *= c;
            if (v)
                v->rotate(k, k + 1, c, s);

            y = d[k];
            z = bulge_low;
            r = std::hypot(y, z);
            c = r == 0.0 ? 1.0 : y / r;
            s = r == 0.0 ? 0.0 : z / r;
            d[k] = r;
            const double ek2 = e[k], dk1 = d[k + 1];
            e[k] = c * ek2 + s * dk1;
            d[k + 1] = -s * ek2 + c * dk1;
            if (u)
                u->rotate(k, k + 1, c, s);
            if (k + 1 < hi) {
                y = e[k];
                z = s * e[k + 1];
                e[k + 1] *= c;
            }
        }
    }
}

template <class T>
SvdResult<T> svd_tall(const Matrix<T>& m, bool want_vectors)
{
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<T> w(rows * cols);  // column-major working copy
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            w[j * rows + i] = m(i, j);
    auto at = [&](std::size_t i, std::size_t j) -> T& { return w[j * rows + i]; };

    std::vector<double> d(cols, 0.0), e(cols > 1 ? cols - 1 : 0, 0.0);
    std::vector<T> tau_left(cols, T{}), tau_right(cols, T{});
    std::vector<T> row_buf(cols);
    std::vector<T> proj(rows);

    for (std::size_t k = 0; k < cols; ++k) {
        // Left reflector zeroes column k below the diagonal.
        std::span<T> colk(&at(k, k), rows - k);
        make_reflector(colk, tau_left[k], d[k]);
        const T lcoef = conj_s(tau_left[k]);
        if (lcoef != T{})
            for (std::size_t j = k + 1; j < cols; ++j)
                reflect<T>(colk, lcoef, std::span<T>(&at(k, j), rows - k));

        if (k + 1 < cols) {
            // Right reflector on row k, columns k+1.., stored conjugated in row k.
            const std::size_t len = cols - k - 1;
            std::span<T> x(row_buf.data(), len);
            for (std::size_t j = 0; j < len; ++j)
                x[j] = conj_s(at(k, k + 1 + j));
            make_reflector(x, tau_right[k], e[k]);
            const T t = tau_right[k];
            if (t != T{}) {
                // B(i, k+1:) <- B(i, k+1:) - tau (B v)_i v*
                const std::size_t r0 = k + 1;
                std::fill(proj.begin(), proj.end(), T{});
                for (std::size_t j = 0; j < len; ++j) {
                    const T vj = j == 0 ? T(1) : x[j];
                    const T* cj = &at(0, k + 1 + j);
                    for (std::size_t i = r0; i < rows; ++i)
                        proj[i] += cj[i] * vj;
                }
                for (std::size_t j = 0; j < len; ++j) {
                    const T vj = conj_s(j == 0 ? T(1) : x[j]) * t;
                    T* cj = &at(0, k + 1 + j);
                    for (std::size_t i = r0; i < rows; ++i)
                        cj[i] -= proj[i] * vj;
                }
            }
            for (std::size_t j = 1; j < len; ++j)
                at(k, k + 1 + j) = x[j];
        }
    }

    std::optional<ColMajor<T>> u, v;
    if (want_vectors) {
        u.emplace(rows, cols);
        for (std::size_t j = 0; j < cols; ++j)
            (*u)(j, j) = T(1);
        for (std::size_t k = cols; k-- > 0;) {
            if (tau_left[k] == T{})
                continue;
            std::span<const T> vk(&at(k, k), rows - k);
            for (std::size_t j = k; j < cols; ++j)
                reflect<T>(vk, tau_left[k], std::span<T>(u->col(j) + k, rows - k));
        }
        v.emplace(cols, cols);
        for (std::size_t j = 0; j < cols; ++j)
            (*v)(j, j) = T(1);
        std::vector<T> vk;
        for (std::size_t k = cols >= 2 ? cols - 1 : 0; k-- > 0;) {
            if (tau_right[k] == T{})
                continue;
            const std::size_t len = cols - k - 1;
            vk.assign(len, T(1));
            for (std::size_t j = 1; j < len; ++j)
                vk[j] = at(k, k + 1 + j);
            for (std::size_t j = k + 1; j < cols; ++j)
                reflect<T>(std::span<const T>(vk), tau_right[k], std::span<T>(v->col(j) + k + 1, len));
        }
    }

    bidiagonal_qr<T>(d, e, u ? &*u : nullptr, v ? &*v : nullptr, 100 * std::max(rows, cols));

    for (std::size_t j = 0; j < cols; ++j) {
        if (d[j] < 0.0) {
            d[j] = -d[j];
            if (v) {
                T* c = v->col(j);
                for (std::size_t i = 0; i < cols; ++i)
                    c[i] = -c[i];
            }
        }
    }
    std::vector<std::size_t> order(cols);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });

    SvdResult<T> out;
    out.singular_values.resize(cols);
    for (std::size_t j = 0; j < cols; ++j)
        out.singular_values[j] = d[order[j]];
    if (want_vectors) {
        out.u = Matrix<T>(rows, cols);
        out.v = Matrix<T>(cols, cols);
        for (std::size_t j = 0; j < cols; ++j) {
            const T* uc = u->col(order[j]);
            const T* vc = v->col(order[j]);
            for (std::size_t i = 0; i < rows; ++i)
                out.u(i, j) = uc[i];
            for (std::size_t i = 0; i < cols; ++i)
                out.v(i, j) = vc[i];
        }
    }
    return out;
}

}  // namespace

template <class T>
SvdResult<T> svd(const Matrix<T>& m, SvdVectors vectors)
{
    if (m.rows() < 1 || m.cols() < 1)
        fail(ErrorCode::InvalidArgument, "svd: empty matrix");
    check_finite_input(m.all_finite(), "svd");
    const bool want = vectors == SvdVectors::Thin;
    if (m.rows() >= m.cols())
        return svd_tall(m, want);
    // M* = V S U*, so factor the adjoint and swap the vector sets.
    auto t = svd_tall(m.adjoint(), want);
    std::swap(t.u, t.v);
    return t;
}

template <class T>
std::vector<double> singular_values(const Matrix<T>& m)
{
    return svd(m, SvdVectors::None).singular_values;
}

//---------------------------------------------------------------------------//
// LU
//---------------------------------------------------------------------------//

template <class T>
LuFactorization<T>::LuFactorization(const Matrix<T>& m, T shift, PivotPolicy policy) : n_(m.rows())
{
    if (m.rows() != m.cols())
        fail(ErrorCode::InvalidArgument, "lu: matrix must be square");
    check_finite_input(m.all_finite(), "lu");
    lu_.assign(m.data().begin(), m.data().end());
    for (std::size_t i = 0; i < n_; ++i)
        lu_[i * n_ + i] -= shift;
    perm_.resize(n_);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});

    double fro = 0.0;
    for (const T& x : lu_)
        fro += abs2(x);
    const double floor = kSingularPivotTol * std::sqrt(fro);

    for (std::size_t k = 0; k < n_; ++k) {
        std::size_t p = k;
        double best = abs2(lu_[k * n_ + k]);
        for (std::size_t i = k + 1; i < n_; ++i) {
            const double a = abs2(lu_[i * n_ + k]);
            if (a > best) {
                best = a;
                p = i;
            }
        }
        if (p != k) {
            std::swap_ranges(lu_.begin() + static_cast<std::ptrdiff_t>(k * n_),
                             lu_.begin() + static_cast<std::ptrdiff_t>((k + 1) * n_),
                             lu_.begin() + static_cast<std::ptrdiff_t>(p * n_));
            std::swap(perm_[k], perm_[p]);
        }
        T& pivot = lu_[k * n_ + k];
        if (!(std::sqrt(best) >= floor) || best == 0.0) {
            if (policy == PivotPolicy::Throw)
                fail(ErrorCode::SingularMatrix, "lu: pivot " + std::to_string(k) + " below singularity threshold");
            pivot = T(floor > 0.0 ? floor : std::numeric_limits<double>::min());
            perturbed_ = true;
        }
        const T inv = T(1) / pivot;
        const T* rk = lu_.data() + k * n_;
        for (std::size_t i = k + 1; i < n_; ++i) {
            T* ri = lu_.data() + i * n_;
            const T l = ri[k] * inv;
            ri[k] = l;
            if (l == T{})
                continue;
            for (std::size_t j = k + 1; j < n_; ++j)
                ri[j] -= l * rk[j];
        }
    }
}

template <class T>
void LuFactorization<T>::solve_in_place(std::span<T> b) const
{
    if (b.size() != n_)
        fail(ErrorCode::InvalidArgument, "lu solve: dimension mismatch");
    std::vector<T> y(n_);
    for (std::size_t i = 0; i < n_; ++i)
        y[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n_; ++i) {
        const T* ri = lu_.data() + i * n_;
        T s = y[i];
        for (std::size_t j = 0; j < i; ++j)
            s -= ri[j] * y[j];
        y[i] = s;
    }
    for (std::size_t i = n_; i-- > 0;) {
        const T* ri = lu_.data() + i * n_;
        T s = y[i];
        for (std::size_t j = i + 1; j < n_; ++j)
            s -= ri[j] * y[j];
        y[i] = s / ri[i];
    }
    std::copy(y.begin(), y.end(), b.begin());
}

template <class T>
std::vector<T> LuFactorization<T>::solve(std::span<const T> b) const
{
    std::vector<T> x(b.begin(), b.end());
    solve_in_place(x);
    return x;
}

template <class T>
std::vector<T> solve(const Matrix<T>& m, std::span<const T> b)
{
    return LuFactorization<T>(m).solve(b);
}

//---------------------------------------------------------------------------//
// Projections
//---------------------------------------------------------------------------//

template <class T>
std::vector<T> project_complement(const Matrix<T>& basis, std::span<const T> u)
{
    const std::size_t n = basis.rows(), k = basis.cols();
    if (u.size() != n)
        fail(ErrorCode::InvalidArgument, "project_complement: dimension mismatch");
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            T g{};
            for (std::size_t i = 0; i < n; ++i)
                g += conj_s(basis(i, a)) * basis(i, b);
            const double target = a == b ? 1.0 : 0.0;
            if (std::abs(g - T(target)) > 1e-10)
                fail(ErrorCode::InvalidArgument, "project_complement: basis columns are not orthonormal");
        }
    }
    std::vector<T> coeff(k, T{});
    for (std::size_t i = 0; i < n; ++i) {
        auto bi = basis.row(i);
        for (std::size_t a = 0; a < k; ++a)
            coeff[a] += conj_s(bi[a]) * u[i];
    }
    std::vector<T> out(u.begin(), u.end());
    for (std::size_t i = 0; i < n; ++i) {
        auto bi = basis.row(i);
        T s{};
        for (std::size_t a = 0; a < k; ++a)
            s += bi[a] * coeff[a];
        out[i] -= s;
    }
    return out;
}

template <class T>
std::vector<double> row_distances(const Matrix<T>& m, double rank_tol)
{
    const std::size_t rows = m.rows(), cols = m.cols();
    if (rows < 1 || rows > cols)
        fail(ErrorCode::InvalidArgument, "row_distances: requires 1 <= rows <= cols");
    auto full = HouseholderQr<T>::of_adjoint(m);
    if (!(full.min_r_diag() >= rank_tol * m.frobenius_norm()) || full.min_r_diag() == 0.0)
        fail(ErrorCode::RankDeficient, "row_distances: rows are linearly dependent");

    std::vector<double> d(rows);
    Matrix<T> others(rows - 1, cols);
    for (std::size_t j = 0; j < rows; ++j) {
        std::vector<T> target(cols);
        for (std::size_t c = 0; c < cols; ++c)
            target[c] = conj_s(m(j, c));
        if (rows == 1) {
            d[j] = norm2(target);
            continue;
        }
        for (std::size_t i = 0, r = 0; i < rows; ++i) {
            if (i == j)
                continue;
            std::copy(m.row(i).begin(), m.row(i).end(), others.row(r++).begin());
        }
        const Matrix<T> basis = HouseholderQr<T>::of_adjoint(others).thin_q();
        d[j] = norm2(project_complement<T>(basis, target));
    }
    return d;
}

template <class T>
NegSecondMoment neg_second_moment_check(const Matrix<T>& m, double rank_tol)
{
    const auto dist = row_distances(m, rank_tol);
    const auto sigma = singular_values(m);
    NegSecondMoment out;
    for (double s : sigma)
        out.lhs += 1.0 / (s * s);
    for (double x : dist)
        out.rhs += 1.0 / (x * x);
    return out;
}

#define HYPLAB_INSTANTIATE(T)                                                                     \
    template class HouseholderQr<T>;                                                              \
    template QrResult<T> qr_decompose<T>(const Matrix<T>&, QrMode);                               \
    template UnitVector<T> null_vector<T>(const Matrix<T>&, double);                              \
    template SvdResult<T> svd<T>(const Matrix<T>&, SvdVectors);                                   \
    template std::vector<double> singular_values<T>(const Matrix<T>&);                            \
    template class LuFactorization<T>;                                                            \
    template std::vector<T> solve<T>(const Matrix<T>&, std::span<const T>);                       \
    template std::vector<T> project_complement<T>(const Matrix<T>&, std::span<const T>);          \
    template std::vector<double> row_distances<T>(const Matrix<T>&, double);                      \
    template NegSecondMoment neg_second_moment_check<T>(const Matrix<T>&, double);

HYPLAB_INSTANTIATE(double)
HYPLAB_INSTANTIATE(cplx)
#undef HYPLAB_INSTANTIATE

}  // namespace hyplab::linalg
