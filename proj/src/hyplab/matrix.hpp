// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "hyplab/errors.hpp"
#include "hyplab/scalar.hpp"

namespace hyplab {

/// Dense row-major matrix over double or std::complex<double>.
template <class T>
class Matrix {
  public:
    using value_type = T;

    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, T{})
    {
    }
    Matrix(std::initializer_list<std::initializer_list<T>> init);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    static constexpr Field field() noexcept { return field_of<T>; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::vector<T> column(std::size_t j) const;

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    Matrix adjoint() const;
    double frobenius_norm() const;
    bool all_finite() const;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <class T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<T>> init)
    : rows_(init.size()), cols_(init.size() ? init.begin()->size() : 0)
{
    data_.reserve(rows_ * cols_);
    for (const auto& r : init) {
        if (r.size() != cols_)
            fail(ErrorCode::InvalidArgument, "ragged matrix initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

template <class T>
Matrix<T> Matrix<T>::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = T(1);
    return m;
}

template <class T>
std::vector<T> Matrix<T>::column(std::size_t j) const
{
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        c[i] = (*this)(i, j);
    return c;
}

template <class T>
Matrix<T> Matrix<T>::adjoint() const
{
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out(j, i) = conj_s((*this)(i, j));
    return out;
}

template <class T>
double Matrix<T>::frobenius_norm() const
{
    // Scaled accumulation is unnecessary at the magnitudes sampled here.
    double s = 0.0;
    for (const T& x : data_)
        s += abs2(x);
    return std::sqrt(s);
}

template <class T>
bool Matrix<T>::all_finite() const
{
    for (const T& x : data_)
        if (!std::isfinite(re(x)) || !std::isfinite(im(x)))
            return false;
    return true;
}

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b)
{
    if (a.cols() != b.rows())
        fail(ErrorCode::InvalidArgument, "matrix product dimension mismatch");
    Matrix<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T aik = a(i, k);
            auto bk = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j)
                ci[j] += aik * bk[j];
        }
    }
    return c;
}

template <class T>
std::vector<T> operator*(const Matrix<T>& a, std::span<const T> x)
{
    if (a.cols() != x.size())
        fail(ErrorCode::InvalidArgument, "matrix-vector dimension mismatch");
    std::vector<T> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ai = a.row(i);
        T s{};
        for (std::size_t j = 0; j < x.size(); ++j)
            s += ai[j] * x[j];
        y[i] = s;
    }
    return y;
}

template <class T>
std::vector<T> operator*(const Matrix<T>& a, const std::vector<T>& x)
{
    return a * std::span<const T>(x);
}

//---------------------------------------------------------------------------//
// Vector helpers
//---------------------------------------------------------------------------//

/// x* y (conjugate-linear in the first argument).
template <class T>
T dot(std::span<const T> x, std::span<const T> y)
{
    T s{};
    for (std::size_t i = 0; i < x.size(); ++i)
        s += conj_s(x[i]) * y[i];
    return s;
}

template <class T>
double norm2(std::span<const T> x)
{
    double s = 0.0;
    for (const T& v : x)
        s += abs2(v);
    return std::sqrt(s);
}

template <class T>
double norm2(const std::vector<T>& x)
{
    return norm2(std::span<const T>(x));
}

/// Format one scalar the way the CSV dumps do: `a` or `a+bi`.
std::string format_scalar(double x);
std::string format_scalar(const cplx& z);

/// One row per line, comma separated, 17 significant digits.
template <class T>
void write_csv(std::ostream& os, const Matrix<T>& m)
{
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j)
                os << ',';
            os << format_scalar(m(i, j));
        }
        os << '\n';
    }
}

template <class T>
void write_csv(std::ostream& os, std::span<const T> v)
{
    for (const T& x : v)
        os << format_scalar(x) << '\n';
}

}  // namespace hyplab
