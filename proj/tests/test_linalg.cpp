// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "hyplab/errors.hpp"
#include "hyplab/linalg.hpp"
#include "oracles.hpp"

using namespace hyplab;
using namespace hyplab::linalg;

namespace {

template <class T>
Matrix<T> to_matrix(const oracle::Grid<T>& g)
{
    Matrix<T> m(g.size(), g[0].size());
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g[0].size(); ++j)
            m(i, j) = g[i][j];
    return m;
}

template <class T>
oracle::Grid<T> to_grid(const Matrix<T>& m)
{
    oracle::Grid<T> g(m.rows(), std::vector<T>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            g[i][j] = m(i, j);
    return g;
}

template <class T>
double max_abs_diff(const Matrix<T>& a, const Matrix<T>& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

template <class T>
double orthonormality_defect(const Matrix<T>& q)
{
    auto g = q.adjoint() * q;
    return max_abs_diff(g, Matrix<T>::identity(q.cols()));
}

}  // namespace

TEST_CASE_TEMPLATE("thin and full QR reconstruct the input", T, double, cplx)
{
    std::mt19937_64 gen(1);
    for (auto [r, c] : {std::pair{7, 4}, std::pair{12, 12}, std::pair{30, 9}}) {
        auto a = to_matrix(oracle::random_grid<T>(r, c, gen));
        auto thin = qr_decompose(a, QrMode::Thin);
        CHECK(max_abs_diff(thin.q * thin.r, a) <= 1e-12 * a.frobenius_norm());
        CHECK(orthonormality_defect(thin.q) <= 1e-13);
        for (std::size_t i = 0; i < thin.r.rows(); ++i) {
            CHECK(im(thin.r(i, i)) == 0.0);
            CHECK(re(thin.r(i, i)) >= 0.0);
            for (std::size_t j = 0; j < i; ++j)
                CHECK(thin.r(i, j) == T{});
        }
        auto full = qr_decompose(a, QrMode::Full);
        CHECK(full.q.cols() == std::size_t(r));
        CHECK(orthonormality_defect(full.q) <= 1e-13);
        CHECK(max_abs_diff(full.q * full.r, a) <= 1e-12 * a.frobenius_norm());
    }
}

TEST_CASE_TEMPLATE("null vector is a unit normal and rank loss is reported", T, double, cplx)
{
    std::mt19937_64 gen(2);
    for (int n : {2, 5, 40}) {
        auto a = to_matrix(oracle::random_grid<T>(n - 1, n, gen));
        auto x = null_vector(a);
        CHECK(norm2(x.entries) == doctest::Approx(1.0).epsilon(1e-14));
        for (int i = 0; i < n - 1; ++i) {
            T dot{};
            for (int j = 0; j < n; ++j)
                dot += a(i, j) * x[j];
            CHECK(std::abs(dot) <= 1e-12 * a.frobenius_norm());
        }
    }
    auto a = to_matrix(oracle::random_grid<T>(4, 5, gen));
    for (int j = 0; j < 5; ++j)
        a(3, j) = a(0, j) * T(2.0) - a(1, j);
    CHECK_THROWS_WITH_AS(null_vector(a), doctest::Contains(""), Error);
    try {
        null_vector(a);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RankDeficient);
    }
}

TEST_CASE("singular values match Jacobi eigenvalues of the Gram matrix")
{
    std::mt19937_64 gen(3);
    for (auto [r, c] : {std::pair{6, 6}, std::pair{9, 5}, std::pair{4, 11}}) {
        auto g = oracle::random_grid<double>(r, c, gen);
        // Gram of the smaller side: eigenvalues are sigma^2.
        oracle::Grid<double> gram;
        const std::size_t k = std::min(r, c);
        gram.assign(k, std::vector<double>(k, 0.0));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                for (int l = 0; l < std::max(r, c); ++l)
                    gram[i][j] += r >= c ? g[l][i] * g[l][j] : g[i][l] * g[j][l];
        auto ev = oracle::jacobi_eigenvalues(gram);
        auto sv = singular_values(to_matrix(g));
        REQUIRE(sv.size() == k);
        for (std::size_t i = 0; i < k; ++i)
            CHECK(sv[i] == doctest::Approx(std::sqrt(ev[k - 1 - i])).epsilon(1e-11));
    }
}

TEST_CASE_TEMPLATE("SVD reconstructs the input", T, double, cplx)
{
    std::mt19937_64 gen(4);
    for (auto [r, c] : {std::pair{8, 8}, std::pair{15, 6}, std::pair{5, 13}}) {
        auto a = to_matrix(oracle::random_grid<T>(r, c, gen));
        auto s = svd(a);
        const std::size_t k = s.singular_values.size();
        CHECK(std::is_sorted(s.singular_values.rbegin(), s.singular_values.rend()));
        Matrix<T> us = s.u;
        for (std::size_t i = 0; i < us.rows(); ++i)
            for (std::size_t j = 0; j < k; ++j)
                us(i, j) *= s.singular_values[j];
        CHECK(max_abs_diff(us * s.v.adjoint(), a) <= 1e-12 * a.frobenius_norm());
        CHECK(orthonormality_defect(s.u) <= 1e-12);
        CHECK(orthonormality_defect(s.v) <= 1e-12);
    }
    // Diagonal input: singular values are the sorted absolute entries.
    Matrix<T> d(3, 3);
    d(0, 0) = T(-2.0);
    d(1, 1) = T(5.0);
    d(2, 2) = T(0.5);
    auto sv = singular_values(d);
    CHECK(sv[0] == doctest::Approx(5.0));
    CHECK(sv[1] == doctest::Approx(2.0));
    CHECK(sv[2] == doctest::Approx(0.5));
}

TEST_CASE_TEMPLATE("LU solves and honours the pivot policy", T, double, cplx)
{
    std::mt19937_64 gen(5);
    auto a = to_matrix(oracle::random_grid<T>(10, 10, gen));
    std::vector<T> x(10);
    for (std::size_t i = 0; i < 10; ++i)
        x[i] = T(double(i) - 4.5);
    std::vector<T> b(10, T{});
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 10; ++j)
            b[i] += a(i, j) * x[j];
    auto got = solve<T>(a, b);
    for (std::size_t i = 0; i < 10; ++i)
        CHECK(std::abs(got[i] - x[i]) <= 1e-10);

    // Shifted factorization solves (A - s I) y = b.
    const T shift = T(0.75);
    auto y = LuFactorization<T>(a, shift).solve(b);
    for (std::size_t i = 0; i < 10; ++i) {
        T s = -shift * y[i];
        for (std::size_t j = 0; j < 10; ++j)
            s += a(i, j) * y[j];
        CHECK(std::abs(s - b[i]) <= 1e-10);
    }

    Matrix<T> sing(3, 3);
    sing(0, 0) = T(1.0);
    sing(1, 1) = T(1.0);
    CHECK_THROWS_AS(LuFactorization<T>{sing}, Error);
    LuFactorization<T> lu(sing, T{}, PivotPolicy::Perturb);
    CHECK(lu.perturbed());
    std::vector<T> e3{T{}, T{}, T(1.0)};
    auto big = lu.solve(e3);
    CHECK(std::abs(big[2]) > 1e12);
}

TEST_CASE_TEMPLATE("row distances agree with Gram determinant ratios", T, double, cplx)
{
    std::mt19937_64 gen(6);
    for (auto [r, c] : {std::pair{1, 4}, std::pair{4, 7}, std::pair{6, 6}}) {
        auto g = oracle::random_grid<T>(r, c, gen);
        auto d = row_distances(to_matrix(g));
        std::vector<std::size_t> all(r);
        std::iota(all.begin(), all.end(), std::size_t{0});
        const double det_all = std::abs(oracle::determinant(oracle::gram_rows(g, all)));
        for (int j = 0; j < r; ++j) {
            std::vector<std::size_t> rest;
            for (int i = 0; i < r; ++i)
                if (i != j)
                    rest.push_back(i);
            const double det_rest = rest.empty() ? 1.0 : std::abs(oracle::determinant(oracle::gram_rows(g, rest)));
            CHECK(d[j] == doctest::Approx(std::sqrt(det_all / det_rest)).epsilon(1e-10));
        }
    }
    Matrix<T> dep(2, 3);
    dep(0, 0) = T(1.0);
    dep(1, 0) = T(2.0);
    CHECK_THROWS_AS(row_distances(dep), Error);
    CHECK_THROWS_AS(row_distances(Matrix<T>(4, 3)), Error);
}

TEST_CASE_TEMPLATE("negative second moment identity holds on random matrices", T, double, cplx)
{
    std::mt19937_64 gen(7);
    for (auto [r, c] : {std::pair{3, 5}, std::pair{10, 15}, std::pair{12, 12}}) {
        auto m = to_matrix(oracle::random_grid<T>(r, c, gen));
        auto nsm = neg_second_moment_check(m);
        CHECK(nsm.relative_gap() <= 1e-10);
        // Independent left side from Jacobi eigenvalues of the real Gram (real case).
        if constexpr (std::is_same_v<T, double>) {
            auto g = to_grid(m);
            oracle::Grid<double> gram(r, std::vector<double>(r, 0.0));
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < r; ++j)
                    for (int l = 0; l < c; ++l)
                        gram[i][j] += g[i][l] * g[j][l];
            double lhs = 0.0;
            for (double ev : oracle::jacobi_eigenvalues(gram))
                lhs += 1.0 / ev;
            CHECK(nsm.lhs == doctest::Approx(lhs).epsilon(1e-10));
        }
    }
}

TEST_CASE_TEMPLATE("complement projection removes the span", T, double, cplx)
{
    std::mt19937_64 gen(8);
    auto a = to_matrix(oracle::random_grid<T>(9, 3, gen));
    auto basis = qr_decompose(a).q;
    auto u = oracle::random_grid<T>(1, 9, gen)[0];
    auto p = project_complement<T>(basis, u);
    for (std::size_t k = 0; k < 3; ++k) {
        T dot{};
        for (std::size_t i = 0; i < 9; ++i)
            dot += conj_s(basis(i, k)) * p[i];
        CHECK(std::abs(dot) <= 1e-13);
    }
    HouseholderQr<T> qr(a);
    auto p2 = qr.complement_projection(u);
    for (std::size_t i = 0; i < 9; ++i)
        CHECK(std::abs(p[i] - p2[i]) <= 1e-13);
    CHECK_THROWS_AS(project_complement<T>(a, u), Error);  // not orthonormal
}

TEST_CASE("non-finite input is rejected")
{
    Matrix<double> m(3, 3);
    m(1, 1) = std::nan("");
    CHECK_THROWS_AS(singular_values(m), Error);
    CHECK_THROWS_AS(LuFactorization<double>{m}, Error);
}
