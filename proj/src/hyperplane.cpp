// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyplab/hyperplane.hpp"

#include <cmath>

#include "hyplab/errors.hpp"

namespace hyplab::hyperplane {

template <class T>
UnitVector<T> canonicalize(UnitVector<T> x)
{
    double largest = 0.0;
    for (const T& v : x.entries)
        largest = std::max(largest, std::abs(v));
    std::size_t pick = 0;
    for (std::size_t i = 0; i < x.n(); ++i) {
        if (std::abs(x.entries[i]) >= largest * (1.0 - 1e-12)) {
            pick = i;
            break;
        }
    }
    if (largest > 0.0) {
        const T rot = conj_s(phase_of(x.entries[pick]));
        for (T& v : x.entries)
            v *= rot;
        x.entries[pick] = T(std::abs(x.entries[pick]));
    }
    x.phase_mode = PhaseMode::Canonical;
    return x;
}

template <class T>
UnitVector<T> apply_haar_phase(UnitVector<T> x, rng::RngStream& stream)
{
    const T phase = rng::sample_unit_phase<T>(stream);
    for (T& v : x.entries)
        v *= phase;
    x.phase_mode = PhaseMode::Haar;
    return x;
}

template <class T>
UnitVector<T> normal_vector(const Matrix<T>& a, PhaseMode mode, rng::RngStream* stream, double rank_tol)
{
    if (mode == PhaseMode::Haar && stream == nullptr)
        fail(ErrorCode::MissingStream, "normal_vector: Haar phase requires a stream");
    UnitVector<T> x = linalg::null_vector(a, rank_tol);
    switch (mode) {
    case PhaseMode::Haar:
        return apply_haar_phase(std::move(x), *stream);
    case PhaseMode::Canonical:
        return canonicalize(std::move(x));
    case PhaseMode::Raw:
        break;
    }
    return x;
}

template <class T>
double sup_norm_statistic(const UnitVector<T>& x)
{
    const std::size_t n = x.n();
    if (n < 3)
        fail(ErrorCode::InvalidArgument, "sup_norm_statistic: requires n >= 3");
    double m = 0.0;
    for (const T& v : x.entries)
        m = std::max(m, std::abs(v));
    const double dn = static_cast<double>(n);
    return m * std::sqrt(dn / std::log(dn));
}

template <class T>
double min_coord_statistic(const UnitVector<T>& x)
{
    if (x.n() < 1)
        fail(ErrorCode::InvalidArgument, "min_coord_statistic: empty vector");
    double m = std::abs(x.entries[0]);
    for (const T& v : x.entries)
        m = std::min(m, std::abs(v));
    return m * std::pow(static_cast<double>(x.n()), 1.5);
}

template <class T>
T inner_product_statistic(const UnitVector<T>& x, const UnitVector<T>& u)
{
    if (x.n() != u.n())
        fail(ErrorCode::InvalidArgument, "inner_product_statistic: dimension mismatch");
    if (std::abs(norm2(u.span()) - 1.0) > 1e-12)
        fail(ErrorCode::InvalidArgument, "inner_product_statistic: u must have unit norm");
    return std::sqrt(static_cast<double>(x.n())) * dot<T>(x.span(), u.span());
}

#define HYPLAB_INSTANTIATE(T)                                                                     \
    template UnitVector<T> canonicalize<T>(UnitVector<T>);                                        \
    template UnitVector<T> apply_haar_phase<T>(UnitVector<T>, rng::RngStream&);                   \
    template UnitVector<T> normal_vector<T>(const Matrix<T>&, PhaseMode, rng::RngStream*, double); \
    template double sup_norm_statistic<T>(const UnitVector<T>&);                                  \
    template double min_coord_statistic<T>(const UnitVector<T>&);                                 \
    template T inner_product_statistic<T>(const UnitVector<T>&, const UnitVector<T>&);

HYPLAB_INSTANTIATE(double)
HYPLAB_INSTANTIATE(cplx)
#undef HYPLAB_INSTANTIATE

}  // namespace hyplab::hyperplane
