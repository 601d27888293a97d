// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <string_view>
#include <type_traits>

namespace hyplab {

using cplx = std::complex<double>;

enum class Field { Real, Complex };

std::string_view field_name(Field f);

template <class T>
inline constexpr bool is_complex_v = std::is_same_v<T, cplx>;

template <class T>
inline constexpr Field field_of = is_complex_v<T> ? Field::Complex : Field::Real;

// std::conj(double) promotes to complex; these keep the scalar type.
inline double conj_s(double x) { return x; }
inline cplx conj_s(const cplx& z) { return std::conj(z); }

inline double abs2(double x) { return x * x; }
inline double abs2(const cplx& z) { return z.real() * z.real() + z.imag() * z.imag(); }

inline double re(double x) { return x; }
inline double re(const cplx& z) { return z.real(); }
inline double im(double) { return 0.0; }
inline double im(const cplx& z) { return z.imag(); }

/// Unit-modulus factor of x (sign for reals); 1 for x == 0.
inline double phase_of(double x) { return x < 0.0 ? -1.0 : 1.0; }
inline cplx phase_of(const cplx& z)
{
    double a = std::abs(z);
    return a == 0.0 ? cplx(1.0, 0.0) : z / a;
}

template <class T>
T from_complex(const cplx& z)
{
    if constexpr (is_complex_v<T>)
        return z;
    else
        return z.real();
}

}  // namespace hyplab
