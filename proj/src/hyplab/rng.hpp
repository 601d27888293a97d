// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "hyplab/matrix.hpp"
#include "hyplab/scalar.hpp"
#include "hyplab/unit_vector.hpp"

namespace hyplab::rng {

//---------------------------------------------------------------------------//
/*!
 * Philox4x32-10 counter-based generator.
 *
 * The 128-bit counter is (block ordinal, stream index) and the 64-bit key is
 * the master seed, so every (seed, stream, word ordinal) triple maps to a
 * fixed output without any sequential state. Each block yields two 64-bit
 * words, consumed low word first.
 */
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key);

class RngStream {
  public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits; one word.
    double next_uniform();
    /// Uniform on (0, 1]; one word.
    double next_uniform_pos();

    std::uint64_t master_seed() const noexcept { return seed_; }
    std::uint64_t stream_index() const noexcept { return stream_; }
    std::uint64_t words_consumed() const noexcept { return words_; }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t words_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
};

RngStream make_stream(std::uint64_t master_seed, std::uint64_t stream_index);

//---------------------------------------------------------------------------//
// Scalar laws
//---------------------------------------------------------------------------//

enum class Family { Gaussian, Bernoulli, Custom };

/*!
 * A normalized (mean 0, variance 1) scalar law.
 *
 * Complex laws are (r1 + i r2)/sqrt(2) with r1, r2 iid draws of the real
 * law. Custom laws are finite discrete distributions whose mean and variance
 * are checked to 1e-12 at construction. The sub-gaussian parameter is
 * carried as metadata and never affects sampling.
 */
class DistSpec {
  public:
    static DistSpec gaussian(Field field);
    static DistSpec bernoulli(Field field);
    static DistSpec custom(std::vector<double> support, std::vector<double> weights,
                           Field field, std::string source_path = {});

    /// Parse `gaussian:real`, `bernoulli:complex`, `custom:<path>`. A token
    /// without a field suffix (`gaussian`) takes `default_field`.
    static DistSpec parse(std::string_view token, Field default_field = Field::Real);
    static DistSpec from_json_file(const std::string& path);

    std::string token() const;

    Family family() const noexcept { return family_; }
    Field field() const noexcept { return field_; }
    double subgauss_k0() const noexcept { return k0_; }
    bool symmetric() const;
    const std::vector<double>& support() const noexcept { return support_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    /// Same law over another field (custom laws keep their support).
    DistSpec with_field(Field field) const;

    bool operator==(const DistSpec& o) const;

  private:
    Family family_ = Family::Gaussian;
    Field field_ = Field::Real;
    double k0_ = 2.0;
    std::vector<double> support_;
    std::vector<double> weights_;
    std::vector<double> cumulative_;
    std::string path_;
};

/// Standard normal via Box-Muller (cosine branch only); two words per draw.
double sample_std_normal(RngStream& s);

/// One draw of the real law underlying `dist` (ignores dist.field()).
double sample_real_law(RngStream& s, const DistSpec& dist);

/// One draw of the normalized law. Word usage per draw: gaussian 2,
/// bernoulli 1, custom 1; complex draws use twice that (real part first).
template <class T>
T sample_scalar(RngStream& s, const DistSpec& dist);

/// Row-major fill: entry (i, j) is draw ordinal i*cols + j.
template <class T>
Matrix<T> sample_matrix(RngStream& s, std::size_t rows, std::size_t cols, const DistSpec& dist);

template <class T>
std::vector<T> sample_vector(RngStream& s, std::size_t n, const DistSpec& dist);

/// Uniform unit-modulus factor: random sign (one word) or e^{i theta} (one word).
template <class T>
T sample_unit_phase(RngStream& s);

/// Uniform point of the unit sphere of F^n, built as (g_1/S, ..., g_n/S).
template <class T>
UnitVector<T> sample_sphere_uniform(RngStream& s, std::size_t n);

}  // namespace hyplab::rng
