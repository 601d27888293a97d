// Copyright 2026 The hyplab Authors
// SPDX-License-Identifier: Apache-2.0
#include "hyplab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>

#include <json.hpp>

#include "hyplab/errors.hpp"

namespace hyplab::rng {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo)
{
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key)
{
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : seed_(master_seed), stream_(stream_index)
{
}

std::uint64_t RngStream::next_u64()
{
    const std::uint64_t slot = words_ & 1u;
    if (slot == 0) {
        const std::uint64_t block = words_ >> 1;
        auto out = philox4x32_10(
            {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
             static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
            {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
        buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
        buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    }
    ++words_;
    return buffer_[slot];
}

double RngStream::next_uniform()
{
    return static_cast<double>(next_u64() >> 11) * kTwoPow53Inv;
}

double RngStream::next_uniform_pos()
{
    return static_cast<double>((next_u64() >> 11) + 1) * kTwoPow53Inv;
}

RngStream make_stream(std::uint64_t master_seed, std::uint64_t stream_index)
{
    return RngStream(master_seed, stream_index);
}

//---------------------------------------------------------------------------//
// DistSpec
//---------------------------------------------------------------------------//

DistSpec DistSpec::gaussian(Field field)
{
    DistSpec d;
    d.family_ = Family::Gaussian;
    d.field_ = field;
    d.k0_ = 2.0;
    return d;
}

DistSpec DistSpec::bernoulli(Field field)
{
    DistSpec d;
    d.family_ = Family::Bernoulli;
    d.field_ = field;
    d.k0_ = 1.0;
    return d;
}

DistSpec DistSpec::custom(std::vector<double> support, std::vector<double> weights, Field field,
                          std::string source_path)
{
    if (support.empty() || support.size() != weights.size())
        fail(ErrorCode::InvalidConfig, "custom law: support and weights must be non-empty and equal length");
    double total = 0.0, mean = 0.0, second = 0.0, max_abs = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (!std::isfinite(support[i]) || !std::isfinite(weights[i]) || weights[i] < 0.0)
            fail(ErrorCode::InvalidConfig, "custom law: non-finite support or negative weight");
        total += weights[i];
        mean += weights[i] * support[i];
        second += weights[i] * support[i] * support[i];
        max_abs = std::max(max_abs, std::abs(support[i]));
    }
    if (std::abs(total - 1.0) > 1e-12)
        fail(ErrorCode::InvalidConfig, "custom law: weights must sum to 1");
    if (std::abs(mean) > 1e-12)
        fail(ErrorCode::InvalidConfig, "custom law: mean must be 0");
    if (std::abs(second - 1.0) > 1e-12)
        fail(ErrorCode::InvalidConfig, "custom law: variance must be 1");

    DistSpec d;
    d.family_ = Family::Custom;
    d.field_ = field;
    // Bounded laws satisfy P(|xi| >= t) <= exp(-t^2/K0) beyond max|xi| for any K0.
    d.k0_ = std::max(1.0, max_abs * max_abs);
    d.support_ = std::move(support);
    d.weights_ = std::move(weights);
    d.cumulative_.resize(d.weights_.size());
    std::partial_sum(d.weights_.begin(), d.weights_.end(), d.cumulative_.begin());
    d.cumulative_.back() = 1.0;
    d.path_ = std::move(source_path);
    return d;
}

DistSpec DistSpec::from_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::Io, "cannot open custom law file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
        auto support = j.at("support").get<std::vector<double>>();
        auto weights = j.at("weights").get<std::vector<double>>();
        auto field_s = j.value("field", std::string("real"));
        Field field;
        if (field_s == "real")
            field = Field::Real;
        else if (field_s == "complex")
            field = Field::Complex;
        else
            fail(ErrorCode::InvalidConfig, "custom law '" + path + "': field must be real or complex");
        return custom(std::move(support), std::move(weights), field, path);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::InvalidConfig, "custom law '" + path + "': " + e.what());
    }
}

DistSpec DistSpec::parse(std::string_view token, Field default_field)
{
    auto colon = token.find(':');
    std::string_view family = token.substr(0, colon);
    std::string_view rest = colon == std::string_view::npos ? std::string_view{} : token.substr(colon + 1);

    if (family == "custom") {
        if (rest.empty())
            fail(ErrorCode::InvalidConfig, "custom law token needs a path: custom:<file.json>");
        return from_json_file(std::string(rest));
    }

    Field field = default_field;
    if (rest == "real")
        field = Field::Real;
    else if (rest == "complex")
        field = Field::Complex;
    else if (!rest.empty())
        fail(ErrorCode::InvalidConfig, "unknown field '" + std::string(rest) + "' in law token");

    if (family == "gaussian")
        return gaussian(field);
    if (family == "bernoulli")
        return bernoulli(field);
    fail(ErrorCode::InvalidConfig, "unknown law '" + std::string(family) + "'");
}

std::string DistSpec::token() const
{
    switch (family_) {
    case Family::Gaussian:
        return "gaussian:" + std::string(field_name(field_));
    case Family::Bernoulli:
        return "bernoulli:" + std::string(field_name(field_));
    case Family::Custom:
        return "custom:" + path_;
    }
    return {};
}

bool DistSpec::symmetric() const
{
    if (family_ != Family::Custom)
        return true;
    // Symmetric iff every atom s has a partner -s with the same weight.
    for (std::size_t i = 0; i < support_.size(); ++i) {
        double mirrored = 0.0, own = 0.0;
        for (std::size_t j = 0; j < support_.size(); ++j) {
            if (std::abs(support_[j] + support_[i]) <= 1e-12)
                mirrored += weights_[j];
            if (std::abs(support_[j] - support_[i]) <= 1e-12)
                own += weights_[j];
        }
        if (std::abs(mirrored - own) > 1e-12)
            return false;
    }
    return true;
}

DistSpec DistSpec::with_field(Field field) const
{
    DistSpec d = *this;
    d.field_ = field;
    return d;
}

bool DistSpec::operator==(const DistSpec& o) const
{
    return family_ == o.family_ && field_ == o.field_ && support_ == o.support_
           && weights_ == o.weights_ && path_ == o.path_;
}

//---------------------------------------------------------------------------//
// Samplers
//---------------------------------------------------------------------------//

double sample_std_normal(RngStream& s)
{
    const double u1 = s.next_uniform_pos();
    const double u2 = s.next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double sample_real_law(RngStream& s, const DistSpec& dist)
{
    switch (dist.family()) {
    case Family::Gaussian:
        return sample_std_normal(s);
    case Family::Bernoulli:
        return (s.next_u64() >> 63) ? 1.0 : -1.0;
    case Family::Custom: {
        const double u = s.next_uniform();
        const auto& w = dist.weights();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            acc += w[i];
            if (u < acc)
                return dist.support()[i];
        }
        return dist.support().back();
    }
    }
    return 0.0;
}

template <class T>
T sample_scalar(RngStream& s, const DistSpec& dist)
{
    if (dist.field() != field_of<T>)
        fail(ErrorCode::InvalidArgument, "law field does not match the requested scalar type");
    if constexpr (is_complex_v<T>) {
        const double a = sample_real_law(s, dist);
        const double b = sample_real_law(s, dist);
        return cplx(a, b) * (1.0 / std::numbers::sqrt2);
    } else {
        return sample_real_law(s, dist);
    }
}

template <class T>
Matrix<T> sample_matrix(RngStream& s, std::size_t rows, std::size_t cols, const DistSpec& dist)
{
    if (rows < 1 || cols < 1)
        fail(ErrorCode::InvalidArgument, "sample_matrix: rows and cols must be >= 1");
    Matrix<T> m(rows, cols);
    for (T& x : m.data())
        x = sample_scalar<T>(s, dist);
    return m;
}

template <class T>
std::vector<T> sample_vector(RngStream& s, std::size_t n, const DistSpec& dist)
{
    std::vector<T> v(n);
    for (T& x : v)
        x = sample_scalar<T>(s, dist);
    return v;
}

template <class T>
T sample_unit_phase(RngStream& s)
{
    if constexpr (is_complex_v<T>) {
        const double theta = 2.0 * std::numbers::pi * s.next_uniform();
        return cplx(std::cos(theta), std::sin(theta));
    } else {
        return (s.next_u64() >> 63) ? 1.0 : -1.0;
    }
}

template <class T>
UnitVector<T> sample_sphere_uniform(RngStream& s, std::size_t n)
{
    if (n < 1)
        fail(ErrorCode::InvalidArgument, "sample_sphere_uniform: n must be >= 1");
    const DistSpec g = DistSpec::gaussian(field_of<T>);
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::vector<T> x = sample_vector<T>(s, n, g);
        const double norm = norm2(x);
        if (norm > 0.0) {
            for (T& v : x)
                v /= norm;
            return {std::move(x), PhaseMode::Haar};
        }
    }
    fail(ErrorCode::InvalidArgument, "sample_sphere_uniform: zero gaussian vector twice; generator is broken");
}

#define HYPLAB_INSTANTIATE(T)                                                                    \
    template T sample_scalar<T>(RngStream&, const DistSpec&);                                    \
    template Matrix<T> sample_matrix<T>(RngStream&, std::size_t, std::size_t, const DistSpec&); \
    template std::vector<T> sample_vector<T>(RngStream&, std::size_t, const DistSpec&);          \
    template T sample_unit_phase<T>(RngStream&);                                                 \
    template UnitVector<T> sample_sphere_uniform<T>(RngStream&, std::size_t);

HYPLAB_INSTANTIATE(double)
HYPLAB_INSTANTIATE(cplx)
#undef HYPLAB_INSTANTIATE

}  // namespace hyplab::rng
