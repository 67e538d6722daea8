#pragma once

// Polar code construction over the binary erasure channel: Bhattacharyya
// parameter recursion, reliability ordering, information/frozen set
// selection, and the n x n transform (encode works in place and never
// materializes the matrix).

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "pkcpc/gf2.hpp"

namespace pkcpc::polar {

// Scaling exponent used in the finite-length rate backoff for the BEC.
inline constexpr double kBecScalingExponent = 3.627;

enum class ChannelKind { bec };

struct ChannelSpec {
    ChannelKind kind = ChannelKind::bec;
    double epsilon = 0.5;             // erasure probability
    double mu = kBecScalingExponent;  // scaling exponent

    static ChannelSpec bec(double epsilon, double mu = kBecScalingExponent);

    double capacity() const { return 1.0 - epsilon; }
    double bhattacharyya_init() const { return epsilon; }
};

// Per-index Bhattacharyya parameters for block length n, natural log domain.
// Block layout: entry i of the first half of each doubling step carries the
// degraded branch, the second half the upgraded branch.
std::vector<double> bhattacharyya_log(const ChannelSpec& spec, std::size_t n);

// Same values in the linear domain (exp of the log values; underflows to 0
// for very reliable indices, which is why ordering uses the log values).
std::vector<double> bhattacharyya_recursion(const ChannelSpec& spec, std::size_t n);

// Indices 0..n-1 sorted by ascending Bhattacharyya value; ties keep the
// lower index first (stable).
std::vector<std::uint32_t> reliability_permutation(std::span<const double> z_log);

struct RateLimit {
    double r0;       // capacity minus n^(-1/mu), clamped at 0
    std::size_t k0;  // floor(n * r0)
};

RateLimit max_rate_r0(const ChannelSpec& spec, std::size_t n);

struct DfrBound {
    double raw;      // sum of the information-set Bhattacharyya values
    double clamped;  // raw clamped to [0, 1]
};

DfrBound dfr_bound(std::span<const double> z_log, std::span<const std::uint32_t> info_set);

struct GeneratorSlices {
    gf2::BitMatrix g_info;          // k x n rows of the transform at the info set
    gf2::BitMatrix g_frozen;        // (n-k) x n rows at the frozen set
    gf2::BitMatrix parity_check_t;  // n x (n-k): transform columns at the frozen set
};

// Shared cache of the 2^m x 2^m transform matrices.
std::shared_ptr<const gf2::BitMatrix> transform_matrix(unsigned m);

// Self-inverse in-place butterfly; x -> x * G_n.
void polar_transform_inplace(gf2::BitVector& x);
gf2::BitVector polar_transform(const gf2::BitVector& x);

class PolarCode {
public:
    PolarCode() = default;  // empty placeholder; n() == 0 until assigned

    // Default info set: the k most reliable indices.  An override replaces
    // the selection (sorted, duplicate-free, size k).
    static PolarCode build(const ChannelSpec& spec, std::size_t n, std::size_t k,
                           std::optional<std::vector<std::uint32_t>> info_override = {});

    std::size_t n() const { return n_; }
    std::size_t k() const { return info_set_.size(); }
    unsigned m() const { return m_; }
    const ChannelSpec& channel() const { return spec_; }

    std::span<const double> z_log() const { return z_log_; }
    std::span<const std::uint32_t> reliability_order() const { return pi_; }
    std::span<const std::uint32_t> info_set() const { return info_set_; }
    std::span<const std::uint32_t> frozen_set() const { return frozen_set_; }

    DfrBound dfr_bound() const { return polar::dfr_bound(z_log_, info_set_); }

    // Scatter info/frozen bits into u and apply the transform.
    gf2::BitVector encode(const gf2::BitVector& info_bits,
                          const gf2::BitVector& frozen_bits) const;

    // Scatter only (u-domain vector, no transform).
    gf2::BitVector scatter(const gf2::BitVector& info_bits,
                           const gf2::BitVector& frozen_bits) const;

    GeneratorSlices generator_slices() const;

private:
    std::size_t n_ = 0;
    unsigned m_ = 0;
    ChannelSpec spec_;
    std::vector<double> z_log_;
    std::vector<std::uint32_t> pi_;
    std::vector<std::uint32_t> info_set_;
    std::vector<std::uint32_t> frozen_set_;
};

} // namespace pkcpc::polar
