#include "pkcpc/scdec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "pkcpc/polar.hpp"

namespace pkcpc::scdec {

double minsum_f(double a, double b) {
    double sign = ((a < 0.0) != (b < 0.0)) ? -1.0 : 1.0;
    return sign * std::min(std::fabs(a), std::fabs(b));
}

double minsum_g(double a, double b, bool u) {
    double out = u ? b - a : b + a;
    return std::clamp(out, -kLlrSaturation, kLlrSaturation);
}

LlrVector init_llr_from_hard(const gf2::BitVector& hard, std::size_t t) {
    std::size_t n = hard.size();
    if (t < 1 || 2 * t >= n)
        throw ParameterError("error weight must satisfy 1 <= t < n/2");
    double base = std::log(static_cast<double>(n - t) / static_cast<double>(t));
    LlrVector llr;
    llr.values.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        llr.values[i] = hard.get(i) ? -base : base;
    return llr;
}

ScDecoder::ScDecoder(std::size_t n) : n_(n) {
    if (n < 2 || n > (std::size_t{1} << 16) || !std::has_single_bit(n))
        throw ParameterError("block length must be a power of two in [2, 65536]");
    m_ = static_cast<unsigned>(std::countr_zero(n));
    bitrev_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t r = 0;
        for (unsigned b = 0; b < m_; ++b)
            if (i & (std::size_t{1} << b))
                r |= std::uint32_t{1} << (m_ - 1 - b);
        bitrev_[i] = r;
    }
    llr_.resize(static_cast<std::size_t>(m_ + 1) * n);
    bits_.resize(static_cast<std::size_t>(m_ + 1) * n);
    frozen_mask_.resize(n);
    frozen_value_.resize(n);
}

DecodeResult ScDecoder::decode(const LlrVector& llr,
                               std::span<const std::uint32_t> info_set,
                               const gf2::BitVector& frozen_values) {
    if (llr.size() != n_)
        throw ParameterError("LLR vector length does not match block length");
    for (std::size_t i = 0; i < info_set.size(); ++i) {
        if (info_set[i] >= n_)
            throw ParameterError("information-set index out of range");
        if (i > 0 && info_set[i] <= info_set[i - 1])
            throw ParameterError("information set must be sorted and duplicate-free");
    }
    if (frozen_values.size() != n_ - info_set.size())
        throw ParameterError("frozen word has wrong length");

    // Natural-order frozen mask/values, then reindex into schedule order.
    std::vector<std::uint8_t> mask_nat(n_, 1), value_nat(n_, 0);
    for (std::uint32_t i : info_set)
        mask_nat[i] = 0;
    std::size_t next = 0;
    for (std::size_t i = 0; i < n_; ++i)
        if (mask_nat[i])
            value_nat[i] = frozen_values.get(next++);
    for (std::size_t i = 0; i < n_; ++i) {
        frozen_mask_[i] = mask_nat[bitrev_[i]];
        frozen_value_[i] = value_nat[bitrev_[i]];
        llr_[i] = llr.values[bitrev_[i]];
    }

    fg_count_ = 0;
    recurse(0, 0);

    DecodeResult result;
    result.u_hat = gf2::BitVector(n_);
    for (std::size_t i = 0; i < n_; ++i)
        if (bits_[static_cast<std::size_t>(m_) * n_ + bitrev_[i]])
            result.u_hat.set(i, true);
    result.x_hat = polar::polar_transform(result.u_hat);
    for (std::size_t i = 0; i < n_; ++i) {
        bool hard = llr.values[i] < 0.0;  // tie (exactly 0) reads as bit 0
        if (hard != result.x_hat.get(i))
            ++result.residual_weight;
    }
    result.fg_evals = fg_count_;
    return result;
}

void ScDecoder::recurse(unsigned level, std::size_t offset) {
    std::size_t span = n_ >> level;
    std::size_t base = static_cast<std::size_t>(level) * n_ + offset;
    if (span == 1) {
        std::uint8_t u;
        if (frozen_mask_[offset])
            u = frozen_value_[offset];
        else
            u = llr_[base] < 0.0 ? 1 : 0;
        bits_[base] = u;
        return;
    }
    std::size_t half = span / 2;
    std::size_t child = base + n_;
    for (std::size_t i = 0; i < half; ++i)
        llr_[child + i] = minsum_f(llr_[base + i], llr_[base + half + i]);
    fg_count_ += half;
    recurse(level + 1, offset);
    for (std::size_t i = 0; i < half; ++i)
        llr_[child + half + i] = minsum_g(llr_[base + i], llr_[base + half + i],
                                          bits_[child + i] != 0);
    fg_count_ += half;
    recurse(level + 1, offset + half);
    for (std::size_t i = 0; i < half; ++i) {
        bits_[base + i] = bits_[child + i] ^ bits_[child + half + i];
        bits_[base + half + i] = bits_[child + half + i];
    }
}

DecodeResult sc_decode(const LlrVector& llr,
                       std::span<const std::uint32_t> info_set,
                       const gf2::BitVector& frozen_values) {
    ScDecoder decoder(llr.size());
    return decoder.decode(llr, info_set, frozen_values);
}

} // namespace pkcpc::scdec
