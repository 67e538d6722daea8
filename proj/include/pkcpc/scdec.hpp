#pragma once

// Successive-cancellation decoding with min-sum check updates.  Decisions are
// scheduled in bit-reversed index order, which is the order under which the
// block-layout Bhattacharyya values describe the per-index reliabilities; the
// returned vectors are in natural index order.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pkcpc/gf2.hpp"

namespace pkcpc::scdec {

// Saturation bound for LLR magnitudes inside the decoder.
inline constexpr double kLlrSaturation = 30.0;

// Check-node update: sign(a) sign(b) min(|a|, |b|), with sign(0) = +1.
double minsum_f(double a, double b);
// Variable-node update: b + (1 - 2u) a, saturated to +/- kLlrSaturation.
double minsum_g(double a, double b, bool u);

struct LlrVector {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
};

// Channel LLRs for a hard-decision word received through a weight-t error:
// bit i contributes (1 - 2 c_i) * ln((n - t) / t).  Requires 1 <= t < n/2.
LlrVector init_llr_from_hard(const gf2::BitVector& hard, std::size_t t);

struct DecodeResult {
    gf2::BitVector u_hat;            // decided source word, natural order
    gf2::BitVector x_hat;            // re-encoded codeword u_hat * G_n
    std::size_t residual_weight = 0; // Hamming distance from the hard input to x_hat
    std::uint64_t fg_evals = 0;      // min-sum evaluations spent (n log2 n)
};

class ScDecoder {
public:
    explicit ScDecoder(std::size_t n);

    std::size_t n() const { return n_; }

    // frozen_values[j] fixes the bit at the j-th smallest frozen index; the
    // decision at free (information) indices follows the LLR sign, ties to 0.
    DecodeResult decode(const LlrVector& llr,
                        std::span<const std::uint32_t> info_set,
                        const gf2::BitVector& frozen_values);

private:
    void recurse(unsigned level, std::size_t offset);

    std::size_t n_;
    unsigned m_;
    std::vector<std::uint32_t> bitrev_;
    std::vector<double> llr_;        // (m+1) stacked levels of width n
    std::vector<std::uint8_t> bits_; // partial sums, same layout
    std::vector<std::uint8_t> frozen_mask_;  // schedule order
    std::vector<std::uint8_t> frozen_value_; // schedule order
    std::uint64_t fg_count_ = 0;
};

DecodeResult sc_decode(const LlrVector& llr,
                       std::span<const std::uint32_t> info_set,
                       const gf2::BitVector& frozen_values);

} // namespace pkcpc::scdec
