#pragma once

#include <cstdint>

namespace pkcpc::perf {

// Exact operation tallies filled in by the encrypt/decrypt paths.
struct OpCounters {
    std::uint64_t xor_bits = 0;   // single-bit XORs spent in vector algebra
    std::uint64_t fg_evals = 0;   // min-sum f/g evaluations in the decoder
    std::uint64_t perm_moves = 0; // per-bit moves spent applying permutations

    void reset() { *this = OpCounters{}; }

    OpCounters& operator+=(const OpCounters& other) {
        xor_bits += other.xor_bits;
        fg_evals += other.fg_evals;
        perm_moves += other.perm_moves;
        return *this;
    }

    bool operator==(const OpCounters&) const = default;
};

} // namespace pkcpc::perf
