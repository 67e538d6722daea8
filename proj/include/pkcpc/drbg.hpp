#pragma once

// Deterministic byte stream expansion from a 32-byte seed (AES-128-CTR:
// first 16 seed bytes key the cipher, last 16 form the initial counter
// block), plus unbiased integer/real helpers on top of it.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pkcpc/errors.hpp"

namespace pkcpc {

inline constexpr std::size_t kSeedBytes = 32;
using Seed = std::array<std::uint8_t, kSeedBytes>;

Seed random_seed();                          // OS entropy
Seed seed_from_hex(std::string_view hex);    // 64 hex chars
std::string seed_to_hex(const Seed& seed);

class CtrDrbg {
public:
    explicit CtrDrbg(const Seed& seed);
    explicit CtrDrbg(std::span<const std::uint8_t> seed);  // must be 32 bytes
    ~CtrDrbg();

    CtrDrbg(CtrDrbg&&) noexcept;
    CtrDrbg& operator=(CtrDrbg&&) noexcept;
    CtrDrbg(const CtrDrbg&) = delete;
    CtrDrbg& operator=(const CtrDrbg&) = delete;

    void fill(std::span<std::uint8_t> out);
    std::vector<std::uint8_t> bytes(std::size_t count);
    std::uint32_t next_u32();
    std::uint64_t next_u64();
    // Uniform on [0, bound) by rejection; bound >= 1.
    std::uint64_t uniform_below(std::uint64_t bound);
    // Uniform on [0, 1) with 53 random bits.
    double uniform01();
    // A fresh seed drawn from this stream (for deriving sub-generators).
    Seed derive_seed();

private:
    void* ctx_ = nullptr;  // EVP_CIPHER_CTX
};

// The first `count` bytes of the seed's stream.
std::vector<std::uint8_t> drbg_stream(const Seed& seed, std::size_t count);
std::vector<std::uint8_t> drbg_stream(std::span<const std::uint8_t> seed,
                                      std::size_t count);  // seed must be 32 bytes

} // namespace pkcpc
