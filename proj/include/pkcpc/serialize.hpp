#pragma once

// On-disk formats.  Every record starts with a common header:
//   magic "PKPC" | version u8 = 1 | record type u8 | n u32 | k u32 | t u32 |
//   epsilon f64 (IEEE-754 bits), all integers and the float little-endian.
// Record types: 1 public key, 2 secret key, 3 ciphertext.
//   public key body: k rows of ceil((n-k)/8) bytes, bits LSB-first per byte
//   secret key body: 32-byte seed, then k info-set indices as u32 (1-based,
//     strictly ascending); the scrambler and permutation are rebuilt on load
//   ciphertext body: a whole number of ceil(n/8)-byte blocks
// Messages are framed as: u32 byte length | payload bytes | zero padding,
// split into k-bit blocks (bit stream LSB-first per byte).

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "pkcpc/pkcpc.hpp"

namespace pkcpc::cli {

inline constexpr std::uint8_t kFormatVersion = 1;

// Framing problems in an otherwise well-formed ciphertext payload (garbled
// length field, nonzero padding); kept apart from ParseError so callers can
// report block-structure trouble distinctly.
class FramingError : public std::runtime_error {
public:
    explicit FramingError(const std::string& what) : std::runtime_error(what) {}
};

std::vector<std::uint8_t> serialize_public_key(const PublicKey& pk);
PublicKey deserialize_public_key(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize_secret_key(const SecretKey& sk);
SecretKey deserialize_secret_key(std::span<const std::uint8_t> bytes);

struct CiphertextFile {
    Params params;
    std::vector<gf2::BitVector> blocks;  // n-bit ciphertext payloads
};

std::vector<std::uint8_t> serialize_ciphertext(const CiphertextFile& ct);
CiphertextFile deserialize_ciphertext(std::span<const std::uint8_t> bytes);

// Message bytes to k-bit plaintext blocks and back.
std::vector<gf2::BitVector> frame_message(std::span<const std::uint8_t> bytes,
                                          std::size_t k);
std::vector<std::uint8_t> unframe_message(std::span<const gf2::BitVector> blocks);

} // namespace pkcpc::cli
