#include "pkcpc/drbg.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <bit>
#include <cstring>

namespace pkcpc {

namespace {

int hex_nibble(char c) {
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

EVP_CIPHER_CTX* as_ctx(void* p) { return static_cast<EVP_CIPHER_CTX*>(p); }

} // namespace

Seed random_seed() {
    Seed seed{};
    if (RAND_bytes(seed.data(), static_cast<int>(seed.size())) != 1)
        throw InternalError("OS entropy source failed");
    return seed;
}

Seed seed_from_hex(std::string_view hex) {
    if (hex.size() != 2 * kSeedBytes)
        throw ParameterError("seed must be 64 hex characters");
    Seed seed{};
    for (std::size_t i = 0; i < kSeedBytes; ++i) {
        int hi = hex_nibble(hex[2 * i]);
        int lo = hex_nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw ParameterError("seed contains a non-hex character");
        seed[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return seed;
}

std::string seed_to_hex(const Seed& seed) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(2 * kSeedBytes);
    for (std::uint8_t b : seed) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

CtrDrbg::CtrDrbg(const Seed& seed)
    : CtrDrbg(std::span<const std::uint8_t>(seed.data(), seed.size())) {}

CtrDrbg::CtrDrbg(std::span<const std::uint8_t> seed) {
    if (seed.size() != kSeedBytes)
        throw ParameterError("seed must be exactly 32 bytes");
    EVP_CIPHER_CTX* ctx = EVP_CIPHER_CTX_new();
    if (ctx == nullptr)
        throw InternalError("cipher context allocation failed");
    if (EVP_EncryptInit_ex(ctx, EVP_aes_128_ctr(), nullptr, seed.data(),
                           seed.data() + 16) != 1) {
        EVP_CIPHER_CTX_free(ctx);
        throw InternalError("cipher initialization failed");
    }
    ctx_ = ctx;
}

CtrDrbg::~CtrDrbg() {
    if (ctx_ != nullptr)
        EVP_CIPHER_CTX_free(as_ctx(ctx_));
}

CtrDrbg::CtrDrbg(CtrDrbg&& other) noexcept : ctx_(other.ctx_) { other.ctx_ = nullptr; }

CtrDrbg& CtrDrbg::operator=(CtrDrbg&& other) noexcept {
    if (this != &other) {
        if (ctx_ != nullptr)
            EVP_CIPHER_CTX_free(as_ctx(ctx_));
        ctx_ = other.ctx_;
        other.ctx_ = nullptr;
    }
    return *this;
}

void CtrDrbg::fill(std::span<std::uint8_t> out) {
    if (out.empty())
        return;
    std::memset(out.data(), 0, out.size());
    int written = 0;
    if (EVP_EncryptUpdate(as_ctx(ctx_), out.data(), &written, out.data(),
                          static_cast<int>(out.size())) != 1 ||
        written != static_cast<int>(out.size()))
        throw InternalError("cipher stream generation failed");
}

std::vector<std::uint8_t> CtrDrbg::bytes(std::size_t count) {
    std::vector<std::uint8_t> out(count);
    fill(out);
    return out;
}

std::uint32_t CtrDrbg::next_u32() {
    std::uint8_t buf[4];
    fill(buf);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i)
        v = (v << 8) | buf[i];  // stream bytes interpreted little-endian
    return v;
}

std::uint64_t CtrDrbg::next_u64() {
    std::uint8_t buf[8];
    fill(buf);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i)
        v = (v << 8) | buf[i];
    return v;
}

std::uint64_t CtrDrbg::uniform_below(std::uint64_t bound) {
    if (bound == 0)
        throw ParameterError("bound must be positive");
    if (bound == 1)
        return 0;
    // Rejection sampling over the smallest power-of-two window >= bound.
    unsigned bits = std::bit_width(bound - 1);
    std::uint64_t mask = (bits >= 64) ? ~std::uint64_t{0}
                                      : ((std::uint64_t{1} << bits) - 1);
    for (;;) {
        std::uint64_t v = next_u64() & mask;
        if (v < bound)
            return v;
    }
}

double CtrDrbg::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

Seed CtrDrbg::derive_seed() {
    Seed seed{};
    fill(seed);
    return seed;
}

std::vector<std::uint8_t> drbg_stream(const Seed& seed, std::size_t count) {
    CtrDrbg drbg(seed);
    return drbg.bytes(count);
}

std::vector<std::uint8_t> drbg_stream(std::span<const std::uint8_t> seed,
                                      std::size_t count) {
    CtrDrbg drbg(seed);
    return drbg.bytes(count);
}

} // namespace pkcpc
