#pragma once

// The public-key scheme: key generation from a secret reliability-window
// sample, systematic encryption with an exact-weight error vector, and
// decryption by permutation undo + successive-cancellation decoding with a
// residual-weight accept check.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pkcpc/counters.hpp"
#include "pkcpc/drbg.hpp"
#include "pkcpc/gf2.hpp"
#include "pkcpc/polar.hpp"
#include "pkcpc/scdec.hpp"

namespace pkcpc {

struct Params {
    std::size_t n = 0;       // block length, power of two
    std::size_t k = 0;       // message length, 1 <= k < n
    std::size_t t = 0;       // error weight, 1 <= t < n/2
    double epsilon = 0.5;    // design erasure probability

    static Params create(std::size_t n, std::size_t k, std::size_t t,
                         double epsilon = 0.5);

    unsigned m() const;
    // True when k exceeds the finite-length rate limit (legal but reported
    // as a warning by callers; decoding reliability degrades).
    bool exceeds_rate_limit() const;

    bool operator==(const Params&) const = default;
};

struct PublicKey {
    Params params;
    gf2::BitMatrix q;  // k x (n-k) right block of the systematic generator
};

struct SecretKey {
    Params params;
    Seed seed{};                            // keygen seed (sampling transcript)
    std::vector<std::uint32_t> info_set;    // sorted, 0-based
    polar::PolarCode code;                  // built with that info set
    gf2::BitMatrix s;                       // scrambler (unit lower triangular)
    gf2::BitMatrix s_inv;
    gf2::Permutation perm;                  // info columns first, then frozen
};

struct KeyPair {
    PublicKey public_key;
    SecretKey secret_key;
};

struct Ciphertext {
    std::size_t n = 0;
    std::size_t t = 0;
    gf2::BitVector payload;
};

struct KeygenOptions {
    // Number of leading reliability-ordered indices the info set is sampled
    // from; defaults to the rate-limit k0.  Desk-scale parameter sets where
    // k0 < k must set this explicitly.
    std::optional<std::size_t> window_override;
    // Fully pins the info set (test/KAT hook; bypasses sampling).
    std::optional<std::vector<std::uint32_t>> info_set_override;
};

// k distinct indices drawn uniformly from the first `window` entries of the
// code's reliability order, returned sorted.  Consumes a fresh stream seeded
// by `seed`, so equal inputs give equal sets.
std::vector<std::uint32_t> sample_secret_info_set(const Seed& seed,
                                                  const polar::PolarCode& code,
                                                  std::size_t k,
                                                  std::size_t window);

KeyPair keygen(const Params& params, const Seed& seed,
               const KeygenOptions& options = {});

// Uniformly random error vector of length n and Hamming weight exactly t.
gf2::BitVector sample_error(std::size_t n, std::size_t t, CtrDrbg& rng);

// Uniformly random bit vector of the given length.
gf2::BitVector random_bits(std::size_t len, CtrDrbg& rng);

Ciphertext encrypt(const gf2::BitVector& message, const PublicKey& pk,
                   CtrDrbg& rng, perf::OpCounters* counters = nullptr);

// Deterministic variant with a caller-supplied error vector (tests, KATs).
Ciphertext encrypt_with_error(const gf2::BitVector& message, const PublicKey& pk,
                              const gf2::BitVector& error,
                              perf::OpCounters* counters = nullptr);

// Empty optional signals a decryption failure (residual weight above t after
// decoding); a present value is the exact recovered message.
std::optional<gf2::BitVector> decrypt(const Ciphertext& ct, const SecretKey& sk,
                                      perf::OpCounters* counters = nullptr);

// Largest t in [1, n/2) whose measured failure count over `trials` random
// encrypt/decrypt rounds stays within floor(target_dfr * trials); 0 when
// even t = 1 fails that test.
std::size_t suggest_error_weight(std::size_t n, std::size_t k, double epsilon,
                                 double target_dfr, std::size_t trials,
                                 const Seed& seed);

// Rebuilds the derived secret-key material (code, scrambler, permutation)
// from parameters and a stored info set; shared by keygen and key loading.
SecretKey assemble_secret_key(const Params& params, const Seed& seed,
                              std::vector<std::uint32_t> info_set);

} // namespace pkcpc
