#include "pkcpc/pkcpc.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace pkcpc {

Params Params::create(std::size_t n, std::size_t k, std::size_t t, double epsilon) {
    if (n < 4 || n > (std::size_t{1} << 16) || !std::has_single_bit(n))
        throw ParameterError("block length must be a power of two in [4, 65536]");
    if (k < 1 || k >= n)
        throw ParameterError("message length must satisfy 1 <= k < n");
    if (t < 1 || 2 * t >= n)
        throw ParameterError("error weight must satisfy 1 <= t < n/2");
    polar::ChannelSpec::bec(epsilon);  // validates the range
    return Params{n, k, t, epsilon};
}

unsigned Params::m() const {
    return static_cast<unsigned>(std::countr_zero(n));
}

bool Params::exceeds_rate_limit() const {
    return k > polar::max_rate_r0(polar::ChannelSpec::bec(epsilon), n).k0;
}

std::vector<std::uint32_t> sample_secret_info_set(const Seed& seed,
                                                  const polar::PolarCode& code,
                                                  std::size_t k,
                                                  std::size_t window) {
    if (k < 1 || k > window || window > code.n())
        throw ParameterError("need 1 <= k <= window <= n");
    std::vector<std::uint32_t> pool(code.reliability_order().begin(),
                                    code.reliability_order().begin() + window);
    CtrDrbg rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + rng.uniform_below(window - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
}

SecretKey assemble_secret_key(const Params& params, const Seed& seed,
                              std::vector<std::uint32_t> info_set) {
    auto spec = polar::ChannelSpec::bec(params.epsilon);
    SecretKey sk;
    sk.params = params;
    sk.seed = seed;
    sk.code = polar::PolarCode::build(spec, params.n, params.k, std::move(info_set));
    sk.info_set.assign(sk.code.info_set().begin(), sk.code.info_set().end());

    auto g = polar::transform_matrix(params.m());
    sk.s = gf2::submatrix(*g, sk.info_set, sk.info_set);
    if (!sk.s.is_unit_lower_triangular())
        throw StructureError("scrambler is not unit lower triangular");
    sk.s_inv = gf2::invert_unit_lower_triangular(sk.s);
    sk.perm = gf2::build_permutation(sk.code.info_set(), sk.code.frozen_set());
    return sk;
}

KeyPair keygen(const Params& params, const Seed& seed, const KeygenOptions& options) {
    auto spec = polar::ChannelSpec::bec(params.epsilon);
    std::vector<std::uint32_t> info_set;
    if (options.info_set_override) {
        info_set = *options.info_set_override;
    } else {
        // Sampling needs the reliability order only, so any info choice works
        // for the base build.
        auto base = polar::PolarCode::build(spec, params.n, params.k);
        std::size_t window =
            options.window_override
                ? *options.window_override
                : polar::max_rate_r0(spec, params.n).k0;
        if (window < params.k || window > params.n)
            throw ParameterError("sampling window must satisfy k <= window <= n");
        info_set = sample_secret_info_set(seed, base, params.k, window);
    }

    SecretKey sk = assemble_secret_key(params, seed, std::move(info_set));

    // G' = S^-1 G_A P must come out systematic: the first k columns of G_A P
    // are exactly S, so S^-1 (G_A P) = [I_k | Q].
    auto g = polar::transform_matrix(params.m());
    std::vector<std::uint32_t> all(params.n);
    std::iota(all.begin(), all.end(), 0u);
    gf2::BitMatrix g_info = gf2::submatrix(*g, sk.info_set, all);
    gf2::BitMatrix g_sys = gf2::mat_mul(sk.s_inv, g_info);
    gf2::BitMatrix q(params.k, params.n - params.k);
    for (std::size_t i = 0; i < params.k; ++i) {
        gf2::BitVector row = gf2::apply_permutation(g_sys.row(i), sk.perm, false);
        for (std::size_t j = 0; j < params.k; ++j)
            if (row.get(j) != (j == i))
                throw InternalError("systematic form violated");
        for (std::size_t j = params.k; j < params.n; ++j)
            if (row.get(j))
                q.set(i, j - params.k, true);
    }

    KeyPair kp;
    kp.public_key = PublicKey{params, std::move(q)};
    kp.secret_key = std::move(sk);
    return kp;
}

gf2::BitVector sample_error(std::size_t n, std::size_t t, CtrDrbg& rng) {
    if (n < 1 || t < 1 || t >= n)
        throw ParameterError("error weight must satisfy 1 <= t < n");
    std::vector<std::uint32_t> positions(n);
    std::iota(positions.begin(), positions.end(), 0u);
    gf2::BitVector e(n);
    for (std::size_t i = 0; i < t; ++i) {
        std::size_t j = i + rng.uniform_below(n - i);
        std::swap(positions[i], positions[j]);
        e.set(positions[i], true);
    }
    return e;
}

gf2::BitVector random_bits(std::size_t len, CtrDrbg& rng) {
    std::vector<std::uint8_t> bytes = rng.bytes((len + 7) / 8);
    if (len % 8 != 0 && !bytes.empty())
        bytes.back() &= static_cast<std::uint8_t>((1u << (len % 8)) - 1);
    return gf2::BitVector::from_bytes(bytes, len);
}

Ciphertext encrypt_with_error(const gf2::BitVector& message, const PublicKey& pk,
                              const gf2::BitVector& error,
                              perf::OpCounters* counters) {
    const Params& p = pk.params;
    if (message.size() != p.k)
        throw ParameterError("message length does not match k");
    if (error.size() != p.n)
        throw ParameterError("error vector length does not match n");
    // Zero error is the noiseless test hook; otherwise the weight is exactly t.
    std::size_t w = error.weight();
    if (w != 0 && w != p.t)
        throw ParameterError("error vector weight must be 0 or exactly t");

    gf2::BitVector payload(p.n);
    for (std::size_t i = 0; i < p.k; ++i)
        if (message.get(i))
            payload.set(i, true);
    gf2::BitVector parity = gf2::vec_mat_mul(message, pk.q);
    for (std::size_t j = 0; j < p.n - p.k; ++j)
        if (parity.get(j))
            payload.set(p.k + j, true);
    payload.xor_with(error);

    if (counters != nullptr) {
        counters->xor_bits += message.weight() * (p.n - p.k);  // parity rows
        counters->xor_bits += p.n;                             // error add
    }
    return Ciphertext{p.n, p.t, payload};
}

Ciphertext encrypt(const gf2::BitVector& message, const PublicKey& pk,
                   CtrDrbg& rng, perf::OpCounters* counters) {
    gf2::BitVector e = sample_error(pk.params.n, pk.params.t, rng);
    return encrypt_with_error(message, pk, e, counters);
}

std::optional<gf2::BitVector> decrypt(const Ciphertext& ct, const SecretKey& sk,
                                      perf::OpCounters* counters) {
    const Params& p = sk.params;
    if (ct.n != p.n || ct.t != p.t)
        throw ParameterError("ciphertext parameters do not match the key");
    if (ct.payload.size() != p.n)
        throw ParameterError("ciphertext payload has wrong length");

    gf2::BitVector received = gf2::apply_permutation(ct.payload, sk.perm, true);
    if (counters != nullptr)
        counters->perm_moves += p.n;

    scdec::LlrVector llr = scdec::init_llr_from_hard(received, p.t);
    scdec::ScDecoder decoder(p.n);
    gf2::BitVector frozen_zero(p.n - p.k);
    scdec::DecodeResult dec = decoder.decode(llr, sk.info_set, frozen_zero);
    if (counters != nullptr)
        counters->fg_evals += dec.fg_evals;

    // Accept only if the decoded codeword is within the designed error weight.
    if (dec.residual_weight > p.t)
        return std::nullopt;

    gf2::BitVector u_info(p.k);
    for (std::size_t i = 0; i < p.k; ++i)
        if (dec.u_hat.get(sk.info_set[i]))
            u_info.set(i, true);
    gf2::BitVector message = gf2::vec_mat_mul(u_info, sk.s);
    if (counters != nullptr)
        counters->xor_bits += u_info.weight() * p.k;
    return message;
}

std::size_t suggest_error_weight(std::size_t n, std::size_t k, double epsilon,
                                 double target_dfr, std::size_t trials,
                                 const Seed& seed) {
    if (trials < 1)
        throw ParameterError("trial count must be positive");
    if (!(target_dfr >= 0.0) || !(target_dfr < 1.0))
        throw ParameterError("target failure rate must lie in [0, 1)");
    auto allowed = static_cast<std::size_t>(target_dfr * static_cast<double>(trials));

    CtrDrbg master(seed);
    auto acceptable = [&](std::size_t t) {
        Params params = Params::create(n, k, t, epsilon);
        Seed key_seed = master.derive_seed();
        KeygenOptions options;
        if (params.exceeds_rate_limit())
            options.window_override = n;  // fall back to the full order
        KeyPair kp = keygen(params, key_seed, options);
        CtrDrbg rng(master.derive_seed());
        std::size_t failures = 0;
        for (std::size_t trial = 0; trial < trials; ++trial) {
            gf2::BitVector m = random_bits(k, rng);
            Ciphertext ct = encrypt(m, kp.public_key, rng);
            auto out = decrypt(ct, kp.secret_key);
            if (!out || *out != m)
                ++failures;
            if (failures > allowed)
                return false;
        }
        return true;
    };

    std::size_t lo = 1, hi = n / 2 - 1;
    if (hi < 1 || !acceptable(1))
        return 0;
    while (lo < hi) {
        std::size_t mid = lo + (hi - lo + 1) / 2;
        if (acceptable(mid))
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

} // namespace pkcpc
