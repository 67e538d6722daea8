#include "pkcpc/serialize.hpp"

#include <bit>
#include <cstring>

namespace pkcpc::cli {

namespace {

constexpr char kMagic[4] = {'P', 'K', 'P', 'C'};
constexpr std::uint8_t kTypePublicKey = 1;
constexpr std::uint8_t kTypeSecretKey = 2;
constexpr std::uint8_t kTypeCiphertext = 3;
constexpr std::size_t kHeaderSize = 4 + 1 + 1 + 3 * 4 + 8;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::span<const std::uint8_t> take(std::size_t count) {
        if (bytes_.size() - pos_ < count)
            throw ParseError(ParseError::Code::truncated, "record is truncated");
        auto out = bytes_.subspan(pos_, count);
        pos_ += count;
        return out;
    }

    std::uint8_t u8() { return take(1)[0]; }

    std::uint32_t u32() {
        auto b = take(4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i)
            v = (v << 8) | b[i];
        return v;
    }

    double f64() {
        auto b = take(8);
        std::uint64_t bits = 0;
        for (int i = 7; i >= 0; --i)
            bits = (bits << 8) | b[i];
        return std::bit_cast<double>(bits);
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }

    void expect_end() const {
        if (pos_ != bytes_.size())
            throw ParseError(ParseError::Code::trailing_bytes,
                             "record has trailing bytes");
    }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

void write_header(std::vector<std::uint8_t>& out, std::uint8_t type,
                  const Params& p) {
    out.insert(out.end(), kMagic, kMagic + 4);
    out.push_back(kFormatVersion);
    out.push_back(type);
    put_u32(out, static_cast<std::uint32_t>(p.n));
    put_u32(out, static_cast<std::uint32_t>(p.k));
    put_u32(out, static_cast<std::uint32_t>(p.t));
    put_f64(out, p.epsilon);
}

Params read_header(Reader& r, std::uint8_t expected_type) {
    auto magic = r.take(4);
    if (std::memcmp(magic.data(), kMagic, 4) != 0)
        throw ParseError(ParseError::Code::bad_magic, "bad magic");
    std::uint8_t version = r.u8();
    if (version != kFormatVersion)
        throw ParseError(ParseError::Code::bad_version,
                         "unsupported format version " + std::to_string(version));
    std::uint8_t type = r.u8();
    if (type != expected_type)
        throw ParseError(ParseError::Code::bad_record_type,
                         "unexpected record type " + std::to_string(type));
    std::uint32_t n = r.u32();
    std::uint32_t k = r.u32();
    std::uint32_t t = r.u32();
    double epsilon = r.f64();
    try {
        return Params::create(n, k, t, epsilon);
    } catch (const ParameterError& e) {
        throw ParseError(ParseError::Code::invariant_violation, e.what());
    }
}

} // namespace

std::vector<std::uint8_t> serialize_public_key(const PublicKey& pk) {
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + pk.params.k * ((pk.params.n - pk.params.k + 7) / 8));
    write_header(out, kTypePublicKey, pk.params);
    for (std::size_t i = 0; i < pk.params.k; ++i) {
        auto row = pk.q.row(i).to_bytes();
        out.insert(out.end(), row.begin(), row.end());
    }
    return out;
}

PublicKey deserialize_public_key(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    Params params = read_header(r, kTypePublicKey);
    std::size_t stride = (params.n - params.k + 7) / 8;
    gf2::BitMatrix q(params.k, params.n - params.k);
    for (std::size_t i = 0; i < params.k; ++i) {
        auto row = r.take(stride);
        try {
            q.row(i) = gf2::BitVector::from_bytes(row, params.n - params.k);
        } catch (const ParameterError& e) {
            throw ParseError(ParseError::Code::invariant_violation, e.what());
        }
    }
    r.expect_end();
    return PublicKey{params, std::move(q)};
}

std::vector<std::uint8_t> serialize_secret_key(const SecretKey& sk) {
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + kSeedBytes + 4 * sk.params.k);
    write_header(out, kTypeSecretKey, sk.params);
    out.insert(out.end(), sk.seed.begin(), sk.seed.end());
    for (std::uint32_t index : sk.info_set)
        put_u32(out, index + 1);  // stored 1-based
    return out;
}

SecretKey deserialize_secret_key(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    Params params = read_header(r, kTypeSecretKey);
    auto seed_bytes = r.take(kSeedBytes);
    Seed seed{};
    std::memcpy(seed.data(), seed_bytes.data(), kSeedBytes);
    std::vector<std::uint32_t> info_set(params.k);
    for (std::size_t i = 0; i < params.k; ++i) {
        std::uint32_t stored = r.u32();
        if (stored < 1 || stored > params.n)
            throw ParseError(ParseError::Code::invariant_violation,
                             "info-set index out of range");
        if (i > 0 && stored <= info_set[i - 1] + 1)
            throw ParseError(ParseError::Code::invariant_violation,
                             "info-set indices must be strictly ascending");
        info_set[i] = stored - 1;
    }
    r.expect_end();
    return assemble_secret_key(params, seed, std::move(info_set));
}

std::vector<std::uint8_t> serialize_ciphertext(const CiphertextFile& ct) {
    std::vector<std::uint8_t> out;
    std::size_t stride = (ct.params.n + 7) / 8;
    out.reserve(kHeaderSize + ct.blocks.size() * stride);
    write_header(out, kTypeCiphertext, ct.params);
    for (const gf2::BitVector& block : ct.blocks) {
        if (block.size() != ct.params.n)
            throw ParameterError("ciphertext block has wrong length");
        auto packed = block.to_bytes();
        out.insert(out.end(), packed.begin(), packed.end());
    }
    return out;
}

CiphertextFile deserialize_ciphertext(std::span<const std::uint8_t> bytes) {
    Reader r(bytes);
    Params params = read_header(r, kTypeCiphertext);
    std::size_t stride = (params.n + 7) / 8;
    if (r.remaining() == 0 || r.remaining() % stride != 0)
        throw ParseError(ParseError::Code::truncated,
                         "ciphertext body is not a whole number of blocks");
    CiphertextFile file;
    file.params = params;
    while (r.remaining() > 0) {
        auto packed = r.take(stride);
        try {
            file.blocks.push_back(gf2::BitVector::from_bytes(packed, params.n));
        } catch (const ParameterError& e) {
            throw ParseError(ParseError::Code::invariant_violation, e.what());
        }
    }
    return file;
}

std::vector<gf2::BitVector> frame_message(std::span<const std::uint8_t> bytes,
                                          std::size_t k) {
    if (k < 1)
        throw ParameterError("block size must be positive");
    if (bytes.size() > 0xffffffffull)
        throw ParameterError("message too long for the length prefix");
    std::vector<std::uint8_t> stream;
    stream.reserve(4 + bytes.size());
    put_u32(stream, static_cast<std::uint32_t>(bytes.size()));
    stream.insert(stream.end(), bytes.begin(), bytes.end());

    std::size_t total_bits = 8 * stream.size();
    std::size_t blocks = (total_bits + k - 1) / k;
    std::vector<gf2::BitVector> out(blocks, gf2::BitVector(k));
    for (std::size_t bit = 0; bit < total_bits; ++bit)
        if ((stream[bit >> 3] >> (bit & 7)) & 1)
            out[bit / k].set(bit % k, true);
    return out;
}

std::vector<std::uint8_t> unframe_message(std::span<const gf2::BitVector> blocks) {
    if (blocks.empty())
        throw FramingError("no plaintext blocks");
    std::size_t k = blocks.front().size();
    for (const auto& b : blocks)
        if (b.size() != k)
            throw FramingError("plaintext blocks have inconsistent sizes");
    std::size_t total_bits = blocks.size() * k;
    if (total_bits < 32)
        throw FramingError("payload shorter than the length prefix");

    auto bit_at = [&](std::size_t bit) {
        return blocks[bit / k].get(bit % k);
    };
    std::uint32_t length = 0;
    for (std::size_t bit = 0; bit < 32; ++bit)
        if (bit_at(bit))
            length |= std::uint32_t{1} << bit;
    if (32 + 8ull * length > total_bits)
        throw FramingError("encoded length exceeds the payload");

    std::vector<std::uint8_t> out(length, 0);
    for (std::size_t bit = 0; bit < 8ull * length; ++bit)
        if (bit_at(32 + bit))
            out[bit >> 3] |= static_cast<std::uint8_t>(1u << (bit & 7));
    for (std::size_t bit = 32 + 8ull * length; bit < total_bits; ++bit)
        if (bit_at(bit))
            throw FramingError("nonzero padding after the payload");
    return out;
}

} // namespace pkcpc::cli
