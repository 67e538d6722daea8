#include "pkcpc/polar.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

namespace pkcpc::polar {

namespace {

constexpr std::size_t kMaxBlockLength = std::size_t{1} << 16;

void check_block_length(std::size_t n) {
    if (n < 2 || n > kMaxBlockLength || !std::has_single_bit(n))
        throw ParameterError("block length must be a power of two in [2, 65536]");
}

// log(2 - e^l) for l <= 0, stable for very negative l.
double log_two_minus_exp(double l) {
    if (l < -1.0)
        return std::numbers::ln2 + std::log1p(-0.5 * std::exp(l));
    return std::log(2.0 - std::exp(l));
}

} // namespace

ChannelSpec ChannelSpec::bec(double epsilon, double mu) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw ParameterError("erasure probability must lie in (0, 1)");
    if (!(mu > 0.0))
        throw ParameterError("scaling exponent must be positive");
    ChannelSpec spec;
    spec.kind = ChannelKind::bec;
    spec.epsilon = epsilon;
    spec.mu = mu;
    return spec;
}

std::vector<double> bhattacharyya_log(const ChannelSpec& spec, std::size_t n) {
    check_block_length(n);
    std::vector<double> z{std::log(spec.bhattacharyya_init())};
    std::vector<double> next;
    while (z.size() < n) {
        next.resize(2 * z.size());
        for (std::size_t i = 0; i < z.size(); ++i) {
            // first half: 2z - z^2, second half: z^2 (block layout)
            next[i] = z[i] + log_two_minus_exp(z[i]);
            next[z.size() + i] = 2.0 * z[i];
        }
        z.swap(next);
    }
    return z;
}

std::vector<double> bhattacharyya_recursion(const ChannelSpec& spec, std::size_t n) {
    std::vector<double> z = bhattacharyya_log(spec, n);
    for (double& v : z)
        v = std::exp(v);
    return z;
}

std::vector<std::uint32_t> reliability_permutation(std::span<const double> z_log) {
    std::vector<std::uint32_t> order(z_log.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return z_log[a] < z_log[b]; });
    return order;
}

RateLimit max_rate_r0(const ChannelSpec& spec, std::size_t n) {
    check_block_length(n);
    double backoff = std::pow(static_cast<double>(n), -1.0 / spec.mu);
    double r0 = std::max(0.0, spec.capacity() - backoff);
    return RateLimit{r0, static_cast<std::size_t>(std::floor(r0 * static_cast<double>(n)))};
}

DfrBound dfr_bound(std::span<const double> z_log, std::span<const std::uint32_t> info_set) {
    double raw = 0.0;
    for (std::uint32_t i : info_set) {
        if (i >= z_log.size())
            throw ParameterError("information-set index out of range");
        raw += std::exp(z_log[i]);
    }
    return DfrBound{raw, std::clamp(raw, 0.0, 1.0)};
}

std::shared_ptr<const gf2::BitMatrix> transform_matrix(unsigned m) {
    static std::mutex mutex;
    static std::map<unsigned, std::shared_ptr<const gf2::BitMatrix>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(m);
    if (it != cache.end())
        return it->second;
    auto built = std::make_shared<const gf2::BitMatrix>(gf2::kronecker_power(m));
    cache.emplace(m, built);
    return built;
}

void polar_transform_inplace(gf2::BitVector& x) {
    std::size_t n = x.size();
    check_block_length(n);
    auto words = x.words();
    // Sub-word strides: destination positions are those with (pos & len) == 0.
    static constexpr std::uint64_t kHalfMasks[6] = {
        0x5555555555555555ull, 0x3333333333333333ull, 0x0f0f0f0f0f0f0f0full,
        0x00ff00ff00ff00ffull, 0x0000ffff0000ffffull, 0x00000000ffffffffull,
    };
    for (std::size_t len = 1; len < n; len <<= 1) {
        if (len < 64) {
            std::uint64_t mask = kHalfMasks[std::countr_zero(len)];
            for (auto& w : words)
                w ^= (w >> len) & mask;
        } else {
            std::size_t wlen = len >> 6;
            for (std::size_t lo = 0; lo < words.size(); lo += 2 * wlen)
                for (std::size_t i = 0; i < wlen; ++i)
                    words[lo + i] ^= words[lo + wlen + i];
        }
    }
}

gf2::BitVector polar_transform(const gf2::BitVector& x) {
    gf2::BitVector out = x;
    polar_transform_inplace(out);
    return out;
}

PolarCode PolarCode::build(const ChannelSpec& spec, std::size_t n, std::size_t k,
                           std::optional<std::vector<std::uint32_t>> info_override) {
    check_block_length(n);
    if (k < 1 || k >= n)
        throw ParameterError("dimension must satisfy 1 <= k < n");

    PolarCode code;
    code.n_ = n;
    code.m_ = static_cast<unsigned>(std::countr_zero(n));
    code.spec_ = spec;
    code.z_log_ = bhattacharyya_log(spec, n);
    code.pi_ = reliability_permutation(code.z_log_);

    if (info_override) {
        if (info_override->size() != k)
            throw ParameterError("information-set override has wrong size");
        for (std::size_t i = 0; i < info_override->size(); ++i) {
            if ((*info_override)[i] >= n)
                throw ParameterError("information-set override index out of range");
            if (i > 0 && (*info_override)[i] <= (*info_override)[i - 1])
                throw ParameterError("information-set override must be sorted and duplicate-free");
        }
        code.info_set_ = std::move(*info_override);
    } else {
        code.info_set_.assign(code.pi_.begin(), code.pi_.begin() + k);
        std::sort(code.info_set_.begin(), code.info_set_.end());
    }

    std::vector<bool> in_info(n, false);
    for (std::uint32_t i : code.info_set_)
        in_info[i] = true;
    code.frozen_set_.reserve(n - k);
    for (std::uint32_t i = 0; i < n; ++i)
        if (!in_info[i])
            code.frozen_set_.push_back(i);
    return code;
}

gf2::BitVector PolarCode::scatter(const gf2::BitVector& info_bits,
                                  const gf2::BitVector& frozen_bits) const {
    if (info_bits.size() != k())
        throw ParameterError("information word has wrong length");
    if (frozen_bits.size() != n_ - k())
        throw ParameterError("frozen word has wrong length");
    gf2::BitVector u(n_);
    for (std::size_t i = 0; i < info_set_.size(); ++i)
        if (info_bits.get(i))
            u.set(info_set_[i], true);
    for (std::size_t i = 0; i < frozen_set_.size(); ++i)
        if (frozen_bits.get(i))
            u.set(frozen_set_[i], true);
    return u;
}

gf2::BitVector PolarCode::encode(const gf2::BitVector& info_bits,
                                 const gf2::BitVector& frozen_bits) const {
    gf2::BitVector x = scatter(info_bits, frozen_bits);
    polar_transform_inplace(x);
    return x;
}

GeneratorSlices PolarCode::generator_slices() const {
    auto g = transform_matrix(m_);
    std::vector<std::uint32_t> all(n_);
    std::iota(all.begin(), all.end(), 0u);
    GeneratorSlices slices;
    slices.g_info = gf2::submatrix(*g, info_set_, all);
    slices.g_frozen = gf2::submatrix(*g, frozen_set_, all);
    slices.parity_check_t = gf2::submatrix(*g, all, frozen_set_);
    return slices;
}

} // namespace pkcpc::polar
