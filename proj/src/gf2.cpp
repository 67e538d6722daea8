#include "pkcpc/gf2.hpp"

#include <algorithm>
#include <bit>

namespace pkcpc::gf2 {

BitVector BitVector::from_bits(std::initializer_list<int> bits) {
    return from_bits(std::span<const int>(bits.begin(), bits.size()));
}

BitVector BitVector::from_bits(std::span<const int> bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != 0 && bits[i] != 1)
            throw ParameterError("bit values must be 0 or 1");
        if (bits[i])
            v.words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
    return v;
}

BitVector BitVector::from_bytes(std::span<const std::uint8_t> bytes, std::size_t len) {
    if (bytes.size() != (len + 7) / 8)
        throw ParameterError("byte count does not match bit length");
    BitVector v(len);
    for (std::size_t b = 0; b < bytes.size(); ++b)
        v.words_[b >> 3] |= std::uint64_t{bytes[b]} << ((b & 7) * 8);
    v.trim();
    // Reject set padding bits so every byte string maps to a unique vector.
    std::size_t used = v.weight();
    std::size_t raw = 0;
    for (std::uint8_t byte : bytes)
        raw += std::popcount(byte);
    if (raw != used)
        throw ParameterError("padding bits beyond the bit length must be zero");
    return v;
}

void BitVector::xor_with(const BitVector& other) {
    if (other.len_ != len_)
        throw ParameterError("length mismatch in xor");
    for (std::size_t w = 0; w < words_.size(); ++w)
        words_[w] ^= other.words_[w];
}

std::size_t BitVector::weight() const {
    std::size_t total = 0;
    for (std::uint64_t w : words_)
        total += std::popcount(w);
    return total;
}

bool BitVector::is_zero() const {
    return std::all_of(words_.begin(), words_.end(),
                       [](std::uint64_t w) { return w == 0; });
}

std::vector<std::uint8_t> BitVector::to_bytes() const {
    std::vector<std::uint8_t> out((len_ + 7) / 8);
    for (std::size_t b = 0; b < out.size(); ++b)
        out[b] = static_cast<std::uint8_t>(words_[b >> 3] >> ((b & 7) * 8));
    return out;
}

void BitVector::trim() {
    std::size_t tail = len_ & 63;
    if (tail != 0 && !words_.empty())
        words_.back() &= (std::uint64_t{1} << tail) - 1;
}

BitVector xor_vectors(const BitVector& a, const BitVector& b) {
    BitVector out = a;
    out.xor_with(b);
    return out;
}

BitMatrix BitMatrix::identity(std::size_t k) {
    BitMatrix m(k, k);
    for (std::size_t i = 0; i < k; ++i)
        m.set(i, i, true);
    return m;
}

BitMatrix BitMatrix::from_rows(std::initializer_list<std::initializer_list<int>> rows) {
    BitMatrix m;
    m.rows_.reserve(rows.size());
    for (const auto& r : rows) {
        BitVector row = BitVector::from_bits(r);
        if (!m.rows_.empty() && row.size() != m.cols_)
            throw ParameterError("ragged rows");
        m.cols_ = row.size();
        m.rows_.push_back(std::move(row));
    }
    return m;
}

bool BitMatrix::is_unit_lower_triangular() const {
    if (rows() != cols())
        return false;
    for (std::size_t i = 0; i < rows(); ++i) {
        if (!get(i, i))
            return false;
        for (std::size_t j = i + 1; j < cols_; ++j)
            if (get(i, j))
                return false;
    }
    return true;
}

BitMatrix kronecker_power(unsigned m, unsigned max_exponent) {
    if (m < 1 || m > max_exponent)
        throw ParameterError("kronecker exponent out of range");
    BitMatrix g = BitMatrix::from_rows({{1}});
    for (unsigned step = 0; step < m; ++step) {
        std::size_t half = g.rows();
        BitMatrix next(2 * half, 2 * half);
        for (std::size_t i = 0; i < half; ++i) {
            for (std::size_t w = 0; w < g.row(i).words().size(); ++w) {
                std::uint64_t word = g.row(i).words()[w];
                if (word == 0)
                    continue;
                while (word) {
                    std::size_t j = (w << 6) + std::countr_zero(word);
                    word &= word - 1;
                    next.set(i, j, true);               // top-left block
                    next.set(half + i, j, true);        // bottom-left block
                    next.set(half + i, half + j, true); // bottom-right block
                }
            }
        }
        g = std::move(next);
    }
    return g;
}

BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols() != b.rows())
        throw ParameterError("inner dimensions do not match");
    BitMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto words = a.row(i).words();
        for (std::size_t w = 0; w < words.size(); ++w) {
            std::uint64_t word = words[w];
            while (word) {
                std::size_t l = (w << 6) + std::countr_zero(word);
                word &= word - 1;
                out.row(i).xor_with(b.row(l));
            }
        }
    }
    return out;
}

BitVector vec_mat_mul(const BitVector& v, const BitMatrix& m) {
    if (v.size() != m.rows())
        throw ParameterError("vector length does not match row count");
    BitVector out(m.cols());
    auto words = v.words();
    for (std::size_t w = 0; w < words.size(); ++w) {
        std::uint64_t word = words[w];
        while (word) {
            std::size_t l = (w << 6) + std::countr_zero(word);
            word &= word - 1;
            out.xor_with(m.row(l));
        }
    }
    return out;
}

namespace {

void check_index_list(std::span<const std::uint32_t> idx, std::size_t bound,
                      const char* what) {
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] >= bound)
            throw ParameterError(std::string(what) + ": index out of range");
        if (i > 0 && idx[i] <= idx[i - 1])
            throw ParameterError(std::string(what) + ": indices must be sorted and duplicate-free");
    }
}

} // namespace

BitMatrix submatrix(const BitMatrix& m,
                    std::span<const std::uint32_t> row_idx,
                    std::span<const std::uint32_t> col_idx) {
    check_index_list(row_idx, m.rows(), "row selection");
    check_index_list(col_idx, m.cols(), "column selection");
    BitMatrix out(row_idx.size(), col_idx.size());
    for (std::size_t i = 0; i < row_idx.size(); ++i) {
        const BitVector& src = m.row(row_idx[i]);
        for (std::size_t j = 0; j < col_idx.size(); ++j)
            if (src.get(col_idx[j]))
                out.set(i, j, true);
    }
    return out;
}

BitMatrix invert_unit_lower_triangular(const BitMatrix& s) {
    if (!s.is_unit_lower_triangular())
        throw StructureError("matrix is not unit lower triangular");
    std::size_t k = s.rows();
    BitMatrix inv(k, k);
    // Row i of the inverse is e_i plus the already-computed rows picked out by
    // the strictly-lower entries of row i.
    for (std::size_t i = 0; i < k; ++i) {
        inv.set(i, i, true);
        auto words = s.row(i).words();
        for (std::size_t w = 0; w < words.size(); ++w) {
            std::uint64_t word = words[w];
            while (word) {
                std::size_t l = (w << 6) + std::countr_zero(word);
                word &= word - 1;
                if (l < i)
                    inv.row(i).xor_with(inv.row(l));
            }
        }
    }
    return inv;
}

Permutation::Permutation(std::vector<std::uint32_t> forward)
    : forward_(std::move(forward)) {
    std::vector<bool> seen(forward_.size(), false);
    for (std::uint32_t dest : forward_) {
        if (dest >= forward_.size() || seen[dest])
            throw ParameterError("not a bijection");
        seen[dest] = true;
    }
}

Permutation build_permutation(std::span<const std::uint32_t> first_block,
                              std::span<const std::uint32_t> second_block) {
    std::size_t n = first_block.size() + second_block.size();
    check_index_list(first_block, n, "first block");
    check_index_list(second_block, n, "second block");
    std::vector<std::uint32_t> forward(n, 0);
    std::vector<bool> covered(n, false);
    for (std::size_t slot = 0; slot < first_block.size(); ++slot) {
        forward[first_block[slot]] = static_cast<std::uint32_t>(slot);
        covered[first_block[slot]] = true;
    }
    for (std::size_t slot = 0; slot < second_block.size(); ++slot) {
        if (covered[second_block[slot]])
            throw ParameterError("blocks must be disjoint");
        forward[second_block[slot]] =
            static_cast<std::uint32_t>(first_block.size() + slot);
        covered[second_block[slot]] = true;
    }
    // Disjoint + in-range + total size n implies full coverage.
    return Permutation(std::move(forward));
}

BitVector apply_permutation(const BitVector& v, const Permutation& p, bool inverse) {
    if (v.size() != p.size())
        throw ParameterError("vector length does not match permutation size");
    BitVector out(v.size());
    auto fwd = p.forward();
    if (inverse) {
        for (std::size_t j = 0; j < v.size(); ++j)
            if (v.get(fwd[j]))
                out.set(j, true);
    } else {
        for (std::size_t j = 0; j < v.size(); ++j)
            if (v.get(j))
                out.set(fwd[j], true);
    }
    return out;
}

} // namespace pkcpc::gf2
