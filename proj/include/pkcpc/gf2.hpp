#pragma once

// Packed GF(2) vectors, matrices and index permutations.
// Bit i of a vector lives at bit (i % 64) of word (i / 64); byte-level views
// are LSB-first within each byte so word packing and byte packing agree.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "pkcpc/errors.hpp"

namespace pkcpc::gf2 {

class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t len) : len_(len), words_((len + 63) / 64, 0) {}

    static BitVector from_bits(std::initializer_list<int> bits);
    static BitVector from_bits(std::span<const int> bits);
    // `len` bits taken LSB-first from `bytes`; bytes.size() must be ceil(len/8).
    static BitVector from_bytes(std::span<const std::uint8_t> bytes, std::size_t len);

    std::size_t size() const { return len_; }
    bool empty() const { return len_ == 0; }

    bool get(std::size_t i) const {
        check_index(i);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    bool operator[](std::size_t i) const { return get(i); }

    void set(std::size_t i, bool v) {
        check_index(i);
        std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    void flip(std::size_t i) {
        check_index(i);
        words_[i >> 6] ^= std::uint64_t{1} << (i & 63);
    }

    // In-place XOR with an equal-length vector.
    void xor_with(const BitVector& other);

    std::size_t weight() const;           // Hamming weight
    bool is_zero() const;

    std::vector<std::uint8_t> to_bytes() const;   // ceil(len/8) bytes, LSB-first

    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }

    // Zeroes any bits beyond len in the last word; callers that write words
    // directly must restore this invariant before comparisons.
    void trim();

    bool operator==(const BitVector&) const = default;

private:
    void check_index(std::size_t i) const {
        if (i >= len_)
            throw ParameterError("bit index out of range");
    }

    std::size_t len_ = 0;
    std::vector<std::uint64_t> words_;
};

BitVector xor_vectors(const BitVector& a, const BitVector& b);

class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols)
        : cols_(cols), rows_(rows, BitVector(cols)) {}

    static BitMatrix identity(std::size_t k);
    static BitMatrix from_rows(std::initializer_list<std::initializer_list<int>> rows);

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }

    const BitVector& row(std::size_t i) const {
        check_row(i);
        return rows_[i];
    }
    BitVector& row(std::size_t i) {
        check_row(i);
        return rows_[i];
    }

    bool get(std::size_t i, std::size_t j) const { return row(i).get(j); }
    void set(std::size_t i, std::size_t j, bool v) { row(i).set(j, v); }

    bool is_unit_lower_triangular() const;

    bool operator==(const BitMatrix&) const = default;

private:
    void check_row(std::size_t i) const {
        if (i >= rows_.size())
            throw ParameterError("row index out of range");
    }

    std::size_t cols_ = 0;
    std::vector<BitVector> rows_;
};

// F^{(x)m} for F = [[1,0],[1,1]], built by recursive doubling.  The result is
// 2^m x 2^m, unit lower triangular, and self-inverse over GF(2).
BitMatrix kronecker_power(unsigned m, unsigned max_exponent = 16);

BitMatrix mat_mul(const BitMatrix& a, const BitMatrix& b);
BitVector vec_mat_mul(const BitVector& v, const BitMatrix& m);

// Rows/columns selected by sorted duplicate-free index lists (0-based).
BitMatrix submatrix(const BitMatrix& m,
                    std::span<const std::uint32_t> row_idx,
                    std::span<const std::uint32_t> col_idx);

// Inverse of a unit lower triangular matrix by forward substitution.
BitMatrix invert_unit_lower_triangular(const BitMatrix& s);

// A permutation of {0,...,n-1}; forward()[j] is the destination of source
// position j under apply_permutation(v, p, false).
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<std::uint32_t> forward);  // validates bijection

    std::size_t size() const { return forward_.size(); }
    std::span<const std::uint32_t> forward() const { return forward_; }

    bool operator==(const Permutation&) const = default;

private:
    std::vector<std::uint32_t> forward_;
};

// Column permutation sending the positions listed in `first_block` to the
// leading |first_block| slots (in ascending source order) and the positions in
// `second_block` to the trailing slots.  The two lists must be sorted,
// disjoint, and cover {0,...,n-1}.
Permutation build_permutation(std::span<const std::uint32_t> first_block,
                              std::span<const std::uint32_t> second_block);

BitVector apply_permutation(const BitVector& v, const Permutation& p, bool inverse);

} // namespace pkcpc::gf2
