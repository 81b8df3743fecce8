#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "extorb/errors.hpp"

namespace extorb {

using BigInt = boost::multiprecision::cpp_int;

// Scalars are plain small integers reduced mod p; primes are capped at 97 so
// every product fits comfortably in machine words.
inline constexpr int kMaxPrime = 97;

bool is_prime(int p);
void check_prime(int p);  // throws DimensionMismatch unless 2 <= p <= 97 and prime

int fp_inv(int a, int p);        // multiplicative inverse, a != 0 mod p
inline int fp_neg(int a, int p) { return a == 0 ? 0 : p - a; }

// A single field element carrying its modulus; used at API boundaries, the
// numeric kernels below work on raw uint8_t entries.
struct FpScalar {
    int value = 0;
    int p = 2;
    FpScalar() = default;
    FpScalar(int v, int prime);
    FpScalar operator+(const FpScalar& o) const;
    FpScalar operator*(const FpScalar& o) const;
    FpScalar inv() const;
    bool operator==(const FpScalar& o) const { return value == o.value && p == o.p; }
};

// Dense matrix over F_p, row-major uint8_t storage.
struct FpMatrix {
    int p = 2;
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> e;

    FpMatrix() = default;
    FpMatrix(int prime, int r, int c);

    static FpMatrix identity(int n, int p);
    static FpMatrix from_rows(int p, const std::vector<std::vector<int>>& rows);

    std::uint8_t& at(int r, int c) { return e[static_cast<std::size_t>(r) * cols + c]; }
    std::uint8_t at(int r, int c) const { return e[static_cast<std::size_t>(r) * cols + c]; }

    FpMatrix transposed() const;
    bool is_zero() const;
    bool operator==(const FpMatrix& o) const {
        return p == o.p && rows == o.rows && cols == o.cols && e == o.e;
    }
    bool operator!=(const FpMatrix& o) const { return !(*this == o); }

    // Row-major entry-lexicographic order; also the enumeration order of gl_scan.
    bool lex_less(const FpMatrix& o) const;

    std::string key() const;  // compact byte encoding, injective per (p, shape)

    nlohmann::json to_json() const;
    static FpMatrix from_json(const nlohmann::json& j);
};

FpMatrix mat_mul(const FpMatrix& a, const FpMatrix& b);
FpMatrix mat_inv(const FpMatrix& a);  // throws SingularMatrix
int mat_rank(const FpMatrix& a);
int mat_det(const FpMatrix& a);
bool mat_invertible(const FpMatrix& a);

// Row space in reduced echelon form; doubles as "subspace of F_p^ambient".
struct Subspace {
    int p = 2;
    int ambient = 0;
    std::vector<std::vector<std::uint8_t>> basis;  // reduced echelon rows
    std::vector<int> pivots;

    int dim() const { return static_cast<int>(basis.size()); }
    bool contains(const std::vector<std::uint8_t>& v) const;
    // Vectors in increasing base-p encoding order (coordinate 0 most significant).
    std::vector<std::vector<std::uint8_t>> all_vectors(std::uint64_t cap) const;
};

Subspace row_space(const FpMatrix& a);
Subspace kernel(const FpMatrix& a);  // right kernel {v : a v = 0}

struct AffineSolution {
    std::vector<std::uint8_t> particular;
    Subspace homogeneous;  // kernel of the matrix
};

// Solve a x = b; nullopt when inconsistent.
std::optional<AffineSolution> solve_affine(const FpMatrix& a,
                                           const std::vector<std::uint8_t>& b);

BigInt gl_order(int m, int p);
std::uint64_t pow_u64(std::uint64_t base, unsigned exp);

void require_cap(const BigInt& required, const BigInt& cap);

// ---------------------------------------------------------------------------
// GL(m, p) streaming enumeration.
//
// Matrices are visited in row-major entry-lexicographic order.  The stream can
// be partitioned into contiguous chunks keyed by the first-row encoding; every
// nonzero first row extends to the same number of invertible completions, so
// chunk sizes are balanced and chunk `base_index` values are exact.
// ---------------------------------------------------------------------------

inline constexpr int kMaxEnumDim = 8;

struct GlChunk {
    std::uint64_t row_begin = 0;   // first-row encodings in [row_begin, row_end)
    std::uint64_t row_end = 0;
    std::uint64_t base_index = 0;  // global index of the chunk's first matrix
};

// Partition the full stream into k contiguous chunks (some possibly empty).
std::vector<GlChunk> gl_chunks(int m, int p, int k);

namespace detail {

struct EchelonState {
    int m = 0, p = 0, n = 0;
    std::uint8_t rows[kMaxEnumDim][kMaxEnumDim] = {};
    int piv[kMaxEnumDim] = {};

    void init(int m_, int p_) { m = m_; p = p_; n = 0; }

    // Try to add `row`; returns false (state unchanged) when dependent.
    bool push(const std::uint8_t* row) {
        std::uint8_t t[kMaxEnumDim];
        for (int c = 0; c < m; ++c) t[c] = row[c];
        for (int i = 0; i < n; ++i) {
            int c = piv[i];
            if (t[c]) {
                int f = p - t[c];
                for (int k = 0; k < m; ++k) t[k] = static_cast<std::uint8_t>((t[k] + f * rows[i][k]) % p);
            }
        }
        int lead = -1;
        for (int c = 0; c < m; ++c)
            if (t[c]) { lead = c; break; }
        if (lead < 0) return false;
        int iv = fp_inv(t[lead], p);
        for (int c = 0; c < m; ++c) rows[n][c] = static_cast<std::uint8_t>(t[c] * iv % p);
        piv[n] = lead;
        ++n;
        return true;
    }
    void pop() { --n; }
};

template <class F>
void gl_scan_rows(FpMatrix& work, EchelonState& ech, int depth, std::uint64_t& index, F&& fn) {
    const int m = work.rows, p = work.p;
    const std::uint64_t total = pow_u64(static_cast<std::uint64_t>(p), static_cast<unsigned>(m));
    std::uint8_t* row = &work.e[static_cast<std::size_t>(depth) * m];
    for (int c = 0; c < m; ++c) row[c] = 0;
    for (std::uint64_t enc = 0; enc < total; ++enc) {
        if (enc) {  // odometer with the last coordinate fastest (lex order)
            int c = m - 1;
            while (true) {
                if (++row[c] < p) break;
                row[c] = 0;
                --c;
            }
        }
        if (!ech.push(row)) continue;
        if (depth + 1 == m) {
            fn(const_cast<const FpMatrix&>(work), index);
            ++index;
        } else {
            gl_scan_rows(work, ech, depth + 1, index, fn);
        }
        ech.pop();
    }
}

}  // namespace detail

// Visit the chunk's matrices in order.  `fn(mat, global_index)` receives a
// workspace reference valid only for the duration of the call.
template <class F>
void gl_scan_chunk(int m, int p, const GlChunk& chunk, F&& fn) {
    check_prime(p);
    if (m < 0 || m > kMaxEnumDim)
        throw DimensionMismatch("gl_scan: dimension " + std::to_string(m) + " out of range");
    if (m == 0) {
        if (chunk.row_begin == 0 && chunk.row_end > 0) fn(FpMatrix(p, 0, 0), std::uint64_t{0});
        return;
    }
    FpMatrix work(p, m, m);
    detail::EchelonState ech;
    std::uint64_t index = chunk.base_index;
    std::uint8_t row[kMaxEnumDim];
    for (std::uint64_t enc = chunk.row_begin; enc < chunk.row_end; ++enc) {
        std::uint64_t v = enc;
        for (int c = m - 1; c >= 0; --c) { row[c] = static_cast<std::uint8_t>(v % p); v /= p; }
        ech.init(m, p);
        if (!ech.push(row)) continue;  // only the zero row, when enc == 0
        for (int c = 0; c < m; ++c) work.at(0, c) = row[c];
        if (m == 1) {
            fn(const_cast<const FpMatrix&>(work), index);
            ++index;
        } else {
            detail::gl_scan_rows(work, ech, 1, index, fn);
        }
    }
}

// Full single-threaded pass over GL(m, p) in lex order.
template <class F>
void gl_for_each(int m, int p, F&& fn) {
    GlChunk all;
    all.row_begin = 0;
    all.row_end = (m == 0) ? 1 : pow_u64(static_cast<std::uint64_t>(p), static_cast<unsigned>(m));
    all.base_index = 0;
    gl_scan_chunk(m, p, all, fn);
}

}  // namespace extorb
