#include "extorb/fp.hpp"

#include <algorithm>

namespace extorb {

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

void check_prime(int p) {
    if (p < 2 || p > kMaxPrime || !is_prime(p))
        throw DimensionMismatch("p = " + std::to_string(p) + " is not a prime in [2, " +
                                std::to_string(kMaxPrime) + "]");
}

int fp_inv(int a, int p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) throw SingularMatrix("inverse of 0 mod " + std::to_string(p));
    // p <= 97: a^(p-2) by square-and-multiply is plenty.
    int result = 1, base = a, exp = p - 2;
    while (exp) {
        if (exp & 1) result = result * base % p;
        base = base * base % p;
        exp >>= 1;
    }
    return result;
}

FpScalar::FpScalar(int v, int prime) {
    check_prime(prime);
    p = prime;
    value = v % p;
    if (value < 0) value += p;
}

FpScalar FpScalar::operator+(const FpScalar& o) const {
    if (p != o.p) throw DimensionMismatch("FpScalar: mixed moduli");
    return FpScalar(value + o.value, p);
}

FpScalar FpScalar::operator*(const FpScalar& o) const {
    if (p != o.p) throw DimensionMismatch("FpScalar: mixed moduli");
    return FpScalar(value * o.value, p);
}

FpScalar FpScalar::inv() const { return FpScalar(fp_inv(value, p), p); }

FpMatrix::FpMatrix(int prime, int r, int c) : p(prime), rows(r), cols(c) {
    check_prime(prime);
    if (r < 0 || c < 0) throw DimensionMismatch("negative matrix dimension");
    e.assign(static_cast<std::size_t>(r) * c, 0);
}

FpMatrix FpMatrix::identity(int n, int p) {
    FpMatrix a(p, n, n);
    for (int i = 0; i < n; ++i) a.at(i, i) = 1;
    return a;
}

FpMatrix FpMatrix::from_rows(int p, const std::vector<std::vector<int>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r ? static_cast<int>(rows[0].size()) : 0;
    FpMatrix a(p, r, c);
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[i].size()) != c)
            throw DimensionMismatch("ragged row list");
        for (int j = 0; j < c; ++j) {
            int v = rows[i][j] % p;
            if (v < 0) v += p;
            a.at(i, j) = static_cast<std::uint8_t>(v);
        }
    }
    return a;
}

FpMatrix FpMatrix::transposed() const {
    FpMatrix t(p, cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
    return t;
}

bool FpMatrix::is_zero() const {
    return std::all_of(e.begin(), e.end(), [](std::uint8_t v) { return v == 0; });
}

bool FpMatrix::lex_less(const FpMatrix& o) const {
    return std::lexicographical_compare(e.begin(), e.end(), o.e.begin(), o.e.end());
}

std::string FpMatrix::key() const {
    std::string s;
    s.reserve(e.size() + 3);
    s.push_back(static_cast<char>(p));
    s.push_back(static_cast<char>(rows));
    s.push_back(static_cast<char>(cols));
    s.append(e.begin(), e.end());
    return s;
}

nlohmann::json FpMatrix::to_json() const {
    nlohmann::json entries = nlohmann::json::array();
    for (int i = 0; i < rows; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < cols; ++j) row.push_back(static_cast<int>(at(i, j)));
        entries.push_back(std::move(row));
    }
    return nlohmann::json{{"p", p}, {"rows", rows}, {"cols", cols}, {"entries", entries}};
}

FpMatrix FpMatrix::from_json(const nlohmann::json& j) {
    int p = j.at("p").get<int>();
    int rows = j.at("rows").get<int>();
    int cols = j.at("cols").get<int>();
    FpMatrix a(p, rows, cols);
    const auto& entries = j.at("entries");
    if (static_cast<int>(entries.size()) != rows)
        throw DimensionMismatch("matrix JSON: wrong row count");
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(entries[i].size()) != cols)
            throw DimensionMismatch("matrix JSON: wrong column count");
        for (int jj = 0; jj < cols; ++jj) {
            int v = entries[i][jj].get<int>() % p;
            if (v < 0) v += p;
            a.at(i, jj) = static_cast<std::uint8_t>(v);
        }
    }
    return a;
}

FpMatrix mat_mul(const FpMatrix& a, const FpMatrix& b) {
    if (a.p != b.p) throw DimensionMismatch("mat_mul: mixed moduli");
    if (a.cols != b.rows) throw DimensionMismatch("mat_mul: shape mismatch");
    FpMatrix c(a.p, a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < b.cols; ++j) {
            std::uint32_t acc = 0;
            for (int k = 0; k < a.cols; ++k)
                acc += static_cast<std::uint32_t>(a.at(i, k)) * b.at(k, j);
            c.at(i, j) = static_cast<std::uint8_t>(acc % a.p);
        }
    return c;
}

namespace {

// Gaussian elimination over F_p; returns rank, optionally accumulating the
// inverse and determinant.  `inv` must be preset to the identity when given.
int gauss(FpMatrix& a, FpMatrix* inv, int* det) {
    const int p = a.p;
    int rank = 0;
    if (det) *det = 1;
    for (int col = 0; col < a.cols && rank < a.rows; ++col) {
        int piv = -1;
        for (int r = rank; r < a.rows; ++r)
            if (a.at(r, col)) { piv = r; break; }
        if (piv < 0) {
            if (det) *det = 0;
            continue;
        }
        if (piv != rank) {
            for (int c = 0; c < a.cols; ++c) std::swap(a.at(piv, c), a.at(rank, c));
            if (inv)
                for (int c = 0; c < inv->cols; ++c) std::swap(inv->at(piv, c), inv->at(rank, c));
            if (det) *det = fp_neg(*det, p);
        }
        int iv = fp_inv(a.at(rank, col), p);
        if (det) *det = *det * a.at(rank, col) % p;
        if (iv != 1) {
            for (int c = 0; c < a.cols; ++c)
                a.at(rank, c) = static_cast<std::uint8_t>(a.at(rank, c) * iv % p);
            if (inv)
                for (int c = 0; c < inv->cols; ++c)
                    inv->at(rank, c) = static_cast<std::uint8_t>(inv->at(rank, c) * iv % p);
        }
        for (int r = 0; r < a.rows; ++r) {
            if (r == rank || !a.at(r, col)) continue;
            int f = p - a.at(r, col);
            for (int c = 0; c < a.cols; ++c)
                a.at(r, c) = static_cast<std::uint8_t>((a.at(r, c) + f * a.at(rank, c)) % p);
            if (inv)
                for (int c = 0; c < inv->cols; ++c)
                    inv->at(r, c) = static_cast<std::uint8_t>((inv->at(r, c) + f * inv->at(rank, c)) % p);
        }
        ++rank;
    }
    return rank;
}

}  // namespace

FpMatrix mat_inv(const FpMatrix& a) {
    if (a.rows != a.cols) throw DimensionMismatch("mat_inv: matrix not square");
    FpMatrix work = a;
    FpMatrix inv = FpMatrix::identity(a.rows, a.p);
    int rank = gauss(work, &inv, nullptr);
    if (rank != a.rows) throw SingularMatrix("mat_inv: singular matrix");
    return inv;
}

int mat_rank(const FpMatrix& a) {
    FpMatrix work = a;
    return gauss(work, nullptr, nullptr);
}

int mat_det(const FpMatrix& a) {
    if (a.rows != a.cols) throw DimensionMismatch("mat_det: matrix not square");
    FpMatrix work = a;
    int det = 0;
    int rank = gauss(work, nullptr, &det);
    return rank == a.rows ? det : 0;
}

bool mat_invertible(const FpMatrix& a) {
    return a.rows == a.cols && mat_rank(a) == a.rows;
}

bool Subspace::contains(const std::vector<std::uint8_t>& v) const {
    if (static_cast<int>(v.size()) != ambient)
        throw DimensionMismatch("Subspace::contains: wrong vector length");
    std::vector<std::uint8_t> t = v;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        int c = pivots[i];
        if (t[c]) {
            int f = p - t[c];
            for (int k = 0; k < ambient; ++k)
                t[k] = static_cast<std::uint8_t>((t[k] + f * basis[i][k]) % p);
        }
    }
    return std::all_of(t.begin(), t.end(), [](std::uint8_t x) { return x == 0; });
}

std::vector<std::vector<std::uint8_t>> Subspace::all_vectors(std::uint64_t cap) const {
    BigInt count = 1;
    for (int i = 0; i < dim(); ++i) count *= p;
    require_cap(count, BigInt(cap));
    std::uint64_t n = count.convert_to<std::uint64_t>();
    std::vector<std::vector<std::uint8_t>> out;
    out.reserve(n);
    for (std::uint64_t enc = 0; enc < n; ++enc) {
        std::vector<std::uint8_t> v(ambient, 0);
        std::uint64_t x = enc;
        for (int i = dim() - 1; i >= 0; --i) {
            int coeff = static_cast<int>(x % p);
            x /= p;
            if (coeff)
                for (int k = 0; k < ambient; ++k)
                    v[k] = static_cast<std::uint8_t>((v[k] + coeff * basis[i][k]) % p);
        }
        out.push_back(std::move(v));
    }
    return out;
}

Subspace row_space(const FpMatrix& a) {
    FpMatrix work = a;
    int rank = gauss(work, nullptr, nullptr);
    Subspace s;
    s.p = a.p;
    s.ambient = a.cols;
    for (int r = 0; r < rank; ++r) {
        std::vector<std::uint8_t> row(work.e.begin() + static_cast<std::size_t>(r) * work.cols,
                                      work.e.begin() + static_cast<std::size_t>(r + 1) * work.cols);
        int piv = -1;
        for (int c = 0; c < work.cols; ++c)
            if (row[c]) { piv = c; break; }
        s.basis.push_back(std::move(row));
        s.pivots.push_back(piv);
    }
    return s;
}

Subspace kernel(const FpMatrix& a) {
    FpMatrix work = a;
    gauss(work, nullptr, nullptr);
    const int n = a.cols, p = a.p;
    // Identify pivot columns of the reduced matrix.
    std::vector<int> pivot_of_col(n, -1);
    int r = 0;
    for (int c = 0; c < n && r < a.rows; ++c) {
        if (work.at(r, c)) { pivot_of_col[c] = r; ++r; }
    }
    Subspace s;
    s.p = p;
    s.ambient = n;
    for (int c = 0; c < n; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        std::vector<std::uint8_t> v(n, 0);
        v[c] = 1;
        for (int cc = 0; cc < n; ++cc) {
            int pr = pivot_of_col[cc];
            if (pr >= 0) v[cc] = static_cast<std::uint8_t>(fp_neg(work.at(pr, c), p));
        }
        s.basis.push_back(std::move(v));
    }
    // Re-echelonize so pivots/contains work uniformly.
    if (!s.basis.empty()) {
        FpMatrix b(p, static_cast<int>(s.basis.size()), n);
        for (int i = 0; i < b.rows; ++i)
            for (int j = 0; j < n; ++j) b.at(i, j) = s.basis[static_cast<std::size_t>(i)][j];
        s = row_space(b);
    }
    return s;
}

std::optional<AffineSolution> solve_affine(const FpMatrix& a, const std::vector<std::uint8_t>& b) {
    if (static_cast<int>(b.size()) != a.rows)
        throw DimensionMismatch("solve_affine: rhs length mismatch");
    FpMatrix aug(a.p, a.rows, a.cols + 1);
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < a.cols; ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols) = b[i];
    }
    gauss(aug, nullptr, nullptr);
    std::vector<int> pivot_of_col(a.cols, -1);
    int r = 0;
    for (int c = 0; c < a.cols && r < a.rows; ++c)
        if (aug.at(r, c)) { pivot_of_col[c] = r; ++r; }
    // Inconsistent iff some remaining row is (0 ... 0 | nonzero).
    for (int i = r; i < a.rows; ++i)
        if (aug.at(i, a.cols)) return std::nullopt;
    AffineSolution sol;
    sol.particular.assign(a.cols, 0);
    for (int c = 0; c < a.cols; ++c) {
        int pr = pivot_of_col[c];
        if (pr >= 0) sol.particular[c] = aug.at(pr, a.cols);
    }
    sol.homogeneous = kernel(a);
    return sol;
}

BigInt gl_order(int m, int p) {
    check_prime(p);
    if (m < 0) throw DimensionMismatch("gl_order: negative dimension");
    BigInt pm = 1;
    for (int i = 0; i < m; ++i) pm *= p;
    BigInt result = 1, pi = 1;
    for (int i = 0; i < m; ++i) {
        result *= (pm - pi);
        pi *= p;
    }
    return result;
}

std::uint64_t pow_u64(std::uint64_t base, unsigned exp) {
    std::uint64_t r = 1;
    while (exp--) r *= base;
    return r;
}

void require_cap(const BigInt& required, const BigInt& cap) {
    if (required > cap) throw CapExceeded(required.str(), cap.str());
}

std::vector<GlChunk> gl_chunks(int m, int p, int k) {
    check_prime(p);
    if (m < 0 || m > kMaxEnumDim)
        throw DimensionMismatch("gl_chunks: dimension out of range");
    if (k < 1) k = 1;
    std::vector<GlChunk> chunks;
    if (m == 0) {
        chunks.push_back(GlChunk{0, 1, 0});
        for (int i = 1; i < k; ++i) chunks.push_back(GlChunk{1, 1, 1});
        return chunks;
    }
    const std::uint64_t total_rows = pow_u64(static_cast<std::uint64_t>(p), static_cast<unsigned>(m));
    const std::uint64_t first_rows = total_rows - 1;  // nonzero rows, encodings 1..total_rows-1
    // Each first row admits |GL_m| / (p^m - 1) completions.
    BigInt per_big = gl_order(m, p) / BigInt(first_rows);
    std::uint64_t per = per_big.convert_to<std::uint64_t>();
    for (int i = 0; i < k; ++i) {
        std::uint64_t lo = first_rows * static_cast<std::uint64_t>(i) / static_cast<std::uint64_t>(k);
        std::uint64_t hi = first_rows * static_cast<std::uint64_t>(i + 1) / static_cast<std::uint64_t>(k);
        GlChunk c;
        c.row_begin = 1 + lo;
        c.row_end = 1 + hi;
        c.base_index = lo * per;
        chunks.push_back(c);
    }
    return chunks;
}

}  // namespace extorb
