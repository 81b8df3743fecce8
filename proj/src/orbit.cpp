#include "extorb/orbit.hpp"

#include <algorithm>
#include <cstring>
#include <functional>
#include <map>
#include <thread>
#include <unordered_map>

namespace extorb {

namespace {

constexpr int kMaxMix = 6;  // component count bound for the mixing solver

std::uint64_t count_of(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& mult,
                       std::uint64_t ord) {
    for (const auto& [o, c] : mult)
        if (o == ord) return c;
    return 0;
}

std::uint64_t max_order(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& mult) {
    std::uint64_t mx = 1;
    for (const auto& [o, c] : mult) mx = std::max(mx, o);
    return mx;
}

}  // namespace

std::string label_for_fingerprint(
    const BigInt& order, bool abelian,
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& mult) {
    if (order > 16) return "";
    const std::uint64_t n = order.convert_to<std::uint64_t>();
    const std::uint64_t c2 = count_of(mult, 2), c3 = count_of(mult, 3);
    const std::uint64_t mx = max_order(mult);
    switch (n) {
        case 1: return "1";
        case 2: return "Z/2";
        case 3: return "Z/3";
        case 4: return mx == 4 ? "Z/4" : "Z/2 × Z/2";
        case 5: return "Z/5";
        case 6: return abelian ? "Z/6" : "S3";
        case 7: return "Z/7";
        case 8:
            if (abelian) {
                if (mx == 8) return "Z/8";
                return c2 == 3 ? "Z/4 × Z/2" : "(Z/2)^3";
            }
            if (c2 == 5) return "D8";
            if (c2 == 1) return "Q8";
            return "";
        case 9: return mx == 9 ? "Z/9" : "(Z/3)^2";
        case 10: return abelian ? "Z/10" : "D10";
        case 11: return "Z/11";
        case 12:
            if (abelian) return mx == 12 ? "Z/12" : "Z/6 × Z/2";
            if (c3 == 8) return "A4";
            if (c2 == 7) return "D12";
            if (c2 == 1) return "Dic3";
            return "";
        case 13: return "Z/13";
        case 14: return abelian ? "Z/14" : "D14";
        case 15: return "Z/15";
        case 16:
            if (abelian) {
                if (mx == 16) return "Z/16";
                if (mx == 8) return "Z/8 × Z/2";
                if (mx == 4 && c2 == 3) return "Z/4 × Z/4";
                if (mx == 4) return "Z/4 × Z/2 × Z/2";
                return "(Z/2)^4";
            }
            if (c2 == 9) return "D16";
            if (c2 == 1) return "Q16";
            if (c2 == 5 && mx == 8) return "SD16";
            if (c2 == 3 && mx == 8) return "M4(2)";
            if (c2 == 11) return "D8 × Z/2";
            return "";  // remaining fingerprints are not discriminating
        default: return "";
    }
}

nlohmann::json GroupId::to_json() const {
    nlohmann::json orders = nlohmann::json::array();
    for (const auto& [o, c] : element_orders) orders.push_back({o, c});
    return nlohmann::json{{"order", order.str()},
                          {"abelian", abelian},
                          {"element_orders", orders},
                          {"label", label.empty() ? nlohmann::json() : nlohmann::json(label)}};
}

namespace {

constexpr std::size_t kIdentifyLimit = 2048;

// Common fingerprint computation over an abstract multiplication.
GroupId identify_impl(std::size_t k, const std::function<int(int, int)>& mul) {
    if (k == 0) throw ExtorbError("identify_group: empty element list");
    GroupId id;
    id.order = BigInt(k);
    int identity = -1;
    for (std::size_t i = 0; i < k; ++i)
        if (mul(static_cast<int>(i), static_cast<int>(i)) == static_cast<int>(i)) {
            identity = static_cast<int>(i);
            break;
        }
    if (identity < 0) throw ExtorbError("identify_group: no identity; element list not a group");
    std::map<std::uint64_t, std::uint64_t> mult_map;
    for (std::size_t i = 0; i < k; ++i) {
        int cur = static_cast<int>(i);
        std::uint64_t ord = 1;
        while (cur != identity) {
            cur = mul(cur, static_cast<int>(i));
            ++ord;
            if (ord > k) throw ExtorbError("identify_group: element order exceeds group order");
        }
        ++mult_map[ord];
    }
    id.element_orders.assign(mult_map.begin(), mult_map.end());
    id.abelian = true;
    for (std::size_t i = 0; i < k && id.abelian; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (mul(static_cast<int>(i), static_cast<int>(j)) !=
                mul(static_cast<int>(j), static_cast<int>(i))) {
                id.abelian = false;
                break;
            }
    id.label = label_for_fingerprint(id.order, id.abelian, id.element_orders);
    if (id.label.empty()) id.label = "order-" + id.order.str();
    return id;
}

}  // namespace

GroupId identify_group_matrices(const std::vector<FpMatrix>& elements) {
    const std::size_t k = elements.size();
    if (k > kIdentifyLimit) throw CapExceeded(std::to_string(k), std::to_string(kIdentifyLimit));
    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < k; ++i) index[elements[i].key()] = static_cast<int>(i);
    auto mul = [&](int a, int b) {
        auto it = index.find(mat_mul(elements[static_cast<std::size_t>(a)],
                                     elements[static_cast<std::size_t>(b)])
                                 .key());
        if (it == index.end()) throw ExtorbError("identify_group: element list not closed");
        return it->second;
    };
    return identify_impl(k, mul);
}

GroupId identify_group_mul(std::size_t k, const std::function<int(int, int)>& mul) {
    if (k > kIdentifyLimit) throw CapExceeded(std::to_string(k), std::to_string(kIdentifyLimit));
    return identify_impl(k, mul);
}

GroupId identify_group_pairs(const std::vector<std::pair<FpMatrix, FpMatrix>>& elements) {
    const std::size_t k = elements.size();
    if (k > kIdentifyLimit) throw CapExceeded(std::to_string(k), std::to_string(kIdentifyLimit));
    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < k; ++i)
        index[elements[i].first.key() + elements[i].second.key()] = static_cast<int>(i);
    auto mul = [&](int a, int b) {
        const auto& x = elements[static_cast<std::size_t>(a)];
        const auto& y = elements[static_cast<std::size_t>(b)];
        auto it = index.find(mat_mul(x.first, y.first).key() + mat_mul(x.second, y.second).key());
        if (it == index.end()) throw ExtorbError("identify_group: element list not closed");
        return it->second;
    };
    return identify_impl(k, mul);
}

// ---------------------------------------------------------------------------
// The shared enumeration pass.
// ---------------------------------------------------------------------------

namespace {

std::string class_bytes(const ExtensionClass& e) {
    const std::size_t D = e.coeff_dim();
    std::string s;
    s.resize(D * static_cast<std::size_t>(e.n));
    std::vector<std::uint8_t> buf(D);
    for (int j = 0; j < e.n; ++j) {
        e.coeff_column(j, buf.data());
        std::memcpy(s.data() + D * static_cast<std::size_t>(j), buf.data(), D);
    }
    return s;
}

ExtensionClass class_from_bytes(const ExtensionClass& shape, const std::string& bytes) {
    ExtensionClass out = shape;
    const std::size_t D = shape.coeff_dim();
    for (int j = 0; j < shape.n; ++j)
        out.set_from_coeffs(j, reinterpret_cast<const std::uint8_t*>(bytes.data()) +
                                   D * static_cast<std::size_t>(j));
    return out;
}

struct PassShape {
    int p = 2, m = 0, n = 0;
    int D = 0;
    bool quadratic = true;
    std::vector<std::uint8_t> C;     // D x n, column-major
    bool zero_class = false;
    int d_rel = 0;                   // n - rank(C); relations among components
    std::uint64_t coset_size = 1;    // p^(d_rel * n)
    std::uint64_t gl_n_u64 = 0;      // |GL_n| when the zero-class shortcut applies
    std::vector<std::uint8_t> full;  // n blocks of m*m: upper table (p=2) or alternating matrix
    std::vector<std::uint8_t> bock;  // odd p: n blocks of m
};

PassShape make_shape(const ExtensionClass& e, const Caps& caps) {
    PassShape S;
    S.p = e.p;
    S.m = e.m;
    S.n = e.n;
    S.quadratic = (e.p == 2);
    S.D = static_cast<int>(e.coeff_dim());
    if (S.n > kMaxMix) throw DimensionMismatch("component count exceeds the mixing-solver bound");
    S.C.resize(static_cast<std::size_t>(S.D) * S.n);
    for (int j = 0; j < S.n; ++j) e.coeff_column(j, S.C.data() + static_cast<std::size_t>(j) * S.D);
    S.zero_class = std::all_of(S.C.begin(), S.C.end(), [](std::uint8_t v) { return v == 0; });

    FpMatrix cmat(e.p, S.D, S.n);
    for (int d = 0; d < S.D; ++d)
        for (int j = 0; j < S.n; ++j) cmat.at(d, j) = S.C[static_cast<std::size_t>(j) * S.D + d];
    S.d_rel = S.n - mat_rank(cmat);

    if (S.zero_class) {
        BigInt gln = gl_order(S.n, S.p);
        require_cap(gln, BigInt(caps.enumeration));
        S.gl_n_u64 = gln.convert_to<std::uint64_t>();
    } else if (S.d_rel > 0) {
        BigInt coset = 1;
        for (int i = 0; i < S.d_rel * S.n; ++i) coset *= S.p;
        require_cap(coset, BigInt(caps.affine_kernel));
        S.coset_size = coset.convert_to<std::uint64_t>();
    }

    const std::size_t mm = static_cast<std::size_t>(e.m) * e.m;
    S.full.assign(mm * static_cast<std::size_t>(S.n), 0);
    if (!S.quadratic) S.bock.assign(static_cast<std::size_t>(e.m) * S.n, 0);
    for (int j = 0; j < S.n; ++j) {
        std::uint8_t* blk = S.full.data() + mm * static_cast<std::size_t>(j);
        if (S.quadratic) {
            const auto& q = std::get<QuadraticFormF2>(e.comps[static_cast<std::size_t>(j)]);
            for (int i = 0; i < e.m; ++i)
                for (int k = i; k < e.m; ++k)
                    blk[static_cast<std::size_t>(i) * e.m + k] = q.c[q.idx(i, k)];
        } else {
            const auto& ab = std::get<AltBock>(e.comps[static_cast<std::size_t>(j)]);
            FpMatrix L = ab.alt_matrix();
            std::memcpy(blk, L.e.data(), mm);
            std::memcpy(S.bock.data() + static_cast<std::size_t>(e.m) * j, ab.bock.data(),
                        static_cast<std::size_t>(e.m));
        }
    }
    return S;
}

// Scratch buffers reused across the pass; one per worker.
struct PassScratch {
    std::vector<std::uint8_t> t1, t2, F, Mt;
    std::vector<std::uint8_t> aug;   // D x 2n row-major
    std::vector<std::uint8_t> u0, kb, u, gwork;
    void init(const PassShape& S) {
        const std::size_t mm = static_cast<std::size_t>(S.m) * S.m;
        t1.assign(mm, 0);
        t2.assign(mm, 0);
        Mt.assign(mm, 0);
        F.assign(static_cast<std::size_t>(S.D) * S.n, 0);
        aug.assign(static_cast<std::size_t>(S.D) * 2 * S.n, 0);
        u0.assign(static_cast<std::size_t>(S.n) * S.n, 0);
        kb.assign(static_cast<std::size_t>(S.n) * S.n, 0);
        u.assign(static_cast<std::size_t>(S.n) * S.n, 0);
        gwork.assign(static_cast<std::size_t>(S.n) * S.n, 0);
    }
};

// f = e ∘ M, written as coefficient columns into sc.F.
void transform_cols(const PassShape& S, const std::uint8_t* M, PassScratch& sc) {
    const int m = S.m, p = S.p;
    const std::size_t mm = static_cast<std::size_t>(m) * m;
    std::uint8_t* t1 = sc.t1.data();
    std::uint8_t* t2 = sc.t2.data();
    for (int j = 0; j < S.n; ++j) {
        const std::uint8_t* U = S.full.data() + mm * static_cast<std::size_t>(j);
        std::uint8_t* Fc = sc.F.data() + static_cast<std::size_t>(j) * S.D;
        // t1 = U * M, t2 = M^T * t1
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) {
                std::uint32_t acc = 0;
                for (int k = 0; k < m; ++k)
                    acc += static_cast<std::uint32_t>(U[static_cast<std::size_t>(r) * m + k]) *
                           M[static_cast<std::size_t>(k) * m + c];
                t1[static_cast<std::size_t>(r) * m + c] = static_cast<std::uint8_t>(acc % p);
            }
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c) {
                std::uint32_t acc = 0;
                for (int k = 0; k < m; ++k)
                    acc += static_cast<std::uint32_t>(M[static_cast<std::size_t>(k) * m + r]) *
                           t1[static_cast<std::size_t>(k) * m + c];
                t2[static_cast<std::size_t>(r) * m + c] = static_cast<std::uint8_t>(acc % p);
            }
        if (S.quadratic) {
            std::size_t idx = 0;
            for (int i = 0; i < m; ++i) {
                Fc[idx++] = t2[static_cast<std::size_t>(i) * m + i];
                for (int k = i + 1; k < m; ++k)
                    Fc[idx++] = static_cast<std::uint8_t>(t2[static_cast<std::size_t>(i) * m + k] ^
                                                          t2[static_cast<std::size_t>(k) * m + i]);
            }
            // Reorder: the quadratic coeff table stores (i,i), (i,i+1), ... per i,
            // which is exactly the order produced above.
        } else {
            std::size_t idx = 0;
            for (int i = 0; i < m; ++i)
                for (int k = i + 1; k < m; ++k)
                    Fc[idx++] = t2[static_cast<std::size_t>(i) * m + k];
            const std::uint8_t* b = S.bock.data() + static_cast<std::size_t>(m) * j;
            for (int i = 0; i < m; ++i) {
                std::uint32_t acc = 0;
                for (int k = 0; k < m; ++k)
                    acc += static_cast<std::uint32_t>(M[static_cast<std::size_t>(k) * m + i]) * b[k];
                Fc[idx++] = static_cast<std::uint8_t>(acc % p);
            }
        }
    }
}

bool small_invertible(const std::uint8_t* u, int n, int p, std::uint8_t* work) {
    std::memcpy(work, u, static_cast<std::size_t>(n) * n);
    int rank = 0;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = rank; r < n; ++r)
            if (work[static_cast<std::size_t>(r) * n + col]) { piv = r; break; }
        if (piv < 0) return false;
        if (piv != rank)
            for (int c = 0; c < n; ++c)
                std::swap(work[static_cast<std::size_t>(piv) * n + c],
                          work[static_cast<std::size_t>(rank) * n + c]);
        int iv = fp_inv(work[static_cast<std::size_t>(rank) * n + col], p);
        for (int c = 0; c < n; ++c)
            work[static_cast<std::size_t>(rank) * n + c] =
                static_cast<std::uint8_t>(work[static_cast<std::size_t>(rank) * n + c] * iv % p);
        for (int r = rank + 1; r < n; ++r) {
            int f = work[static_cast<std::size_t>(r) * n + col];
            if (!f) continue;
            f = p - f;
            for (int c = 0; c < n; ++c)
                work[static_cast<std::size_t>(r) * n + c] = static_cast<std::uint8_t>(
                    (work[static_cast<std::size_t>(r) * n + c] +
                     f * work[static_cast<std::size_t>(rank) * n + c]) % p);
        }
        ++rank;
    }
    return rank == n;
}

// Solve F u = C for the mixing matrix u.  Returns the kernel dimension of F
// (== shape.d_rel when consistent), or -1 when inconsistent.  Writes the
// particular solution u0 (row-major) and a kernel basis (kb, d rows of n).
int solve_mix(const PassShape& S, PassScratch& sc) {
    const int D = S.D, n = S.n, p = S.p;
    const int w = 2 * n;
    std::uint8_t* aug = sc.aug.data();
    for (int r = 0; r < D; ++r) {
        for (int j = 0; j < n; ++j) {
            aug[static_cast<std::size_t>(r) * w + j] = sc.F[static_cast<std::size_t>(j) * D + r];
            aug[static_cast<std::size_t>(r) * w + n + j] = S.C[static_cast<std::size_t>(j) * D + r];
        }
    }
    int pivrow_of_col[kMaxMix];
    for (int j = 0; j < n; ++j) pivrow_of_col[j] = -1;
    int rank = 0;
    for (int col = 0; col < n && rank < D; ++col) {
        int piv = -1;
        for (int r = rank; r < D; ++r)
            if (aug[static_cast<std::size_t>(r) * w + col]) { piv = r; break; }
        if (piv < 0) continue;
        if (piv != rank)
            for (int c = 0; c < w; ++c)
                std::swap(aug[static_cast<std::size_t>(piv) * w + c],
                          aug[static_cast<std::size_t>(rank) * w + c]);
        int iv = fp_inv(aug[static_cast<std::size_t>(rank) * w + col], p);
        if (iv != 1)
            for (int c = 0; c < w; ++c)
                aug[static_cast<std::size_t>(rank) * w + c] =
                    static_cast<std::uint8_t>(aug[static_cast<std::size_t>(rank) * w + c] * iv % p);
        for (int r = 0; r < D; ++r) {
            if (r == rank) continue;
            int f = aug[static_cast<std::size_t>(r) * w + col];
            if (!f) continue;
            f = p - f;
            for (int c = 0; c < w; ++c)
                aug[static_cast<std::size_t>(r) * w + c] = static_cast<std::uint8_t>(
                    (aug[static_cast<std::size_t>(r) * w + c] +
                     f * aug[static_cast<std::size_t>(rank) * w + c]) % p);
        }
        pivrow_of_col[col] = rank;
        ++rank;
    }
    // Consistency: a row with zero F-part must have zero C-part.
    for (int r = rank; r < D; ++r)
        for (int j = 0; j < n; ++j)
            if (aug[static_cast<std::size_t>(r) * w + n + j]) return -1;
    std::fill(sc.u0.begin(), sc.u0.end(), 0);
    for (int col = 0; col < n; ++col) {
        int pr = pivrow_of_col[col];
        if (pr < 0) continue;
        for (int j = 0; j < n; ++j)
            sc.u0[static_cast<std::size_t>(col) * n + j] = aug[static_cast<std::size_t>(pr) * w + n + j];
    }
    int d = 0;
    for (int col = 0; col < n; ++col) {
        if (pivrow_of_col[col] >= 0) continue;
        std::uint8_t* kv = sc.kb.data() + static_cast<std::size_t>(d) * n;
        std::fill(kv, kv + n, 0);
        kv[col] = 1;
        for (int c2 = 0; c2 < n; ++c2) {
            int pr = pivrow_of_col[c2];
            if (pr >= 0)
                kv[c2] = static_cast<std::uint8_t>(fp_neg(aug[static_cast<std::size_t>(pr) * w + col], p));
        }
        ++d;
    }
    return d;
}

struct OmegaHit {
    std::uint64_t idx1 = UINT64_MAX;
    FpMatrix s1;
    std::uint64_t idx2 = UINT64_MAX;
    FpMatrix s2;
};

struct LocalAgg {
    std::uint64_t stab_v = 0;
    std::uint64_t joint = 0;
    bool stab_overflow = false;
    bool pair_overflow = false;
    std::vector<FpMatrix> stab_elems;
    std::vector<std::pair<FpMatrix, FpMatrix>> pair_elems;
    std::unordered_map<std::string, OmegaHit> omega;
    std::unordered_map<std::string, std::uint64_t> lorbit;  // key -> first index
};

struct PassConfig {
    const PassShape* S;
    Caps caps;
    bool transpose = false;
    bool collect_lorbit = false;
};

// Per-matrix step shared by all enumeration drivers.
void pass_step(const PassConfig& cfg, const FpMatrix& mat, std::uint64_t index, LocalAgg& agg,
               PassScratch& sc) {
    const PassShape& S = *cfg.S;
    const int n = S.n, p = S.p;
    const std::uint8_t* M = mat.e.data();
    if (cfg.transpose) {
        for (int r = 0; r < S.m; ++r)
            for (int c = 0; c < S.m; ++c)
                sc.Mt[static_cast<std::size_t>(c) * S.m + r] = mat.e[static_cast<std::size_t>(r) * S.m + c];
        M = sc.Mt.data();
    }
    transform_cols(S, M, sc);

    const bool is_stab = std::memcmp(sc.F.data(), S.C.data(), S.C.size()) == 0;
    if (is_stab) {
        ++agg.stab_v;
        if (!agg.stab_overflow) {
            if (agg.stab_elems.size() < cfg.caps.element_list) {
                FpMatrix copy(S.p, S.m, S.m);
                std::memcpy(copy.e.data(), M, copy.e.size());
                agg.stab_elems.push_back(std::move(copy));
            } else {
                agg.stab_overflow = true;
                agg.stab_elems.clear();
            }
        }
    }
    if (cfg.collect_lorbit) {
        std::string key(reinterpret_cast<const char*>(sc.F.data()), sc.F.size());
        auto [it, inserted] = agg.lorbit.try_emplace(std::move(key), index);
        if (!inserted && index < it->second) it->second = index;
    }

    int d = solve_mix(S, sc);
    if (d < 0) return;  // f is not reachable by component mixing

    std::uint64_t count = 0;
    auto record_pair = [&](const std::uint8_t* u) {
        if (agg.pair_overflow) return;
        if (agg.pair_elems.size() >= cfg.caps.element_list) {
            agg.pair_overflow = true;
            agg.pair_elems.clear();
            return;
        }
        FpMatrix scopy(S.p, S.m, S.m), ucopy(S.p, n, n);
        std::memcpy(scopy.e.data(), M, scopy.e.size());
        std::memcpy(ucopy.e.data(), u, ucopy.e.size());
        agg.pair_elems.emplace_back(std::move(scopy), std::move(ucopy));
    };

    if (d == 0) {
        if (small_invertible(sc.u0.data(), n, p, sc.gwork.data())) {
            count = 1;
            record_pair(sc.u0.data());
        }
    } else if (S.zero_class) {
        count = S.gl_n_u64;
        agg.pair_overflow = true;  // listing the full product is never useful here
        agg.pair_elems.clear();
    } else {
        // Exhaust the solution coset u0 + <kernel columns>.
        std::vector<std::uint8_t> digits(static_cast<std::size_t>(d) * n, 0);
        for (std::uint64_t it = 0; it < S.coset_size; ++it) {
            if (it) {
                std::size_t pos = digits.size() - 1;
                while (true) {
                    if (++digits[pos] < p) break;
                    digits[pos] = 0;
                    --pos;
                }
            }
            // u(i, j) = u0(i, j) + sum_t digits[t * n + j] * kb[t][i]
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    std::uint32_t acc = sc.u0[static_cast<std::size_t>(i) * n + j];
                    for (int t = 0; t < d; ++t)
                        acc += static_cast<std::uint32_t>(digits[static_cast<std::size_t>(t) * n + j]) *
                               sc.kb[static_cast<std::size_t>(t) * n + i];
                    sc.u[static_cast<std::size_t>(i) * n + j] = static_cast<std::uint8_t>(acc % p);
                }
            if (small_invertible(sc.u.data(), n, p, sc.gwork.data())) {
                ++count;
                record_pair(sc.u.data());
            }
        }
    }
    if (count == 0) return;
    agg.joint += count;
    std::string key(reinterpret_cast<const char*>(sc.F.data()), sc.F.size());
    auto [it, inserted] = agg.omega.try_emplace(std::move(key));
    OmegaHit& hit = it->second;
    if (index < hit.idx2) {
        FpMatrix scopy(S.p, S.m, S.m);
        std::memcpy(scopy.e.data(), M, scopy.e.size());
        if (index < hit.idx1) {
            hit.idx2 = hit.idx1;
            hit.s2 = hit.s1;
            hit.idx1 = index;
            hit.s1 = std::move(scopy);
        } else {
            hit.idx2 = index;
            hit.s2 = std::move(scopy);
        }
    }
}

void merge_locals(std::vector<LocalAgg>& locals, LocalAgg& out, const Caps& caps) {
    for (auto& loc : locals) {
        out.stab_v += loc.stab_v;
        out.joint += loc.joint;
        out.stab_overflow = out.stab_overflow || loc.stab_overflow;
        out.pair_overflow = out.pair_overflow || loc.pair_overflow;
        if (!out.stab_overflow) {
            for (auto& m : loc.stab_elems) out.stab_elems.push_back(std::move(m));
            if (out.stab_elems.size() > caps.element_list) {
                out.stab_overflow = true;
                out.stab_elems.clear();
            }
        }
        if (!out.pair_overflow) {
            for (auto& pr : loc.pair_elems) out.pair_elems.push_back(std::move(pr));
            if (out.pair_elems.size() > caps.element_list) {
                out.pair_overflow = true;
                out.pair_elems.clear();
            }
        }
        for (auto& [key, hit] : loc.omega) {
            OmegaHit& dst = out.omega[key];
            auto offer = [&dst](std::uint64_t idx, FpMatrix& s) {
                if (idx == UINT64_MAX) return;
                if (idx < dst.idx1) {
                    dst.idx2 = dst.idx1;
                    dst.s2 = dst.s1;
                    dst.idx1 = idx;
                    dst.s1 = std::move(s);
                } else if (idx < dst.idx2) {
                    dst.idx2 = idx;
                    dst.s2 = std::move(s);
                }
            };
            offer(hit.idx1, hit.s1);
            offer(hit.idx2, hit.s2);
        }
        for (auto& [key, idx] : loc.lorbit) {
            auto [it, inserted] = out.lorbit.try_emplace(key, idx);
            if (!inserted && idx < it->second) it->second = idx;
        }
        loc = LocalAgg{};
    }
}

}  // namespace

nlohmann::json StabilizerReport::to_json() const {
    nlohmann::json j{{"order", order.str()},
                     {"side", side == Side::V ? "v" : (side == Side::N ? "n" : "joint")},
                     {"method", method == Method::Enumeration ? "enumeration" : "structural"},
                     {"elements_listed", elements_listed},
                     {"label", id && !id->label.empty() ? nlohmann::json(id->label) : nlohmann::json()},
                     {"elapsed_ms", 0}};
    if (elements_listed) {
        nlohmann::json elems = nlohmann::json::array();
        if (side == Side::Joint) {
            for (const auto& [s, t] : pairs)
                elems.push_back({{"s", s.to_json()}, {"t", t.to_json()}});
        } else {
            for (const auto& mtx : elements) elems.push_back(mtx.to_json());
        }
        j["elements"] = std::move(elems);
    }
    if (id) j["group_id"] = id->to_json();
    return j;
}

GroupId OmegaGroup::group_id() const {
    const std::size_t k = elements.size();
    auto mul = [&](int a, int b) { return table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; };
    return identify_impl(k, mul);
}

nlohmann::json OmegaGroup::to_json() const {
    nlohmann::json elems = nlohmann::json::array();
    for (const auto& e : elements) elems.push_back(print_class(e));
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& r : reps_left) reps.push_back(r.to_json());
    GroupId id = group_id();
    return nlohmann::json{{"order", order().str()},
                          {"label", id.label.empty() ? nlohmann::json() : nlohmann::json(id.label)},
                          {"group_id", id.to_json()},
                          {"elements", elems},
                          {"reps_left", reps},
                          {"identity_index", identity_index},
                          {"table", table},
                          {"elapsed_ms", 0}};
}

nlohmann::json ImRhoBreakdown::to_json() const {
    return nlohmann::json{{"order", im_rho.str()},
                          {"breakdown",
                           {{"stab_v", stab_v.str()}, {"stab_n", stab_n.str()}, {"omega", omega.str()}}},
                          {"elapsed_ms", 0}};
}

nlohmann::json DivisibilityCheck::to_json() const {
    return nlohmann::json{{"omega_order", omega_order.str()},
                          {"left_orbit_size", left_orbit_size.str()},
                          {"right_orbit_size", right_orbit_size.str()},
                          {"gcd", gcd_value.str()},
                          {"divides", divides}};
}

namespace {

// Mixed coefficients C * u compared against C; the u's satisfying this form
// the component-side stabilizer written with no inversion.
bool mix_fixes(const PassShape& S, const FpMatrix& u) {
    for (int j = 0; j < S.n; ++j)
        for (int r = 0; r < S.D; ++r) {
            std::uint32_t acc = 0;
            for (int i = 0; i < S.n; ++i)
                acc += static_cast<std::uint32_t>(S.C[static_cast<std::size_t>(i) * S.D + r]) * u.at(i, j);
            if (acc % S.p != S.C[static_cast<std::size_t>(j) * S.D + r]) return false;
        }
    return true;
}

StabilizerReport stabilizer_n_impl(const ExtensionClass& e, const Caps& caps) {
    PassShape S = make_shape(e, caps);
    StabilizerReport rep;
    rep.side = Side::N;
    BigInt gln = gl_order(e.n, e.p);
    if (gln <= BigInt(caps.enumeration)) {
        rep.method = Method::Enumeration;
        std::uint64_t count = 0;
        bool overflow = false;
        std::vector<FpMatrix> elems;
        gl_for_each(e.n, e.p, [&](const FpMatrix& u, std::uint64_t) {
            if (!mix_fixes(S, u)) return;
            ++count;
            if (!overflow) {
                if (elems.size() < caps.element_list) {
                    elems.push_back(u);
                } else {
                    overflow = true;
                    elems.clear();
                }
            }
        });
        rep.order = BigInt(count);
        rep.elements_listed = !overflow;
        rep.elements = std::move(elems);
    } else {
        rep.method = Method::Structural;
        // Solutions of C u = C form I + K with K's columns in ker(C); count the
        // invertible ones by exhausting the coset.
        FpMatrix cmat(e.p, S.D, S.n);
        for (int d = 0; d < S.D; ++d)
            for (int j = 0; j < S.n; ++j) cmat.at(d, j) = S.C[static_cast<std::size_t>(j) * S.D + d];
        Subspace ker = kernel(cmat);
        int kd = ker.dim();
        if (kd == 0) {
            rep.order = 1;
            rep.elements_listed = true;
            rep.elements.push_back(FpMatrix::identity(e.n, e.p));
        } else {
            BigInt coset = 1;
            for (int i = 0; i < kd * e.n; ++i) coset *= e.p;
            require_cap(coset, BigInt(caps.affine_kernel));
            std::uint64_t total = coset.convert_to<std::uint64_t>();
            std::uint64_t count = 0;
            std::vector<std::uint8_t> digits(static_cast<std::size_t>(kd) * e.n, 0);
            FpMatrix u(e.p, e.n, e.n);
            std::vector<std::uint8_t> work(static_cast<std::size_t>(e.n) * e.n);
            for (std::uint64_t it = 0; it < total; ++it) {
                if (it) {
                    std::size_t pos = digits.size() - 1;
                    while (true) {
                        if (++digits[pos] < e.p) break;
                        digits[pos] = 0;
                        --pos;
                    }
                }
                for (int i = 0; i < e.n; ++i)
                    for (int j = 0; j < e.n; ++j) {
                        std::uint32_t acc = (i == j) ? 1 : 0;
                        for (int t = 0; t < kd; ++t)
                            acc += static_cast<std::uint32_t>(digits[static_cast<std::size_t>(t) * e.n + j]) *
                                   ker.basis[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
                        u.at(i, j) = static_cast<std::uint8_t>(acc % e.p);
                    }
                if (small_invertible(u.e.data(), e.n, e.p, work.data())) ++count;
            }
            rep.order = BigInt(count);
        }
    }
    if (rep.elements_listed && rep.elements.size() <= kIdentifyLimit && !rep.elements.empty())
        rep.id = identify_group_matrices(rep.elements);
    return rep;
}

}  // namespace

AnalysisResult analyze(const ExtensionClass& e, const AnalyzeOptions& opt) {
    PassShape S = make_shape(e, opt.caps);
    PassConfig cfg{&S, opt.caps, opt.convention == Convention::Transpose, opt.collect_left_orbit};

    std::vector<LocalAgg> locals;
    if (opt.restrict_v) {
        locals.resize(1);
        PassScratch sc;
        sc.init(S);
        std::uint64_t index = 0;
        for (const auto& s : *opt.restrict_v) {
            if (s.p != e.p || s.rows != e.m || s.cols != e.m)
                throw DimensionMismatch("restricted source element has the wrong shape");
            if (!mat_invertible(s)) throw SingularMatrix("restricted source element is singular");
            pass_step(cfg, s, index++, locals[0], sc);
        }
    } else {
        require_cap(gl_order(e.m, e.p), BigInt(opt.caps.enumeration));
        int k = std::clamp(opt.caps.workers, 1, 64);
        auto chunks = gl_chunks(e.m, e.p, k);
        locals.resize(chunks.size());
        if (k == 1) {
            PassScratch sc;
            sc.init(S);
            gl_scan_chunk(e.m, e.p, chunks[0], [&](const FpMatrix& mat, std::uint64_t idx) {
                pass_step(cfg, mat, idx, locals[0], sc);
            });
        } else {
            std::vector<std::thread> threads;
            std::vector<std::exception_ptr> errors(chunks.size());
            for (std::size_t c = 0; c < chunks.size(); ++c) {
                threads.emplace_back([&, c]() {
                    try {
                        PassScratch sc;
                        sc.init(S);
                        gl_scan_chunk(e.m, e.p, chunks[c], [&](const FpMatrix& mat, std::uint64_t idx) {
                            pass_step(cfg, mat, idx, locals[c], sc);
                        });
                    } catch (...) {
                        errors[c] = std::current_exception();
                    }
                });
            }
            for (auto& t : threads) t.join();
            for (auto& err : errors)
                if (err) std::rethrow_exception(err);
        }
    }

    LocalAgg total;
    merge_locals(locals, total, opt.caps);

    AnalysisResult res;
    ClassAnalysis& a = res.analysis;

    a.stab_v.side = Side::V;
    a.stab_v.method = Method::Enumeration;
    a.stab_v.order = BigInt(total.stab_v);
    a.stab_v.elements_listed = !total.stab_overflow;
    a.stab_v.elements = std::move(total.stab_elems);
    if (a.stab_v.elements_listed && !a.stab_v.elements.empty() &&
        a.stab_v.elements.size() <= kIdentifyLimit)
        a.stab_v.id = identify_group_matrices(a.stab_v.elements);

    a.joint.side = Side::Joint;
    a.joint.method = Method::Enumeration;
    a.joint.order = BigInt(total.joint);
    a.joint.elements_listed = !total.pair_overflow;
    a.joint.pairs = std::move(total.pair_elems);
    if (a.joint.elements_listed && !a.joint.pairs.empty() && a.joint.pairs.size() <= kIdentifyLimit)
        a.joint.id = identify_group_pairs(a.joint.pairs);

    a.stab_n = stabilizer_n_impl(e, opt.caps);

    // Intersection orbit group, ordered by first enumeration hit.
    std::vector<std::pair<std::string, OmegaHit>> hits(total.omega.begin(), total.omega.end());
    std::sort(hits.begin(), hits.end(),
              [](const auto& x, const auto& y) { return x.second.idx1 < y.second.idx1; });
    OmegaGroup& om = a.omega;
    om.base = e;
    const std::string base_key = class_bytes(e);
    std::unordered_map<std::string, int> omega_index;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        om.elements.push_back(class_from_bytes(e, hits[i].first));
        om.sigma.push_back(hits[i].second.s1);
        om.reps_left.push_back(mat_inv(hits[i].second.s1));
        omega_index[hits[i].first] = static_cast<int>(i);
        if (hits[i].first == base_key) om.identity_index = static_cast<int>(i);
    }
    if (om.identity_index < 0)
        throw WellDefinednessViolation("intersection orbit group does not contain the base class");
    om.table.assign(hits.size(), std::vector<int>(hits.size(), -1));
    for (std::size_t i = 0; i < hits.size(); ++i) {
        for (std::size_t j = 0; j < hits.size(); ++j) {
            ExtensionClass prod = substitute(om.elements[j], om.sigma[i]);
            auto it = omega_index.find(class_bytes(prod));
            if (it == omega_index.end())
                throw WellDefinednessViolation("intersection orbit product left the intersection");
            om.table[i][j] = it->second;
            if (hits[i].second.idx2 != UINT64_MAX) {
                ExtensionClass alt = substitute(om.elements[j], hits[i].second.s2);
                auto it2 = omega_index.find(class_bytes(alt));
                if (it2 == omega_index.end() || it2->second != it->second)
                    throw WellDefinednessViolation(
                        "intersection orbit product depends on the chosen representative");
            }
        }
    }

    a.breakdown.stab_v = a.stab_v.order;
    a.breakdown.stab_n = a.stab_n.order;
    a.breakdown.omega = om.order();
    a.breakdown.im_rho = a.stab_v.order * a.stab_n.order * om.order();
    if (a.breakdown.im_rho != a.joint.order)
        throw WellDefinednessViolation(
            "product formula mismatch: |stab_v| * |stab_n| * |omega| != |joint|");

    if (opt.collect_left_orbit) {
        std::vector<std::pair<std::uint64_t, const std::string*>> ordered;
        ordered.reserve(total.lorbit.size());
        for (const auto& [key, idx] : total.lorbit) ordered.emplace_back(idx, &key);
        std::sort(ordered.begin(), ordered.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        for (const auto& [idx, key] : ordered) res.left_orbit.push_back(class_from_bytes(e, *key));
    }
    return res;
}

StabilizerReport stabilizer_v(const ExtensionClass& e, const Caps& caps) {
    AnalyzeOptions opt;
    opt.caps = caps;
    return analyze(e, opt).analysis.stab_v;
}

StabilizerReport stabilizer_n(const ExtensionClass& e, const Caps& caps) {
    return stabilizer_n_impl(e, caps);
}

StabilizerReport joint_stabilizer(const ExtensionClass& e, const Caps& caps) {
    AnalyzeOptions opt;
    opt.caps = caps;
    return analyze(e, opt).analysis.joint;
}

OmegaGroup omega(const ExtensionClass& e, const Caps& caps) {
    AnalyzeOptions opt;
    opt.caps = caps;
    return analyze(e, opt).analysis.omega;
}

ImRhoBreakdown im_rho_order(const ExtensionClass& e, const Caps& caps) {
    AnalyzeOptions opt;
    opt.caps = caps;
    return analyze(e, opt).analysis.breakdown;
}

std::vector<ExtensionClass> orbit(const ExtensionClass& e, Side side, const Caps& caps) {
    if (side == Side::V) {
        AnalyzeOptions opt;
        opt.caps = caps;
        opt.collect_left_orbit = true;
        return analyze(e, opt).left_orbit;
    }
    if (side != Side::N) throw DimensionMismatch("orbit: side must be V or N");
    require_cap(gl_order(e.n, e.p), BigInt(caps.enumeration));
    std::vector<ExtensionClass> out;
    std::unordered_map<std::string, bool> seen;
    gl_for_each(e.n, e.p, [&](const FpMatrix& u, std::uint64_t) {
        ExtensionClass mixed = mix_components(e, u);
        auto [it, inserted] = seen.try_emplace(class_bytes(mixed), true);
        if (inserted) out.push_back(std::move(mixed));
    });
    return out;
}

DivisibilityCheck divisibility_check(const ExtensionClass& e, const Caps& caps) {
    AnalyzeOptions opt;
    opt.caps = caps;
    ClassAnalysis a = analyze(e, opt).analysis;
    DivisibilityCheck d;
    d.omega_order = a.omega.order();
    d.left_orbit_size = gl_order(e.m, e.p) / a.stab_v.order;
    d.right_orbit_size = gl_order(e.n, e.p) / a.stab_n.order;
    d.gcd_value = boost::multiprecision::gcd(d.left_orbit_size, d.right_orbit_size);
    d.divides = (d.gcd_value % d.omega_order) == 0;
    return d;
}

std::vector<ExtensionClass> fixed_classes(const std::vector<std::pair<FpMatrix, FpMatrix>>& gens,
                                          int p, int m, int n, const Caps& caps) {
    check_prime(p);
    ExtensionClass shape = ExtensionClass::zero(p, m, n);
    const std::size_t D = shape.coeff_dim();
    BigInt space = 1;
    for (std::size_t i = 0; i < D * static_cast<std::size_t>(n); ++i) space *= p;
    require_cap(space, BigInt(caps.enumeration));
    std::uint64_t total = space.convert_to<std::uint64_t>();

    std::vector<std::pair<FpMatrix, FpMatrix>> inv;
    for (const auto& [s, t] : gens) {
        if (s.p != p || s.rows != m || s.cols != m || t.p != p || t.rows != n || t.cols != n)
            throw DimensionMismatch("fixed_classes: generator shape mismatch");
        inv.emplace_back(mat_inv(s), mat_inv(t));
    }

    std::vector<ExtensionClass> out;
    std::vector<std::uint8_t> digits(D * static_cast<std::size_t>(n), 0);
    for (std::uint64_t it = 0; it < total; ++it) {
        if (it) {
            std::size_t pos = digits.size() - 1;
            while (true) {
                if (++digits[pos] < static_cast<std::uint8_t>(p)) break;
                digits[pos] = 0;
                --pos;
            }
        }
        ExtensionClass cand = shape;
        for (int j = 0; j < n; ++j) cand.set_from_coeffs(j, digits.data() + D * static_cast<std::size_t>(j));
        bool fixed = true;
        for (const auto& [si, ti] : inv) {
            ExtensionClass moved = mix_components(substitute(cand, si), ti);
            if (class_bytes(moved) != class_bytes(cand)) {
                fixed = false;
                break;
            }
        }
        if (fixed) out.push_back(std::move(cand));
    }
    return out;
}

BigInt normalizer_quotient_order(const std::vector<FpMatrix>& subgroup, int m, int p,
                                 const Caps& caps) {
    if (subgroup.empty()) throw ExtorbError("normalizer_quotient_order: empty subgroup");
    require_cap(gl_order(m, p), BigInt(caps.enumeration));
    std::unordered_map<std::string, bool> members;
    for (const auto& s : subgroup) members[s.key()] = true;
    std::uint64_t normalizing = 0;
    gl_for_each(m, p, [&](const FpMatrix& g, std::uint64_t) {
        FpMatrix gi = mat_inv(g);
        for (const auto& s : subgroup) {
            if (!members.count(mat_mul(mat_mul(g, s), gi).key())) return;
        }
        ++normalizing;
    });
    return BigInt(normalizing) / BigInt(subgroup.size());
}

}  // namespace extorb
