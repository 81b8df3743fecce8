#include "extorb/forms.hpp"

#include <algorithm>
#include <random>

namespace extorb {

namespace {

std::string var_name(int i, int m) {  // i is 0-based
    static const char* alias[3] = {"x", "y", "z"};
    if (m <= 3) return alias[i];
    return "x" + std::to_string(i + 1);
}

std::string subscript(int n) {
    static const char* digits[10] = {"₀", "₁", "₂", "₃", "₄",
                                     "₅", "₆", "₇", "₈", "₉"};
    std::string s = std::to_string(n), out;
    for (char ch : s) out += digits[ch - '0'];
    return out;
}

}  // namespace

QuadraticFormF2::QuadraticFormF2(int vars) : m(vars) {
    if (vars < 1) throw DimensionMismatch("quadratic form needs at least one variable");
    c.assign(table_size(vars), 0);
}

void QuadraticFormF2::add_term(int i, int j, int v) {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= m) throw DimensionMismatch("form term index out of range");
    c[idx(i, j)] = static_cast<std::uint8_t>((c[idx(i, j)] + v) & 1);
}

bool QuadraticFormF2::is_zero() const {
    return std::all_of(c.begin(), c.end(), [](std::uint8_t v) { return v == 0; });
}

int QuadraticFormF2::eval_mask(std::uint32_t v) const {
    int acc = 0;
    for (int i = 0; i < m; ++i) {
        if (!(v >> i & 1)) continue;
        for (int j = i; j < m; ++j)
            if (v >> j & 1) acc ^= c[idx(i, j)];
    }
    return acc;
}

int QuadraticFormF2::eval(const std::vector<std::uint8_t>& v) const {
    if (static_cast<int>(v.size()) != m) throw DimensionMismatch("eval: wrong vector length");
    std::uint32_t mask = 0;
    for (int i = 0; i < m; ++i)
        if (v[i] & 1) mask |= 1u << i;
    return eval_mask(mask);
}

QuadraticFormF2 QuadraticFormF2::substituted(const FpMatrix& M) const {
    if (M.p != 2 || M.rows != m || M.cols != m)
        throw DimensionMismatch("substituted: need an m x m matrix over F_2");
    // A = M^T U M with U the upper coefficient table, then re-fold to upper.
    FpMatrix U(2, m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) U.at(i, j) = c[idx(i, j)];
    FpMatrix A = mat_mul(mat_mul(M.transposed(), U), M);
    QuadraticFormF2 out(m);
    for (int i = 0; i < m; ++i) {
        out.c[out.idx(i, i)] = A.at(i, i);
        for (int j = i + 1; j < m; ++j)
            out.c[out.idx(i, j)] = static_cast<std::uint8_t>(A.at(i, j) ^ A.at(j, i));
    }
    return out;
}

std::string QuadraticFormF2::to_text() const {
    std::string out;
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            if (!c[idx(i, j)]) continue;
            if (!out.empty()) out += " + ";
            if (i == j) {
                out += var_name(i, m) + "^2";
            } else if (m <= 3) {
                out += var_name(i, m) + var_name(j, m);
            } else {
                out += var_name(i, m) + "*" + var_name(j, m);
            }
        }
    return out.empty() ? "0" : out;
}

nlohmann::json QuadraticFormF2::to_json() const {
    nlohmann::json coeffs = nlohmann::json::array();
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j)
            if (c[idx(i, j)]) coeffs.push_back({i + 1, j + 1, 1});
    return nlohmann::json{{"p", 2}, {"m", m}, {"coeffs", coeffs}};
}

QuadraticFormF2 QuadraticFormF2::from_json(const nlohmann::json& j) {
    if (j.at("p").get<int>() != 2)
        throw DimensionMismatch("quadratic form JSON: p must be 2");
    QuadraticFormF2 q(j.at("m").get<int>());
    for (const auto& t : j.at("coeffs"))
        q.add_term(t.at(0).get<int>() - 1, t.at(1).get<int>() - 1, t.at(2).get<int>());
    return q;
}

FpMatrix bilinear_of(const QuadraticFormF2& q) {
    FpMatrix B(2, q.m, q.m);
    for (int i = 0; i < q.m; ++i)
        for (int j = i + 1; j < q.m; ++j)
            B.at(i, j) = B.at(j, i) = q.c[q.idx(i, j)];
    return B;
}

Subspace bilrad(const QuadraticFormF2& q) { return kernel(bilinear_of(q)); }

Subspace rad(const QuadraticFormF2& q) {
    // Q restricted to bilrad is additive, so the zero locus there is a subspace.
    Subspace br = bilrad(q);
    std::vector<std::vector<std::uint8_t>> gens;
    std::vector<std::uint8_t> one_vec;  // a basis vector with Q = 1, if any
    for (const auto& b : br.basis) {
        if (q.eval(b) == 0) {
            gens.push_back(b);
        } else if (one_vec.empty()) {
            one_vec = b;
        } else {
            std::vector<std::uint8_t> s(b.size());
            for (std::size_t k = 0; k < b.size(); ++k) s[k] = b[k] ^ one_vec[k];
            gens.push_back(std::move(s));
        }
    }
    if (gens.empty()) {
        Subspace empty;
        empty.p = 2;
        empty.ambient = q.m;
        return empty;
    }
    FpMatrix g(2, static_cast<int>(gens.size()), q.m);
    for (int i = 0; i < g.rows; ++i)
        for (int j = 0; j < q.m; ++j) g.at(i, j) = gens[static_cast<std::size_t>(i)][j];
    return row_space(g);
}

int arf_democratic(const QuadraticFormF2& q) {
    if (q.m > 24) throw DimensionMismatch("arf_democratic: m > 24");
    // Pack rows: bit j of urow[i] (j >= i) is the coefficient of x_i x_j.
    std::uint32_t urow[24] = {};
    for (int i = 0; i < q.m; ++i)
        for (int j = i; j < q.m; ++j)
            if (q.c[q.idx(i, j)]) urow[i] |= 1u << j;
    const std::uint32_t total = 1u << q.m;
    std::uint64_t ones = 0;
    for (std::uint32_t v = 0; v < total; ++v) {
        int acc = 0;
        std::uint32_t rest = v;
        while (rest) {
            int i = __builtin_ctz(rest);
            rest &= rest - 1;
            acc ^= __builtin_popcount(urow[i] & v) & 1;
        }
        ones += static_cast<std::uint64_t>(acc);
    }
    std::uint64_t zeros = total - ones;
    if (zeros > ones) return 1;
    if (zeros < ones) return -1;
    return 0;
}

namespace {

// Helpers for mask-based symplectic constructions (m <= 31).
struct MaskBilinear {
    int m;
    std::uint32_t brow[32];
    explicit MaskBilinear(const QuadraticFormF2& q) : m(q.m) {
        for (int i = 0; i < m; ++i) {
            brow[i] = 0;
            for (int j = 0; j < m; ++j)
                if (i != j && q.coeff(i, j)) brow[i] |= 1u << j;
        }
    }
    int operator()(std::uint32_t u, std::uint32_t v) const {
        int acc = 0;
        std::uint32_t rest = u;
        while (rest) {
            int i = __builtin_ctz(rest);
            rest &= rest - 1;
            acc ^= __builtin_popcount(brow[i] & v) & 1;
        }
        return acc;
    }
};

std::vector<std::uint32_t> span_of(const std::vector<std::uint32_t>& basis) {
    std::vector<std::uint32_t> out{0};
    for (std::uint32_t b : basis) {
        std::size_t sz = out.size();
        for (std::size_t i = 0; i < sz; ++i) out.push_back(out[i] ^ b);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Echelonize a list of masks (lowest set bit as pivot), dropping dependents.
std::vector<std::uint32_t> reduce_masks(std::vector<std::uint32_t> vecs) {
    std::vector<std::uint32_t> basis;
    for (std::uint32_t v : vecs) {
        for (std::uint32_t b : basis) {
            std::uint32_t lead = b & -b;
            if (v & lead) v ^= b;
        }
        if (v) basis.push_back(v);
    }
    return basis;
}

}  // namespace

int arf_symplectic(const QuadraticFormF2& q, std::uint64_t seed) {
    if (q.m > 16) throw DimensionMismatch("arf_symplectic: m > 16");
    if (mat_rank(bilinear_of(q)) != q.m)
        throw DegenerateForm("arf_symplectic: polarization is degenerate");
    MaskBilinear B(q);
    std::mt19937_64 rng(seed);
    std::vector<std::uint32_t> basis;
    for (int i = 0; i < q.m; ++i) basis.push_back(1u << i);
    int acc = 0;
    while (!basis.empty()) {
        std::vector<std::uint32_t> space = span_of(basis);
        // Candidate u: pairs with something in the current space.
        std::vector<std::uint32_t> us;
        for (std::uint32_t v : space) {
            if (!v) continue;
            bool ok = false;
            for (std::uint32_t b : basis)
                if (B(v, b)) { ok = true; break; }
            if (ok) us.push_back(v);
        }
        std::uint32_t u = seed ? us[rng() % us.size()] : us.front();
        std::vector<std::uint32_t> vs;
        for (std::uint32_t v : space)
            if (B(u, v)) vs.push_back(v);
        std::uint32_t v = seed ? vs[rng() % vs.size()] : vs.front();
        acc ^= q.eval_mask(u) & q.eval_mask(v);
        std::vector<std::uint32_t> corrected;
        for (std::uint32_t w : basis) {
            std::uint32_t w2 = w;
            if (B(w, v)) w2 ^= u;
            if (B(w2, u)) w2 ^= v;
            if (w2) corrected.push_back(w2);
        }
        basis = reduce_masks(corrected);
    }
    return acc ? -1 : 1;
}

FormTriple classify(const QuadraticFormF2& q) {
    FormTriple t;
    t.dim = q.m;
    t.bilrad_dim = bilrad(q).dim();
    t.arf = arf_democratic(q);
    return t;
}

QuadraticFormF2 standard_form(StandardKind kind, int vars, int m) {
    if (vars > m) throw DimensionMismatch("standard_form: vars > m");
    QuadraticFormF2 q(m);
    switch (kind) {
        case StandardKind::Zero:
            break;
        case StandardKind::Plus:
            if (vars % 2) throw DimensionMismatch("plus standard form needs even vars");
            for (int i = 0; i + 1 < vars; i += 2) q.add_term(i, i + 1);
            break;
        case StandardKind::Minus:
            if (vars % 2 || vars < 2) throw DimensionMismatch("minus standard form needs even vars >= 2");
            for (int i = 0; i + 1 < vars - 2; i += 2) q.add_term(i, i + 1);
            q.add_term(vars - 2, vars - 2);
            q.add_term(vars - 2, vars - 1);
            q.add_term(vars - 1, vars - 1);
            break;
        case StandardKind::Odd:
            if (vars % 2 == 0) throw DimensionMismatch("odd standard form needs odd vars");
            q.add_term(0, 0);
            for (int i = 1; i + 1 < vars; i += 2) q.add_term(i, i + 1);
            break;
    }
    return q;
}

StandardClass standard_class_of(const QuadraticFormF2& q) {
    StandardClass sc;
    if (q.is_zero()) {
        sc.kind = StandardKind::Zero;
        sc.vars = 0;
        sc.rep = QuadraticFormF2(q.m);
        sc.label = "0 (zero form)";
        return sc;
    }
    FormTriple t = classify(q);
    int r = t.dim - t.bilrad_dim;  // rank of the polarization, always even
    if (t.arf > 0) {
        sc.kind = StandardKind::Plus;
        sc.vars = r;
        sc.label = "Φ" + subscript(r) + "⁺ (plus standard)";
    } else if (t.arf < 0) {
        sc.kind = StandardKind::Minus;
        sc.vars = r;
        sc.label = "Φ" + subscript(r) + "⁻ (minus standard)";
    } else {
        sc.kind = StandardKind::Odd;
        sc.vars = r + 1;
        sc.label = "Φ" + subscript(r + 1) + " (odd standard)";
    }
    sc.rep = standard_form(sc.kind, sc.vars, q.m);
    if (sc.vars < q.m) sc.label += ", padded to m=" + std::to_string(q.m);
    return sc;
}

QuadraticFormF2 change_basis(const QuadraticFormF2& q, const FpMatrix& s) {
    return q.substituted(mat_inv(s));
}

bool equivalent(const QuadraticFormF2& q1, const QuadraticFormF2& q2) {
    if (q1.m != q2.m) throw DimensionMismatch("equivalent: ambient dimensions differ");
    if (q1.is_zero() || q2.is_zero()) return q1.is_zero() && q2.is_zero();
    return classify(q1) == classify(q2);
}

std::optional<FpMatrix> equivalence_witness(const QuadraticFormF2& q1,
                                            const QuadraticFormF2& q2) {
    if (!equivalent(q1, q2)) return std::nullopt;
    if (q1.m > 4)
        throw WitnessSearchCapExceeded("equivalence witness search limited to m <= 4");
    std::optional<FpMatrix> found;
    // s·q1 = q1 ∘ s^{-1}; enumerate t = s^{-1} and report s = t^{-1}.
    gl_for_each(q1.m, 2, [&](const FpMatrix& t, std::uint64_t) {
        if (!found && q1.substituted(t) == q2) found = mat_inv(t);
    });
    return found;
}

namespace {

using Vec = std::vector<std::uint8_t>;

Vec vxor(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] ^ b[i];
    return r;
}

int bval(const FpMatrix& B, const Vec& u, const Vec& v) {
    int acc = 0;
    for (int i = 0; i < B.rows; ++i) {
        if (!u[i]) continue;
        for (int j = 0; j < B.cols; ++j) acc ^= B.at(i, j) & v[j];
    }
    return acc;
}

}  // namespace

std::pair<FpMatrix, QuadraticFormF2> reduce_to_standard(const QuadraticFormF2& q) {
    if (q.is_zero()) throw ZeroForm("reduce_to_standard: zero form");
    const int m = q.m;
    StandardClass sc = standard_class_of(q);
    if (q == sc.rep) return {FpMatrix::identity(m, 2), sc.rep};

    FpMatrix B = bilinear_of(q);
    Subspace br = bilrad(q);

    // Complement of the radical: greedily extend the radical basis by
    // coordinate vectors, keeping the new ones.
    std::vector<Vec> ech;  // echelon rows of the span so far
    std::vector<int> pivs;
    auto try_add = [&](const Vec& v) {
        Vec t = v;
        for (std::size_t i = 0; i < ech.size(); ++i)
            if (t[pivs[i]]) t = vxor(t, ech[i]);
        int lead = -1;
        for (int c2 = 0; c2 < m; ++c2)
            if (t[c2]) { lead = c2; break; }
        if (lead < 0) return false;
        ech.push_back(t);
        pivs.push_back(lead);
        return true;
    };
    for (const auto& b : br.basis) try_add(b);
    std::vector<Vec> comp;
    for (int i = 0; i < m; ++i) {
        Vec e(m, 0);
        e[i] = 1;
        if (try_add(e)) comp.push_back(e);
    }

    // Symplectic pairs on the complement.
    std::vector<std::pair<Vec, Vec>> hyper, minus;
    std::vector<Vec> work = comp;
    while (!work.empty()) {
        Vec u = work.front();
        work.erase(work.begin());
        int vi = -1;
        for (std::size_t i = 0; i < work.size(); ++i)
            if (bval(B, u, work[i])) { vi = static_cast<int>(i); break; }
        if (vi < 0)
            throw WellDefinednessViolation("reduce_to_standard: polarization degenerate on complement");
        Vec v = work[static_cast<std::size_t>(vi)];
        work.erase(work.begin() + vi);
        for (auto& w : work) {
            if (bval(B, w, v)) w = vxor(w, u);
            if (bval(B, w, u)) w = vxor(w, v);
        }
        // Normalize the pair by its Q-values.
        int qu = q.eval(u), qv = q.eval(v);
        if (qu == 1 && qv == 1) {
            minus.emplace_back(u, v);
        } else {
            if (qu == 1) std::swap(u, v);          // -> (0, qv)
            if (q.eval(v) == 1) v = vxor(u, v);    // -> (0, 0)
            hyper.emplace_back(u, v);
        }
    }

    // Two minus blocks merge into hyperbolic pairs.
    while (minus.size() >= 2) {
        auto [u1, v1] = minus[minus.size() - 2];
        auto [u2, v2] = minus[minus.size() - 1];
        minus.pop_back();
        minus.pop_back();
        Vec a = vxor(u1, u2), b = vxor(v1, u2);
        Vec d = vxor(vxor(v2, u1), v1);
        hyper.emplace_back(a, b);               // Q = (0, 0)
        Vec d2 = vxor(d, u2);                   // (d, u2) has Q = (0, 1)
        hyper.emplace_back(d, d2);
    }

    // Radical: z with Q(z) = 1 if one exists, the rest cleared to Q = 0.
    Vec z;
    std::vector<Vec> rad_rest;
    for (const auto& b : br.basis) {
        if (q.eval(b) == 1) {
            if (z.empty())
                z = b;
            else
                rad_rest.push_back(vxor(b, z));
        } else {
            rad_rest.push_back(b);
        }
    }
    if (!z.empty() && !minus.empty()) {
        // A square absorbs the remaining minus block.
        auto [u, v] = minus.back();
        minus.pop_back();
        hyper.emplace_back(vxor(u, z), vxor(v, z));
    }

    // Assemble the adapted basis in target order.
    std::vector<Vec> cols;
    if (!z.empty()) cols.push_back(z);
    for (auto& [u, v] : hyper) {
        cols.push_back(u);
        cols.push_back(v);
    }
    for (auto& [u, v] : minus) {  // at most one block, placed last
        cols.push_back(u);
        cols.push_back(v);
    }
    for (auto& w : rad_rest) cols.push_back(w);

    FpMatrix T(2, m, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) T.at(i, j) = cols[static_cast<std::size_t>(j)][i];
    if (q.substituted(T) != sc.rep)
        throw WellDefinednessViolation("reduce_to_standard: adapted basis failed verification");
    return {mat_inv(T), sc.rep};
}

QuadraticFormF2 direct_sum(const QuadraticFormF2& q1, const QuadraticFormF2& q2) {
    QuadraticFormF2 q(q1.m + q2.m);
    for (int i = 0; i < q1.m; ++i)
        for (int j = i; j < q1.m; ++j) q.add_term(i, j, q1.c[q1.idx(i, j)]);
    for (int i = 0; i < q2.m; ++i)
        for (int j = i; j < q2.m; ++j) q.add_term(q1.m + i, q1.m + j, q2.c[q2.idx(i, j)]);
    return q;
}

ArfSumCheck arf_direct_sum_check(const QuadraticFormF2& q1, const QuadraticFormF2& q2) {
    ArfSumCheck r;
    r.arf1 = arf_democratic(q1);
    r.arf2 = arf_democratic(q2);
    r.arf_sum = arf_democratic(direct_sum(q1, q2));
    return r;
}

AltBock::AltBock(int prime, int vars) : p(prime), m(vars) {
    check_prime(prime);
    if (prime == 2) throw DimensionMismatch("AltBock components require odd p");
    if (vars < 1) throw DimensionMismatch("AltBock needs at least one variable");
    alt.assign(static_cast<std::size_t>(vars) * (vars - 1) / 2, 0);
    bock.assign(static_cast<std::size_t>(vars), 0);
}

int AltBock::alt_coeff(int i, int j) const {
    if (i == j) return 0;
    if (i < j) return alt[aidx(i, j)];
    return fp_neg(alt[aidx(j, i)], p);
}

void AltBock::add_alt(int i, int j, int v) {
    if (i == j) throw DimensionMismatch("alternating coefficient on the diagonal");
    int sign = 1;
    if (i > j) { std::swap(i, j); sign = -1; }
    if (i < 0 || j >= m) throw DimensionMismatch("alt term index out of range");
    int cur = alt[aidx(i, j)];
    int add = sign > 0 ? v : fp_neg(v % p < 0 ? v % p + p : v % p, p);
    int nv = (cur + add) % p;
    if (nv < 0) nv += p;
    alt[aidx(i, j)] = static_cast<std::uint8_t>(nv);
}

void AltBock::add_bock(int i, int v) {
    if (i < 0 || i >= m) throw DimensionMismatch("bock index out of range");
    int nv = (bock[static_cast<std::size_t>(i)] + v) % p;
    if (nv < 0) nv += p;
    bock[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(nv);
}

bool AltBock::is_zero() const {
    return std::all_of(alt.begin(), alt.end(), [](std::uint8_t v) { return v == 0; }) &&
           std::all_of(bock.begin(), bock.end(), [](std::uint8_t v) { return v == 0; });
}

FpMatrix AltBock::alt_matrix() const {
    FpMatrix L(p, m, m);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            L.at(i, j) = alt[aidx(i, j)];
            L.at(j, i) = static_cast<std::uint8_t>(fp_neg(alt[aidx(i, j)], p));
        }
    return L;
}

AltBock AltBock::substituted(const FpMatrix& M) const {
    if (M.p != p || M.rows != m || M.cols != m)
        throw DimensionMismatch("AltBock::substituted: shape/prime mismatch");
    FpMatrix L2 = mat_mul(mat_mul(M.transposed(), alt_matrix()), M);
    AltBock out(p, m);
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) out.alt[out.aidx(i, j)] = L2.at(i, j);
    for (int i = 0; i < m; ++i) {
        std::uint32_t acc = 0;
        for (int k = 0; k < m; ++k)
            acc += static_cast<std::uint32_t>(M.at(k, i)) * bock[static_cast<std::size_t>(k)];
        out.bock[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(acc % p);
    }
    return out;
}

nlohmann::json AltBock::to_json() const {
    nlohmann::json alt_j = nlohmann::json::array();
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (alt[aidx(i, j)]) alt_j.push_back({i + 1, j + 1, static_cast<int>(alt[aidx(i, j)])});
    nlohmann::json bock_j = nlohmann::json::array();
    for (int i = 0; i < m; ++i) bock_j.push_back(static_cast<int>(bock[static_cast<std::size_t>(i)]));
    return nlohmann::json{{"p", p}, {"m", m}, {"alt", alt_j}, {"bock", bock_j}};
}

AltBock AltBock::from_json(const nlohmann::json& j) {
    AltBock ab(j.at("p").get<int>(), j.at("m").get<int>());
    for (const auto& t : j.at("alt"))
        ab.add_alt(t.at(0).get<int>() - 1, t.at(1).get<int>() - 1, t.at(2).get<int>());
    const auto& bock = j.at("bock");
    if (static_cast<int>(bock.size()) != ab.m)
        throw DimensionMismatch("AltBock JSON: bock length mismatch");
    for (int i = 0; i < ab.m; ++i) ab.add_bock(i, bock[static_cast<std::size_t>(i)].get<int>());
    return ab;
}

std::size_t quad_coeff_dim(int m) { return QuadraticFormF2::table_size(m); }
std::size_t altbock_coeff_dim(int m) {
    return static_cast<std::size_t>(m) * (m - 1) / 2 + static_cast<std::size_t>(m);
}

}  // namespace extorb
