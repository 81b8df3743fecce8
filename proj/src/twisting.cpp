#include "extorb/twisting.hpp"

#include <utility>

#include "extorb/errors.hpp"

namespace extorb {

namespace {

FpMatrix mat_pow_small(const FpMatrix& a, int e) {
    FpMatrix r = FpMatrix::identity(a.rows, a.p);
    for (int i = 0; i < e; ++i) r = mat_mul(r, a);
    return r;
}

constexpr std::uint64_t kKernelScanCap = 1'000'000;
constexpr std::size_t kIdentifyCap = 2048;

}  // namespace

TwistingMap::TwistingMap(int prime, int m_, int n_, std::vector<FpMatrix> imgs)
    : p(prime), m(m_), n(n_), images(std::move(imgs)) {
    check_prime(p);
    if (m < 1 || n < 1)
        throw DimensionMismatch("twisting map needs at least one generator on each side");
    if (static_cast<int>(images.size()) != m)
        throw DimensionMismatch("twisting map: expected one image per generator");
    for (const auto& a : images) {
        if (a.p != p || a.rows != n || a.cols != n)
            throw DimensionMismatch("twisting map: image has wrong shape or modulus");
        if (!mat_invertible(a)) throw SingularMatrix("twisting map: image not invertible");
        if (mat_pow_small(a, p) != FpMatrix::identity(n, p))
            throw DimensionMismatch("twisting map: image order does not divide p");
    }
    for (std::size_t i = 0; i < images.size(); ++i)
        for (std::size_t j = i + 1; j < images.size(); ++j)
            if (mat_mul(images[i], images[j]) != mat_mul(images[j], images[i]))
                throw DimensionMismatch("twisting map: images do not commute");
}

TwistingMap TwistingMap::trivial(int prime, int m_, int n_) {
    std::vector<FpMatrix> imgs(static_cast<std::size_t>(m_), FpMatrix::identity(n_, prime));
    return TwistingMap(prime, m_, n_, std::move(imgs));
}

bool TwistingMap::is_trivial() const {
    const FpMatrix id = FpMatrix::identity(n, p);
    for (const auto& a : images)
        if (a != id) return false;
    return true;
}

FpMatrix TwistingMap::image_of(const std::vector<std::uint8_t>& x) const {
    if (static_cast<int>(x.size()) != m)
        throw DimensionMismatch("twisting image: coordinate vector has wrong length");
    FpMatrix r = FpMatrix::identity(n, p);
    for (int i = 0; i < m; ++i) {
        const int e = static_cast<int>(x[static_cast<std::size_t>(i)]) % p;
        for (int t = 0; t < e; ++t) r = mat_mul(r, images[static_cast<std::size_t>(i)]);
    }
    return r;
}

nlohmann::json TwistingMap::to_json() const {
    nlohmann::json imgs = nlohmann::json::array();
    for (const auto& a : images) imgs.push_back(a.to_json());
    return nlohmann::json{{"p", p}, {"q_rank", m}, {"n_rank", n}, {"images", imgs}};
}

TwistingMap TwistingMap::from_json(const nlohmann::json& j) {
    const int p = j.at("p").get<int>();
    const int m = j.at("q_rank").get<int>();
    const int n = j.at("n_rank").get<int>();
    std::vector<FpMatrix> imgs;
    for (const auto& ij : j.at("images")) {
        if (ij.is_array()) {
            // Plain nested rows: [[..],[..],..]
            FpMatrix a(p, n, n);
            if (static_cast<int>(ij.size()) != n)
                throw DimensionMismatch("twisting map JSON: image row count");
            for (int r = 0; r < n; ++r) {
                const auto& row = ij[static_cast<std::size_t>(r)];
                if (static_cast<int>(row.size()) != n)
                    throw DimensionMismatch("twisting map JSON: image column count");
                for (int c = 0; c < n; ++c)
                    a.at(r, c) = static_cast<std::uint8_t>(
                        ((row[static_cast<std::size_t>(c)].get<int>() % p) + p) % p);
            }
            imgs.push_back(std::move(a));
        } else {
            imgs.push_back(FpMatrix::from_json(ij));
        }
    }
    return TwistingMap(p, m, n, std::move(imgs));
}

Subspace twisting_kernel(const TwistingMap& chi) {
    BigInt total = 1;
    for (int i = 0; i < chi.m; ++i) total *= chi.p;
    require_cap(total, BigInt(kKernelScanCap));
    const std::uint64_t count = total.convert_to<std::uint64_t>();
    const FpMatrix id = FpMatrix::identity(chi.n, chi.p);
    std::vector<std::vector<std::uint8_t>> members;
    std::vector<std::uint8_t> x(static_cast<std::size_t>(chi.m), 0);
    for (std::uint64_t it = 0; it < count; ++it) {
        if (chi.image_of(x) == id) members.push_back(x);
        for (int d = chi.m - 1; d >= 0; --d) {
            auto& v = x[static_cast<std::size_t>(d)];
            if (++v < chi.p) break;
            v = 0;
        }
    }
    FpMatrix stack(chi.p, static_cast<int>(members.size()), chi.m);
    for (std::size_t r = 0; r < members.size(); ++r)
        for (int c = 0; c < chi.m; ++c)
            stack.at(static_cast<int>(r), c) = members[r][static_cast<std::size_t>(c)];
    return row_space(stack);
}

bool preserves_kernel(const TwistingMap& chi, const FpMatrix& sigma) {
    if (sigma.p != chi.p || sigma.rows != chi.m || sigma.cols != chi.m)
        throw DimensionMismatch("preserves_kernel: sigma has wrong shape");
    const Subspace ker = twisting_kernel(chi);
    for (const auto& b : ker.basis) {
        std::vector<std::uint8_t> img(static_cast<std::size_t>(chi.m), 0);
        for (int r = 0; r < chi.m; ++r) {
            int acc = 0;
            for (int c = 0; c < chi.m; ++c)
                acc += sigma.at(r, c) * b[static_cast<std::size_t>(c)];
            img[static_cast<std::size_t>(r)] = static_cast<std::uint8_t>(acc % chi.p);
        }
        if (!ker.contains(img)) return false;
    }
    return true;
}

namespace {

// chi(sigma e_j): sigma's column j gives the coordinates of the image of the
// j-th generator.
FpMatrix image_of_column(const TwistingMap& chi, const FpMatrix& sigma, int j) {
    std::vector<std::uint8_t> col(static_cast<std::size_t>(chi.m));
    for (int i = 0; i < chi.m; ++i) col[static_cast<std::size_t>(i)] = sigma.at(i, j);
    return chi.image_of(col);
}

}  // namespace

bool c_chi_membership(const TwistingMap& chi, const FpMatrix& sigma, const FpMatrix& tau) {
    if (sigma.p != chi.p || sigma.rows != chi.m || sigma.cols != chi.m)
        throw DimensionMismatch("compatibility check: sigma has wrong shape");
    if (tau.p != chi.p || tau.rows != chi.n || tau.cols != chi.n)
        throw DimensionMismatch("compatibility check: tau has wrong shape");
    if (!mat_invertible(sigma) || !mat_invertible(tau)) return false;
    for (int j = 0; j < chi.m; ++j) {
        const FpMatrix lhs = mat_mul(tau, chi.images[static_cast<std::size_t>(j)]);
        const FpMatrix rhs = mat_mul(image_of_column(chi, sigma, j), tau);
        if (lhs != rhs) return false;
    }
    return true;
}

StabilizerReport c_chi(const TwistingMap& chi, const Caps& caps) {
    require_cap(gl_order(chi.m, chi.p), BigInt(caps.enumeration));
    const int n = chi.n, p = chi.p;
    const int unknowns = n * n;

    StabilizerReport rep;
    rep.side = Side::Joint;
    rep.method = Method::Enumeration;
    rep.order = 0;
    bool overflow = false;

    gl_for_each(chi.m, p, [&](const FpMatrix& sigma, std::uint64_t) {
        // Linear condition on tau: tau * chi(e_j) - chi(sigma e_j) * tau = 0
        // for every generator; unknowns are the entries tau[r][c] at r*n+c.
        FpMatrix sys(p, chi.m * unknowns, unknowns);
        for (int j = 0; j < chi.m; ++j) {
            const FpMatrix& a = chi.images[static_cast<std::size_t>(j)];
            const FpMatrix b = image_of_column(chi, sigma, j);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    const int row = (j * n + r) * n + c;
                    for (int k = 0; k < n; ++k) {
                        auto& lhs = sys.at(row, r * n + k);
                        lhs = static_cast<std::uint8_t>((lhs + a.at(k, c)) % p);
                        auto& rhs = sys.at(row, k * n + c);
                        rhs = static_cast<std::uint8_t>(
                            (rhs + fp_neg(b.at(r, k), p)) % p);
                    }
                }
        }
        const Subspace sol = kernel(sys);
        BigInt span = 1;
        for (int d = 0; d < sol.dim(); ++d) span *= p;
        require_cap(span, BigInt(caps.affine_kernel));
        for (const auto& v : sol.all_vectors(caps.affine_kernel)) {
            FpMatrix tau(p, n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) tau.at(r, c) = v[static_cast<std::size_t>(r * n + c)];
            if (!mat_invertible(tau)) continue;
            rep.order += 1;
            if (!overflow) {
                if (rep.pairs.size() < caps.element_list) {
                    rep.pairs.emplace_back(sigma, tau);
                } else {
                    overflow = true;
                    rep.pairs.clear();
                }
            }
        }
    });

    rep.elements_listed = !overflow;
    if (rep.elements_listed && !rep.pairs.empty() && rep.pairs.size() <= kIdentifyCap)
        rep.id = identify_group_pairs(rep.pairs);
    return rep;
}

StabilizerReport c_chi_brute(const TwistingMap& chi, const Caps& caps) {
    require_cap(gl_order(chi.m, chi.p) * gl_order(chi.n, chi.p), BigInt(caps.enumeration));
    std::vector<FpMatrix> taus;
    gl_for_each(chi.n, chi.p, [&](const FpMatrix& t, std::uint64_t) { taus.push_back(t); });

    StabilizerReport rep;
    rep.side = Side::Joint;
    rep.method = Method::Enumeration;
    rep.order = 0;
    bool overflow = false;
    gl_for_each(chi.m, chi.p, [&](const FpMatrix& sigma, std::uint64_t) {
        for (const auto& tau : taus) {
            if (!c_chi_membership(chi, sigma, tau)) continue;
            rep.order += 1;
            if (!overflow) {
                if (rep.pairs.size() < caps.element_list) {
                    rep.pairs.emplace_back(sigma, tau);
                } else {
                    overflow = true;
                    rep.pairs.clear();
                }
            }
        }
    });
    rep.elements_listed = !overflow;
    if (rep.elements_listed && !rep.pairs.empty() && rep.pairs.size() <= kIdentifyCap)
        rep.id = identify_group_pairs(rep.pairs);
    return rep;
}

}  // namespace extorb
