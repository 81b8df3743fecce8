#include "extorb/extension_class.hpp"

#include <algorithm>

namespace extorb {

bool component_is_zero(const ClassComponent& c) {
    return std::visit([](const auto& x) { return x.is_zero(); }, c);
}

ClassComponent component_substituted(const ClassComponent& c, const FpMatrix& M) {
    return std::visit([&](const auto& x) -> ClassComponent { return x.substituted(M); }, c);
}

nlohmann::json component_to_json(const ClassComponent& c) {
    return std::visit([](const auto& x) { return x.to_json(); }, c);
}

namespace {

void check_component(const ClassComponent& c, int p, int m) {
    if (std::holds_alternative<QuadraticFormF2>(c)) {
        if (p != 2) throw DimensionMismatch("quadratic component in an odd-p class");
        if (std::get<QuadraticFormF2>(c).m != m)
            throw DimensionMismatch("component variable count mismatch");
    } else {
        const auto& ab = std::get<AltBock>(c);
        if (ab.p != p || ab.m != m)
            throw DimensionMismatch("component prime/variable count mismatch");
    }
}

}  // namespace

ExtensionClass::ExtensionClass(int prime, int m_, std::vector<ClassComponent> components)
    : p(prime), m(m_), n(static_cast<int>(components.size())), comps(std::move(components)) {
    check_prime(prime);
    if (m < 1) throw DimensionMismatch("class needs at least one source variable");
    if (n < 1) throw DimensionMismatch("class needs at least one component");
    for (const auto& c : comps) check_component(c, p, m);
}

ExtensionClass ExtensionClass::zero(int prime, int m_, int n_) {
    check_prime(prime);
    if (n_ < 1) throw DimensionMismatch("class needs at least one component");
    std::vector<ClassComponent> comps;
    for (int i = 0; i < n_; ++i) {
        if (prime == 2)
            comps.emplace_back(QuadraticFormF2(m_));
        else
            comps.emplace_back(AltBock(prime, m_));
    }
    return ExtensionClass(prime, m_, std::move(comps));
}

bool ExtensionClass::is_zero() const {
    return std::all_of(comps.begin(), comps.end(), component_is_zero);
}

std::string ExtensionClass::key() const {
    std::string s;
    s.push_back(static_cast<char>(p));
    s.push_back(static_cast<char>(m));
    s.push_back(static_cast<char>(n));
    std::vector<std::uint8_t> buf(coeff_dim());
    for (int j = 0; j < n; ++j) {
        coeff_column(j, buf.data());
        s.append(buf.begin(), buf.end());
    }
    return s;
}

std::size_t ExtensionClass::coeff_dim() const {
    return p == 2 ? quad_coeff_dim(m) : altbock_coeff_dim(m);
}

void ExtensionClass::coeff_column(int j, std::uint8_t* out) const {
    const ClassComponent& c = comps[static_cast<std::size_t>(j)];
    if (p == 2) {
        const auto& q = std::get<QuadraticFormF2>(c);
        std::copy(q.c.begin(), q.c.end(), out);
    } else {
        const auto& ab = std::get<AltBock>(c);
        std::copy(ab.alt.begin(), ab.alt.end(), out);
        std::copy(ab.bock.begin(), ab.bock.end(), out + ab.alt.size());
    }
}

void ExtensionClass::set_from_coeffs(int j, const std::uint8_t* in) {
    ClassComponent& c = comps[static_cast<std::size_t>(j)];
    if (p == 2) {
        auto& q = std::get<QuadraticFormF2>(c);
        std::copy(in, in + q.c.size(), q.c.begin());
    } else {
        auto& ab = std::get<AltBock>(c);
        std::copy(in, in + ab.alt.size(), ab.alt.begin());
        std::copy(in + ab.alt.size(), in + ab.alt.size() + ab.bock.size(), ab.bock.begin());
    }
}

nlohmann::json ExtensionClass::to_json() const {
    nlohmann::json comps_j = nlohmann::json::array();
    for (const auto& c : comps) comps_j.push_back(component_to_json(c));
    return nlohmann::json{{"p", p}, {"m", m}, {"n", n}, {"components", comps_j}};
}

ExtensionClass ExtensionClass::from_json(const nlohmann::json& j) {
    int p = j.at("p").get<int>();
    int m = j.at("m").get<int>();
    const auto& comps_j = j.at("components");
    if (j.contains("n") && j.at("n").get<int>() != static_cast<int>(comps_j.size()))
        throw DimensionMismatch("class JSON: n does not match component count");
    std::vector<ClassComponent> comps;
    for (const auto& cj : comps_j) {
        if (p == 2)
            comps.emplace_back(QuadraticFormF2::from_json(cj));
        else
            comps.emplace_back(AltBock::from_json(cj));
    }
    (void)m;
    return ExtensionClass(p, m, std::move(comps));
}

ExtensionClass substitute(const ExtensionClass& e, const FpMatrix& M) {
    if (M.p != e.p || M.rows != e.m || M.cols != e.m)
        throw DimensionMismatch("substitute: need an m x m matrix over F_p");
    ExtensionClass out = e;
    for (auto& c : out.comps) c = component_substituted(c, M);
    return out;
}

ExtensionClass act_v(const FpMatrix& s, const ExtensionClass& e) {
    return substitute(e, mat_inv(s));
}

ExtensionClass mix_components(const ExtensionClass& e, const FpMatrix& u) {
    if (u.p != e.p || u.rows != e.n || u.cols != e.n)
        throw DimensionMismatch("mix_components: need an n x n matrix over F_p");
    const std::size_t D = e.coeff_dim();
    std::vector<std::uint8_t> cols(D * static_cast<std::size_t>(e.n));
    for (int j = 0; j < e.n; ++j) e.coeff_column(j, cols.data() + D * static_cast<std::size_t>(j));
    ExtensionClass out = e;
    std::vector<std::uint8_t> acc(D);
    for (int j = 0; j < e.n; ++j) {
        std::fill(acc.begin(), acc.end(), 0);
        for (int i = 0; i < e.n; ++i) {
            int f = u.at(i, j);
            if (!f) continue;
            const std::uint8_t* src = cols.data() + D * static_cast<std::size_t>(i);
            for (std::size_t d = 0; d < D; ++d)
                acc[d] = static_cast<std::uint8_t>((acc[d] + f * src[d]) % e.p);
        }
        out.set_from_coeffs(j, acc.data());
    }
    return out;
}

ExtensionClass act_n(const FpMatrix& t, const ExtensionClass& e) {
    return mix_components(e, mat_inv(t));
}

ExtensionClass pair_act(const FpMatrix& s, const FpMatrix& t, const ExtensionClass& e) {
    return act_n(t, act_v(s, e));
}

}  // namespace extorb
