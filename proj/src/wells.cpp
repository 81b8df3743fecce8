#include "extorb/wells.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "extorb/errors.hpp"

namespace extorb {

BigInt hom_order(int m, int n, int p) {
    check_prime(p);
    if (m < 0 || n < 0) throw DimensionMismatch("hom_order: negative rank");
    BigInt r = 1;
    for (int i = 0; i < m * n; ++i) r *= p;
    return r;
}

std::string factored_p_part(const BigInt& x, int p) {
    if (x <= 0) throw DimensionMismatch("factored_p_part: order must be positive");
    BigInt u = x;
    unsigned a = 0;
    while (u % p == 0) {
        u /= p;
        ++a;
    }
    if (a == 0) return u.str();
    std::string head = std::to_string(p) + "^" + std::to_string(a);
    if (u == 1) return head;
    return head + " · " + u.str();
}

nlohmann::json AutOrderReport::to_json() const {
    nlohmann::json j{{"p", p},
                     {"m", m},
                     {"n", n},
                     {"hom_order", hom_order.str()},
                     {"stab_v_order", stab_v_order.str()},
                     {"stab_n_order", stab_n_order.str()},
                     {"omega_order", omega_order.str()},
                     {"im_rho_order", im_rho_order.str()},
                     {"im_rho_order_factored", factored_p_part(im_rho_order, p)},
                     {"aut_order", aut_order.str()},
                     {"aut_order_factored", factored_p_part(aut_order, p)},
                     {"n_characteristic_assumed", n_characteristic_assumed},
                     {"image_id", image_id ? image_id->to_json() : nlohmann::json()},
                     {"elapsed_ms", 0}};
    return j;
}

AutOrderReport aut_order(const ExtensionClass& e, bool n_characteristic, const Caps& caps) {
    AnalyzeOptions opts;
    opts.caps = caps;
    const ClassAnalysis a = analyze(e, opts).analysis;

    AutOrderReport rep;
    rep.p = e.p;
    rep.m = e.m;
    rep.n = e.n;
    rep.hom_order = hom_order(e.m, e.n, e.p);
    rep.stab_v_order = a.breakdown.stab_v;
    rep.stab_n_order = a.breakdown.stab_n;
    rep.omega_order = a.breakdown.omega;
    rep.im_rho_order = a.breakdown.im_rho;
    rep.aut_order = rep.hom_order * rep.im_rho_order;
    rep.n_characteristic_assumed = n_characteristic;
    rep.image_id = a.joint.id;
    return rep;
}

nlohmann::json SemisimpleReport::to_json() const {
    return nlohmann::json{
        {"p", p},
        {"im_rho_order", im_rho_order.str()},
        {"im_rho_order_factored", factored_p_part(im_rho_order, p)},
        {"image_is_p_group", image_is_p_group},
        {"image_id", image_id ? image_id->to_json() : nlohmann::json()},
        {"has_normal_sylow_p",
         has_normal_sylow_p ? nlohmann::json(*has_normal_sylow_p) : nlohmann::json()},
        {"p_prime_quotient", p_prime_quotient ? p_prime_quotient->to_json() : nlohmann::json()},
        {"statement",
         "the semisimple quotient of the mod-p group algebra of the automorphism group "
         "coincides with that of the restriction image identified here"},
        {"elapsed_ms", 0}};
}

namespace {

bool is_power_of(const BigInt& x, int p) {
    BigInt u = x;
    while (u % p == 0) u /= p;
    return u == 1;
}

// Multiplication on an explicit pair list, by key lookup.
struct PairTable {
    std::vector<std::pair<FpMatrix, FpMatrix>> elems;
    std::unordered_map<std::string, int> index;

    explicit PairTable(std::vector<std::pair<FpMatrix, FpMatrix>> es) : elems(std::move(es)) {
        for (std::size_t i = 0; i < elems.size(); ++i)
            index[elems[i].first.key() + elems[i].second.key()] = static_cast<int>(i);
    }
    int mul(int a, int b) const {
        const auto& x = elems[static_cast<std::size_t>(a)];
        const auto& y = elems[static_cast<std::size_t>(b)];
        auto it = index.find(mat_mul(x.first, y.first).key() + mat_mul(x.second, y.second).key());
        if (it == index.end()) throw ExtorbError("pair list not closed under multiplication");
        return it->second;
    }
};

}  // namespace

SemisimpleReport semisimple_report(const ExtensionClass& e, const Caps& caps) {
    AnalyzeOptions opts;
    opts.caps = caps;
    const ClassAnalysis a = analyze(e, opts).analysis;

    SemisimpleReport rep;
    rep.p = e.p;
    rep.im_rho_order = a.breakdown.im_rho;
    rep.image_is_p_group = is_power_of(rep.im_rho_order, e.p);
    rep.image_id = a.joint.id;

    if (!a.joint.elements_listed || a.joint.pairs.empty()) return rep;
    const std::size_t k = a.joint.pairs.size();

    PairTable tab(a.joint.pairs);
    const int identity = [&] {
        for (std::size_t i = 0; i < k; ++i)
            if (tab.mul(static_cast<int>(i), static_cast<int>(i)) == static_cast<int>(i))
                return static_cast<int>(i);
        throw ExtorbError("semisimple_report: no identity in pair list");
    }();

    // Element orders; the p-power-order elements fill exactly one Sylow
    // p-subgroup iff their count equals the p-part of the group order, and
    // then that subgroup is normal (it is the union of all Sylows).
    std::uint64_t p_part = 1;
    {
        BigInt u = rep.im_rho_order;
        while (u % e.p == 0) {
            u /= e.p;
            p_part *= static_cast<std::uint64_t>(e.p);
        }
    }
    std::vector<int> p_elements;
    for (std::size_t i = 0; i < k; ++i) {
        int cur = static_cast<int>(i);
        std::uint64_t ord = 1;
        while (cur != identity) {
            cur = tab.mul(cur, static_cast<int>(i));
            ++ord;
        }
        while (ord % static_cast<std::uint64_t>(e.p) == 0) ord /= static_cast<std::uint64_t>(e.p);
        if (ord == 1) p_elements.push_back(static_cast<int>(i));
    }
    const bool normal_sylow = p_elements.size() == p_part;
    rep.has_normal_sylow_p = normal_sylow;
    if (!normal_sylow) return rep;

    // Quotient by the (normal) Sylow p-subgroup: label cosets by their
    // smallest member index and fingerprint the induced multiplication.
    std::vector<int> coset_of(k, -1);
    std::vector<int> reps;
    for (std::size_t i = 0; i < k; ++i) {
        if (coset_of[i] >= 0) continue;
        int least = static_cast<int>(i);
        std::vector<int> members;
        for (int s : p_elements) {
            const int y = tab.mul(static_cast<int>(i), s);
            members.push_back(y);
            least = std::min(least, y);
        }
        for (int y : members) coset_of[static_cast<std::size_t>(y)] = static_cast<int>(reps.size());
        reps.push_back(least);
    }
    auto qmul = [&](int x, int y) {
        const int z = tab.mul(reps[static_cast<std::size_t>(x)], reps[static_cast<std::size_t>(y)]);
        return coset_of[static_cast<std::size_t>(z)];
    };
    rep.p_prime_quotient = identify_group_mul(reps.size(), qmul);
    return rep;
}

}  // namespace extorb
