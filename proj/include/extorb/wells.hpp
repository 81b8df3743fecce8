#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "extorb/extension_class.hpp"
#include "extorb/fp.hpp"
#include "extorb/orbit.hpp"

namespace extorb {

// |Hom(Q, N)| = p^{m n} for elementary abelian Q of rank m and N of rank n.
// With a central (trivially twisted) N this is the kernel of the restriction
// map on automorphisms, so it multiplies with the image order below.
BigInt hom_order(int m, int n, int p);

// Decimal factorization "p^a · u" with u coprime to p (plain "u" when a = 0,
// plain "p^a" when u = 1).
std::string factored_p_part(const BigInt& x, int p);

// Full order ledger for the automorphism group of the extension determined
// by a class: kernel size, image breakdown, and their product.
struct AutOrderReport {
    int p = 2;
    int m = 0;
    int n = 0;
    BigInt hom_order = 1;
    BigInt stab_v_order = 1;
    BigInt stab_n_order = 1;
    BigInt omega_order = 1;
    BigInt im_rho_order = 1;
    BigInt aut_order = 1;
    bool n_characteristic_assumed = false;
    std::optional<GroupId> image_id;  // fingerprint of the image, when listed

    nlohmann::json to_json() const;
};

// Assemble the ledger for a class.  The result equals |Aut(G)| only when the
// central subgroup is characteristic in G; the caller asserts that via
// n_characteristic, otherwise the count is the order of the subgroup of
// automorphisms preserving it.
AutOrderReport aut_order(const ExtensionClass& e, bool n_characteristic,
                         const Caps& caps = Caps{});

// Group-identification metadata for the semisimple quotient of the mod-p
// group algebra of the automorphism group: it agrees with that of the image
// of the restriction map, so the report identifies the image and, when a
// normal Sylow p-subgroup is detected among its listed elements, the maximal
// p'-quotient.
struct SemisimpleReport {
    int p = 2;
    BigInt im_rho_order = 1;
    bool image_is_p_group = false;
    std::optional<GroupId> image_id;
    std::optional<bool> has_normal_sylow_p;   // only when elements were listed
    std::optional<GroupId> p_prime_quotient;  // only when the Sylow is normal

    nlohmann::json to_json() const;
};

SemisimpleReport semisimple_report(const ExtensionClass& e, const Caps& caps = Caps{});

}  // namespace extorb
