#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "extorb/fp.hpp"
#include "extorb/orbit.hpp"

namespace extorb {

// A homomorphism chi: Q -> Aut(N) for Q = (Z/p)^m acting on N = (Z/p)^n,
// given by the images of the m standard generators of Q as invertible
// n x n matrices over F_p.  Validity requires the images to commute
// pairwise and to have order dividing p, so that chi is a well-defined
// homomorphism from an elementary abelian group.
struct TwistingMap {
    int p = 2;
    int m = 0;  // rank of the acting group Q
    int n = 0;  // rank of the acted-on group N
    std::vector<FpMatrix> images;

    TwistingMap() = default;
    TwistingMap(int prime, int m_, int n_, std::vector<FpMatrix> imgs);

    // The trivial action: every generator acts as the identity.
    static TwistingMap trivial(int prime, int m_, int n_);

    bool is_trivial() const;

    // chi(x) for x in Q given by exponent coordinates (length m).
    FpMatrix image_of(const std::vector<std::uint8_t>& x) const;

    nlohmann::json to_json() const;
    static TwistingMap from_json(const nlohmann::json& j);
};

// ker(chi) as a subspace of Q = F_p^m.
Subspace twisting_kernel(const TwistingMap& chi);

// Whether sigma in GL_m(F_p) maps ker(chi) into itself.
bool preserves_kernel(const TwistingMap& chi, const FpMatrix& sigma);

// Compatibility-pair membership: (sigma, tau) lies in C_chi when
// tau * chi(x) = chi(sigma x) * tau for every x in Q (checked on the
// standard generators, which suffices since chi is a homomorphism).
bool c_chi_membership(const TwistingMap& chi, const FpMatrix& sigma, const FpMatrix& tau);

// The compatibility group C_chi <= GL_m x GL_n.  Enumerates sigma over
// GL_m(F_p); for each sigma the tau-condition is linear, so the solutions
// form a coset-free linear subspace of n x n matrices whose invertible
// members are counted by exhausting the kernel span.  Pairs are recorded
// while the running count stays within caps.element_list.
StabilizerReport c_chi(const TwistingMap& chi, const Caps& caps = Caps{});

// Independent cross-check: test the membership predicate over all of
// GL_m x GL_n.  Requires |GL_m| * |GL_n| within caps.enumeration.
StabilizerReport c_chi_brute(const TwistingMap& chi, const Caps& caps = Caps{});

}  // namespace extorb
