#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "extorb/extension_class.hpp"
#include "extorb/fp.hpp"

namespace extorb {

// Enumeration budgets.  `enumeration` bounds |GL| passes, `affine_kernel`
// bounds per-step solution-coset exhaustion, `element_list` bounds explicit
// element lists in reports.
struct Caps {
    std::uint64_t enumeration = 30'000'000;
    std::uint64_t affine_kernel = 1'000'000;
    std::uint64_t element_list = 10'000;
    int workers = 1;
};

enum class Side { V, N, Joint };
enum class Method { Enumeration, Structural };

// Action-convention audit switch: Transpose replaces every enumerated source
// matrix by its transpose.  All reported orders are invariant under it.
enum class Convention { Standard, Transpose };

// Isomorphism-type fingerprint: order, abelian flag, element-order multiset,
// plus a name when the fingerprint pins the type (orders <= 16).
struct GroupId {
    BigInt order = 1;
    bool abelian = true;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> element_orders;  // (order, count)
    std::string label;  // empty when not discriminated

    nlohmann::json to_json() const;
};

std::string label_for_fingerprint(const BigInt& order, bool abelian,
                                  const std::vector<std::pair<std::uint64_t, std::uint64_t>>& mult);

GroupId identify_group_matrices(const std::vector<FpMatrix>& elements);
GroupId identify_group_pairs(const std::vector<std::pair<FpMatrix, FpMatrix>>& elements);
// Fingerprint an abstract group given by an index multiplication; mul must be
// total on {0..k-1} x {0..k-1}.
GroupId identify_group_mul(std::size_t k, const std::function<int(int, int)>& mul);

struct StabilizerReport {
    Side side = Side::V;
    BigInt order = 1;
    Method method = Method::Enumeration;
    bool elements_listed = false;
    std::vector<FpMatrix> elements;                       // V / N sides
    std::vector<std::pair<FpMatrix, FpMatrix>> pairs;     // joint side
    std::optional<GroupId> id;                            // when elements listed & small

    nlohmann::json to_json() const;
};

// The intersection orbit group: classes lying in both the source orbit and
// the component-mixing orbit of `base`, with product z1 * z2 = a1 · z2 for
// any a1 with a1 · base = z1.
struct OmegaGroup {
    ExtensionClass base;
    std::vector<ExtensionClass> elements;   // ordered by first enumeration hit
    std::vector<FpMatrix> sigma;            // enumerated source matrix: base ∘ sigma[i] = elements[i]
    std::vector<FpMatrix> reps_left;        // sigma[i]^{-1}; acts on base to give elements[i]
    std::vector<std::vector<int>> table;    // table[i][j] = index of elements[i] * elements[j]
    int identity_index = -1;

    BigInt order() const { return BigInt(elements.size()); }
    GroupId group_id() const;
    nlohmann::json to_json() const;
};

struct ImRhoBreakdown {
    BigInt stab_v = 1, stab_n = 1, omega = 1, im_rho = 1;
    nlohmann::json to_json() const;
};

struct ClassAnalysis {
    StabilizerReport stab_v, stab_n, joint;
    OmegaGroup omega;
    ImRhoBreakdown breakdown;
};

struct AnalyzeOptions {
    Caps caps;
    Convention convention = Convention::Standard;
    // When set, the source side ranges over this list (e.g. a Sylow subgroup
    // given as an explicit element list containing the identity) instead of
    // all of GL_m.
    const std::vector<FpMatrix>* restrict_v = nullptr;
    bool collect_left_orbit = false;
};

// One shared pass over the source group computing both stabilizers, the joint
// stabilizer, and the intersection orbit group, with the product-formula
// cross-check |joint| = |stab_v| * |stab_n| * |Omega| enforced.
struct AnalysisResult {
    ClassAnalysis analysis;
    std::vector<ExtensionClass> left_orbit;  // when requested
};

AnalysisResult analyze(const ExtensionClass& e, const AnalyzeOptions& opt = {});

StabilizerReport stabilizer_v(const ExtensionClass& e, const Caps& caps = {});
StabilizerReport stabilizer_n(const ExtensionClass& e, const Caps& caps = {});
StabilizerReport joint_stabilizer(const ExtensionClass& e, const Caps& caps = {});
OmegaGroup omega(const ExtensionClass& e, const Caps& caps = {});
ImRhoBreakdown im_rho_order(const ExtensionClass& e, const Caps& caps = {});

std::vector<ExtensionClass> orbit(const ExtensionClass& e, Side side, const Caps& caps = {});

struct DivisibilityCheck {
    BigInt omega_order, left_orbit_size, right_orbit_size, gcd_value;
    bool divides;
    nlohmann::json to_json() const;
};

DivisibilityCheck divisibility_check(const ExtensionClass& e, const Caps& caps = {});

// All classes fixed by every generator pair; fixing is closed under products
// and inverses, so generator checks decide the generated subgroup.
std::vector<ExtensionClass> fixed_classes(const std::vector<std::pair<FpMatrix, FpMatrix>>& gens,
                                          int p, int m, int n, const Caps& caps = {});

// Exhaustive |N_GL(S)| / |S| for a source-side stabilizer S given by explicit
// elements; small m only (audit use).
BigInt normalizer_quotient_order(const std::vector<FpMatrix>& subgroup, int m, int p,
                                 const Caps& caps = {});

}  // namespace extorb
