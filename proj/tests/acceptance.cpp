// Acceptance gate: one line per numbered criterion, PASS only when every
// sub-check holds, nonzero exit when any criterion fails.  Criteria cover the
// full reference workload: stabilizer orders, image breakdowns, the 27-row
// family, the standard-tuple table, automorphism ledgers, compatibility
// groups, and the generic property suites.
#include <cstdio>
#include <exception>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "extorb/catalog.hpp"
#include "extorb/extension_class.hpp"
#include "extorb/forms.hpp"
#include "extorb/fp.hpp"
#include "extorb/orbit.hpp"
#include "extorb/reproduce.hpp"
#include "extorb/twisting.hpp"
#include "extorb/wells.hpp"

using namespace extorb;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void note(const std::string& s) { g_notes.push_back(s); }

void criterion(int n, const std::string& desc, bool ok) {
    std::printf("%s %2d: %s\n", ok ? "PASS" : "FAIL", n, desc.c_str());
    for (const auto& s : g_notes) std::printf("         - %s\n", s.c_str());
    g_notes.clear();
    if (!ok) ++g_failures;
}

bool expect(bool ok, const std::string& what) {
    if (!ok) note("failed: " + what);
    return ok;
}

template <typename T, typename U>
bool expect_eq(const T& got, const U& want, const std::string& what) {
    if (got == want) return true;
    note("failed: " + what);
    return false;
}

FpMatrix mk(int p, std::vector<std::vector<int>> rows) { return FpMatrix::from_rows(p, rows); }

QuadraticFormF2 form_from_mask(int m, std::uint32_t mask) {
    QuadraticFormF2 q(m);
    std::size_t bit = 0;
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            if (mask & (1u << bit)) q.add_term(i, j, 1);
            ++bit;
        }
    return q;
}

bool omega_group_axioms(const OmegaGroup& om) {
    const int k = static_cast<int>(om.elements.size());
    if (k < 1 || om.identity_index < 0 || om.identity_index >= k) return false;
    if (om.table.size() != static_cast<std::size_t>(k)) return false;
    for (int i = 0; i < k; ++i) {
        if (om.table[static_cast<std::size_t>(om.identity_index)][static_cast<std::size_t>(i)] != i)
            return false;
        if (om.table[static_cast<std::size_t>(i)][static_cast<std::size_t>(om.identity_index)] != i)
            return false;
        std::set<int> row, col;
        for (int j = 0; j < k; ++j) {
            row.insert(om.table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            col.insert(om.table[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
        }
        if (row.size() != static_cast<std::size_t>(k) || col.size() != static_cast<std::size_t>(k))
            return false;
    }
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            for (int c = 0; c < k; ++c) {
                const int ab = om.table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
                const int bc = om.table[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)];
                if (om.table[static_cast<std::size_t>(ab)][static_cast<std::size_t>(c)] !=
                    om.table[static_cast<std::size_t>(a)][static_cast<std::size_t>(bc)])
                    return false;
            }
    return true;
}

bool joint_contains(const StabilizerReport& rep, const FpMatrix& s, const FpMatrix& t) {
    if (!rep.elements_listed) return false;
    for (const auto& [a, b] : rep.pairs)
        if (a == s && b == t) return true;
    return false;
}

// ---------------------------------------------------------------------------

bool criterion_1() {
    bool ok = true;
    const std::map<std::string, int> want = {
        {"x^2 + yz", 6}, {"xy", 8}, {"x^2 + xy + y^2", 24}, {"x^2", 24}};
    for (const auto& [text, order] : want) {
        auto rep = stabilizer_v(parse_class(text, 2, 3, 1));
        ok &= expect_eq(rep.order, BigInt(order), "stabilizer of " + text + " has order " +
                                                      std::to_string(order) + " (got " +
                                                      rep.order.str() + ")");
    }
    return ok;
}

bool criterion_2() {
    bool ok = true;
    // Equal pairs (X, X): swap on the component side, trivial intersection.
    const std::map<std::string, int> equal_want = {
        {"xy", 16}, {"x^2 + xy + y^2", 48}, {"x^2 + yz", 12}, {"x^2", 48}};
    for (const auto& [text, im] : equal_want) {
        auto a = analyze(parse_class(text + "; " + text, 2, 3, 2)).analysis;
        ok &= expect_eq(a.breakdown.im_rho, BigInt(im),
                        "image of (" + text + ", " + text + ") is " + std::to_string(im));
        ok &= expect_eq(a.breakdown.stab_n, BigInt(2), "(X, X) component stabilizer is the swap");
        ok &= expect_eq(a.breakdown.omega, BigInt(1), "(X, X) intersection group is trivial");
    }

    // Mixed standard pairs.
    {
        auto a = analyze(parse_class("x^2 + yz; x^2 + xy + y^2", 2, 3, 2)).analysis;
        ok &= expect_eq(a.breakdown.im_rho, BigInt(2), "first mixed pair has image order 2");
        bool gen = false;
        const FpMatrix g = mk(2, {{1, 1, 0}, {0, 1, 0}, {0, 1, 1}});
        for (const auto& s : a.stab_v.elements) gen |= (s == g);
        ok &= expect(gen, "the displayed order-2 generator fixes both components");
    }
    {
        auto a = analyze(parse_class("xy; x^2 + xy + y^2", 2, 3, 2)).analysis;
        ok &= expect_eq(a.breakdown.im_rho, BigInt(8), "second mixed pair has image order 8");
        ok &= expect(a.stab_v.id && a.stab_v.id->label == "D8",
                     "second mixed pair has dihedral source stabilizer");
    }
    {
        auto a = analyze(parse_class("xy; x^2 + yz", 2, 3, 2)).analysis;
        ok &= expect_eq(a.breakdown.im_rho, BigInt(2), "third mixed pair has image order 2");
        ok &= expect_eq(a.omega.order(), BigInt(2), "third mixed pair has intersection order 2");
        ok &= expect(a.omega.group_id().label == "Z/2",
                     "third mixed pair intersection is the order-2 group");
    }
    {
        auto a = analyze(parse_class("xy; yz", 2, 3, 2)).analysis;
        ok &= expect_eq(a.breakdown.im_rho, BigInt(6), "fourth mixed pair has image order 6");
        ok &= expect_eq(a.omega.order(), BigInt(6), "fourth mixed pair has intersection order 6");
    }
    return ok;
}

bool criterion_3() {
    bool ok = true;
    int bad = 0;
    for (const auto& row : table_5_2_2()) {
        auto a = analyze(row.cls).analysis;
        const bool row_ok = a.breakdown.im_rho.str() == row.expected.at("im_rho_order") &&
                            a.breakdown.omega.str() == row.expected.at("omega_order") &&
                            a.breakdown.stab_v.str() == row.expected.at("stab_v_order") &&
                            a.breakdown.stab_n.str() == row.expected.at("stab_n_order");
        if (!row_ok) {
            ++bad;
            note("row mismatch: " + row.name);
        }
        // The intersection order per image-order column is 2, 3, or 2.
        const std::string im = row.expected.at("im_rho_order");
        const std::string om = a.breakdown.omega.str();
        if (!((im == "2" && om == "2") || (im == "3" && om == "3") || (im == "4" && om == "2"))) {
            ++bad;
            note("column/intersection mismatch: " + row.name);
        }
    }
    ok &= expect(bad == 0, "all 27 rows match their stated breakdowns");
    return ok;
}

bool criterion_4() {
    bool ok = true;
    const ExtensionClass e = parse_class("xy + y^2; x^2 + y^2 + yz + z^2", 2, 3, 2);
    auto a = analyze(e).analysis;
    ok &= expect_eq(a.breakdown.stab_v, BigInt(2), "pair stabilizer has order 2");

    const FpMatrix s1 = mk(2, {{1, 1, 0}, {0, 1, 0}, {0, 0, 1}});
    const FpMatrix s2 = mk(2, {{1, 1, 1}, {0, 1, 0}, {0, 0, 1}});
    ok &= expect(change_basis(parse_form("xy + y^2", 3), s1) == parse_form("xy", 3),
                 "first component reduces to xy under the stated witness");
    ok &= expect(change_basis(parse_form("x^2 + y^2 + yz + z^2", 3), s2) ==
                     parse_form("x^2 + yz", 3),
                 "second component reduces to x^2 + yz under the stated witness");

    // Stated reference values for the intersection group and the image; the
    // computed values disagree, and the disagreement is forced by an
    // invariant, so these two sub-checks fail by design rather than being
    // rewritten to match the computation.
    const bool omega_claim = a.omega.order() == 2 && a.omega.group_id().label == "Z/2";
    const bool im_claim = a.breakdown.im_rho == 4;
    if (!omega_claim)
        note("stated intersection group of order 2 not reproduced: computed order " +
             a.omega.order().str() +
             "; a source substitution preserves each component's count of zeros, the "
             "second component vanishes on 3 nonzero vectors while the sum of the two "
             "components vanishes on 5 (and the first on 5), so no substitution sends "
             "the pair to (first, first + second) or realizes any other nontrivial "
             "component mix, forcing the intersection to be trivial");
    if (!im_claim)
        note("stated image order 4 not reproduced: computed " + a.breakdown.im_rho.str() +
             ", consistent with the forced product 2 * 1 * 1");
    ok &= omega_claim;
    ok &= im_claim;
    return ok;
}

bool criterion_5() {
    bool ok = true;
    // Orthogonal stabilizer orders of the four nondegenerate standard forms.
    const std::map<std::pair<StandardKind, int>, int> orders = {
        {{StandardKind::Plus, 2}, 2},
        {{StandardKind::Minus, 2}, 6},
        {{StandardKind::Plus, 4}, 72},
        {{StandardKind::Minus, 4}, 120}};
    for (const auto& [key, order] : orders) {
        const auto& [kind, m] = key;
        ExtensionClass e(2, m, {ClassComponent(standard_form(kind, m, m))});
        ok &= expect_eq(stabilizer_v(e).order, BigInt(order),
                        "orthogonal order " + std::to_string(order) + " at rank " +
                            std::to_string(m));
    }
    // The full tuple table: component stabilizers and trivial intersections.
    auto rep = reproduce("thm-standard-tuples");
    ok &= expect(rep.ok(), "all standard-tuple reference checks match (" +
                               std::to_string(rep.matched()) + "/" +
                               std::to_string(rep.checks.size()) + ")");
    return ok;
}

bool criterion_6() {
    bool ok = true;
    auto rep = aut_order(example_4_3_class(5, Example43Variant::WithBockstein).cls, true);
    ok &= expect_eq(rep.im_rho_order, BigInt(480), "image order 480 at p=5");
    ok &= expect_eq(rep.aut_order, BigInt(7'500'000), "automorphism order 7500000 at p=5");
    return ok;
}

bool criterion_7() {
    bool ok = true;
    const ExtensionClass e = u5_class().cls;
    auto joint = joint_stabilizer(e);
    ok &= expect_eq(joint.order, BigInt(8), "joint stabilizer has order 8");
    ok &= expect(joint.id && joint.id->label == "D8", "joint stabilizer is dihedral");

    const FpMatrix av = mk(2, {{0, 0, 0, 1}, {0, 0, 1, 0}, {0, 1, 0, 0}, {1, 0, 1, 0}});
    const FpMatrix an = mk(2, {{0, 0, 1}, {1, 1, 0}, {1, 0, 0}});
    const FpMatrix bv = mk(2, {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 1}});
    const FpMatrix bn = mk(2, {{1, 0, 0}, {0, 1, 1}, {0, 0, 1}});
    ok &= expect(joint_contains(joint, av, an), "stated order-4 generator pair is a member");
    ok &= expect(joint_contains(joint, bv, bn), "stated order-2 generator pair is a member");

    auto rep = aut_order(e, true);
    ok &= expect_eq(rep.aut_order, BigInt(32768), "automorphism order 32768");
    ok &= expect_eq(factored_p_part(rep.aut_order, 2), std::string("2^15"),
                    "automorphism order factors as 2^15");
    return ok;
}

bool criterion_8() {
    bool ok = true;
    for (const auto& [n, p] : std::vector<std::pair<int, int>>{{1, 3}, {1, 5}, {1, 7}, {2, 3}}) {
        const CatalogEntry entry = extraspecial_class(n, p);
        auto a = analyze(entry.cls).analysis;
        const std::string tag =
            "(" + std::to_string(n) + ", " + std::to_string(p) + ")";
        ok &= expect_eq(a.joint.order.str(), entry.expected.at("joint_order"),
                        "image order at " + tag);
        ok &= expect_eq(a.breakdown.stab_v.str(), entry.expected.at("stab_v_order"),
                        "source stabilizer at " + tag);
        ok &= expect_eq(a.breakdown.omega.str(), entry.expected.at("omega_order"),
                        "intersection order at " + tag);
    }
    return ok;
}

bool criterion_9() {
    bool ok = true;
    auto joint = joint_stabilizer(w_group_class(2).cls);
    ok &= expect_eq(joint.order, gl_order(2, 2), "image order 6");
    std::set<std::string> sources;
    if (joint.elements_listed)
        for (const auto& [s, t] : joint.pairs) sources.insert(s.key());
    ok &= expect(BigInt(sources.size()) == joint.order,
                 "projection to the source side is injective on the image");
    return ok;
}

bool criterion_10() {
    bool ok = true;
    auto joint = joint_stabilizer(u4_class().cls);
    ok &= expect_eq(joint.order, BigInt(6), "joint stabilizer has order 6");
    ok &= expect(joint.id && joint.id->label == "S3", "joint stabilizer is the symmetric group");

    const FpMatrix s = mk(2, {{0, 0, 1}, {0, 1, 0}, {1, 0, 0}});
    const FpMatrix t = mk(2, {{0, 1}, {1, 0}});
    const FpMatrix s3 = mk(2, {{1, 0, 1}, {0, 1, 0}, {1, 0, 0}});
    const FpMatrix t3 = mk(2, {{0, 1}, {1, 1}});
    ok &= expect(joint_contains(joint, s, t), "stated involution pair is a member");
    ok &= expect(joint_contains(joint, s3, t3), "stated order-3 pair is a member");

    // Extended to the next layer: the induced conjugation action admits the
    // stated restrictions as compatible pairs.
    const TwistingMap chi(2, 3, 3,
                          {mk(2, {{1, 0, 0}, {0, 1, 0}, {0, 1, 1}}), FpMatrix::identity(3, 2),
                           mk(2, {{1, 0, 0}, {0, 1, 0}, {1, 0, 1}})});
    const FpMatrix t_ext = mk(2, {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}});
    const FpMatrix t3_ext = mk(2, {{0, 1, 0}, {1, 1, 0}, {0, 0, 1}});
    ok &= expect(c_chi_membership(chi, s, t_ext), "extended involution pair is compatible");
    ok &= expect(c_chi_membership(chi, mat_inv(s3), t3_ext),
                 "extended order-3 pair is compatible with the source side inverted");

    // The subgroup generated by the two extended pairs stays compatible.
    std::vector<std::pair<FpMatrix, FpMatrix>> gen = {{s, t_ext}, {mat_inv(s3), t3_ext}};
    std::vector<std::pair<FpMatrix, FpMatrix>> closure = {
        {FpMatrix::identity(3, 2), FpMatrix::identity(3, 2)}};
    std::set<std::string> seen = {closure[0].first.key() + "|" + closure[0].second.key()};
    for (std::size_t i = 0; i < closure.size(); ++i)
        for (const auto& [gs, gt] : gen) {
            FpMatrix ns = mat_mul(closure[i].first, gs);
            FpMatrix nt = mat_mul(closure[i].second, gt);
            if (seen.insert(ns.key() + "|" + nt.key()).second) closure.emplace_back(ns, nt);
        }
    ok &= expect_eq(closure.size(), std::size_t{6}, "the two extended pairs generate order 6");
    bool all_member = true;
    for (const auto& [cs, ct] : closure) all_member &= c_chi_membership(chi, cs, ct);
    ok &= expect(all_member, "every generated pair is compatible");
    return ok;
}

bool criterion_11() {
    bool ok = true;
    auto a = analyze(application_4_e2_class(5).cls).analysis;
    ok &= expect_eq(a.joint.order, BigInt(480), "joint stabilizer has order 480");
    bool det_law = a.joint.elements_listed && !a.joint.pairs.empty();
    if (det_law)
        for (const auto& [s, t] : a.joint.pairs)
            det_law &= static_cast<int>(t.at(0, 0)) == fp_inv(mat_det(s), 5);
    ok &= expect(det_law, "every pair scales the component by the inverse determinant");

    const TwistingMap chi = application_4_twisting(5);
    auto fast = c_chi(chi);
    auto brute = c_chi_brute(chi);
    ok &= expect_eq(fast.order, BigInt(1600), "compatibility group has order 1600");
    ok &= expect_eq(brute.order, BigInt(1600), "independent full enumeration agrees");

    bool shape = fast.elements_listed && !fast.pairs.empty();
    if (shape)
        for (const auto& [s, t] : fast.pairs) {
            const bool lower = s.at(0, 1) == 0 && t.at(0, 1) == 0;
            const int ratio = (static_cast<int>(t.at(1, 1)) * fp_inv(t.at(0, 0), 5)) % 5;
            shape &= lower && static_cast<int>(s.at(0, 0)) == ratio;
        }
    ok &= expect(shape, "members are lower triangular with the matched diagonal ratio");

    const Subspace ker = twisting_kernel(chi);
    ok &= expect(ker.dim() == 1 && ker.contains({0, 1}),
                 "the action's kernel is the second generator's line");
    bool preserved = fast.elements_listed;
    if (preserved)
        for (const auto& [s, t] : fast.pairs) preserved &= preserves_kernel(chi, s);
    ok &= expect(preserved, "every member preserves the kernel");
    return ok;
}

bool criterion_12() {
    bool ok = true;

    // (a) The 64 rank-3 forms split into orbits of sizes 1, 7, 21, 7, 28.
    std::map<std::string, int> counts;
    for (std::uint32_t mask = 0; mask < 64; ++mask) {
        const FormTriple t = classify(form_from_mask(3, mask));
        counts[std::to_string(t.dim) + "/" + std::to_string(t.bilrad_dim) + "/" +
               std::to_string(t.arf)]++;
    }
    std::multiset<int> sizes;
    for (const auto& [k, v] : counts) sizes.insert(v);
    ok &= expect(sizes == std::multiset<int>{1, 7, 7, 21, 28},
                 "orbit partition of the 64 rank-3 forms is 1 + 7 + 21 + 7 + 28");

    // (b) Majority count equals the pairing-based count on nondegenerate
    // forms of ranks 2 and 4.
    bool agree = true;
    for (int m : {2, 4}) {
        const std::uint32_t total = 1u << (m * (m + 1) / 2);
        for (std::uint32_t mask = 0; mask < total; ++mask) {
            const QuadraticFormF2 q = form_from_mask(m, mask);
            if (bilrad(q).dim() != 0) continue;
            agree &= arf_democratic(q) == arf_symplectic(q);
            agree &= arf_democratic(q) == arf_symplectic(q, 7);
        }
    }
    ok &= expect(agree, "majority count equals the pairing count on nondegenerate forms");

    // (c) The three-factor product identity across representative classes.
    for (const auto& entry : {u4_class(), u5_class(), w_group_class(2), extraspecial_class(1, 3),
                              application_4_e2_class(5),
                              example_4_3_class(3, Example43Variant::WithBockstein)}) {
        auto a = analyze(entry.cls).analysis;
        ok &= expect(a.breakdown.im_rho ==
                         a.breakdown.stab_v * a.breakdown.stab_n * a.breakdown.omega,
                     "product identity for " + entry.name);
    }

    // (d) Intersection groups satisfy the group axioms and the divisibility
    // bound.
    for (const auto& entry : {u4_class(), application_4_e2_class(5)}) {
        ok &= expect(omega_group_axioms(omega(entry.cls)),
                     "intersection group axioms for " + entry.name);
        auto d = divisibility_check(entry.cls);
        ok &= expect(d.divides && d.gcd_value % d.omega_order == 0,
                     "intersection order divides both orbit sizes for " + entry.name);
    }
    ok &= expect(omega_group_axioms(omega(parse_class("xy; x^2 + yz", 2, 3, 2))),
                 "intersection group axioms for the third mixed pair");

    // (e) Orders are invariant under the transposed enumeration convention.
    for (const auto& entry : {u4_class(), extraspecial_class(1, 3)}) {
        AnalyzeOptions tr;
        tr.convention = Convention::Transpose;
        auto a = analyze(entry.cls).analysis;
        auto b = analyze(entry.cls, tr).analysis;
        ok &= expect(a.stab_v.order == b.stab_v.order && a.stab_n.order == b.stab_n.order &&
                         a.joint.order == b.joint.order && a.omega.order() == b.omega.order(),
                     "convention robustness for " + entry.name);
    }

    // (f) Worker count never changes a byte of the reports.
    {
        AnalyzeOptions one, eight;
        one.caps.workers = 1;
        eight.caps.workers = 8;
        auto a = analyze(u4_class().cls, one).analysis;
        auto b = analyze(u4_class().cls, eight).analysis;
        ok &= expect(a.joint.to_json().dump() == b.joint.to_json().dump() &&
                         a.omega.to_json().dump() == b.omega.to_json().dump() &&
                         a.breakdown.to_json().dump() == b.breakdown.to_json().dump(),
                     "worker-count determinism");
    }
    return ok;
}

bool guarded(bool (*fn)(), const char* name) {
    try {
        return fn();
    } catch (const std::exception& e) {
        note(std::string("exception in ") + name + ": " + e.what());
        return false;
    }
}

}  // namespace

int main() {
    criterion(1, "orthogonal stabilizer orders of the four nonzero rank-3 forms",
              guarded(criterion_1, "criterion 1"));
    criterion(2, "image breakdowns for equal and mixed standard pairs on a rank-3 source",
              guarded(criterion_2, "criterion 2"));
    criterion(3, "27-row two-component family splits with image orders 2 / 3 / 4",
              guarded(criterion_3, "criterion 3"));
    criterion(4, "mixed non-standard pair: stabilizer, reduction witnesses, intersection claims",
              guarded(criterion_4, "criterion 4"));
    criterion(5, "standard-tuple stabilizer table over ranks 2 and 4",
              guarded(criterion_5, "criterion 5"));
    criterion(6, "rank-2 class with p-th-power data at p=5: image 480, order 7500000",
              guarded(criterion_6, "criterion 6"));
    criterion(7, "rank-4 three-component class: dihedral image, order 2^15",
              guarded(criterion_7, "criterion 7"));
    criterion(8, "alternating extraspecial quotients at (1,3), (1,5), (1,7), (2,3)",
              guarded(criterion_8, "criterion 8"));
    criterion(9, "rank-2 universal class: image 6 via a bijective source projection",
              guarded(criterion_9, "criterion 9"));
    criterion(10, "rank-3 two-component class: symmetric image and compatible extended pairs",
              guarded(criterion_10, "criterion 10"));
    criterion(11, "rank-2 alternating class at p=5: determinant law, compatibility group 1600",
              guarded(criterion_11, "criterion 11"));
    criterion(12, "property suites: partition, counts, product identity, axioms, robustness",
              guarded(criterion_12, "criterion 12"));

    std::printf("acceptance: %d/12 criteria passed\n", 12 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
